"""Exact Pauli-string algebra in binary symplectic form.

A :class:`PauliString` on ``n`` qubits stores two bit masks and a quarter
phase. It represents the operator

    i**phase_exp * sigma_0 (x) sigma_1 (x) ... (x) sigma_{n-1}

where ``sigma_k`` is I, X, Z or Y for ``(x_k, z_k) = (0,0), (1,0), (0,1),
(1,1)``. Y is the Hermitian Pauli matrix and ``Y = iXZ``, so a string with
``phase_exp`` in {0, 2} is Hermitian and the product rules below are exact
integer arithmetic.

Bit ``k`` of a mask acts on qubit (vertex) ``k``. In dense state vectors the
basis index is little-endian: qubit ``k`` is bit ``k`` of the index.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import CapacityError, DimensionError, HermiticityError

# Limits for the matrix-free and spectral routines (qubit counts / dims).
MAX_APPLY_QUBITS = 26
DENSE_MAX_DIM = 2**14
DENSE_MAX_DIM_COMPLEX = 2**13
ITERATIVE_MAX_DIM = 2**20
DEFAULT_CLUSTER_TOL = 1e-9

_AXIS_BITS = {"i": (0, 0), "x": (1, 0), "y": (1, 1), "z": (0, 1)}
_PHASES = (1, 1j, -1, -1j)


def _popcount(v: int) -> int:
    return int(v).bit_count()


@dataclass(frozen=True)
class PauliString:
    n: int
    x_mask: int = 0
    z_mask: int = 0
    phase_exp: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise DimensionError("negative qubit count")
        limit = 1 << self.n
        if not (0 <= self.x_mask < limit and 0 <= self.z_mask < limit):
            raise DimensionError(f"mask does not fit in {self.n} qubits")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    # -- constructors -------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n)

    @classmethod
    def from_ops(cls, n: int, ops: Mapping[int, str] | Iterable[tuple[int, str]],
                 phase_exp: int = 0) -> "PauliString":
        """Build from ``{qubit: axis}`` with axis in ``"ixyz"``.

        Repeated qubits are not allowed; use :func:`multiply` for products.
        """
        items = ops.items() if isinstance(ops, Mapping) else ops
        x = z = 0
        seen = set()
        for q, a in items:
            if not 0 <= q < n:
                raise DimensionError(f"qubit {q} out of range for n={n}")
            if q in seen:
                raise ValueError(f"qubit {q} given twice")
            seen.add(q)
            bx, bz = _AXIS_BITS[a.lower()]
            x |= bx << q
            z |= bz << q
        return cls(n, x, z, phase_exp)

    @classmethod
    def from_label(cls, label: str, phase_exp: int = 0) -> "PauliString":
        """``label[k]`` is the Pauli on qubit ``k``, e.g. ``"XIZ"``."""
        return cls.from_ops(len(label), {k: a for k, a in enumerate(label)}, phase_exp)

    # -- accessors ----------------------------------------------------
    def axis_at(self, q: int) -> str:
        return "ixzy"[((self.x_mask >> q) & 1) + 2 * ((self.z_mask >> q) & 1)]

    @property
    def support(self) -> list[int]:
        m = self.x_mask | self.z_mask
        return [q for q in range(self.n) if (m >> q) & 1]

    @property
    def weight(self) -> int:
        return _popcount(self.x_mask | self.z_mask)

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    @property
    def phase(self) -> complex:
        return _PHASES[self.phase_exp]

    def label(self) -> str:
        return "".join(self.axis_at(q).upper() for q in range(self.n))

    def ops(self) -> dict[int, str]:
        return {q: self.axis_at(q) for q in self.support}

    def with_phase(self, phase_exp: int) -> "PauliString":
        return PauliString(self.n, self.x_mask, self.z_mask, phase_exp)

    def unsigned(self) -> "PauliString":
        return self.with_phase(0)

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def __neg__(self) -> "PauliString":
        return self.with_phase(self.phase_exp + 2)

    def __repr__(self) -> str:
        sign = ("+", "+i", "-", "-i")[self.phase_exp]
        return f"PauliString({sign}{self.label() or 'I'})"

    def to_matrix(self) -> np.ndarray:
        """Dense matrix by explicit Kronecker products (small n only)."""
        if self.n > 14:
            raise CapacityError("to_matrix limited to 14 qubits")
        mats = {"i": np.eye(2), "x": np.array([[0, 1], [1, 0]]),
                "y": np.array([[0, -1j], [1j, 0]]), "z": np.diag([1, -1])}
        out = np.ones((1, 1), dtype=complex)
        for q in reversed(range(self.n)):
            out = np.kron(out, mats[self.axis_at(q)])
        return self.phase * out


def _check_same(a: PauliString, b: PauliString) -> None:
    if a.n != b.n:
        raise DimensionError(f"Pauli strings act on {a.n} and {b.n} qubits")


def symplectic_form(a: PauliString, b: PauliString) -> int:
    _check_same(a, b)
    return (_popcount(a.x_mask & b.z_mask) + _popcount(a.z_mask & b.x_mask)) % 2


def commutes(a: PauliString, b: PauliString) -> bool:
    return symplectic_form(a, b) == 0


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Exact product ``a @ b`` including the accumulated power of i."""
    _check_same(a, b)
    ax, az, bx, bz = a.x_mask, a.z_mask, b.x_mask, b.z_mask
    a_x, a_z, a_y = ax & ~az, az & ~ax, ax & az
    b_x, b_z, b_y = bx & ~bz, bz & ~bx, bx & bz
    # single-qubit rules: XY=iZ, YZ=iX, ZX=iY and the reversed orders give -i
    g = (_popcount(a_x & b_y) + _popcount(a_y & b_z) + _popcount(a_z & b_x)
         - _popcount(a_y & b_x) - _popcount(a_z & b_y) - _popcount(a_x & b_z))
    return PauliString(a.n, ax ^ bx, az ^ bz, a.phase_exp + b.phase_exp + g)


def symplectic_rank(generators: Sequence[PauliString]) -> int:
    """GF(2) rank of the stacked ``(x|z)`` rows; phases are ignored."""
    if not generators:
        return 0
    n = generators[0].n
    basis: dict[int, int] = {}  # leading bit -> row
    for g in generators:
        if g.n != n:
            raise DimensionError("generators act on different qubit counts")
        row = (g.x_mask << n) | g.z_mask
        while row:
            lead = row.bit_length() - 1
            if lead not in basis:
                basis[lead] = row
                break
            row ^= basis[lead]
    return len(basis)


class OperatorSum:
    """A linear combination of Pauli strings, ``sum_k c_k P_k``."""

    def __init__(self, n: int, terms: Iterable[tuple[complex, PauliString]] = ()):
        self.n = n
        self.terms: tuple[tuple[complex, PauliString], ...] = tuple(
            (complex(c), p) for c, p in terms)
        for _, p in self.terms:
            if p.n != n:
                raise DimensionError(f"term on {p.n} qubits in a sum on {n}")

    @classmethod
    def zero(cls, n: int) -> "OperatorSum":
        return cls(n)

    @classmethod
    def identity(cls, n: int, coeff: complex = 1.0) -> "OperatorSum":
        return cls(n, [(coeff, PauliString.identity(n))])

    @classmethod
    def from_pauli(cls, p: PauliString, coeff: complex = 1.0) -> "OperatorSum":
        return cls(p.n, [(coeff, p)])

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __add__(self, other: "OperatorSum") -> "OperatorSum":
        if other.n != self.n:
            raise DimensionError("operator sums on different qubit counts")
        return OperatorSum(self.n, self.terms + other.terms)

    def __mul__(self, scalar: complex) -> "OperatorSum":
        return OperatorSum(self.n, [(scalar * c, p) for c, p in self.terms])

    __rmul__ = __mul__

    def __matmul__(self, other: "OperatorSum") -> "OperatorSum":
        if other.n != self.n:
            raise DimensionError("operator sums on different qubit counts")
        return OperatorSum(self.n, [(ca * cb, multiply(pa, pb))
                                    for ca, pa in self.terms for cb, pb in other.terms])

    def simplify(self, atol: float = 0.0) -> "OperatorSum":
        """Merge equal strings (folding their phases into the coefficient)."""
        acc: dict[tuple[int, int], complex] = {}
        for c, p in self.terms:
            key = (p.x_mask, p.z_mask)
            acc[key] = acc.get(key, 0) + c * p.phase
        return OperatorSum(self.n, [(c, PauliString(self.n, x, z))
                                    for (x, z), c in sorted(acc.items()) if abs(c) > atol])

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        return all(abs(c.imag) <= atol for c, _ in self.simplify().terms)

    def norm_bound(self) -> float:
        """Triangle-inequality bound on the operator norm."""
        return float(sum(abs(c) for c, _ in self.terms))

    def apply(self, state: np.ndarray) -> np.ndarray:
        return apply(self, state)

    def to_sparse(self) -> sp.csr_matrix:
        """Sparse matrix in the little-endian computational basis."""
        _check_capacity(self.n)
        dim = 1 << self.n
        idx = _indices(self.n)
        rows, cols, data = [], [], []
        for c, p in self.simplify().terms:
            # P|i> = val_i |i ^ x>; duplicate coordinates are summed by scipy
            rows.append(idx ^ p.x_mask)
            cols.append(idx)
            data.append(c * _PHASES[_popcount(p.x_mask & p.z_mask) % 4] * _signs(idx, p.z_mask))
        if not data:
            return sp.csr_matrix((dim, dim), dtype=complex)
        m = sp.csr_matrix((np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
                          shape=(dim, dim))
        m.sum_duplicates()
        m.eliminate_zeros()
        return m

    def __repr__(self) -> str:
        return f"OperatorSum(n={self.n}, terms={len(self.terms)})"


def _check_capacity(n: int) -> None:
    if n > MAX_APPLY_QUBITS:
        raise CapacityError(f"{n} qubits exceeds the limit of {MAX_APPLY_QUBITS}")


@lru_cache(maxsize=8)
def _indices(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    idx.setflags(write=False)
    return idx


def _signs(idx: np.ndarray, z_mask: int) -> np.ndarray:
    if z_mask == 0:
        return np.ones(idx.shape, dtype=np.int8)
    return (1 - 2 * (np.bitwise_count(idx & z_mask) & 1)).astype(np.int8)


def apply(op: OperatorSum | PauliString, state: np.ndarray) -> np.ndarray:
    """Matrix-free ``op @ state``; cost is O(terms * 2**n)."""
    if isinstance(op, PauliString):
        op = OperatorSum.from_pauli(op)
    _check_capacity(op.n)
    state = np.asarray(state)
    dim = 1 << op.n
    if state.shape != (dim,):
        raise DimensionError(f"state has shape {state.shape}, expected ({dim},)")
    idx = _indices(op.n)
    out = np.zeros(dim, dtype=complex)
    for c, p in op.terms:
        ph = c * _PHASES[(p.phase_exp + _popcount(p.x_mask & p.z_mask)) % 4]
        v = state * _signs(idx, p.z_mask) if p.z_mask else state
        out += ph * (v[idx ^ p.x_mask] if p.x_mask else v)
    return out


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: tuple[float, ...]
    degeneracies: tuple[int, ...]
    tolerance: float
    dimension: int
    complete: bool = True

    @property
    def levels(self) -> dict[float, int]:
        return dict(zip(self.eigenvalues, self.degeneracies))

    def as_dict(self) -> dict:
        return {"eigenvalues": list(self.eigenvalues), "degeneracies": list(self.degeneracies),
                "tolerance": self.tolerance, "dimension": self.dimension,
                "complete": self.complete}


def cluster_levels(values: Sequence[float], tol: float = DEFAULT_CLUSTER_TOL):
    """Group sorted values whose consecutive gaps are <= ``tol``."""
    vals = np.sort(np.asarray(values, dtype=float))
    levels, degs = [], []
    start = 0
    for k in range(1, len(vals) + 1):
        if k == len(vals) or vals[k] - vals[k - 1] > tol:
            levels.append(float(np.mean(vals[start:k])))
            degs.append(k - start)
            start = k
    return tuple(levels), tuple(degs)


def dense_matrix(op: OperatorSum) -> np.ndarray:
    m = op.to_sparse()
    if m.nnz and np.all(m.data.imag == 0):
        return m.real.toarray()
    return m.toarray()


def spectrum(op: OperatorSum, cluster_tolerance: float = DEFAULT_CLUSTER_TOL,
             k: int = 6) -> SpectrumReport:
    """Eigenvalues of a Hermitian operator sum with degeneracy clustering.

    Full spectra use a dense solver up to ``DENSE_MAX_DIM`` (real matrices)
    or ``DENSE_MAX_DIM_COMPLEX``; above that only the ``k`` lowest
    eigenvalues are computed iteratively (``complete=False``).
    """
    if not op.is_hermitian():
        raise HermiticityError("spectrum requires a Hermitian operator")
    dim = 1 << op.n
    if dim > ITERATIVE_MAX_DIM:
        raise CapacityError(f"dimension {dim} exceeds {ITERATIVE_MAX_DIM}")
    simplified = op.simplify()
    if not simplified.terms:
        return SpectrumReport((0.0,), (dim,), cluster_tolerance, dim)
    real = all(_popcount(p.x_mask & p.z_mask) % 2 == 0 for _, p in simplified.terms)
    dense_limit = DENSE_MAX_DIM if real else DENSE_MAX_DIM_COMPLEX
    if dim <= dense_limit:
        mat = dense_matrix(simplified)
        evals = scipy.linalg.eigh(mat, eigvals_only=True, overwrite_a=True)
        levels, degs = cluster_levels(evals, cluster_tolerance)
        return SpectrumReport(levels, degs, cluster_tolerance, dim)
    lin = spla.LinearOperator((dim, dim), matvec=lambda v: apply(simplified, v),
                              dtype=complex)
    evals = spla.eigsh(lin, k=min(k, dim - 2), which="SA", return_eigenvectors=False,
                       tol=1e-12)
    levels, degs = cluster_levels(evals, cluster_tolerance)
    return SpectrumReport(levels, degs, cluster_tolerance, dim, complete=False)


def eigenpairs(op: OperatorSum) -> tuple[np.ndarray, np.ndarray]:
    """Dense eigen-decomposition (dimension limited as in :func:`spectrum`)."""
    if not op.is_hermitian():
        raise HermiticityError("eigenpairs requires a Hermitian operator")
    if (1 << op.n) > DENSE_MAX_DIM_COMPLEX:
        raise CapacityError("eigenpairs is limited to dense-solvable sizes")
    return np.linalg.eigh(dense_matrix(op.simplify()))
