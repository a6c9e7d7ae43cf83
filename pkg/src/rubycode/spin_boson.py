"""Exact triangle -> (effective spin, coloured hard-core boson) mapping.

Each triangle's eight spin states are relabelled as an effective spin
``tau`` in {up, down} and a boson in {none, r, g, b}. The polarized states
carry no boson; a state with one spin flipped against the other two carries
a boson of that spin's colour, and ``tau`` follows the odd spin. The local
effective basis is ordered ``(up,none), (up,r), (up,g), (up,b), (down,none),
... (down,b)``, i.e. ``index = 4*tau + boson``; many-site states are
site-major (site 0 is the most significant digit).

Energies: the bare triangle term is ``-J_z (ZZ+ZZ+ZZ) = 4 J_z (-3/4 + n)``,
so effective-frame energies relate to microscopic ones by
``E_micro = 4 * J_z * E_eff`` and inter-triangle couplings enter the
effective frame divided by ``4 * J_z``.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .colors import COLORS, LINK_AXIS, Color
from .errors import CapacityError, DimensionError
from .lattice import CouplingParams, LatticePatch, build_hamiltonian, link_operator
from .pauli import PauliString, cluster_levels

EFFECTIVE_SCHEMA = "rubycode.effective/1"
MAX_EQUIVALENCE_TRIANGLES = 4
MAX_EFFECTIVE_SITES = 6


class Tau(enum.IntEnum):
    UP = 0
    DOWN = 1

    def __str__(self) -> str:
        return "⇑" if self is Tau.UP else "⇓"


Boson = Color | None


def local_index(tau: Tau, boson: Boson) -> int:
    return 4 * int(tau) + (0 if boson is None else int(boson) + 1)


def local_label(index: int) -> tuple[Tau, Boson]:
    tau, b = divmod(index, 4)
    return Tau(tau), (None if b == 0 else Color(b - 1))


# ---------------------------------------------------------------------------
# triangle relabelling


def _parse_spins(spins) -> tuple[int, int, int]:
    """Return spin bits ordered (r, g, b) with 0 = up, 1 = down."""
    if isinstance(spins, str):
        table = {"↑": 0, "u": 0, "0": 0, "+": 0, "↓": 1, "d": 1, "1": 1, "-": 1}
        chars = [ch for ch in spins if ch not in " |⟩>"]
        try:
            bits = tuple(table[ch] for ch in chars)
        except KeyError:
            raise ValueError(f"cannot parse spin label {spins!r}") from None
    elif isinstance(spins, int):
        bits = tuple((spins >> c) & 1 for c in range(3))
    else:
        bits = tuple(int(b) for b in spins)
    if len(bits) != 3 or any(b not in (0, 1) for b in bits):
        raise ValueError(f"a triangle holds three spins, got {spins!r}")
    return bits  # type: ignore[return-value]


def encode_triangle(spins) -> tuple[Tau, Boson]:
    """Map a 3-spin basis label (r, g, b vertex order) to ``(tau, boson)``.

    Accepts ``"↑↓↓"``/``"udd"`` strings, bit tuples (0 = up) or the local
    integer index with bit ``c`` for the colour-``c`` vertex.
    """
    bits = _parse_spins(spins)
    if bits[0] == bits[1] == bits[2]:
        return Tau(bits[0]), None
    for c in COLORS:
        others = [bits[d] for d in COLORS if d != c]
        if others[0] == others[1] != bits[c]:
            return Tau(bits[c]), c
    raise AssertionError("unreachable")


def decode_triangle(tau: Tau, boson: Boson) -> tuple[int, int, int]:
    if boson is None:
        return (int(tau),) * 3  # type: ignore[return-value]
    return tuple(int(tau) if c == boson else 1 - int(tau) for c in COLORS)  # type: ignore


@lru_cache(maxsize=1)
def triangle_permutation() -> np.ndarray:
    """``perm[m]`` = effective local index of the 3-spin index ``m``."""
    perm = np.empty(8, dtype=np.int64)
    for m in range(8):
        tau, boson = encode_triangle(m)
        perm[m] = local_index(tau, boson)
    perm.setflags(write=False)
    return perm


def triangle_isometry() -> np.ndarray:
    """8x8 unitary ``W`` with ``W |spins> = |tau, boson>``."""
    w = np.zeros((8, 8))
    w[triangle_permutation(), np.arange(8)] = 1.0
    return w


# ---------------------------------------------------------------------------
# local effective operators


def _boson_ops() -> dict[str, np.ndarray]:
    ops = {"I": np.eye(4)}
    for c in COLORS:
        b = np.zeros((4, 4))
        b[0, c + 1] = 1.0  # b_c = |0><c|
        ops[f"b_{c}"] = b
        ops[f"bd_{c}"] = b.T.copy()
        ops[f"n_{c}"] = b.T @ b
    for c in COLORS:
        ops[f"p_{c}"] = np.eye(4) - 2 * (ops[f"n_{c.bar}"] + ops[f"n_{c.bbar}"])
        ops[f"r_{c}"] = (ops[f"bd_{c.bar}"] @ ops[f"b_{c.bbar}"]
                         + ops[f"bd_{c.bbar}"] @ ops[f"b_{c.bar}"])
    return ops


_TAU = {"I": np.eye(2), "tx": np.array([[0, 1], [1, 0]], dtype=complex),
        "ty": np.array([[0, -1j], [1j, 0]]), "tz": np.diag([1.0, -1.0])}


@lru_cache(maxsize=1)
def primitives() -> dict[str, np.ndarray]:
    """Named 8x8 single-site operators: tau Paulis, b, b^dagger, n, p, r."""
    out = {}
    for name, m in _TAU.items():
        if name != "I":
            out[name] = np.kron(m, np.eye(4)).astype(complex)
    for name, m in _boson_ops().items():
        out[name] = np.kron(np.eye(2), m).astype(complex)
    out["I"] = np.eye(8, dtype=complex)
    # images of the single-vertex Paulis, kept as one named factor each
    for c in COLORS:
        out[f"sz_{c}"] = out["tz"] @ out[f"p_{c}"]
        for ax, s in (("x", 1), ("y", -1)):
            out[f"s{ax}_{c}"] = out[f"t{ax}"] @ (out[f"bd_{c}"] + out[f"b_{c}"] + s * out[f"r_{c}"])
    for m in out.values():
        m.setflags(write=False)
    return out


def factor_matrix(factor: Sequence[str]) -> np.ndarray:
    """Ordered product of named primitives (left factor acts last)."""
    return _factor_matrix(tuple(factor))


@lru_cache(maxsize=4096)
def _factor_matrix(factor: tuple[str, ...]) -> np.ndarray:
    prims = primitives()
    m = np.eye(8, dtype=complex)
    for name in factor:
        try:
            m = m @ prims[name]
        except KeyError:
            raise ValueError(f"unknown effective primitive {name!r}") from None
    m.setflags(write=False)
    return m


# closed forms of the mapped single-vertex Paulis, as named factors with
# their coefficient (a vertex factor is a short sum of products)
def vertex_operator_terms(color: Color, axis: str) -> list[tuple[complex, tuple[str, ...]]]:
    c = Color.parse(color)
    if axis == "i":
        return [(1.0, ())]
    if axis == "z":
        return [(1.0, ("tz", f"p_{c}"))]
    if axis not in ("x", "y"):
        raise ValueError(f"unknown axis {axis!r}")
    s = 1 if axis == "x" else -1
    t = f"t{axis}"
    return [(1.0, (t, f"bd_{c}")), (1.0, (t, f"b_{c}")), (float(s), (t, f"r_{c}"))]


def map_vertex_operator(color: Color, axis: str) -> np.ndarray:
    """Closed-form effective image of ``sigma^axis`` on a colour-``color`` vertex."""
    return sum((coef * factor_matrix(f) for coef, f in vertex_operator_terms(color, axis)),
               np.zeros((8, 8), dtype=complex))


def conjugated_vertex_operator(color: Color, axis: str) -> np.ndarray:
    """``W sigma W^dagger`` computed directly from the relabelling table."""
    c = Color.parse(color)
    single = {"i": np.eye(2), "x": np.array([[0, 1], [1, 0]]),
              "y": np.array([[0, -1j], [1j, 0]]), "z": np.diag([1, -1])}[axis]
    # local spin index: bit c = colour-c vertex, so colour 2 is the leading factor
    mats = [np.eye(2)] * 3
    mats[int(c)] = single
    spin_op = np.kron(mats[2], np.kron(mats[1], mats[0]))
    w = triangle_isometry()
    return w @ spin_op @ w.T


def mapping_deviation() -> float:
    """Max |closed form - conjugated| over all colours and axes."""
    return max(float(np.max(np.abs(map_vertex_operator(c, a) - conjugated_vertex_operator(c, a))))
               for c in COLORS for a in "ixyz")


# ---------------------------------------------------------------------------
# effective operators


@dataclass(frozen=True)
class EffectiveTerm:
    coeff: complex
    factors: tuple[tuple[int, tuple[str, ...]], ...]  # (site, primitive names)

    def factor_dict(self) -> dict[int, tuple[str, ...]]:
        return dict(self.factors)


class EffectiveOperator:
    """Sum of products of named single-site operators on ``n_sites`` sites."""

    def __init__(self, n_sites: int, terms: Iterable[EffectiveTerm] = ()):
        self.n_sites = n_sites
        self.terms = tuple(terms)

    @classmethod
    def constant(cls, n_sites: int, value: complex) -> "EffectiveOperator":
        return cls(n_sites, [EffectiveTerm(value, ())])

    @classmethod
    def single(cls, n_sites: int, coeff: complex,
               factors: Mapping[int, Sequence[str]]) -> "EffectiveOperator":
        return cls(n_sites, [EffectiveTerm(coeff, tuple(sorted(
            (s, tuple(f)) for s, f in factors.items())))])

    def __add__(self, other: "EffectiveOperator") -> "EffectiveOperator":
        if other.n_sites != self.n_sites:
            raise DimensionError("effective operators on different site counts")
        return EffectiveOperator(self.n_sites, self.terms + other.terms)

    def __mul__(self, scalar: complex) -> "EffectiveOperator":
        return EffectiveOperator(self.n_sites, [EffectiveTerm(scalar * t.coeff, t.factors)
                                                for t in self.terms])

    __rmul__ = __mul__

    def __matmul__(self, other: "EffectiveOperator") -> "EffectiveOperator":
        """Operator product (``self`` acts after ``other``)."""
        out = []
        for a in self.terms:
            for b in other.terms:
                fa, fb = a.factor_dict(), b.factor_dict()
                merged = {s: fa.get(s, ()) + fb.get(s, ()) for s in set(fa) | set(fb)}
                out.append(EffectiveTerm(a.coeff * b.coeff, tuple(sorted(merged.items()))))
        return EffectiveOperator(self.n_sites, out)

    def __len__(self) -> int:
        return len(self.terms)

    def to_sparse(self) -> sp.csr_matrix:
        if self.n_sites > MAX_EFFECTIVE_SITES:
            raise CapacityError(f"{self.n_sites} sites exceeds {MAX_EFFECTIVE_SITES}")
        dim = 8 ** self.n_sites
        total = sp.csr_matrix((dim, dim), dtype=complex)
        eye = sp.identity(8, dtype=complex, format="csr")
        for t in self.terms:
            fd = t.factor_dict()
            m = sp.identity(1, dtype=complex, format="csr")
            for s in range(self.n_sites):
                local = sp.csr_matrix(factor_matrix(fd[s])) if s in fd else eye
                m = sp.kron(m, local, format="csr")
            total = total + t.coeff * m
        total.eliminate_zeros()
        return total

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray()

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        m = self.to_sparse()
        return abs(m - m.getH()).max() <= atol if m.nnz else True

    def apply_product(self, state: Mapping[tuple[int, ...], complex]) -> dict[tuple[int, ...], complex]:
        """Apply to a superposition of product basis states ``{local indices: amp}``."""
        out: dict[tuple[int, ...], complex] = {}
        for basis, amp in state.items():
            for t in self.terms:
                branches = {tuple(basis): amp * t.coeff}
                for s, f in t.factors:
                    m = factor_matrix(f)
                    nxt: dict[tuple[int, ...], complex] = {}
                    for b, a in branches.items():
                        col = m[:, b[s]]
                        for row in np.flatnonzero(np.abs(col) > 1e-15):
                            nb = b[:s] + (int(row),) + b[s + 1:]
                            nxt[nb] = nxt.get(nb, 0) + a * col[row]
                    branches = nxt
                for b, a in branches.items():
                    out[b] = out.get(b, 0) + a
        return {b: a for b, a in out.items() if abs(a) > 1e-14}

    def to_dict(self) -> dict:
        return {"schema": EFFECTIVE_SCHEMA, "n_sites": self.n_sites,
                "terms": [{"coeff": [t.coeff.real, t.coeff.imag] if isinstance(t.coeff, complex)
                           else [float(t.coeff), 0.0],
                           "factors": {str(s): list(f) for s, f in t.factors}}
                          for t in self.terms]}

    @classmethod
    def from_dict(cls, data: dict) -> "EffectiveOperator":
        if data.get("schema") != EFFECTIVE_SCHEMA:
            raise ValueError(f"unsupported schema {data.get('schema')!r}")
        return cls(data["n_sites"], [
            EffectiveTerm(complex(*t["coeff"]),
                          tuple(sorted((int(s), tuple(f)) for s, f in t["factors"].items())))
            for t in data["terms"]])

    def __repr__(self) -> str:
        return f"EffectiveOperator(n_sites={self.n_sites}, terms={len(self.terms)})"


def pauli_to_effective(patch: LatticePatch, pauli: PauliString,
                       expand: bool = False) -> EffectiveOperator:
    """Exact effective image of a microscopic Pauli string.

    By default every vertex Pauli becomes one named factor ``s{axis}_{colour}``
    and the image is a single product term; ``expand=True`` spells each
    factor out in tau, b, b^dagger, p and r (exponentially many terms).
    """
    if pauli.n != patch.vertex_count:
        raise DimensionError("Pauli string does not match the patch")
    by_site: dict[int, list[tuple[Color, str]]] = {}
    for v, a in pauli.ops().items():
        by_site.setdefault(v // 3, []).append((Color(v % 3), a))
    if not expand:
        return EffectiveOperator.single(patch.n_sites, pauli.phase, {
            s: tuple(f"s{a}_{c}" for c, a in items) for s, items in by_site.items()})
    site_sums: list[tuple[int, list[tuple[complex, tuple[str, ...]]]]] = []
    for s, items in sorted(by_site.items()):
        acc = [(1.0 + 0j, ())]
        for c, a in items:
            acc = [(ca * cb, fa + fb) for ca, fa in acc for cb, fb in vertex_operator_terms(c, a)]
        site_sums.append((s, acc))
    terms = [EffectiveTerm(pauli.phase, ())]
    for s, sums in site_sums:
        terms = [EffectiveTerm(t.coeff * c, t.factors + ((s, f),)) for t in terms for c, f in sums]
    return EffectiveOperator(patch.n_sites, terms)


# ---------------------------------------------------------------------------
# process terms of the effective Hamiltonian

# Sign of the fusion term per link axis, obtained by conjugating the
# two-triangle link operators (see derive_process_signs); hop, pair and
# switch terms carry +1 for both axes.
FUSION_SIGN = {"x": 1, "y": -1}
PROCESS_SIGNS = {axis: {"hop": 1, "pair": 1, "fusion": FUSION_SIGN[axis], "switch": 1}
                 for axis in ("x", "y")}
PROCESS_WEIGHTS = {"hop": 0.5, "pair": 0.5, "fusion": 1.0, "switch": 0.25}


@dataclass(frozen=True)
class ProcessTerm:
    kind: str            # hop | pair | fusion | switch
    boson_color: Color   # c
    link_color: Color    # c' (colour of the effective link)
    axis: str            # microscopic link axis, x or y
    sign: int
    ref: int             # reference site
    other: int           # site reached along the c' link
    weight: float
    conjugate: bool = False

    def boson_factors(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        c = self.boson_color
        ref, other = {
            "hop": ((f"b_{c}",), (f"bd_{c}",)),
            "pair": ((f"b_{c}",), (f"b_{c}",)),
            "fusion": ((f"b_{c}",), (f"r_{c}",)),
            "switch": ((f"r_{c}",), (f"r_{c}",)),
        }[self.kind]
        if self.conjugate:
            dag = {"b": "bd", "bd": "b", "r": "r"}
            ref = tuple(dag[n.split("_")[0]] + "_" + n.split("_")[1] for n in ref)
            other = tuple(dag[n.split("_")[0]] + "_" + n.split("_")[1] for n in other)
        return ref, other

    def operator(self, n_sites: int, coupling: float = 1.0) -> EffectiveOperator:
        t = f"t{self.axis}"
        bref, both = self.boson_factors()
        return EffectiveOperator.single(n_sites, -coupling * self.weight * self.sign,
                                        {self.ref: (t,) + bref, self.other: (t,) + both})

    def to_dict(self) -> dict:
        return {"kind": self.kind, "boson_color": str(self.boson_color),
                "link_color": str(self.link_color), "axis": self.axis, "sign": self.sign,
                "ref": self.ref, "other": self.other, "weight": self.weight,
                "conjugate": self.conjugate}


def process_terms(patch: LatticePatch) -> list[ProcessTerm]:
    """All process terms, one set per (reference site, inter-triangle link)."""
    out = []
    for e in patch.effective_links:
        for li in e.links:
            link = patch.links[li]
            c = Color(link.u % 3)
            axis = link.axis
            for ref, other in ((e.a, e.b), (e.b, e.a)):
                for kind in ("hop", "pair", "fusion", "switch"):
                    for conj in (False, True):
                        out.append(ProcessTerm(kind, c, e.color, axis,
                                               PROCESS_SIGNS[axis][kind], ref, other,
                                               PROCESS_WEIGHTS[kind], conj))
    return out


def effective_coupling(J: CouplingParams, axis: str) -> float:
    """``J_{c'|c}`` in the effective frame (units of ``4 J_z``)."""
    return {"x": J.jx, "y": J.jy}[axis] / (4.0 * J.jz)


def build_effective_hamiltonian(patch: LatticePatch,
                                J: CouplingParams = CouplingParams()) -> EffectiveOperator:
    """``-3N/4 + Q - sum J_{c'|c} T_c^{c'}`` in the calibrated frame."""
    if not J.jz > 0:
        raise ValueError("the effective frame requires J_z > 0")
    n = patch.n_sites
    op = EffectiveOperator.constant(n, -0.75 * n)
    for s in range(n):
        for c in COLORS:
            op = op + EffectiveOperator.single(n, 1.0, {s: (f"n_{c}",)})
    for pt in process_terms(patch):
        coupling = effective_coupling(J, pt.axis)
        if coupling != 0:
            op = op + pt.operator(n, coupling)
    return op


# ---------------------------------------------------------------------------
# equivalence with the microscopic model


def cluster_permutation(n_sites: int) -> np.ndarray:
    """``perm[m]`` = effective index of the microscopic basis index ``m``."""
    if n_sites > MAX_EFFECTIVE_SITES:
        raise CapacityError(f"{n_sites} triangles exceeds {MAX_EFFECTIVE_SITES}")
    m = np.arange(8 ** n_sites, dtype=np.int64)
    tri = triangle_permutation()
    eff = np.zeros_like(m)
    for t in range(n_sites):
        local = tri[(m >> (3 * t)) & 7]
        eff += local * 8 ** (n_sites - 1 - t)
    return eff


def conjugate_to_effective(matrix: sp.spmatrix, n_sites: int) -> sp.csr_matrix:
    """``W M W^dagger`` for a microscopic matrix on ``n_sites`` triangles."""
    perm = cluster_permutation(n_sites)
    coo = sp.coo_matrix(matrix)
    return sp.csr_matrix((coo.data, (perm[coo.row], perm[coo.col])), shape=coo.shape)


def derive_process_signs() -> dict:
    """Read process signs off the conjugated two-triangle link operators.

    For every inter-triangle link of a two-triangle cluster the conjugated
    ``sigma^a sigma^a`` is projected on each process channel
    ``tau^a tau^a (x) K_ref K_other``; the overlap is the sign.
    """
    from .lattice import build_patch, restrict

    base = build_patch(1, 2, "open")
    out: dict[str, dict[str, int]] = {}
    seen_pairs = set()
    for e in base.effective_links:
        if (e.a, e.b) in seen_pairs:
            continue
        seen_pairs.add((e.a, e.b))
        cluster = restrict(base, [e.a, e.b])
        for li in cluster.effective_links[0].links:
            link = cluster.links[li]
            c = Color(link.u % 3)
            ref = link.u // 3
            m = conjugate_to_effective(_pauli_sparse(link_operator(cluster, link)), 2).toarray()
            signs = {}
            for kind in ("hop", "pair", "fusion", "switch"):
                pt = ProcessTerm(kind, c, cluster.effective_links[0].color, link.axis, 1,
                                 ref, 1 - ref, 1.0)
                k = -pt.operator(2).to_dense()  # operator() carries the Hamiltonian's minus
                overlap = np.vdot(k, m) / np.vdot(k, k)
                signs[kind] = int(round(overlap.real))
            prev = out.setdefault(link.axis, signs)
            if prev != signs:
                raise AssertionError(f"inconsistent signs for axis {link.axis}: {prev} vs {signs}")
    return out


def _pauli_sparse(p: PauliString) -> sp.csr_matrix:
    from .pauli import OperatorSum
    return OperatorSum.from_pauli(p).to_sparse()


@dataclass
class EquivalenceReport:
    n_triangles: int
    calibration: str
    max_term_deviation: float
    max_operator_deviation: float
    max_spectral_deviation: float
    affine_offset: float
    micro_spectrum: tuple = field(repr=False, default=())
    effective_spectrum: tuple = field(repr=False, default=())

    def as_dict(self) -> dict:
        return {"n_triangles": self.n_triangles, "calibration": self.calibration,
                "max_term_deviation": self.max_term_deviation,
                "max_operator_deviation": self.max_operator_deviation,
                "max_spectral_deviation": self.max_spectral_deviation,
                "affine_offset": self.affine_offset}


def verify_mapping_equivalence(cluster: LatticePatch,
                               J: CouplingParams = CouplingParams()) -> EquivalenceReport:
    """Compare the conjugated microscopic Hamiltonian with the effective one.

    Term by term (every link), as whole operators and spectrally, after the
    calibration ``E_micro = 4 J_z E_eff``.
    """
    n = cluster.n_sites
    if n > MAX_EQUIVALENCE_TRIANGLES:
        raise CapacityError(f"equivalence checks are limited to {MAX_EQUIVALENCE_TRIANGLES} "
                            f"triangles (got {n})")
    if not J.jz > 0:
        raise ValueError("the effective frame requires J_z > 0")
    scale = 4.0 * J.jz
    from .pauli import OperatorSum

    # term by term: every inter-triangle link against its process terms
    term_dev = 0.0
    pts = process_terms(cluster)
    for li, link in enumerate(cluster.links):
        if link.color == Color.B:
            continue
        coupling = J.for_link(link.color)
        micro = conjugate_to_effective(
            (-coupling * OperatorSum.from_pauli(link_operator(cluster, link))).to_sparse(), n)
        mine = [pt for pt in pts if pt.axis == link.axis and pt.boson_color == Color(link.u % 3)
                and {pt.ref, pt.other} == {link.u // 3, link.v // 3}]
        eff = sum((pt.operator(n, effective_coupling(J, pt.axis)).to_sparse() for pt in mine),
                  sp.csr_matrix((8 ** n, 8 ** n), dtype=complex))
        diff = micro - scale * eff
        term_dev = max(term_dev, float(abs(diff).max()) if diff.nnz else 0.0)

    h_micro = conjugate_to_effective(build_hamiltonian(cluster, J).to_sparse(), n)
    h_eff = build_effective_hamiltonian(cluster, J).to_sparse()
    diff = h_micro - scale * h_eff
    op_dev = float(abs(diff).max()) if diff.nnz else 0.0

    ev_micro = np.linalg.eigvalsh(h_micro.toarray())
    ev_eff = np.linalg.eigvalsh(h_eff.toarray())
    spec_dev = float(np.max(np.abs(ev_micro - scale * ev_eff)))
    offset = float(np.mean(ev_micro - scale * ev_eff))
    return EquivalenceReport(n, f"E_micro = 4*J_z*E_eff (J_z={J.jz})", term_dev, op_dev,
                             spec_dev, offset, cluster_levels(ev_micro), cluster_levels(ev_eff))


def effective_spectrum(op: EffectiveOperator, tol: float = 1e-9) -> list[tuple[float, int]]:
    """``(level, degeneracy)`` pairs of a small effective operator."""
    if 8 ** op.n_sites > 2 ** 12:
        raise CapacityError("dense effective spectra are limited to 4 sites")
    levels, degs = cluster_levels(np.linalg.eigvalsh(op.to_dense()), tol)
    return list(zip(levels, degs))


def effective_model_json(patch: LatticePatch, J: CouplingParams = CouplingParams()) -> str:
    """Serialized effective model: process terms with signs and colours."""
    data = {"schema": EFFECTIVE_SCHEMA, "n_sites": patch.n_sites,
            "calibration": {"E_micro_over_E_eff": 4.0 * J.jz},
            "constant": -0.75 * patch.n_sites, "boson_cost": 1.0,
            "couplings": {"x": effective_coupling(J, "x"), "y": effective_coupling(J, "y")},
            "process_terms": [pt.to_dict() for pt in process_terms(patch)]}
    return json.dumps(data, sort_keys=True, indent=1)
