import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rubycode.errors import CapacityError, DimensionError, HermiticityError
from rubycode.lattice import CouplingParams, build_hamiltonian, chain_cluster
from rubycode.pauli import (MAX_APPLY_QUBITS, OperatorSum, PauliString, apply, commutes,
                            eigenpairs, multiply, spectrum, symplectic_form, symplectic_rank)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)


@st.composite
def paulis(draw, n=None):
    n = n if n is not None else draw(st.integers(1, 10))
    return PauliString(n, draw(st.integers(0, 2**n - 1)), draw(st.integers(0, 2**n - 1)),
                       draw(st.integers(0, 3)))


@st.composite
def pauli_pairs(draw):
    n = draw(st.integers(1, 12))
    return draw(paulis(n)), draw(paulis(n))


def test_xz_is_minus_i_y():
    p = PauliString.from_label("XI") * PauliString.from_label("ZI")
    assert p == PauliString.from_label("YI", phase_exp=3)


def test_identity_is_neutral():
    p = PauliString.from_label("XYZIZ", phase_exp=1)
    assert PauliString.identity(5) * p == p
    assert p * PauliString.identity(5) == p


@pytest.mark.parametrize("label", ["X", "YZ", "ZZYX", "IIIY"])
@pytest.mark.parametrize("phase", [0, 2])
def test_real_phase_squares_to_identity(label, phase):
    p = PauliString.from_label(label, phase)
    assert p * p == PauliString.identity(len(label))


def test_single_qubit_matrices():
    assert np.array_equal(PauliString.from_label("X").to_matrix(), X)
    assert np.array_equal(PauliString.from_label("Y").to_matrix(), Y)
    assert np.array_equal(PauliString.from_label("Z").to_matrix(), Z)


def test_commutation_examples():
    assert commutes(PauliString.from_label("XI"), PauliString.from_label("IZ"))
    assert not commutes(PauliString.from_label("X"), PauliString.from_label("Z"))
    p = PauliString.from_label("XYZY")
    assert commutes(p, p)


def test_mismatched_lengths():
    with pytest.raises(DimensionError):
        multiply(PauliString.from_label("X"), PauliString.from_label("XX"))
    with pytest.raises(DimensionError):
        commutes(PauliString.from_label("X"), PauliString.from_label("XX"))
    with pytest.raises(DimensionError):
        symplectic_rank([PauliString.from_label("X"), PauliString.from_label("XX")])


def test_apply_identity_and_flip():
    rng = np.random.default_rng(1)
    psi = rng.normal(size=8) + 1j * rng.normal(size=8)
    assert np.allclose(apply(OperatorSum.identity(3), psi), psi, atol=0)
    zero = np.zeros(8)
    zero[0] = 1
    out = apply(PauliString.from_ops(3, {0: "x"}), zero)
    assert out[1] == 1 and np.count_nonzero(out) == 1


def test_apply_dimension_mismatch():
    with pytest.raises(DimensionError):
        apply(OperatorSum.identity(3), np.zeros(4))


def test_apply_capacity_limit():
    assert MAX_APPLY_QUBITS >= 24
    with pytest.raises(CapacityError):
        apply(OperatorSum.identity(MAX_APPLY_QUBITS + 1), np.zeros(2))


def test_triangle_ground_state_energy():
    h = build_hamiltonian(chain_cluster(1), CouplingParams(0, 0, 1))
    up = np.zeros(8)
    up[0] = 1
    assert np.allclose(apply(h, up), -3 * up, atol=0)


def test_triangle_spectrum():
    rep = spectrum(build_hamiltonian(chain_cluster(1), CouplingParams(0, 0, 1)))
    assert np.allclose(rep.eigenvalues, [-3, 1], atol=1e-12)
    assert rep.degeneracies == (2, 6)


def test_zero_operator_spectrum():
    rep = spectrum(OperatorSum.zero(4))
    assert rep.eigenvalues == (0.0,) and rep.degeneracies == (16,)


def test_two_decoupled_triangles():
    h = build_hamiltonian(chain_cluster(2), CouplingParams(0, 0, 1))
    rep = spectrum(h)
    assert np.allclose(rep.eigenvalues, [-6, -2, 2], atol=1e-12)
    assert rep.degeneracies == (4, 24, 36)
    assert sum(rep.degeneracies) == rep.dimension == 64


def test_non_hermitian_rejected():
    op = OperatorSum(1, [(1j, PauliString.from_label("X"))])
    assert not op.is_hermitian()
    with pytest.raises(HermiticityError):
        spectrum(op)


def test_spectrum_capacity():
    with pytest.raises(CapacityError):
        spectrum(OperatorSum.identity(21))


def test_rank_examples(single_plaquette):
    from rubycode.lattice import plaquette_operators
    gens = [PauliString.from_label(s) for s in ("XI", "IX", "XX")]
    assert symplectic_rank(gens) == 2
    assert symplectic_rank(list(plaquette_operators(single_plaquette, 0))) == 2
    assert symplectic_rank([]) == 0


def test_eigenpair_residuals():
    h = build_hamiltonian(chain_cluster(3), CouplingParams(0.7, 0.4, 1.0))
    vals, vecs = eigenpairs(h)
    norm = h.norm_bound()
    for k in range(len(vals)):
        r = apply(h, vecs[:, k]) - vals[k] * vecs[:, k]
        assert np.linalg.norm(r) <= 1e-10 * norm
    assert np.all(np.isreal(vals))


@given(pauli_pairs())
def test_product_orders_differ_by_symplectic_sign(pair):
    a, b = pair
    sign = 2 * symplectic_form(a, b)
    assert multiply(a, b) == multiply(b, a).with_phase(multiply(b, a).phase_exp + sign)


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(paulis(n), paulis(n), paulis(n))))
def test_associativity(triple):
    a, b, c = triple
    assert (a * b) * c == a * (b * c)


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(paulis(n), paulis(n))))
def test_product_matches_matrices(pair):
    a, b = pair
    assert np.allclose((a * b).to_matrix(), a.to_matrix() @ b.to_matrix(), atol=1e-14)


@given(st.integers(1, 6).flatmap(
    lambda n: st.lists(paulis(n), min_size=1, max_size=4).flatmap(
        lambda ps: st.tuples(st.just(ps), st.lists(paulis(n), min_size=1, max_size=4)))),
       st.integers(0, 2**32 - 1))
def test_apply_composition(sums, seed):
    left, right = sums
    n = left[0].n
    rng = np.random.default_rng(seed)
    a = OperatorSum(n, [(rng.normal(), p) for p in left])
    b = OperatorSum(n, [(rng.normal(), p) for p in right])
    psi = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    assert np.allclose(apply(a @ b, psi), apply(a, apply(b, psi)), atol=1e-12)


@given(st.integers(2, 8).flatmap(lambda n: st.lists(paulis(n), min_size=1, max_size=8)),
       st.randoms(use_true_random=False))
def test_rank_invariances(gens, rnd):
    r = symplectic_rank(gens)
    shuffled = list(gens)
    rnd.shuffle(shuffled)
    assert symplectic_rank(shuffled) == r
    if len(gens) > 1:
        i, j = rnd.sample(range(len(gens)), 2)
        replaced = list(gens)
        replaced[i] = gens[i] * gens[j]
        assert symplectic_rank(replaced) == r
