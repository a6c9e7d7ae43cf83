import itertools
import json
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rubycode.colors import COLORS, Color
from rubycode.errors import CapacityError
from rubycode.lattice import (CouplingParams, build_hamiltonian, chain_cluster,
                              plaquette_operators)
from rubycode.pauli import OperatorSum, spectrum
from rubycode.spin_boson import (PROCESS_SIGNS, EffectiveOperator, Tau,
                                 build_effective_hamiltonian, conjugate_to_effective,
                                 conjugated_vertex_operator, decode_triangle,
                                 derive_process_signs, effective_model_json,
                                 effective_spectrum, encode_triangle, local_index,
                                 map_vertex_operator, mapping_deviation, primitives,
                                 process_terms, triangle_isometry,
                                 verify_mapping_equivalence)

# frozen process signs, reproduced by conjugating the two-triangle links
FROZEN_SIGNS = {"x": {"hop": 1, "pair": 1, "fusion": 1, "switch": 1},
                "y": {"hop": 1, "pair": 1, "fusion": -1, "switch": 1}}


@pytest.mark.parametrize("spins,expected", [
    ("↑↑↑", (Tau.UP, None)),
    ("↑↓↓", (Tau.UP, Color.R)),
    ("↑↑↓", (Tau.DOWN, Color.B)),
    ("↓↓↓", (Tau.DOWN, None)),
])
def test_encode_examples(spins, expected):
    assert encode_triangle(spins) == expected


def test_encode_is_a_bijection():
    images = [encode_triangle(m) for m in range(8)]
    assert len(set(images)) == 8
    for m, (tau, boson) in enumerate(images):
        bits = decode_triangle(tau, boson)
        assert sum(b << c for c, b in enumerate(bits)) == m
    w = triangle_isometry()
    assert np.array_equal(w @ w.T, np.eye(8))


def test_encode_rejects_bad_labels():
    with pytest.raises(ValueError):
        encode_triangle("↑↑")
    with pytest.raises(ValueError):
        encode_triangle("↑x↓")


def test_closed_forms_equal_conjugation():
    assert mapping_deviation() <= 1e-14
    for c in COLORS:
        assert np.array_equal(map_vertex_operator(c, "z"), primitives()["tz"] @ primitives()[f"p_{c}"])
        assert np.array_equal(map_vertex_operator(c, "i"), np.eye(8))


@pytest.mark.parametrize("c", COLORS)
def test_mapped_paulis_keep_the_algebra(c):
    x, y, z = (conjugated_vertex_operator(c, a) for a in "xyz")
    eye = np.eye(8)
    for a in (x, y, z):
        assert np.allclose(a @ a, eye, atol=0)
    for a, b in ((x, y), (y, z), (z, x)):
        assert np.allclose(a @ b, -b @ a, atol=0)
    assert np.allclose(x @ y, 1j * z, atol=0)


def test_parity_and_switch_definitions():
    p = primitives()
    for c in COLORS:
        a, b = c.bar, c.bar.bar
        assert np.array_equal(p[f"p_{c}"], np.eye(8) - 2 * (p[f"n_{a}"] + p[f"n_{b}"]))
        assert np.array_equal(p[f"r_{c}"], p[f"bd_{a}"] @ p[f"b_{b}"] + p[f"bd_{b}"] @ p[f"b_{a}"])
        for m in (p[f"p_{c}"], p["tz"] @ p[f"p_{c}"]):
            assert set(np.round(np.linalg.eigvalsh(m), 12)) == {-1.0, 1.0}


def test_hard_core_creation():
    p = primitives()
    for c, d in itertools.product(COLORS, repeat=2):
        assert not np.any(p[f"bd_{c}"] @ p[f"n_{d}"])


def test_single_site_spectrum():
    levels = effective_spectrum(build_effective_hamiltonian(chain_cluster(1)))
    assert [d for _, d in levels] == [2, 6]
    assert np.allclose([e for e, _ in levels], [-0.75, 0.25], atol=1e-12)


def _decoupled_oracle(n):
    """Levels -3n/4 + q counted over every occupation pattern."""
    counts = Counter()
    for occ in itertools.product(range(4), repeat=n):
        q = sum(1 for o in occ if o)
        counts[-0.75 * n + q] += 2 ** n
    return sorted(counts.items())


@pytest.mark.parametrize("n", [2, 3])
def test_decoupled_limit(n):
    h = build_effective_hamiltonian(chain_cluster(n), CouplingParams(0, 0, 1))
    got = effective_spectrum(h)
    want = _decoupled_oracle(n)
    assert [d for _, d in got] == [d for _, d in want]
    assert np.allclose([e for e, _ in got], [e for e, _ in want], atol=1e-12)


def test_frozen_signs_match_derivation():
    assert PROCESS_SIGNS == FROZEN_SIGNS
    assert derive_process_signs() == FROZEN_SIGNS


def test_two_site_cluster_matches_microscopic():
    cluster = chain_cluster(2)
    t = 0.35
    J = CouplingParams(t, t, 1.0)
    micro = spectrum(build_hamiltonian(cluster, J))
    eff = effective_spectrum(build_effective_hamiltonian(cluster, J))
    assert micro.degeneracies == tuple(d for _, d in eff)
    assert np.allclose(micro.eigenvalues, [4 * J.jz * e for e, _ in eff], atol=1e-10)


@pytest.mark.parametrize("n,tol", [(1, 1e-14), (2, 1e-12), (3, 1e-10)])
@pytest.mark.parametrize("J", [CouplingParams(1, 1, 1), CouplingParams(0.6, -0.3, 1.7)])
def test_mapping_equivalence(n, tol, J):
    rep = verify_mapping_equivalence(chain_cluster(n), J)
    assert rep.max_term_deviation <= tol
    assert rep.max_operator_deviation <= tol
    assert rep.max_spectral_deviation <= tol
    assert abs(rep.affine_offset) <= tol


def test_equivalence_capacity():
    with pytest.raises(CapacityError):
        verify_mapping_equivalence(chain_cluster(5))


def test_jz_must_be_positive():
    with pytest.raises(ValueError):
        build_effective_hamiltonian(chain_cluster(2), CouplingParams(1, 1, 0))
    with pytest.raises(ValueError):
        build_effective_hamiltonian(chain_cluster(2), CouplingParams(1, 1, -1))


def test_effective_hamiltonian_is_hermitian():
    assert build_effective_hamiltonian(chain_cluster(3), CouplingParams(0.4, 0.9, 1)).is_hermitian()


def test_process_term_structure():
    terms = process_terms(chain_cluster(2))
    assert {t.kind for t in terms} == {"hop", "pair", "fusion", "switch"}
    for t in terms:
        assert t.link_color != t.boson_color
        assert t.axis in ("x", "y")
        assert t.sign == FROZEN_SIGNS[t.axis][t.kind]


def test_hamiltonian_commutes_with_plaquettes(single_plaquette):
    h = build_effective_hamiltonian(single_plaquette, CouplingParams(0.8, 0.5, 1)).to_sparse()
    n = single_plaquette.n_sites
    for p in plaquette_operators(single_plaquette, 0):
        m = conjugate_to_effective(OperatorSum.from_pauli(p).to_sparse(), n)
        comm = h @ m - m @ h
        assert comm.nnz == 0 or abs(comm).max() <= 1e-12


def test_effective_operator_json_round_trip():
    op = build_effective_hamiltonian(chain_cluster(2))
    again = EffectiveOperator.from_dict(json.loads(json.dumps(op.to_dict())))
    assert abs(again.to_sparse() - op.to_sparse()).max() == 0
    model = json.loads(effective_model_json(chain_cluster(2)))
    assert model["schema"] == "rubycode.effective/1"
    assert model["calibration"]["E_micro_over_E_eff"] == 4.0


def test_basis_ordering():
    order = [(Tau.UP, None), (Tau.UP, Color.R), (Tau.UP, Color.G), (Tau.UP, Color.B),
             (Tau.DOWN, None), (Tau.DOWN, Color.R), (Tau.DOWN, Color.G), (Tau.DOWN, Color.B)]
    assert [local_index(t, b) for t, b in order] == list(range(8))


@given(st.floats(0.1, 3.0), st.floats(-2.0, 2.0), st.floats(-2.0, 2.0))
def test_two_triangle_equivalence_property(jz, jx, jy):
    rep = verify_mapping_equivalence(chain_cluster(2), CouplingParams(jx, jy, jz))
    scale = max(1.0, abs(jx), abs(jy), jz)
    assert rep.max_spectral_deviation <= 1e-11 * scale
    assert sum(rep.micro_spectrum[1]) == sum(rep.effective_spectrum[1]) == 64
