import itertools
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rubycode.colors import COLORS, Color, axis
from rubycode.errors import ConstructionError
from rubycode.lattice import (CouplingParams, LatticePatch, all_plaquette_operators,
                              build_hamiltonian, build_patch, chain_cluster, check_patch,
                              link_operator, plaquette_loop, plaquette_operators,
                              string_operator)
from rubycode.pauli import PauliString, commutes, symplectic_rank

# regression constants of the generated periodic patches
TORUS_COUNTS = {(1, 1): (18, 6, 3, 4), (2, 2): (72, 24, 12, 22)}


def test_bar_cycles():
    assert Color.R.bar == Color.G and Color.G.bar == Color.B and Color.B.bar == Color.R
    for c in COLORS:
        assert c.bar.bar.bar == c


def test_axis_notation():
    for c in COLORS:
        assert axis(c, c) == "x"
        assert axis(c.bar, c) == "y"
        assert axis(c.bar.bar, c) == "z"


def test_single_plaquette_counts(single_plaquette):
    assert single_plaquette.vertex_count == 18
    assert len(single_plaquette.triangles) == 6
    assert len(single_plaquette.plaquettes) == 1
    assert len(single_plaquette.plaquettes[0].vertices) == 18


@pytest.mark.parametrize("shape", sorted(TORUS_COUNTS))
def test_periodic_counts(shape):
    patch = build_patch(*shape, "periodic")
    verts, tris, plaqs, rank = TORUS_COUNTS[shape]
    assert patch.vertex_count == verts == 3 * len(patch.triangles)
    assert len(patch.triangles) == tris
    assert len(patch.plaquettes) == plaqs == tris // 2
    assert symplectic_rank(all_plaquette_operators(patch)) == rank == 2 * plaqs - 2


@pytest.mark.parametrize("shape,boundary", [((1, 1), "open"), ((2, 3), "open"),
                                            ((1, 1), "periodic"), ((2, 2), "periodic")])
def test_every_check_passes(shape, boundary):
    patch = build_patch(*shape, boundary)
    failed = [(r.name, r.detail) for r in check_patch(patch) if not r.passed]
    assert failed == []
    covered = sorted(v for t in patch.triangles for v in t)
    assert covered == list(range(patch.vertex_count))


def test_open_patches_have_no_dependencies():
    patch = build_patch(2, 3, "open")
    assert symplectic_rank(all_plaquette_operators(patch)) == 2 * len(patch.plaquettes)


def test_honeycomb_edge_colours(torus):
    seen = {s: [] for s in range(torus.n_sites)}
    for e in torus.effective_links:
        seen[e.a].append(e.color)
        seen[e.b].append(e.color)
    assert all(sorted(c) == list(COLORS) for c in seen.values())


def test_face_colouring(torus):
    faces = {p.face: (p.color, set(p.sites)) for p in torus.plaquettes}
    for (c1, s1), (c2, s2) in itertools.combinations(faces.values(), 2):
        if len(s1 & s2) >= 2:
            assert c1 != c2


@pytest.mark.parametrize("shape", [(0, 1), (1, 0), (-2, 2)])
def test_bad_shapes(shape):
    with pytest.raises(ConstructionError):
        build_patch(*shape)


def test_bad_boundary():
    with pytest.raises(ConstructionError):
        build_patch(1, 1, "twisted")


def test_triangle_hamiltonian():
    h = build_hamiltonian(chain_cluster(1), CouplingParams(0, 0, 1))
    expected = {PauliString.from_label(s) for s in ("ZZI", "IZZ", "ZIZ")}
    assert {p for _, p in h.terms} == expected
    assert all(c == -1 for c, _ in h.terms)


def test_zero_couplings_give_zero_operator(single_plaquette):
    assert len(build_hamiltonian(single_plaquette, CouplingParams(0, 0, 0))) == 0


def test_two_triangle_cluster_term_count():
    h = build_hamiltonian(chain_cluster(2), CouplingParams(1, 1, 1))
    assert len(h) == 8
    assert h.is_hermitian()


def test_couplings_must_be_finite():
    with pytest.raises(ValueError):
        CouplingParams(float("nan"), 1, 1)


def test_plaquette_algebra(torus):
    ident = PauliString.identity(torus.vertex_count)
    for k in range(len(torus.plaquettes)):
        p1, p2, p3 = plaquette_operators(torus, k)
        for p in (p1, p2, p3):
            assert p * p == ident
        assert p1 * p2 * p3 == -ident
        assert (p1.weight, p2.weight, p3.weight) == (18, 18, 6)
        inner = set(torus.plaquettes[k].inner)
        assert p3.ops() == {v: "z" for v in inner}


def test_cross_plaquette_commutation(torus):
    ops = all_plaquette_operators(torus)
    assert all(commutes(a, b) for a, b in itertools.combinations(ops, 2))


@pytest.mark.parametrize("J", [CouplingParams(1, 1, 1), CouplingParams(0.3, -2.0, 0.7)])
def test_plaquettes_commute_with_hamiltonian(torus, J):
    h = build_hamiltonian(torus, J)
    for op in all_plaquette_operators(torus):
        assert all(commutes(op, p) for _, p in h.terms)


def test_plaquette_index_error(single_plaquette):
    with pytest.raises(IndexError):
        plaquette_operators(single_plaquette, 1)


def _product(ops, n):
    out = PauliString.identity(n)
    for op in ops:
        out = out * op
    return out


def test_global_dependencies(torus):
    """The two GF(2) relations that lower the torus rank by two."""
    n = torus.vertex_count
    by_color = {c: [plaquette_operators(torus, k) for k, p in enumerate(torus.plaquettes)
                    if p.color == c] for c in COLORS}
    r, g, b = Color.R, Color.G, Color.B
    first = ([P[1] for P in by_color[r]] + [P[0] * P[1] for P in by_color[g]]
             + [P[0] for P in by_color[b]])
    second = ([P[0] * P[1] for P in by_color[r]] + [P[0] for P in by_color[g]]
              + [P[1] for P in by_color[b]])
    assert _product(first, n).is_identity
    assert _product(second, n).is_identity


def test_string_around_plaquette_reproduces_operators(single_plaquette):
    loop = plaquette_loop(single_plaquette, 0)
    ops = {p.unsigned() for p in plaquette_operators(single_plaquette, 0)}
    color = single_plaquette.plaquettes[0].color
    found = {string_operator(single_plaquette, loop, c).unsigned()
             for c in COLORS if c != color}
    assert found <= ops and len(found) == 2
    inner = plaquette_loop(single_plaquette, 0, inner=True)
    assert string_operator(single_plaquette, inner).unsigned() in ops


def test_empty_string_is_identity(single_plaquette):
    assert string_operator(single_plaquette, []) == PauliString.identity(18)


def test_string_off_lattice(single_plaquette):
    with pytest.raises(ValueError):
        string_operator(single_plaquette, [0, 17])
    with pytest.raises(ValueError):
        string_operator(single_plaquette, [0, 99])


def test_two_plaquette_string_commutes_with_hamiltonian():
    patch = build_patch(1, 2, "open")
    c = ({Color.R, Color.G, Color.B} - {p.color for p in patch.plaquettes}).pop()
    loops = [string_operator(patch, plaquette_loop(patch, k), c) for k in range(2)]
    fused = loops[0] * loops[1]
    # the shared segment cancels, leaving one string around both plaquettes
    assert fused.weight < loops[0].weight + loops[1].weight
    h = build_hamiltonian(patch)
    assert all(commutes(fused, p) for _, p in h.terms)


def test_json_round_trip(torus):
    again = LatticePatch.from_json(torus.to_json())
    assert again.to_json() == torus.to_json()
    assert again.fingerprint() == torus.fingerprint()
    data = json.loads(torus.to_json())
    assert data["schema"] == "rubycode.patch/1"
    assert set(data["plaquettes"][0]["axes"]) == {"P1", "P2", "P3"}


def test_fingerprint_is_stable():
    assert build_patch(1, 1).fingerprint() == build_patch(1, 1).fingerprint()
    assert build_patch(1, 1).fingerprint() != build_patch(1, 2).fingerprint()


def corrupted(patch):
    data = json.loads(patch.to_json())
    axes = data["plaquettes"][0]["axes"]["P1"]
    v = next(iter(axes))
    axes[v] = {"x": "z", "y": "z", "z": "x"}[axes[v]]
    return data


def test_corrupted_fixture_is_rejected(single_plaquette):
    data = corrupted(single_plaquette)
    with pytest.raises(ConstructionError, match="P1P2P3=-1"):
        LatticePatch.from_dict(data)
    bad = LatticePatch.from_dict(data, validate=False)
    failed = {r.name for r in check_patch(bad) if not r.passed}
    assert "P1P2P3=-1" in failed and "[P,H]=0" in failed


def test_chain_cluster_limits():
    assert chain_cluster(3).n_sites == 3
    with pytest.raises(ConstructionError):
        chain_cluster(7)


@given(st.integers(1, 3), st.integers(1, 3))
def test_open_patch_properties(rows, cols):
    patch = build_patch(rows, cols, "open")
    assert len(patch.plaquettes) == rows * cols
    assert all(len(p.vertices) == 18 for p in patch.plaquettes)
    for l in patch.links:
        if l.color == Color.B:
            assert l.u // 3 == l.v // 3
        else:
            assert link_operator(patch, l).weight == 2
