import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rubycode.anyons import (AnyonConfig, Board, BraidSchedule, Exchange, Loop, StatisticsTable,
                             Transport, accumulate_phase, default_board, derive_exchange_phase,
                             derive_monodromy_phase, loop_oracle, monodromy_cases,
                             oracle_patch, oracle_schedule_phase, run_schedule)
from rubycode.colors import COLORS, Color
from rubycode.errors import IllegalMoveError
from rubycode.lattice import chain_cluster

R, G, B = COLORS


@pytest.fixture(scope="module")
def board():
    return default_board()


@pytest.fixture(scope="module")
def center(board):
    return min(range(board.n_sites), key=board.centrality)


@pytest.fixture(scope="module")
def big_ring(board, center):
    """A loop enclosing the centre and its neighbours."""
    core = [center, *sorted(board.adjacency[center])]
    ring = board.ring(core)
    return ring, sorted(board.enclosed(ring))


@pytest.mark.parametrize("c", COLORS)
def test_exchange_is_fermionic(c):
    assert derive_exchange_phase(c) == -1


def test_exchange_needs_a_vertex():
    with pytest.raises(ValueError):
        derive_exchange_phase(R, chain_cluster(2))


@pytest.mark.parametrize("mover,enclosed", list(itertools.product(COLORS, repeat=2)))
def test_monodromy(mover, enclosed):
    cases = monodromy_cases(mover, enclosed)
    assert len({r.loop for r in cases}) == len(cases) >= 3
    expected = 1 if mover == enclosed else -1
    assert {r.phase for r in cases} == {expected}
    assert derive_monodromy_phase(mover, enclosed) == expected


@pytest.mark.parametrize("mover", COLORS)
def test_empty_region(mover):
    assert derive_monodromy_phase(mover, None) == 1


def test_oracle_rejects_open_loop():
    patch = oracle_patch()
    with pytest.raises(ValueError, match="not closed"):
        loop_oracle(patch, [0, 1, 2, 3], R)


def test_oracle_rejects_boson_on_loop():
    patch = oracle_patch()
    ring = Board.from_patch(patch).ring([_middle(patch)])
    with pytest.raises(ValueError):
        loop_oracle(patch, ring, R, [(ring[2], G)])


def test_oracle_hard_core_blocking():
    patch = oracle_patch()
    ring = Board.from_patch(patch).ring([_middle(patch)])
    with pytest.raises(IllegalMoveError):
        loop_oracle(patch, ring, R, [(_middle(patch), G)], sources=[ring[0]])


def _middle(patch):
    b = Board.from_patch(patch)
    return min(range(b.n_sites), key=b.centrality)


def test_two_enclosed_bosons_oracle():
    patch = oracle_patch()
    b = Board.from_patch(patch)
    mid = _middle(patch)
    other = sorted(b.adjacency[mid])[0]
    ring = b.ring([mid, other])
    res = loop_oracle(patch, ring, R, [(mid, G), (other, B)])
    assert res.phase == 1
    res = loop_oracle(patch, ring, R, [(mid, G), (other, R)])
    assert res.phase == -1


def test_statistics_table():
    table = StatisticsTable.derive()
    std = StatisticsTable.standard()
    assert table.exchange == std.exchange and table.monodromy == std.monodromy
    assert table.violations() == []
    for a, b in itertools.product(COLORS, repeat=2):
        assert table.monodromy_phase(a, b) == table.monodromy_phase(b, a)
    assert all(table.monodromy_phase(c, c) == table.exchange_phase(c) ** 2 for c in COLORS)


def test_table_violations_are_reported():
    std = StatisticsTable.standard()
    broken = dict(std.monodromy)
    broken[(R, G)] = 1
    assert StatisticsTable(std.exchange, broken).violations()


def test_empty_schedule(board):
    cfg = AnyonConfig({10: R})
    assert accumulate_phase(cfg, BraidSchedule(), board) == 1


def test_loop_around_one_boson(board, center):
    ring = board.ring([center])
    cfg = AnyonConfig({ring[0]: R, center: G})
    assert accumulate_phase(cfg, BraidSchedule((Loop(ring[0], tuple(ring)),)), board) == -1
    cfg = AnyonConfig({ring[0]: R, center: R})
    assert accumulate_phase(cfg, BraidSchedule((Loop(ring[0], tuple(ring)),)), board) == 1


def test_loop_around_two_bosons(board, big_ring):
    ring, inside = big_ring
    cfg = AnyonConfig({ring[0]: R, inside[0]: G, inside[1]: B})
    assert accumulate_phase(cfg, BraidSchedule((Loop(ring[0], tuple(ring)),)), board) == 1


def test_abstract_agrees_with_oracle():
    patch = oracle_patch()
    b = Board.from_patch(patch)
    mid = _middle(patch)
    ring = b.ring([mid])
    for mover, other in itertools.product(COLORS, repeat=2):
        cfg = AnyonConfig({ring[0]: mover, mid: other})
        sched = BraidSchedule((Loop(ring[0], tuple(ring)),))
        assert accumulate_phase(cfg, sched, b) == oracle_schedule_phase(patch, cfg, sched)


@pytest.mark.parametrize("enclosed", [None, R, G, B])
def test_deformed_loops_agree(board, center, enclosed):
    rings = board.deformed_rings([center], 3)
    assert len({tuple(r) for r in rings}) == 3
    phases = set()
    for ring in rings:
        occ = {ring[0]: R}
        if enclosed is not None:
            occ[center] = enclosed
        phases.add(accumulate_phase(AnyonConfig(occ), BraidSchedule((Loop(ring[0], tuple(ring)),)),
                                    board))
    assert len(phases) == 1


def test_lasso_matches_plain_loop(board, center):
    ring = board.ring([center])
    start = next(s for s in range(board.n_sites)
                 if s not in ring and s != center and board.winding(ring, s) == 0)
    path = board.lasso(start, ring, [center])
    cfg = AnyonConfig({start: B, center: G})
    res = run_schedule(cfg, BraidSchedule((Loop(start, tuple(path)),)), board)
    assert res.phase == -1 and res.pure and res.final == cfg


def test_transport_round_trip_is_pure(board, center):
    ring = board.ring([center])
    moves = tuple(Transport(a, b) for a, b in zip(ring, ring[1:] + ring[:1]))
    cfg = AnyonConfig({ring[0]: G, center: B})
    res = run_schedule(cfg, BraidSchedule(moves), board)
    assert res.pure and res.final == cfg and res.phase == -1


def test_open_trajectory_counts_nothing(board, center):
    ring = board.ring([center])
    half = tuple(Transport(a, b) for a, b in zip(ring[:4], ring[1:5]))
    res = run_schedule(AnyonConfig({ring[0]: G, center: B}), BraidSchedule(half), board)
    assert res.phase == 1 and not res.pure


def test_exchange_move(board, center):
    nb = sorted(board.adjacency[center])[0]
    cfg = AnyonConfig({center: R, nb: R})
    assert accumulate_phase(cfg, BraidSchedule((Exchange(center, nb),)), board) == -1
    assert accumulate_phase(cfg, BraidSchedule((Exchange(center, nb),) * 2), board) == 1


def test_illegal_moves_name_their_index(board, center):
    nb = sorted(board.adjacency[center])
    cfg = AnyonConfig({center: R, nb[0]: G})
    bad = [
        BraidSchedule((Transport(center, nb[1]), Transport(nb[1], nb[0]))),
        BraidSchedule((Transport(center, nb[1]), Transport(center, nb[2]))),
        BraidSchedule((Transport(center, nb[1]), Transport(nb[1], center),
                       Exchange(center, nb[0]))),
        BraidSchedule((Transport(nb[0], center + 1000),)),
    ]
    for sched, index in zip(bad, (1, 1, 2, 0)):
        with pytest.raises(IllegalMoveError) as err:
            run_schedule(cfg, sched, board)
        assert err.value.index == index
        assert str(err.value).startswith(f"move {index}:")


def test_schedule_json_round_trip(board, center):
    ring = board.ring([center])
    sched = BraidSchedule((Transport(1, 2), Exchange(3, 4), Loop(ring[0], tuple(ring))))
    assert BraidSchedule.from_json(sched.to_json()) == sched
    data = sched.to_dict()
    assert data["schema"] == "rubycode.braid/1"
    assert data["moves"][0] == {"type": "transport", "from": 1, "to": 2}
    with pytest.raises(ValueError):
        BraidSchedule.from_dict({"moves": [{"type": "teleport"}]})


def test_config_round_trip():
    cfg = AnyonConfig({3: R, 7: "b"}, {3: 1})
    assert AnyonConfig.from_dict(cfg.to_dict()) == cfg


def test_boards_need_open_patches(torus):
    with pytest.raises(ValueError):
        Board.from_patch(torus)


@given(st.data())
def test_multiplicativity(board, big_ring, data):
    ring, inside = big_ring
    mover = data.draw(st.sampled_from(COLORS))
    chosen = data.draw(st.lists(st.sampled_from(inside), unique=True, max_size=len(inside)))
    colors = [data.draw(st.sampled_from(COLORS)) for _ in chosen]
    sched = BraidSchedule((Loop(ring[0], tuple(ring)),))
    occ = {ring[0]: mover, **dict(zip(chosen, colors))}
    whole = accumulate_phase(AnyonConfig(occ), sched, board)
    product = 1
    for s, c in zip(chosen, colors):
        product *= accumulate_phase(AnyonConfig({ring[0]: mover, s: c}), sched, board)
    assert whole == product
