"""Exchange and mutual statistics of the coloured bosons.

Two layers live here.

The oracle layer works on effective product states of a lattice patch.
Moving a ``c`` boson across an effective link uses the microscopic link
operator(s) that act as a pure transport on such states: the single
``c``-link for links of colour ``c' != c``, and the product of both links
for a link of colour ``c``. Products of transports are Pauli strings, so
every amplitude is a phase and ratios of amplitudes are exact.

The abstract layer models bosons on the sites of a :class:`Board` (an
embedded honeycomb cut from a patch) and evaluates braid schedules from a
:class:`StatisticsTable` alone, via the winding numbers of the tracked
trajectories.
"""

from __future__ import annotations

import collections
import itertools
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .colors import COLORS, Color
from .errors import IllegalMoveError
from .lattice import LatticePatch, build_patch, link_operator
from .pauli import PauliString
from .spin_boson import Tau, local_index, local_label, pauli_to_effective

BRAID_SCHEMA = "rubycode.braid/1"
CONFIG_SCHEMA = "rubycode.anyons/1"


# ---------------------------------------------------------------------------
# oracle layer: transports as Pauli strings on effective product states


def _effective_link(patch: LatticePatch, a: int, b: int):
    for e in patch.effective_links:
        if {e.a, e.b} == {a, b}:
            return e
    raise ValueError(f"sites {a} and {b} are not adjacent")


def transport_operator(patch: LatticePatch, src: int, dst: int, color: Color) -> PauliString:
    """Pauli string moving a ``color`` boson from ``src`` to the adjacent ``dst``."""
    color = Color.parse(color)
    e = _effective_link(patch, src, dst)
    p = PauliString.identity(patch.vertex_count)
    for li in e.links:
        link = patch.links[li]
        if e.color == color or link.u % 3 == color:
            p = link_operator(patch, link) * p
    return p


def path_operator(patch: LatticePatch, path: Sequence[int], color: Color) -> PauliString:
    """Product of transports along ``path`` (the first hop acts first)."""
    p = PauliString.identity(patch.vertex_count)
    for a, b in zip(path, path[1:]):
        p = transport_operator(patch, a, b, color) * p
    return p


def product_state(patch: LatticePatch, occupations: Mapping[int, Color],
                  tau: Mapping[int, Tau] | None = None) -> tuple[int, ...]:
    tau = tau or {}
    return tuple(local_index(tau.get(s, Tau.UP), occupations.get(s))
                 for s in range(patch.n_sites))


def occupations_of(basis: Sequence[int]) -> dict[int, Color]:
    out = {}
    for s, idx in enumerate(basis):
        boson = local_label(idx)[1]
        if boson is not None:
            out[s] = boson
    return out


class EffectiveRegister:
    """A single effective product basis state with an accumulated amplitude."""

    def __init__(self, patch: LatticePatch, occupations: Mapping[int, Color],
                 tau: Mapping[int, Tau] | None = None):
        self.patch = patch
        self.basis = product_state(patch, occupations, tau)
        self.amplitude: complex = 1.0

    @property
    def occupations(self) -> dict[int, Color]:
        return occupations_of(self.basis)

    def apply(self, pauli: PauliString) -> None:
        out = pauli_to_effective(self.patch, pauli).apply_product({self.basis: 1.0})
        if len(out) != 1:
            raise RuntimeError("operator is not monomial on this product state")
        (basis, amp), = out.items()
        self.basis, self.amplitude = basis, self.amplitude * amp

    def transport(self, src: int, dst: int) -> None:
        occ = self.occupations
        if src not in occ:
            raise IllegalMoveError(f"no boson at site {src}")
        if dst in occ:
            raise IllegalMoveError(f"site {dst} is occupied (hard-core)")
        color = occ[src]
        self.apply(transport_operator(self.patch, src, dst, color))
        expected = dict(occ)
        expected[dst] = expected.pop(src)
        if self.occupations != expected:
            raise RuntimeError(f"transport {src}->{dst} did not act as a pure hop")

    def walk(self, path: Sequence[int]) -> None:
        for a, b in zip(path, path[1:]):
            self.transport(a, b)

    def copy(self) -> "EffectiveRegister":
        new = EffectiveRegister.__new__(EffectiveRegister)
        new.patch, new.basis, new.amplitude = self.patch, self.basis, self.amplitude
        return new


@lru_cache(maxsize=4)
def oracle_patch(rows: int = 4, cols: int = 4) -> LatticePatch:
    return build_patch(rows, cols, "open")


def _check_closed(patch: LatticePatch, loop: Sequence[int]) -> list[int]:
    loop = list(loop)
    if len(loop) > 1 and loop[0] == loop[-1]:
        loop = loop[:-1]
    if len(loop) < 3:
        raise ValueError("a loop needs at least three sites")
    adj = _adjacency(patch)
    for a, b in zip(loop, loop[1:] + loop[:1]):
        if b not in adj[a]:
            raise ValueError(f"loop is not closed: sites {a} and {b} are not adjacent")
    return loop


def _adjacency(patch: LatticePatch) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {s: set() for s in range(patch.n_sites)}
    for e in patch.effective_links:
        adj[e.a].add(e.b)
        adj[e.b].add(e.a)
    return adj


def _bfs(adj: Mapping[int, set[int]], start: int, goal: int, blocked: set[int]) -> list[int]:
    prev = {start: None}
    queue = collections.deque([start])
    while queue:
        x = queue.popleft()
        if x == goal:
            break
        for t in sorted(adj[x]):
            if t not in prev and (t == goal or t not in blocked):
                prev[t] = x
                queue.append(t)
    if goal not in prev:
        raise ValueError(f"no free path from site {start} to site {goal}")
    path = [goal]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def exchange_oracle(patch: LatticePatch, center: int, color: Color,
                    order: Sequence[int]) -> complex:
    """Hopping-algebra exchange phase at ``center`` for neighbours ``(n1, n2, n3)``.

    Bosons start at ``n1`` and ``n2``. One sequence moves ``n1 -> center ->
    n3`` and then ``n2 -> center``; the other moves ``n2 -> center -> n3`` and
    then ``n1 -> center``. Both end in the same basis state; the amplitude
    ratio is the exchange phase.
    """
    n1, n2, n3 = order
    color = Color.parse(color)
    first = EffectiveRegister(patch, {n1: color, n2: color})
    second = first.copy()
    for a, b in ((n1, center), (center, n3), (n2, center)):
        first.transport(a, b)
    for a, b in ((n2, center), (center, n3), (n1, center)):
        second.transport(a, b)
    if first.basis != second.basis:
        raise RuntimeError("exchange sequences end in different states")
    return second.amplitude / first.amplitude


def _phase_value(z: complex, what: str) -> int:
    for v in (1, -1):
        if abs(z - v) < 1e-12:
            return v
    raise RuntimeError(f"{what} gave phase {z}, which is not ±1")


def derive_exchange_phase(color: Color, patch: LatticePatch | None = None,
                          center: int | None = None) -> int:
    """Exchange phase of two ``color`` bosons from the hopping algebra.

    All six orderings of the three neighbours of ``center`` are evaluated;
    they must agree.
    """
    patch = patch or oracle_patch()
    adj = _adjacency(patch)
    if center is None:
        full = [s for s in range(patch.n_sites) if len(adj[s]) >= 3]
        if not full:
            raise ValueError("cluster too small: no site with three neighbours")
        center = full[0]
    elif len(adj[center]) < 3:
        raise ValueError(f"site {center} has fewer than three neighbours")
    phases = {_phase_value(exchange_oracle(patch, center, color, order), "exchange")
              for order in itertools.permutations(sorted(adj[center])[:3])}
    if len(phases) != 1:
        raise RuntimeError(f"exchange phase depends on the ordering: {sorted(phases)}")
    return phases.pop()


@dataclass(frozen=True)
class MonodromyResult:
    mover: Color
    loop: tuple[int, ...]
    ratio: complex
    enclosed: tuple[tuple[int, Color], ...]
    strings: tuple[tuple[int, ...], ...]

    @property
    def phase(self) -> int:
        return _phase_value(self.ratio, "loop oracle")


def loop_oracle(patch: LatticePatch, loop: Sequence[int], mover: Color,
                enclosed: Sequence[tuple[int, Color]] = (),
                sources: Sequence[int] | None = None) -> MonodromyResult:
    """Monodromy of a ``mover`` boson taken once around ``loop``.

    The mover starts at ``loop[0]``. Each enclosed boson is brought by a
    string of transports from a source site outside the loop. The loop is
    run once before the strings (nothing enclosed yet) and once after them;
    both orders end in the same basis state and the amplitude ratio is the
    monodromy. Strings avoid ``loop[0]``.
    """
    mover = Color.parse(mover)
    loop = _check_closed(patch, loop)
    adj = _adjacency(patch)
    targets = [(s, Color.parse(c)) for s, c in enclosed]
    if any(s in loop for s, _ in targets):
        raise ValueError("enclosed bosons must not sit on the loop")
    if sources is None:
        sources = _pick_sources(patch, loop, [s for s, _ in targets])
    if len(sources) != len(targets):
        raise ValueError("one source site per enclosed boson is required")
    start = {loop[0]: mover}
    for src, (_, c) in zip(sources, targets):
        if src in start:
            raise IllegalMoveError(f"site {src} is occupied (hard-core)")
        start[src] = c
    strings = []
    occupied = set(start)
    for src, (dst, _) in zip(sources, targets):
        path = _bfs(adj, src, dst, occupied - {src})
        strings.append(tuple(path))
        occupied = (occupied - {src}) | {dst}

    cycle = list(loop) + [loop[0]]
    before = EffectiveRegister(patch, start)
    before.walk(cycle)
    for s in strings:
        before.walk(s)
    after = EffectiveRegister(patch, start)
    for s in strings:
        after.walk(s)
    after.walk(cycle)
    if before.basis != after.basis:
        raise RuntimeError("loop/string orders end in different states")
    return MonodromyResult(mover, tuple(loop), after.amplitude / before.amplitude,
                           tuple(targets), tuple(strings))


def _pick_sources(patch: LatticePatch, loop: Sequence[int], avoid: Sequence[int]) -> list[int]:
    board = Board.from_patch(patch)
    taken = set(loop) | set(avoid)
    outside = [s for s in range(patch.n_sites)
               if s not in taken and board.winding(list(loop), s) == 0]
    if len(outside) < len(avoid):
        raise ValueError("patch too small to park the enclosed bosons outside the loop")
    cx, cy = np.mean([board.positions[s] for s in loop], axis=0)
    outside.sort(key=lambda s: (-math.hypot(board.positions[s][0] - cx,
                                            board.positions[s][1] - cy), s))
    return outside[:len(avoid)]


def site_ring(patch: LatticePatch, sites: Iterable[int]) -> list[int]:
    """Loop around the given sites: the boundary of all faces touching them."""
    board = Board.from_patch(patch)
    return board.ring(sites)


def _interior_site(patch: LatticePatch) -> int:
    board = Board.from_patch(patch)
    for s in sorted(range(patch.n_sites), key=board.centrality):
        try:
            board.ring([s])
            return s
        except ValueError:
            continue
    raise ValueError("patch has no site surrounded by complete faces")


def monodromy_cases(mover: Color, enclosed: Color | None,
                    patch: LatticePatch | None = None, count: int = 3) -> list[MonodromyResult]:
    """Oracle runs on ``count`` deformed loops around the same enclosed site.

    Loops are boundaries of growing face unions containing the enclosed
    site; each run uses a different source for the enclosed boson.
    """
    patch = patch or oracle_patch()
    board = Board.from_patch(patch)
    center = _interior_site(patch)
    loops = board.deformed_rings([center], count)
    out = []
    for k, loop in enumerate(loops):
        # start the mover at a different loop position each time
        loop = loop[k % len(loop):] + loop[:k % len(loop)]
        if enclosed is None:
            out.append(loop_oracle(patch, loop, mover))
            continue
        srcs = _pick_sources(patch, loop, [center] * (k + 1))
        out.append(loop_oracle(patch, loop, mover, [(center, enclosed)], [srcs[k]]))
    return out


def derive_monodromy_phase(mover: Color, enclosed: Color | None,
                           patch: LatticePatch | None = None, count: int = 3) -> int:
    """Phase of a ``mover`` boson winding once around an ``enclosed`` one.

    ``enclosed=None`` winds around an empty region. Every deformed loop must
    give the same answer.
    """
    phases = {r.phase for r in monodromy_cases(mover, enclosed, patch, count)}
    if len(phases) != 1:
        raise RuntimeError(f"loop oracle is not deformation invariant: {sorted(phases)}")
    return phases.pop()


# ---------------------------------------------------------------------------
# abstract layer


@dataclass(frozen=True)
class StatisticsTable:
    exchange: Mapping[Color, int]
    monodromy: Mapping[tuple[Color, Color], int]

    @classmethod
    def standard(cls) -> "StatisticsTable":
        """Fermionic exchange, +1 self-monodromy, -1 between distinct colours."""
        return cls({c: -1 for c in COLORS},
                   {(a, b): (1 if a == b else -1) for a in COLORS for b in COLORS})

    @classmethod
    def derive(cls, patch: LatticePatch | None = None) -> "StatisticsTable":
        """Fill the table from the oracles."""
        return cls({c: derive_exchange_phase(c, patch) for c in COLORS},
                   {(a, b): derive_monodromy_phase(a, b, patch) for a in COLORS for b in COLORS})

    def exchange_phase(self, a: Color, b: Color | None = None) -> int:
        a = Color.parse(a)
        if b is not None and Color.parse(b) != a:
            raise ValueError("exchange is only defined for bosons of the same colour")
        return self.exchange[a]

    def monodromy_phase(self, mover: Color, enclosed: Color) -> int:
        return self.monodromy[(Color.parse(mover), Color.parse(enclosed))]

    def violations(self) -> list[str]:
        out = []
        for a, b in itertools.product(COLORS, repeat=2):
            if self.monodromy[(a, b)] != self.monodromy[(b, a)]:
                out.append(f"monodromy not symmetric for ({a},{b})")
        for c in COLORS:
            if self.monodromy[(c, c)] != self.exchange[c] ** 2:
                out.append(f"monodromy({c},{c}) != exchange({c})^2")
        return out

    def to_dict(self) -> dict:
        return {"exchange": {str(c): v for c, v in self.exchange.items()},
                "monodromy": {f"{a}{b}": v for (a, b), v in self.monodromy.items()}}


@dataclass(frozen=True, eq=False)
class Board:
    """Embedded honeycomb: site positions, adjacency and hexagonal faces."""

    positions: tuple[tuple[float, float], ...]
    adjacency: tuple[frozenset[int], ...]
    faces: tuple[tuple[int, ...], ...]

    @classmethod
    def from_patch(cls, patch: LatticePatch) -> "Board":
        cached = patch.__dict__.get("_board")
        if cached is not None:
            return cached
        if patch.boundary != "open":
            raise ValueError("boards are cut from open patches")
        adj = _adjacency(patch)
        faces = tuple(tuple(cyc) for _, cyc in sorted(patch.faces.items()) if len(cyc) == 6)
        board = cls(tuple(tuple(map(float, p)) for p in patch.site_positions),
                    tuple(frozenset(adj[s]) for s in range(patch.n_sites)), faces)
        object.__setattr__(patch, "_board", board)
        return board

    @property
    def n_sites(self) -> int:
        return len(self.positions)

    def adjacent(self, a: int, b: int) -> bool:
        return b in self.adjacency[a]

    def centrality(self, s: int) -> float:
        cx, cy = np.mean(self.positions, axis=0)
        x, y = self.positions[s]
        return math.hypot(x - cx, y - cy)

    def winding(self, loop: Sequence[int], site: int) -> int:
        """Winding number of the closed site path ``loop`` around ``site``."""
        px, py = self.positions[site]
        total = 0.0
        pts = list(loop) + [loop[0]]
        for a, b in zip(pts, pts[1:]):
            if site in (a, b):
                raise ValueError(f"site {site} lies on the loop")
            total += _angle_step(self.positions[a], self.positions[b], (px, py))
        return int(round(total / (2 * math.pi)))

    def enclosed(self, loop: Sequence[int]) -> set[int]:
        on = set(loop)
        return {s for s in range(self.n_sites) if s not in on and self.winding(loop, s) != 0}

    def faces_around(self, sites: Iterable[int]) -> list[tuple[int, ...]]:
        sites = set(sites)
        return [f for f in self.faces if sites & set(f)]

    def face_union_boundary(self, faces: Sequence[tuple[int, ...]]) -> list[int]:
        count: dict[tuple[int, int], int] = {}
        for cyc in faces:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                e = (min(a, b), max(a, b))
                count[e] = count.get(e, 0) + 1
        adj: dict[int, list[int]] = {}
        for (a, b), k in count.items():
            if k == 1:
                adj.setdefault(a, []).append(b)
                adj.setdefault(b, []).append(a)
        if not adj or any(len(v) != 2 for v in adj.values()):
            raise ValueError("face union boundary is not a simple cycle")
        start = min(adj)
        loop, prev, cur = [start], None, start
        while True:
            nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
            if nxt == start:
                break
            loop.append(nxt)
            prev, cur = cur, nxt
        if len(loop) != len(adj):
            raise ValueError("face union boundary has several components")
        return loop

    def ring(self, sites: Iterable[int]) -> list[int]:
        """Boundary loop of the faces touching ``sites``; it encloses them."""
        sites = list(sites)
        faces = self.faces_around(sites)
        for s in sites:
            if sum(1 for f in faces if s in f) != 3:
                raise ValueError(f"site {s} is not surrounded by complete faces")
        return self.face_union_boundary(faces)

    def deformed_rings(self, sites: Sequence[int], count: int,
                       forbidden: Iterable[int] = ()) -> list[list[int]]:
        """``count`` distinct loops enclosing exactly ``sites`` among ``forbidden``.

        The first is :meth:`ring` when it qualifies; the others add
        neighbouring faces one at a time. ``forbidden`` sites may be neither on nor inside the loops.
        """
        forbidden = set(forbidden)
        base = self.faces_around(sites)
        first = self.ring(sites)
        out = [] if (set(first) | self.enclosed(first)) & forbidden else [first]
        tried = [base]
        frontier = [base]
        while len(out) < count and frontier:
            faces = frontier.pop(0)
            touching = {s for f in faces for s in f}
            for extra in self.faces:
                if extra in faces or not (set(extra) & touching):
                    continue
                cand = faces + [extra]
                if any(sorted(cand) == sorted(t) for t in tried):
                    continue
                tried.append(cand)
                try:
                    loop = self.face_union_boundary(cand)
                except ValueError:
                    continue
                inside = self.enclosed(loop)
                if not set(sites) <= inside or (set(loop) | inside) & forbidden:
                    continue
                out.append(loop)
                frontier.append(cand)
                if len(out) == count:
                    break
        if len(out) < count:
            raise ValueError(f"could only build {len(out)} deformed loops")
        return out

    def lasso(self, start: int, loop: Sequence[int], occupied: Iterable[int]) -> list[int]:
        """Closed path from ``start`` out to ``loop``, once around it, and back."""
        occupied = set(occupied) - {start}
        loop = list(loop)
        if occupied & set(loop):
            raise ValueError("loop passes through occupied sites")
        if start in loop:
            k = loop.index(start)
            return loop[k:] + loop[:k]
        adj = {s: set(a) for s, a in enumerate(self.adjacency)}
        best = None
        for entry in loop:
            try:
                tail = _bfs(adj, start, entry, occupied | (set(loop) - {entry}))
            except ValueError:
                continue
            if best is None or len(tail) < len(best):
                best = tail
        if best is None:
            raise ValueError(f"no free path from site {start} to the loop")
        k = loop.index(best[-1])
        around = loop[k:] + loop[:k]
        return best[:-1] + around + [best[-1]] + best[-2:0:-1]


def _angle_step(a, b, p) -> float:
    t0 = math.atan2(a[1] - p[1], a[0] - p[0])
    t1 = math.atan2(b[1] - p[1], b[0] - p[0])
    d = t1 - t0
    while d <= -math.pi:
        d += 2 * math.pi
    while d > math.pi:
        d -= 2 * math.pi
    return d


@dataclass(frozen=True)
class AnyonConfig:
    """Boson occupations per site (hard-core) and the background tau values."""

    occupations: Mapping[int, Color]
    tau: Mapping[int, Tau] = field(default_factory=dict)

    def __post_init__(self):
        occ = {int(s): Color.parse(c) for s, c in dict(self.occupations).items()}
        object.__setattr__(self, "occupations", occ)
        object.__setattr__(self, "tau", {int(s): Tau(t) for s, t in dict(self.tau).items()})

    def color_at(self, site: int) -> Color | None:
        return self.occupations.get(site)

    def to_dict(self) -> dict:
        return {"schema": CONFIG_SCHEMA,
                "occupations": {str(s): str(c) for s, c in sorted(self.occupations.items())},
                "tau": {str(s): int(t) for s, t in sorted(self.tau.items())}}

    @classmethod
    def from_dict(cls, data: Mapping) -> "AnyonConfig":
        occ = data.get("occupations", data)
        return cls({int(s): Color.parse(c) for s, c in occ.items()},
                   {int(s): Tau(int(t)) for s, t in data.get("tau", {}).items()})

    def __eq__(self, other) -> bool:
        return (isinstance(other, AnyonConfig) and self.occupations == other.occupations
                and self.tau == other.tau)

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.occupations.items())))


@dataclass(frozen=True)
class Transport:
    src: int
    dst: int

    def to_dict(self) -> dict:
        return {"type": "transport", "from": self.src, "to": self.dst}


@dataclass(frozen=True)
class Exchange:
    a: int
    b: int

    def to_dict(self) -> dict:
        return {"type": "exchange", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class Loop:
    site: int
    path: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(int(s) for s in self.path))

    def to_dict(self) -> dict:
        return {"type": "loop", "site": self.site, "path": list(self.path)}


Move = Transport | Exchange | Loop


def move_from_dict(d: Mapping) -> Move:
    kind = d.get("type")
    try:
        if kind == "transport":
            return Transport(int(d["from"]), int(d["to"]))
        if kind == "exchange":
            return Exchange(int(d["a"]), int(d["b"]))
        if kind == "loop":
            return Loop(int(d["site"]), tuple(d["path"]))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed {kind} move: {d!r}") from exc
    raise ValueError(f"unknown move type {kind!r}")


@dataclass(frozen=True)
class BraidSchedule:
    moves: tuple[Move, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(self.moves))

    def __add__(self, other: "BraidSchedule") -> "BraidSchedule":
        return BraidSchedule(self.moves + other.moves)

    def to_dict(self) -> dict:
        return {"schema": BRAID_SCHEMA, "moves": [m.to_dict() for m in self.moves]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: Mapping) -> "BraidSchedule":
        if data.get("schema", BRAID_SCHEMA) != BRAID_SCHEMA:
            raise ValueError(f"unsupported schedule schema {data.get('schema')!r}")
        moves = data.get("moves")
        if not isinstance(moves, list):
            raise ValueError("schedule needs a list of moves")
        return cls(tuple(move_from_dict(m) for m in moves))

    @classmethod
    def from_json(cls, text: str) -> "BraidSchedule":
        return cls.from_dict(json.loads(text))


@dataclass
class BraidResult:
    phase: int
    final: AnyonConfig
    windings: dict[tuple[int, int], float]
    pure: bool

    def to_dict(self) -> dict:
        return {"phase": self.phase, "final": self.final.to_dict(), "pure_braid": self.pure,
                "windings": {f"{a}-{b}": w for (a, b), w in sorted(self.windings.items())}}


@lru_cache(maxsize=1)
def default_board() -> Board:
    return Board.from_patch(build_patch(6, 6, "open"))


def run_schedule(config: AnyonConfig, schedule: BraidSchedule, board: Board | None = None,
                 table: StatisticsTable | None = None) -> BraidResult:
    """Evaluate ``schedule`` with the abstract statistics.

    Bosons are tracked individually. For each pair the relative angle swept
    by their trajectories is accumulated; ``w = angle / 2pi`` full windings
    contribute ``monodromy^w`` and, for equal colours, half windings
    contribute the exchange phase. Unfinished windings of open trajectories
    contribute nothing. An ``Exchange`` move of two adjacent equal-colour
    bosons contributes the exchange phase once.
    """
    board = board or default_board()
    table = table or StatisticsTable.standard()
    pos: list[int] = []
    colors: list[Color] = []
    for s, c in sorted(config.occupations.items()):
        if not 0 <= s < board.n_sites:
            raise IllegalMoveError(f"site {s} is not on the board")
        pos.append(s)
        colors.append(c)
    start = list(pos)
    angle = {(i, j): 0.0 for i in range(len(pos)) for j in range(i + 1, len(pos))}
    extra = 1

    def where(site):
        return pos.index(site) if site in pos else None

    def step(k, idx, dst):
        src = pos[idx]
        if not board.adjacent(src, dst):
            raise IllegalMoveError(f"sites {src} and {dst} are not adjacent", k)
        if dst in pos:
            raise IllegalMoveError(f"site {dst} is occupied (hard-core)", k)
        for j, q in enumerate(pos):
            if j == idx:
                continue
            d = _angle_step(board.positions[src], board.positions[dst], board.positions[q])
            key = (min(idx, j), max(idx, j))
            angle[key] += d
        pos[idx] = dst

    for k, move in enumerate(schedule.moves):
        if isinstance(move, Transport):
            idx = where(move.src)
            if idx is None:
                raise IllegalMoveError(f"no boson at site {move.src}", k)
            step(k, idx, move.dst)
        elif isinstance(move, Exchange):
            ia, ib = where(move.a), where(move.b)
            if ia is None or ib is None:
                raise IllegalMoveError("exchange needs both sites occupied", k)
            if not board.adjacent(move.a, move.b):
                raise IllegalMoveError(f"sites {move.a} and {move.b} are not adjacent", k)
            if colors[ia] != colors[ib]:
                raise IllegalMoveError("exchange of different colours is outside the table", k)
            extra *= table.exchange_phase(colors[ia])
        elif isinstance(move, Loop):
            idx = where(move.site)
            if idx is None:
                raise IllegalMoveError(f"no boson at site {move.site}", k)
            path = list(move.path)
            if not path or path[0] != move.site:
                raise IllegalMoveError("loop path must start at the boson's site", k)
            if len(path) > 1 and path[-1] == path[0]:
                path = path[:-1]
            if len(path) < 3:
                raise IllegalMoveError("a loop needs at least three sites", k)
            for dst in path[1:] + path[:1]:
                step(k, idx, dst)
        else:
            raise IllegalMoveError(f"unknown move {move!r}", k)

    phase = extra
    windings = {}
    for (i, j), a in angle.items():
        w = a / (2 * math.pi)
        windings[(start[i], start[j])] = w
        if colors[i] == colors[j]:
            half = _completed(2 * w)
            phase *= table.exchange_phase(colors[i]) ** (half % 2)
        else:
            phase *= table.monodromy_phase(colors[i], colors[j]) ** (_completed(w) % 2)
    final = AnyonConfig({p: c for p, c in zip(pos, colors)}, config.tau)
    pure = sorted(zip(pos, colors)) == sorted(zip(start, colors))
    return BraidResult(int(phase), final, windings, pure)


def _completed(x: float) -> int:
    r = round(x)
    if abs(x - r) < 1e-9:
        return int(r)
    return int(math.trunc(x))


def accumulate_phase(config: AnyonConfig, schedule: BraidSchedule, board: Board | None = None,
                     table: StatisticsTable | None = None) -> int:
    """Total ±1 phase of ``schedule`` applied to ``config``."""
    return run_schedule(config, schedule, board, table).phase


def oracle_schedule_phase(patch: LatticePatch, config: AnyonConfig,
                          schedule: BraidSchedule) -> int:
    """Microscopic cross-check of a schedule made of ``Loop`` moves.

    Each loop is evaluated by :func:`loop_oracle` with every other boson
    enclosed by it brought in along a string; bosons outside contribute no
    crossing.
    """
    board = Board.from_patch(patch)
    occ = dict(config.occupations)
    phase = 1
    for k, move in enumerate(schedule.moves):
        if not isinstance(move, Loop):
            raise ValueError(f"move {k}: the oracle cross-check handles loop moves only")
        if move.site not in occ:
            raise IllegalMoveError(f"no boson at site {move.site}", k)
        path = list(move.path)
        if path[-1] == path[0]:
            path = path[:-1]
        if len(set(path)) != len(path):
            path = _simple_core(path)
        inside = [(s, c) for s, c in occ.items()
                  if s not in path and board.winding(path, s) % 2]
        res = loop_oracle(patch, path, occ[move.site], inside)
        phase *= res.phase
    return phase


def _simple_core(path: list[int]) -> list[int]:
    """Strip out-and-back tails from a closed walk, keeping its simple cycle."""
    w = list(path) + [path[0]]
    changed = True
    while changed:
        changed = False
        for i in range(1, len(w) - 1):
            if w[i - 1] == w[i + 1]:
                w = w[:i] + w[i + 2:]
                changed = True
                break
        while len(w) > 3 and w[1] == w[-2]:
            w = w[1:-1]
            changed = True
    core = w[:-1]
    if len(set(core)) != len(core):
        raise ValueError("loop path is not a lasso around a simple cycle")
    return core
