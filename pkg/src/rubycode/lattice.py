"""Ruby-lattice patches, the two-body Hamiltonian and plaquette operators.

Geometry
--------
Plaquettes sit on a triangular lattice of faces ``(i, j)`` with colour
``(i - j) mod 3``. Every triple of mutually adjacent faces defines an
effective site (a triangle of three spins): ``(i, j, 0)`` touches faces
``(i,j), (i+1,j), (i,j+1)`` and ``(i, j, 1)`` touches ``(i+1,j), (i,j+1),
(i+1,j+1)``. Effective sites form a honeycomb lattice whose hexagons are the
plaquettes.

Each triangle carries one vertex per surrounding face; the vertex takes the
colour of that face, so vertex ``3*t + c`` is the colour-``c`` vertex of
triangle ``t``. Triangle edges are b-links (``zz``). Two neighbouring
triangles share two faces and are joined by one link inside each shared
face, between the two vertices of that face's colour. If the shared edge of
the honeycomb has colour ``e`` and the vertices have colour ``d``, the link
is an r-link (``xx``) when ``e = bar(d)`` and a g-link (``yy``) when
``e = bar(bar(d))``.

Shapes
------
``build_patch(rows, cols, "open")`` keeps the triangles around a
``rows x cols`` parallelogram of faces; those faces are complete plaquettes.
``build_patch(rows, cols, "periodic")`` wraps a torus spanned by ``rows``
and ``cols`` three-plaquette colour cells (``3*rows*cols`` plaquettes),
which is 3-colourable for every size.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .colors import COLORS, LINK_AXIS, Color
from .errors import ConstructionError
from .pauli import OperatorSum, PauliString, commutes, multiply

PATCH_SCHEMA = "rubycode.patch/1"

SiteKey = tuple[int, int, int]
FaceKey = tuple[int, int]

_A1 = (1.0, 0.0)
_A2 = (0.5, math.sqrt(3) / 2)


def face_color(face: FaceKey) -> Color:
    return Color((face[0] - face[1]) % 3)


def site_faces(site: SiteKey) -> tuple[FaceKey, FaceKey, FaceKey]:
    i, j, k = site
    if k == 0:
        return (i, j), (i + 1, j), (i, j + 1)
    return (i + 1, j), (i, j + 1), (i + 1, j + 1)


def face_sites(face: FaceKey) -> list[SiteKey]:
    i, j = face
    return [(i, j, 0), (i - 1, j, 0), (i, j - 1, 0),
            (i - 1, j, 1), (i, j - 1, 1), (i - 1, j - 1, 1)]


def _face_pos(face: FaceKey) -> tuple[float, float]:
    return (face[0] * _A1[0] + face[1] * _A2[0], face[0] * _A1[1] + face[1] * _A2[1])


def _site_pos(site: SiteKey) -> tuple[float, float]:
    pts = [_face_pos(f) for f in site_faces(site)]
    return (sum(p[0] for p in pts) / 3, sum(p[1] for p in pts) / 3)


def inter_link_color(edge_color: Color, vertex_color: Color) -> Color:
    """Colour of the link between two ``vertex_color`` vertices across an
    effective edge of colour ``edge_color``."""
    if edge_color == vertex_color:
        raise ValueError("inter-triangle links never cross an edge of their own colour")
    return Color((edge_color - vertex_color - 1) % 3)


@dataclass(frozen=True)
class CouplingParams:
    jx: float = 1.0
    jy: float = 1.0
    jz: float = 1.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.jx, self.jy, self.jz)):
            raise ValueError("couplings must be finite")

    def for_link(self, color: Color) -> float:
        return (self.jx, self.jy, self.jz)[color]


@dataclass(frozen=True)
class Link:
    u: int
    v: int
    color: Color

    @property
    def axis(self) -> str:
        return LINK_AXIS[self.color]


@dataclass(frozen=True)
class EffectiveLink:
    a: int
    b: int
    color: Color
    # the r- and g-link joining the two triangles (indices into patch.links)
    links: tuple[int, ...] = ()


@dataclass(frozen=True)
class Plaquette:
    face: FaceKey
    color: Color
    sites: tuple[int, ...]        # six triangles in cyclic order
    vertices: tuple[int, ...]     # 18-vertex loop, see module docstring
    inner: tuple[int, ...]        # inner hexagon in cyclic order
    axes: tuple[dict, dict, dict]  # vertex -> axis for P_1, P_2, P_3


@dataclass(frozen=True)
class LatticePatch:
    boundary: str
    shape: tuple[int, int]
    site_keys: tuple[SiteKey, ...]
    links: tuple[Link, ...]
    effective_links: tuple[EffectiveLink, ...]
    plaquettes: tuple[Plaquette, ...]
    vertex_positions: tuple[tuple[float, float], ...]
    site_positions: tuple[tuple[float, float], ...]
    faces: dict = field(default_factory=dict, compare=False)  # face -> cyclic site list
    raw_face_count: int = 0

    # -- basic counts -------------------------------------------------
    @property
    def n_sites(self) -> int:
        return len(self.site_keys)

    @property
    def vertex_count(self) -> int:
        return 3 * len(self.site_keys)

    @property
    def triangles(self) -> tuple[tuple[int, int, int], ...]:
        return tuple((3 * t, 3 * t + 1, 3 * t + 2) for t in range(self.n_sites))

    @property
    def effective_sites(self) -> tuple[int, ...]:
        return tuple(range(self.n_sites))

    @staticmethod
    def vertex_color(v: int) -> Color:
        return Color(v % 3)

    @staticmethod
    def vertex(site: int, color: Color) -> int:
        return 3 * site + int(color)

    def neighbors(self, v: int) -> list[tuple[int, Link]]:
        return [(l.v if l.u == v else l.u, l) for l in self._adjacency()[v]]

    def _adjacency(self):
        adj = self.__dict__.get("_adj")
        if adj is None:
            adj = [[] for _ in range(self.vertex_count)]
            for l in self.links:
                adj[l.u].append(l)
                adj[l.v].append(l)
            object.__setattr__(self, "_adj", adj)
        return adj

    def link_between(self, u: int, v: int) -> Link | None:
        for l in self._adjacency()[u]:
            if {l.u, l.v} == {u, v}:
                return l
        return None

    def site_index(self, key: SiteKey) -> int:
        idx = self.__dict__.get("_site_index")
        if idx is None:
            idx = {k: n for n, k in enumerate(self.site_keys)}
            object.__setattr__(self, "_site_index", idx)
        return idx[key]

    def site_neighbors(self, site: int) -> list[tuple[int, Color]]:
        out = []
        for e in self.effective_links:
            if e.a == site:
                out.append((e.b, e.color))
            elif e.b == site:
                out.append((e.a, e.color))
        return out

    def intrinsic_inter_axes(self, v: int) -> dict[str, Color]:
        """Axis of each of the vertex's two inter-triangle links -> colour of
        the effective edge it crosses (defined even where the neighbour is
        missing from an open patch)."""
        d = self.vertex_color(v)
        out = {}
        for e in COLORS:
            if e != d:
                out[LINK_AXIS[inter_link_color(e, d)]] = e
        return out

    def counts(self) -> dict:
        return {"vertex_count": self.vertex_count, "triangles": self.n_sites,
                "links": len(self.links), "effective_links": len(self.effective_links),
                "complete_plaquettes": len(self.plaquettes),
                "raw_plaquettes": self.raw_face_count}

    # -- serialization ------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "schema": PATCH_SCHEMA,
            "boundary": self.boundary,
            "shape": list(self.shape),
            "vertex_count": self.vertex_count,
            "vertices": [{"index": v, "triangle": v // 3, "color": str(self.vertex_color(v)),
                          "pos": [round(c, 9) for c in self.vertex_positions[v]]}
                         for v in range(self.vertex_count)],
            "links": [{"u": l.u, "v": l.v, "color": str(l.color), "axis": l.axis}
                      for l in self.links],
            "triangles": [list(t) for t in self.triangles],
            "plaquettes": [{"face": list(p.face), "color": str(p.color), "sites": list(p.sites),
                            "vertices": list(p.vertices), "inner": list(p.inner),
                            "axes": {f"P{k + 1}": {str(v): a for v, a in sorted(p.axes[k].items())}
                                     for k in range(3)}}
                           for p in self.plaquettes],
            "effective_sites": [{"index": n, "key": list(k),
                                 "pos": [round(c, 9) for c in self.site_positions[n]]}
                                for n, k in enumerate(self.site_keys)],
            "effective_links": [{"a": e.a, "b": e.b, "color": str(e.color),
                                 "links": list(e.links)} for e in self.effective_links],
            "faces": [{"face": list(f), "sites": list(s)} for f, s in sorted(self.faces.items())],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def fingerprint(self) -> str:
        """Short hash of the serialized patch (the lattice-convention fingerprint)."""
        return hashlib.sha256(self.to_json().encode()).hexdigest()[:16]

    @classmethod
    def from_dict(cls, data: dict, validate: bool = True) -> "LatticePatch":
        if data.get("schema") != PATCH_SCHEMA:
            raise ConstructionError(f"unsupported patch schema {data.get('schema')!r}")
        links = tuple(Link(l["u"], l["v"], Color.parse(l["color"])) for l in data["links"])
        plaqs = tuple(
            Plaquette(face=tuple(p["face"]), color=Color.parse(p["color"]),
                      sites=tuple(p["sites"]), vertices=tuple(p["vertices"]),
                      inner=tuple(p["inner"]),
                      axes=tuple({int(v): a for v, a in p["axes"][f"P{k + 1}"].items()}
                                 for k in range(3)))
            for p in data["plaquettes"])
        sites = sorted(data["effective_sites"], key=lambda s: s["index"])
        patch = cls(
            boundary=data["boundary"], shape=tuple(data["shape"]),
            site_keys=tuple(tuple(s["key"]) for s in sites),
            links=links,
            effective_links=tuple(EffectiveLink(e["a"], e["b"], Color.parse(e["color"]),
                                                tuple(e.get("links", ())))
                                  for e in data["effective_links"]),
            plaquettes=plaqs,
            vertex_positions=tuple(tuple(v["pos"]) for v in
                                   sorted(data["vertices"], key=lambda v: v["index"])),
            site_positions=tuple(tuple(s["pos"]) for s in sites),
            faces={tuple(f["face"]): tuple(f["sites"]) for f in data.get("faces", [])},
            raw_face_count=len(data.get("faces", [])),
        )
        if 3 * len(sites) != data["vertex_count"]:
            raise ConstructionError("vertex_count is not three times the triangle count")
        if validate:
            validate_patch(patch)
        return patch

    @classmethod
    def from_json(cls, text: str, validate: bool = True) -> "LatticePatch":
        return cls.from_dict(json.loads(text), validate=validate)


# ---------------------------------------------------------------------------
# construction


class _Torus:
    """Face-coordinate reduction modulo rows*(1,1) and cols*(2,-1)."""

    def __init__(self, rows: int, cols: int):
        self.rows, self.cols = rows, cols

    def face(self, f: FaceKey) -> FaceKey:
        i, j = f
        a = (i + 2 * j) // (3 * self.rows)
        b = (i - j) // (3 * self.cols)
        return (i - a * self.rows - 2 * b * self.cols, j - a * self.rows + b * self.cols)

    def site(self, s: SiteKey) -> SiteKey:
        return (*self.face(s[:2]), s[2])


def build_patch(rows: int, cols: int, boundary: str = "open",
                validate: bool = True) -> LatticePatch:
    """Generate and validate a ruby-lattice patch (see module docstring)."""
    if rows < 1 or cols < 1:
        raise ConstructionError(f"shape must be positive, got {rows}x{cols}")
    if boundary not in ("open", "periodic"):
        raise ConstructionError(f"unknown boundary {boundary!r}")

    if boundary == "open":
        canon_face = canon_site = lambda k: k  # noqa: E731
        chosen = [(i, j) for i in range(rows) for j in range(cols)]
        site_set = {s for f in chosen for s in face_sites(f)}
    else:
        torus = _Torus(rows, cols)
        canon_face, canon_site = torus.face, torus.site
        span = 3 * (rows + cols) + 3
        chosen = sorted({torus.face((i, j)) for i in range(-span, span)
                         for j in range(-span, span)})
        if len(chosen) != 3 * rows * cols:
            raise ConstructionError("torus reduction produced an inconsistent face count")
        site_set = {canon_site(s) for f in chosen for s in face_sites(f)}

    site_keys = tuple(sorted(site_set))
    index = {k: n for n, k in enumerate(site_keys)}

    def pos_of(site: SiteKey):
        return _site_pos(site)

    site_positions = tuple(pos_of(k) for k in site_keys)
    vertex_positions = []
    for k in site_keys:
        sp_ = _site_pos(k)
        faces = site_faces(k)
        by_color = {face_color(f): f for f in faces}
        for c in COLORS:
            fp = _face_pos(by_color[c])
            vertex_positions.append((sp_[0] + 0.3 * (fp[0] - sp_[0]),
                                     sp_[1] + 0.3 * (fp[1] - sp_[1])))

    links: list[Link] = []
    for t in range(len(site_keys)):
        a, b, c = 3 * t, 3 * t + 1, 3 * t + 2
        links += [Link(a, b, Color.B), Link(b, c, Color.B), Link(a, c, Color.B)]

    eff_links: list[EffectiveLink] = []
    seen_edges = set()
    for key in site_keys:
        if key[2] != 0:
            continue
        i, j, _ = key
        # the three down-triangles adjacent to up-triangle (i, j)
        for other in ((i, j, 1), (i - 1, j, 1), (i, j - 1, 1)):
            ckey = canon_site(other)
            if ckey not in index:
                continue
            shared = set(site_faces(key)) & set(site_faces(other))
            (third,) = set(site_faces(key)) - shared
            ecol = face_color(third)
            a, b = index[key], index[ckey]
            edge_id = (a, b, tuple(sorted(canon_face(f) for f in shared)))
            if edge_id in seen_edges:
                continue
            seen_edges.add(edge_id)
            link_ids = []
            for f in sorted(shared):
                d = face_color(f)
                links.append(Link(3 * a + d, 3 * b + d, inter_link_color(ecol, d)))
                link_ids.append(len(links) - 1)
            eff_links.append(EffectiveLink(a, b, ecol, tuple(link_ids)))

    # faces touched by the patch, with their present sites in cyclic order
    faces: dict[FaceKey, tuple[int, ...]] = {}
    touched = {canon_face(f) for k in site_keys for f in site_faces(k)}
    for f in sorted(touched):
        cyc = []
        fp = _face_pos(f)
        ordered = sorted(face_sites(f), key=lambda s: math.atan2(_site_pos(s)[1] - fp[1],
                                                                 _site_pos(s)[0] - fp[0]))
        for s in ordered:
            cs = canon_site(s)
            cyc.append(index.get(cs))
        faces[f] = tuple(cyc)

    plaquettes = []
    for f, cyc in faces.items():
        if any(s is None for s in cyc):
            continue
        plaquettes.append(_make_plaquette(f, cyc, site_keys, canon_site, canon_face))

    patch = LatticePatch(
        boundary=boundary, shape=(rows, cols), site_keys=site_keys, links=tuple(links),
        effective_links=tuple(eff_links), plaquettes=tuple(plaquettes),
        vertex_positions=tuple(vertex_positions), site_positions=site_positions,
        faces={f: tuple(s for s in cyc if s is not None) for f, cyc in faces.items()},
        raw_face_count=len(faces))
    if validate:
        validate_patch(patch)
    return patch


def _make_plaquette(face, cyc, site_keys, canon_site, canon_face) -> Plaquette:
    color = face_color(face)
    # raw (unreduced) keys around the face give the shared faces unambiguously
    raw = sorted(face_sites(face), key=lambda s: math.atan2(
        _site_pos(s)[1] - _face_pos(face)[1], _site_pos(s)[0] - _face_pos(face)[0]))
    loop, inner = [], []
    p1, p2, p3 = {}, {}, {}
    n = len(raw)
    for k in range(n):
        prev_s, s, next_s = raw[k - 1], raw[k], raw[(k + 1) % n]
        t = cyc[k]
        g_prev = (set(site_faces(s)) & set(site_faces(prev_s))) - {face}
        g_next = (set(site_faces(s)) & set(site_faces(next_s))) - {face}
        (gp,), (gn,) = g_prev, g_next
        v_in = 3 * t + color
        v_prev, v_next = 3 * t + face_color(gp), 3 * t + face_color(gn)
        loop += [v_prev, v_in, v_next]
        inner.append(v_in)
        p1[v_in], p2[v_in], p3[v_in] = "x", "y", "z"
        for v in (v_prev, v_next):
            # outward link crosses an edge of the plaquette's own colour
            ax = LINK_AXIS[inter_link_color(color, Color(v % 3))]
            p1[v] = p2[v] = ax
    return Plaquette(face=face, color=color, sites=tuple(cyc), vertices=tuple(loop),
                     inner=tuple(inner), axes=(p1, p2, p3))


def restrict(patch: LatticePatch, sites: Sequence[int]) -> LatticePatch:
    """Open sub-patch on the given triangles (renumbered in the given order)."""
    sites = list(sites)
    if len(set(sites)) != len(sites):
        raise ConstructionError("duplicate triangles in restriction")
    new = {s: n for n, s in enumerate(sites)}

    def vmap(v):
        return 3 * new[v // 3] + v % 3

    links, link_map = [], {}
    for idx, l in enumerate(patch.links):
        if l.u // 3 in new and l.v // 3 in new:
            link_map[idx] = len(links)
            links.append(Link(vmap(l.u), vmap(l.v), l.color))
    eff = tuple(EffectiveLink(new[e.a], new[e.b], e.color, tuple(link_map[i] for i in e.links))
                for e in patch.effective_links if e.a in new and e.b in new)
    plaqs = []
    for p in patch.plaquettes:
        if all(s in new for s in p.sites):
            plaqs.append(Plaquette(p.face, p.color, tuple(new[s] for s in p.sites),
                                   tuple(vmap(v) for v in p.vertices),
                                   tuple(vmap(v) for v in p.inner),
                                   tuple({vmap(v): a for v, a in ax.items()} for ax in p.axes)))
    faces = {f: tuple(new[s] for s in cyc if s in new) for f, cyc in patch.faces.items()}
    faces = {f: c for f, c in faces.items() if c}
    return LatticePatch(
        boundary="open", shape=patch.shape,
        site_keys=tuple(patch.site_keys[s] for s in sites), links=tuple(links),
        effective_links=eff, plaquettes=tuple(plaqs),
        vertex_positions=tuple(patch.vertex_positions[3 * s + c] for s in sites for c in range(3)),
        site_positions=tuple(patch.site_positions[s] for s in sites),
        faces=faces, raw_face_count=len(faces))


def chain_cluster(n_triangles: int) -> LatticePatch:
    """``n`` consecutive triangles (1..6) around a single plaquette."""
    if not 1 <= n_triangles <= 6:
        raise ConstructionError("chain clusters hold 1 to 6 triangles")
    base = build_patch(1, 1, "open")
    return restrict(base, base.plaquettes[0].sites[:n_triangles])


# ---------------------------------------------------------------------------
# operators


def build_hamiltonian(patch: LatticePatch, J: CouplingParams = CouplingParams()) -> OperatorSum:
    """``-J_x sum_r XX - J_y sum_g YY - J_z sum_b ZZ``; zero couplings are dropped."""
    n = patch.vertex_count
    terms = []
    for l in patch.links:
        coupling = J.for_link(l.color)
        if coupling != 0:
            terms.append((-coupling, PauliString.from_ops(n, {l.u: l.axis, l.v: l.axis})))
    return OperatorSum(n, terms)


def link_operator(patch: LatticePatch, link: Link) -> PauliString:
    return PauliString.from_ops(patch.vertex_count, {link.u: link.axis, link.v: link.axis})


def plaquette_operators(patch: LatticePatch, index: int) -> tuple[PauliString, PauliString, PauliString]:
    """``(P_1, P_2, P_3)`` of a complete plaquette."""
    if not 0 <= index < len(patch.plaquettes):
        raise IndexError(f"plaquette index {index} out of range "
                         f"(patch has {len(patch.plaquettes)} complete plaquettes)")
    p = patch.plaquettes[index]
    n = patch.vertex_count
    return tuple(PauliString.from_ops(n, ax) for ax in p.axes)  # type: ignore[return-value]


def all_plaquette_operators(patch: LatticePatch) -> list[PauliString]:
    return [op for k in range(len(patch.plaquettes)) for op in plaquette_operators(patch, k)]


def string_operator(patch: LatticePatch, path: Sequence[int], color: Color | str | None = None,
                    closed: bool | None = None) -> PauliString:
    """String operator along a vertex path.

    Each vertex contributes the Pauli fixed by its outgoing link: the axis of
    the one inter-triangle link not used by the path; ``z`` when both are
    used; and when neither is used, the link crossing an effective edge of
    colour ``color``. A path whose first and last vertex coincide is closed.
    """
    n = patch.vertex_count
    path = list(path)
    if not path:
        return PauliString.identity(n)
    if closed is None:
        closed = len(path) > 1 and path[0] == path[-1]
    if closed and path[0] == path[-1]:
        path = path[:-1]
    if len(set(path)) != len(path):
        raise ValueError("string paths must not revisit a vertex")
    for v in path:
        if not 0 <= v < n:
            raise ValueError(f"vertex {v} is not on the lattice")
    steps = list(zip(path, path[1:])) + ([(path[-1], path[0])] if closed and len(path) > 2 else [])
    used: dict[int, set[str]] = {v: set() for v in path}
    for a, b in steps:
        l = patch.link_between(a, b)
        if l is None:
            raise ValueError(f"vertices {a} and {b} are not joined by a link")
        used[a].add(l.axis)
        used[b].add(l.axis)
    col = None if color is None else Color.parse(color)
    ops = {}
    for v in path:
        inter = patch.intrinsic_inter_axes(v)
        free = [a for a in inter if a not in used[v]]
        if len(free) == 1:
            ops[v] = free[0]
        elif not free:
            ops[v] = "z"
        else:
            match = [a for a in free if inter[a] == col]
            if not match:
                raise ValueError(f"vertex {v}: both inter links are outgoing; "
                                 f"a string colour other than {Color(v % 3)} is required")
            ops[v] = match[0]
    return PauliString.from_ops(n, ops)


def plaquette_loop(patch: LatticePatch, index: int, inner: bool = False) -> list[int]:
    """Closed vertex loop around a plaquette (18 vertices, or the inner hexagon)."""
    p = patch.plaquettes[index]
    loop = list(p.inner if inner else p.vertices)
    return loop + loop[:1]


# ---------------------------------------------------------------------------
# validation


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def check_patch(patch: LatticePatch) -> list[CheckResult]:
    """Run every structural and algebraic invariant; never raises."""
    out: list[CheckResult] = []
    n = patch.vertex_count

    def add(name, ok, detail=""):
        out.append(CheckResult(name, bool(ok), "" if ok else detail))

    # triangles partition the vertices
    tri_links = [l for l in patch.links if l.color == Color.B]
    bad = [l for l in tri_links if l.u // 3 != l.v // 3]
    add("triangles", len(tri_links) == 3 * patch.n_sites and not bad,
        f"{len(bad)} b-links leave their triangle")

    pairs = [tuple(sorted((l.u, l.v))) for l in patch.links]
    add("simple_graph", len(set(pairs)) == len(pairs) and all(a != b for a, b in pairs),
        "duplicate links or self-loops")

    degree = [0] * n
    for l in patch.links:
        degree[l.u] += 1
        degree[l.v] += 1
    axes_ok = True
    for v in range(n):
        kinds = sorted(l.axis for _, l in patch.neighbors(v))
        if kinds.count("x") > 1 or kinds.count("y") > 1 or kinds.count("z") != 2:
            axes_ok = False
    add("vertex_links", axes_ok, "a vertex lacks two zz links or has repeated xx/yy links")
    if patch.boundary == "periodic":
        add("four_valent", all(d == 4 for d in degree), "periodic vertex with degree != 4")
    else:
        inner_vs = {v for p in patch.plaquettes for v in p.inner}
        add("four_valent", all(degree[v] == 4 for v in inner_vs),
            "interior vertex with degree != 4")

    site_cols: dict[int, list[Color]] = {s: [] for s in range(patch.n_sites)}
    for e in patch.effective_links:
        site_cols[e.a].append(e.color)
        site_cols[e.b].append(e.color)
    honey = all(len(c) == len(set(c)) and len(c) <= 3 for c in site_cols.values())
    if patch.boundary == "periodic":
        honey = honey and all(len(c) == 3 for c in site_cols.values())
    add("honeycomb", honey, "an effective site has repeated link colours or wrong degree")

    face_col_ok = True
    face_of_sites = {f: set(s) for f, s in patch.faces.items()}
    fkeys = list(face_of_sites)
    for f, g in itertools.combinations(fkeys, 2):
        if len(face_of_sites[f] & face_of_sites[g]) >= 2 and face_color(f) == face_color(g):
            face_col_ok = False
    add("face_coloring", face_col_ok, "adjacent plaquettes share a colour")

    shape_ok = all(len(p.vertices) == 18 and len(set(p.vertices)) == 18 and len(p.inner) == 6
                   and len(set(p.sites)) == 6 for p in patch.plaquettes)
    add("plaquette_shape", shape_ok, "a plaquette does not have 18 distinct vertices")
    if patch.boundary == "periodic":
        add("plaquette_count", 2 * len(patch.plaquettes) == patch.n_sites,
            f"{len(patch.plaquettes)} plaquettes for N_s={patch.n_sites}")

    if not shape_ok:
        return out
    ident = PauliString.identity(n)
    sq_fail, prod_fail = [], []
    ops = []
    for k in range(len(patch.plaquettes)):
        try:
            P = plaquette_operators(patch, k)
        except Exception as exc:  # corrupted fixtures
            sq_fail.append(f"{k}:{exc}")
            continue
        ops.append((k, P))
        for i, Pi in enumerate(P):
            if multiply(Pi, Pi) != ident:
                sq_fail.append(f"plaquette {k} P{i + 1}")
        if multiply(multiply(P[0], P[1]), P[2]) != -ident:
            prod_fail.append(f"plaquette {k}")
    add("P_i^2=+1", not sq_fail, ", ".join(sq_fail[:5]))
    add("P1P2P3=-1", not prod_fail, ", ".join(prod_fail[:5]))

    flat = [(k, i, P) for k, Ps in ops for i, P in enumerate(Ps)]
    comm_fail = [f"({k}.P{i + 1},{m}.P{j + 1})" for (k, i, P), (m, j, Q)
                 in itertools.combinations(flat, 2) if not commutes(P, Q)]
    add("[P,P]=0", not comm_fail, ", ".join(comm_fail[:5]))

    link_ops = [link_operator(patch, l) for l in patch.links]
    h_fail = [f"{k}.P{i + 1}" for k, i, P in flat if not all(commutes(P, L) for L in link_ops)]
    add("[P,H]=0", not h_fail, ", ".join(h_fail[:5]))
    return out


def validate_patch(patch: LatticePatch) -> None:
    failed = [r for r in check_patch(patch) if not r.passed]
    if failed:
        msg = "; ".join(f"{r.name}: {r.detail}" for r in failed)
        raise ConstructionError(f"patch {patch.shape} ({patch.boundary}) failed validation: {msg}")


def face_loop_sites(patch: LatticePatch, faces: Iterable[FaceKey]) -> list[int]:
    """Boundary cycle (effective sites) of a simply connected union of faces."""
    count: dict[tuple[int, int], int] = {}
    for f in faces:
        cyc = patch.faces.get(f)
        if cyc is None or len(cyc) != 6:
            raise ValueError(f"face {f} is not complete in this patch")
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            e = (min(a, b), max(a, b))
            count[e] = count.get(e, 0) + 1
    boundary = [e for e, c in count.items() if c == 1]
    adj: dict[int, list[int]] = {}
    for a, b in boundary:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    if any(len(v) != 2 for v in adj.values()):
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
