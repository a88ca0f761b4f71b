"""Simplicial and topological descriptions of 2-complexes.

A ``SimplicialComplex2`` is the raw vertex/edge/triangle input. A
``TopoComplex`` keeps only what matters up to homeomorphism: the detached
surface components (orientability, Euler genus, marked points), the
isolated segments, and the singular points tying them together.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

import pynauty

from .graph_core import CapError, ParseError, natural_key


class StructuralError(ValueError):
    pass


# ---------------------------------------------------------------------------
# simplicial complexes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimplicialComplex2:
    vertices: FrozenSet[str]
    edges: FrozenSet[FrozenSet[str]]
    triangles: FrozenSet[FrozenSet[str]]

    @staticmethod
    def build(vertices=(), edges=(), triangles=()) -> "SimplicialComplex2":
        """Build with simplicial closure: faces of declared simplices are added."""
        vs = set(vertices)
        es = set()
        ts = set()
        for t in triangles:
            t = frozenset(t)
            if len(t) != 3:
                raise StructuralError(f"triangle {sorted(t)} has a repeated vertex")
            ts.add(t)
            for a, b in combinations(sorted(t), 2):
                es.add(frozenset((a, b)))
        for e in edges:
            e = frozenset(e)
            if len(e) != 2:
                raise StructuralError(f"edge {sorted(e)} has a repeated vertex")
            es.add(e)
        for e in es:
            vs.update(e)
        return SimplicialComplex2(frozenset(vs), frozenset(es), frozenset(ts))

    def validate(self) -> List[str]:
        problems = []
        for t in self.triangles:
            if len(t) != 3:
                problems.append(f"triangle {sorted(t)} is not a 3-set")
            for a, b in combinations(sorted(t), 2):
                if frozenset((a, b)) not in self.edges:
                    problems.append(f"edge {a}{b} of triangle {sorted(t)} not declared")
        for e in self.edges:
            if len(e) != 2 or not e <= self.vertices:
                problems.append(f"bad edge {sorted(e)}")
        return problems

    @property
    def n_simplices(self) -> int:
        return len(self.vertices) + len(self.edges) + len(self.triangles)

    def isolated_vertices(self) -> List[str]:
        used = {v for e in self.edges for v in e}
        return sorted(self.vertices - used, key=natural_key)

    def remove_vertices(self, vs: Iterable[str]) -> "SimplicialComplex2":
        drop = set(vs)
        return SimplicialComplex2(
            frozenset(self.vertices - drop),
            frozenset(e for e in self.edges if not e & drop),
            frozenset(t for t in self.triangles if not t & drop),
        )

    def to_text(self) -> str:
        lines = [f"v {v}" for v in sorted(self.vertices, key=natural_key)]
        for e in sorted((sorted(e, key=natural_key) for e in self.edges), key=lambda x: [natural_key(y) for y in x]):
            lines.append("e " + " ".join(e))
        for t in sorted((sorted(t, key=natural_key) for t in self.triangles), key=lambda x: [natural_key(y) for y in x]):
            lines.append("t " + " ".join(t))
        return "\n".join(lines) + "\n"


def parse_smc(text: str) -> SimplicialComplex2:
    vs, es, ts = [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        kind, args = toks[0], toks[1:]
        if kind == "v" and len(args) == 1:
            vs.append(args[0])
        elif kind == "e" and len(args) == 2:
            es.append(args)
        elif kind == "t" and len(args) == 3:
            ts.append(args)
        else:
            raise ParseError(f"line {lineno}: cannot parse {raw!r}")
    try:
        return SimplicialComplex2.build(vs, es, ts)
    except StructuralError as exc:
        raise ParseError(str(exc)) from exc


def barycentric_subdivision(c: SimplicialComplex2) -> SimplicialComplex2:
    def name(s):
        return "b" + "_".join(sorted(s, key=natural_key))

    tris = []
    edges = []
    for t in c.triangles:
        for e in (frozenset(x) for x in combinations(sorted(t), 2)):
            for v in e:
                tris.append((name({v}), name(e), name(t)))
    for e in c.edges:
        for v in e:
            edges.append((name({v}), name(e)))
    return SimplicialComplex2.build((name({v}) for v in c.vertices), edges, tris)


def detect_3book(c: SimplicialComplex2) -> bool:
    count: Dict[FrozenSet[str], int] = {}
    for t in c.triangles:
        for a, b in combinations(sorted(t), 2):
            e = frozenset((a, b))
            count[e] = count.get(e, 0) + 1
            if count[e] >= 3:
                return True
    return False


@dataclass(frozen=True)
class LinkComponent:
    kind: str  # "cone" | "corner" | "segment"
    members: Tuple  # triangles (as sorted tuples) or the edge


def link_components(c: SimplicialComplex2, p: str) -> Tuple[List[LinkComponent], bool]:
    """Partition the simplices at ``p``; the flag is True when ``p`` is regular."""
    if detect_3book(c):
        raise StructuralError("complex contains a 3-book")
    edges_at = sorted((e for e in c.edges if p in e), key=lambda e: sorted(e))
    if not edges_at:
        raise StructuralError(f"vertex {p} has no incident edge")
    tris_at = [t for t in c.triangles if p in t]
    # graph on the edges at p; triangles join their two p-edges
    adj: Dict[FrozenSet[str], List[FrozenSet[str]]] = {e: [] for e in edges_at}
    via: Dict[Tuple, FrozenSet[str]] = {}
    for t in tris_at:
        a, b = [frozenset((p, x)) for x in sorted(t - {p})]
        adj[a].append(b)
        adj[b].append(a)
        via[(a, b)] = t
        via[(b, a)] = t
    seen = set()
    comps: List[LinkComponent] = []
    for e in edges_at:
        if e in seen:
            continue
        if not adj[e]:
            seen.add(e)
            comps.append(LinkComponent("segment", tuple(sorted(e, key=natural_key))))
            continue
        # collect the component, then walk it from an end (or anywhere on a cycle)
        stack, comp = [e], []
        seen.add(e)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        ends = [x for x in comp if len(adj[x]) == 1]
        start = min(ends or comp, key=lambda x: sorted(x, key=natural_key))
        order = [start]
        prev = None
        cur = start
        while True:
            nxt = sorted((y for y in adj[cur] if y != prev), key=lambda x: sorted(x, key=natural_key))
            if not nxt or nxt[0] == start:
                break
            prev, cur = cur, nxt[0]
            order.append(cur)
        tris = []
        for i in range(len(order) - 1):
            tris.append(tuple(sorted(via[(order[i], order[i + 1])], key=natural_key)))
        if ends:
            comps.append(LinkComponent("corner", tuple(tris)))
        else:
            tris.append(tuple(sorted(via[(order[-1], order[0])], key=natural_key)))
            comps.append(LinkComponent("cone", tuple(tris)))
    regular = len(comps) == 1 and comps[0].kind in ("cone", "corner")
    return comps, regular


# ---------------------------------------------------------------------------
# topological data structure
# ---------------------------------------------------------------------------

def _min_rotation(seq: Sequence[str]) -> Tuple[str, ...]:
    if not seq:
        return ()
    rots = [tuple(seq[i:]) + tuple(seq[:i]) for i in range(len(seq))]
    return min(rots, key=lambda r: [natural_key(x) for x in r])


def _key(seq) -> list:
    return [natural_key(x) for x in seq]


@dataclass(frozen=True)
class SurfaceComponent:
    orientable: bool
    genus: int
    interior_marks: Tuple[str, ...] = ()
    boundaries: Tuple[Tuple[str, ...], ...] = ()

    def __post_init__(self):
        if self.genus < 0:
            raise StructuralError("negative genus")
        if self.orientable and self.genus % 2:
            raise StructuralError("orientable surface with odd Euler genus")
        if not self.orientable and self.genus < 1:
            raise StructuralError("non-orientable surface with genus 0")

    def normalized(self) -> "SurfaceComponent":
        marks = tuple(sorted(self.interior_marks, key=natural_key))
        if self.orientable:
            options = []
            for rev in (False, True):
                bs = [_min_rotation(tuple(reversed(b)) if rev else b) for b in self.boundaries]
                bs.sort(key=lambda b: (len(b), _key(b)))
                options.append(tuple(bs))
            bnd = min(options, key=lambda bs: [(len(b), _key(b)) for b in bs])
        else:
            bs = [min(_min_rotation(b), _min_rotation(tuple(reversed(b))), key=_key) for b in self.boundaries]
            bs.sort(key=lambda b: (len(b), _key(b)))
            bnd = tuple(bs)
        return SurfaceComponent(self.orientable, self.genus, marks, bnd)

    @property
    def n_boundaries(self) -> int:
        return len(self.boundaries)

    def mark_occurrences(self) -> int:
        return len(self.interior_marks) + sum(len(b) for b in self.boundaries)

    def euler_characteristic(self) -> int:
        return 2 - self.genus - len(self.boundaries)

    def describe(self) -> str:
        if self.orientable:
            name = "sphere" if self.genus == 0 else f"orientable genus {self.genus // 2}"
        else:
            name = f"non-orientable genus {self.genus}"
        return f"{name}, {len(self.boundaries)} boundaries"

    def to_json(self) -> dict:
        return {
            "orientable": self.orientable,
            "genus": self.genus,
            "interior_marks": list(self.interior_marks),
            "boundaries": [list(b) for b in self.boundaries],
        }


def _comp_key(s: SurfaceComponent):
    return (not s.orientable, s.genus, len(s.boundaries), _key(s.interior_marks), [(len(b), _key(b)) for b in s.boundaries])


@dataclass(frozen=True)
class TopoComplex:
    components: Tuple[SurfaceComponent, ...] = ()
    segments: Tuple[Tuple[str, str], ...] = ()

    def normalized(self) -> "TopoComplex":
        comps = sorted((c.normalized() for c in self.components), key=_comp_key)
        segs = sorted((tuple(sorted(s, key=natural_key)) for s in self.segments), key=_key)
        return TopoComplex(tuple(comps), tuple(segs))

    def singular_points(self) -> Dict[str, List[Tuple]]:
        """Back-references: singular id -> occurrences.

        An occurrence is ``("interior", comp)``, ``("boundary", comp, b, pos)``
        or ``("end", seg, side)``.
        """
        occ: Dict[str, List[Tuple]] = {}
        for ci, comp in enumerate(self.components):
            for m in comp.interior_marks:
                occ.setdefault(m, []).append(("interior", ci))
            for bi, b in enumerate(comp.boundaries):
                for pos, m in enumerate(b):
                    occ.setdefault(m, []).append(("boundary", ci, bi, pos))
        for si, (a, b) in enumerate(self.segments):
            occ.setdefault(a, []).append(("end", si, 0))
            occ.setdefault(b, []).append(("end", si, 1))
        return dict(sorted(occ.items(), key=lambda kv: natural_key(kv[0])))

    def validate(self) -> List[str]:
        problems = []
        for ci, comp in enumerate(self.components):
            if comp.orientable and comp.genus % 2:
                problems.append(f"component {ci}: orientable with odd genus")
        for sid, occs in self.singular_points().items():
            for o in occs:
                if o[0] == "end":
                    if self.segments[o[1]][o[2]] != sid:
                        problems.append(f"segment back-reference mismatch at {sid}")
        if not self.components and not self.segments:
            pass
        return problems

    @property
    def is_empty(self) -> bool:
        return not self.components and not self.segments

    def to_json(self) -> dict:
        return {
            "components": [c.to_json() for c in self.components],
            "segments": [list(s) for s in self.segments],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":")) + "\n"


def parse_tpc(text: str) -> TopoComplex:
    try:
        data = json.loads(text)
        comps = []
        for c in data.get("components", []):
            comps.append(SurfaceComponent(
                bool(c["orientable"]), int(c["genus"]),
                tuple(str(x) for x in c.get("interior_marks", [])),
                tuple(tuple(str(x) for x in b) for b in c.get("boundaries", [])),
            ))
        segs = tuple((str(a), str(b)) for a, b in data.get("segments", []))
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"bad topological complex: {exc}") from exc
    return TopoComplex(tuple(comps), segs)


def size(t: TopoComplex) -> int:
    # occurrences include segment endpoints, so a lone segment has size 3
    return (len(t.segments) + len(t.components) + sum(c.genus for c in t.components)
            + sum(len(c.boundaries) for c in t.components)
            + sum(c.mark_occurrences() for c in t.components) + 2 * len(t.segments))


def to_topological(c: SimplicialComplex2) -> TopoComplex:
    if detect_3book(c):
        raise StructuralError("complex contains a 3-book")
    iso = c.isolated_vertices()
    if iso:
        raise StructuralError(f"isolated vertices {iso}; preprocess first")
    # occurrence of vertex p in triangle t (or edge for segments)
    occ_of: Dict[Tuple[str, FrozenSet[str]], str] = {}
    singular: Dict[str, List[LinkComponent]] = {}
    kinds: Dict[str, str] = {}
    for p in sorted(c.vertices, key=natural_key):
        comps, regular = link_components(c, p)
        for k, lc in enumerate(comps):
            name = p if regular else f"{p}#{k}"
            kinds[name] = lc.kind
            if lc.kind == "segment":
                occ_of[(p, frozenset(lc.members))] = name
            else:
                for t in lc.members:
                    occ_of[(p, frozenset(t))] = name
        if not regular:
            singular[p] = comps
    # detached surface triangles
    dtri = []
    for t in sorted(c.triangles, key=lambda t: _key(sorted(t, key=natural_key))):
        dtri.append(tuple(occ_of[(p, t)] for p in sorted(t, key=natural_key)))
    # components via shared edges
    edge_tris: Dict[FrozenSet[str], List[int]] = {}
    for i, t in enumerate(dtri):
        for a, b in combinations(t, 2):
            edge_tris.setdefault(frozenset((a, b)), []).append(i)
    parent = list(range(len(dtri)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for ts in edge_tris.values():
        for j in ts[1:]:
            parent[find(j)] = find(ts[0])
    groups: Dict[int, List[int]] = {}
    for i in range(len(dtri)):
        groups.setdefault(find(i), []).append(i)

    def origin(name):
        return name.split("#")[0]

    components = []
    for idxs in groups.values():
        tris = [dtri[i] for i in idxs]
        verts = {v for t in tris for v in t}
        edges = {frozenset(e) for t in tris for e in combinations(t, 2)}
        # orientation propagation: orient each triangle as a cyclic triple
        orient: Dict[int, Tuple[str, str, str]] = {}
        orientable = True
        local_edge: Dict[FrozenSet[str], List[int]] = {}
        for i in idxs:
            for a, b in combinations(dtri[i], 2):
                local_edge.setdefault(frozenset((a, b)), []).append(i)
        for seed in idxs:
            if seed in orient:
                continue
            orient[seed] = dtri[seed]
            stack = [seed]
            while stack:
                i = stack.pop()
                a, b, cc = orient[i]
                for x, y in ((a, b), (b, cc), (cc, a)):
                    for j in local_edge[frozenset((x, y))]:
                        if j == i:
                            continue
                        # neighbour must traverse the shared edge as y -> x
                        t = dtri[j]
                        z = [v for v in t if v not in (x, y)][0]
                        want = (y, x, z)
                        if j not in orient:
                            orient[j] = want
                            stack.append(j)
                        else:
                            o = orient[j]
                            rots = {o, (o[1], o[2], o[0]), (o[2], o[0], o[1])}
                            if want not in rots:
                                orientable = False
        # boundary edges: in exactly one triangle; direct them along the orientation
        bnext: Dict[str, List[str]] = {}
        for e, ts in local_edge.items():
            if len(ts) == 1:
                a, b, cc = orient[ts[0]]
                for x, y in ((a, b), (b, cc), (cc, a)):
                    if frozenset((x, y)) == e:
                        bnext.setdefault(x, []).append(y)
        bedges = [e for e, ts in local_edge.items() if len(ts) == 1]
        # boundary cycles (every detached vertex is regular, so these are disjoint cycles)
        badj: Dict[str, List[str]] = {}
        for e in bedges:
            a, b = sorted(e)
            badj.setdefault(a, []).append(b)
            badj.setdefault(b, []).append(a)
        seen_b = set()
        boundaries = []
        for start in sorted(badj, key=natural_key):
            if start in seen_b:
                continue
            cyc = [start]
            seen_b.add(start)
            prev, cur = None, start
            if orientable and start in bnext:
                nxt = bnext[start][0]
            else:
                nxt = sorted(badj[start], key=natural_key)[0]
            while nxt != start:
                cyc.append(nxt)
                seen_b.add(nxt)
                prev, cur = cur, nxt
                cand = [y for y in badj[cur] if y != prev]
                nxt = cand[0] if cand else start
            boundaries.append(tuple(origin(v) for v in cyc if origin(v) in singular))
        n_b = len(boundaries)
        chi = len(verts) - len(edges) + len(tris)
        genus = 2 - n_b - chi
        interior = []
        for v in verts:
            if origin(v) in singular and kinds[v] == "cone":
                interior.append(origin(v))
        components.append(SurfaceComponent(orientable, genus, tuple(interior), tuple(boundaries)))
    segments = []
    for e in c.edges:
        if not any(e <= t for t in c.triangles):
            a, b = sorted(e, key=natural_key)
            segments.append((a, b))
    return TopoComplex(tuple(components), tuple(segments)).normalized()


# ---------------------------------------------------------------------------
# homeomorphism
# ---------------------------------------------------------------------------

def dissolve_segment_points(t: TopoComplex) -> TopoComplex:
    """Remove singular points that join exactly two segment ends and touch no surface."""
    segs = [list(s) for s in t.segments]
    surface_marks = set()
    for comp in t.components:
        surface_marks.update(comp.interior_marks)
        for b in comp.boundaries:
            surface_marks.update(b)
    changed = True
    while changed:
        changed = False
        count: Dict[str, int] = {}
        for a, b in segs:
            count[a] = count.get(a, 0) + 1
            count[b] = count.get(b, 0) + 1
        for p in sorted(count, key=natural_key):
            if count[p] != 2 or p in surface_marks:
                continue
            idx = [i for i, s in enumerate(segs) if p in s]
            if len(idx) == 1:
                # a closed loop through p alone: keep it, it is a circle
                continue
            i, j = idx
            other_i = segs[i][1] if segs[i][0] == p else segs[i][0]
            other_j = segs[j][1] if segs[j][0] == p else segs[j][0]
            segs = [s for k, s in enumerate(segs) if k not in (i, j)] + [[other_i, other_j]]
            changed = True
            break
    return TopoComplex(t.components, tuple(tuple(s) for s in segs))


def drop_trivial_marks(t: TopoComplex) -> TopoComplex:
    """Forget surface marks whose singular point has a single occurrence.

    Such a point is topologically regular; it matters only as a point that
    proper embeddings must cover.
    """
    occ = t.singular_points()
    trivial = {p for p, o in occ.items() if len(o) == 1 and o[0][0] != "end"}
    comps = []
    for c in t.components:
        comps.append(SurfaceComponent(
            c.orientable, c.genus,
            tuple(m for m in c.interior_marks if m not in trivial),
            tuple(tuple(m for m in b if m not in trivial) for b in c.boundaries),
        ))
    return TopoComplex(tuple(comps), t.segments)


def _structure_graph(t: TopoComplex):
    """Vertex-coloured graph whose isomorphisms are the structure isomorphisms."""
    nodes: List[Tuple] = []  # colour keys
    edges: List[Tuple[int, int]] = []

    def node(color) -> int:
        nodes.append(color)
        return len(nodes) - 1

    sing: Dict[str, int] = {}
    for p in t.singular_points():
        sing[p] = node(("sing",))
    for comp in t.components:
        empty = sum(1 for b in comp.boundaries if not b)
        cn = node(("comp", comp.orientable, comp.genus, empty))
        for m in comp.interior_marks:
            o = node(("interior",))
            edges += [(cn, o), (o, sing[m])]
        if comp.orientable:
            o_pair = (node(("orient",)), node(("orient",)))
            edges += [(cn, o_pair[0]), (cn, o_pair[1])]
        for b in comp.boundaries:
            if not b:
                continue
            bn = node(("bnd", len(b)))
            edges.append((cn, bn))
            if not comp.orientable:
                o_pair = (node(("orient",)), node(("orient",)))
                edges += [(bn, o_pair[0]), (bn, o_pair[1])]
            occ = []
            for m in b:
                o = node(("bocc",))
                edges += [(bn, o), (o, sing[m])]
                occ.append(o)
            r = len(occ)
            for i in range(r):
                x, y = occ[i], occ[(i + 1) % r]
                step = node(("step",))
                tail = node(("half",))
                head = node(("half",))
                edges += [(step, bn), (tail, step), (head, step), (tail, x), (head, y),
                          (tail, o_pair[0]), (head, o_pair[1])]
    for a, b in t.segments:
        s = node(("seg",))
        ea, eb = node(("end",)), node(("end",))
        edges += [(s, ea), (s, eb), (ea, sing[a]), (eb, sing[b])]
    return nodes, edges


def _certificate(nodes, edges) -> bytes:
    n = len(nodes)
    if n == 0:
        return b"empty"
    keys = sorted(set(nodes), key=repr)
    classes = [set(i for i, c in enumerate(nodes) if c == k) for k in keys]
    adj: Dict[int, List[int]] = {i: [] for i in range(n)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    g = pynauty.Graph(n, directed=False, adjacency_dict=adj, vertex_coloring=classes)
    head = repr([(k, len(c)) for k, c in zip(keys, classes)]).encode()
    return head + b"|" + pynauty.certificate(g)


def structure_certificate(t: TopoComplex) -> bytes:
    return _certificate(*_structure_graph(t))


def are_homeomorphic(t1: TopoComplex, t2: TopoComplex, keep_marks: bool = False, cap: int = 5000) -> bool:
    """Homeomorphism test via isomorphism of the reduced data structures.

    With ``keep_marks`` every singular point is kept as structure, which is
    the right notion when marks must be covered by graph vertices.
    """
    a, b = dissolve_segment_points(t1), dissolve_segment_points(t2)
    if not keep_marks:
        a, b = drop_trivial_marks(a), drop_trivial_marks(b)
    na, nb = _structure_graph(a), _structure_graph(b)
    if max(len(na[0]), len(nb[0])) > cap:
        raise CapError("homeomorphism test above configured size")
    return _certificate(*na) == _certificate(*nb)


def homeo_key(t: TopoComplex, keep_marks: bool = True) -> bytes:
    a = dissolve_segment_points(t)
    if not keep_marks:
        a = drop_trivial_marks(a)
    return structure_certificate(a)


# ---------------------------------------------------------------------------
# over-surface
# ---------------------------------------------------------------------------

def oversurface(t: TopoComplex) -> List[SurfaceComponent]:
    """Surface obtained by thickening segments and smoothing singular points.

    Segments become cylinders, each singular point with k occurrences becomes
    a sphere with k holes, cones are glued along circles and corners along
    arcs. Gluings are chosen orientation-consistently whenever every glued
    piece is orientable.
    """
    occ = t.singular_points()
    # pieces: ("c", i) components, ("s", i) segments, ("p", id) singular spheres
    parent: Dict[Tuple, Tuple] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    chi: Dict[Tuple, int] = {}
    bnd: Dict[Tuple, int] = {}
    orientable: Dict[Tuple, bool] = {}
    for i, comp in enumerate(t.components):
        key = ("c", i)
        find(key)
        chi[key] = comp.euler_characteristic() - len(comp.interior_marks)
        bnd[key] = len(comp.boundaries)
        orientable[key] = comp.orientable
    for i in range(len(t.segments)):
        key = ("s", i)
        find(key)
        chi[key] = 0
        bnd[key] = 0
        orientable[key] = True
    for p, os_ in occ.items():
        key = ("p", p)
        find(key)
        chi[key] = 2 - len(os_)
        bnd[key] = 0
        orientable[key] = True
        for o in os_:
            if o[0] == "interior":
                union(key, ("c", o[1]))
            elif o[0] == "boundary":
                union(key, ("c", o[1]))
                chi[key] -= 1  # arc gluing
            else:
                union(key, ("s", o[1]))
    groups: Dict[Tuple, List[Tuple]] = {}
    for k in list(parent):
        groups.setdefault(find(k), []).append(k)
    out = []
    for members in groups.values():
        x = sum(chi[m] for m in members)
        b = sum(bnd[m] for m in members)
        ori = all(orientable[m] for m in members)
        g = 2 - x - b
        out.append(SurfaceComponent(ori, g, (), tuple(() for _ in range(b))))
    out.sort(key=_comp_key)
    return out
