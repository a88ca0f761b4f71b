"""Brute-force ground truth for small instances.

Nothing here goes through the dynamic program or the candidate reduction.
Closed surfaces are handled with signed rotation systems; everything else
with a direct search that draws the graph edge by edge on the complex
through the map kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import permutations, product
from math import factorial
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from .complex_core import SurfaceComponent, TopoComplex, drop_trivial_marks
from .graph_core import CapError, Graph, dissolve_degree_two
from .maps.canon import canonical_form
from .maps.kernel import (CombinatorialMap, add_isolated_vertex, base_map, cover_all, fill_gap,
                          insert_edge_all, subdivide_gap)

DEFAULT_GENUS_CAP = 2_000_000
DEFAULT_SEARCH_CAP = 200_000


# ---------------------------------------------------------------------------
# rotation systems
# ---------------------------------------------------------------------------

Dart = Tuple[str, int]  # (edge id, end)


@dataclass(frozen=True)
class RotationSystem:
    rotation: Dict[str, Tuple[Dart, ...]]
    sign: Dict[str, int]

    def face_count(self, g: Graph) -> int:
        ends = {(e, 0): u for e, u, v in g.edges}
        ends.update({(e, 1): v for e, u, v in g.edges})
        succ, pred = {}, {}
        for v, darts in self.rotation.items():
            for j, d in enumerate(darts):
                succ[d] = darts[(j + 1) % len(darts)]
                pred[d] = darts[j - 1]
        seen = set()
        orbits = 0
        for d0 in ends:
            for o0 in (1, -1):
                if (d0, o0) in seen:
                    continue
                orbits += 1
                d, o = d0, o0
                while (d, o) not in seen:
                    seen.add((d, o))
                    other = (d[0], 1 - d[1])
                    o *= self.sign[d[0]]
                    d = succ[other] if o == 1 else pred[other]
        # every face is traced once in each direction
        return orbits // 2

    def is_orientable(self, g: Graph) -> bool:
        colour = {}
        adj: Dict[str, List[Tuple[str, int]]] = {v: [] for v in g.vertices}
        for e, u, v in g.edges:
            adj[u].append((v, self.sign[e]))
            adj[v].append((u, self.sign[e]))
        for s in g.vertices:
            if s in colour:
                continue
            colour[s] = 1
            stack = [s]
            while stack:
                x = stack.pop()
                for y, sg in adj[x]:
                    want = colour[x] * sg
                    if y not in colour:
                        colour[y] = want
                        stack.append(y)
                    elif colour[y] != want:
                        return False
        return True


def _spanning_tree(g: Graph) -> set:
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = set()
    for e, u, v in g.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            tree.add(e)
    return tree


def _rotations(g: Graph) -> Iterator[Dict[str, Tuple[Dart, ...]]]:
    darts: Dict[str, List[Dart]] = {v: [] for v in g.vertices}
    for e, u, v in g.edges:
        darts[u].append((e, 0))
        darts[v].append((e, 1))
    per_vertex = []
    for v in g.vertices:
        ds = darts[v]
        if len(ds) <= 2:
            per_vertex.append([tuple(ds)])
        else:
            per_vertex.append([(ds[0],) + p for p in permutations(ds[1:])])
    for combo in product(*per_vertex):
        yield dict(zip(g.vertices, combo))


def _girth(g: Graph) -> int:
    seen_pairs = set()
    for _, u, v in g.edges:
        if u == v:
            return 1
        key = frozenset((u, v))
        if key in seen_pairs:
            return 2
        seen_pairs.add(key)
    cycles = nx.minimum_cycle_basis(nx.Graph(g.to_networkx()))
    return min((len(c) for c in cycles), default=0)


def _fast_faces(n_darts: int, succ: List[int], pred: List[int], sign: List[int]) -> int:
    """Face count by tracing (dart, direction) states; darts 2e and 2e+1 are the two ends of edge e."""
    seen = bytearray(2 * n_darts)
    orbits = 0
    for start in range(2 * n_darts):
        if seen[start]:
            continue
        orbits += 1
        x = start
        while not seen[x]:
            seen[x] = 1
            d, fwd = x >> 1, x & 1
            other = d ^ 1
            if sign[d >> 1] < 0:
                fwd ^= 1
            x = (succ[other] << 1 | 1) if fwd else (pred[other] << 1)
    return orbits // 2


def _connected_genera(g: Graph, cap: int) -> Tuple[int, int]:
    """(least Euler genus of an orientable embedding, least of a non-orientable one) for a connected graph."""
    V, E = g.n_vertices, g.n_edges
    if E == 0:
        return 0, 1
    deg = g.degrees()
    n_rot = 1
    for v in g.vertices:
        n_rot *= factorial(max(deg[v] - 1, 0))
    tree = _spanning_tree(g)
    eidx = {e: j for j, (e, _, _) in enumerate(g.edges)}
    free = [eidx[e] for e, _, _ in g.edges if e not in tree]
    if n_rot * (1 << len(free)) > cap:
        raise CapError(f"rotation-system search needs {n_rot * (1 << len(free))} systems, cap {cap}")
    # Euler's formula with faces of length at least the girth bounds the search from below
    girth = _girth(g)
    faces_max = (2 * E) // girth if girth else E + 1
    low = max(0, 2 - V + E - faces_max)
    low_o = low + (low % 2)
    low_n = max(1, low)
    rots = []
    for rot in _rotations(g):
        succ, pred = [0] * (2 * E), [0] * (2 * E)
        for darts in rot.values():
            ids = [2 * eidx[e] + end for e, end in darts]
            for j, d in enumerate(ids):
                succ[d] = ids[(j + 1) % len(ids)]
                pred[d] = ids[j - 1]
        rots.append((succ, pred))
    best_o = None
    plus = [1] * E
    for succ, pred in rots:
        eg = 2 - V + E - _fast_faces(2 * E, succ, pred, plus)
        if best_o is None or eg < best_o:
            best_o = eg
            if eg <= low_o:
                break
    best_n = best_o + 1
    if best_n > low_n:
        done = False
        for succ, pred in rots:
            for bits in range(1, 1 << len(free)):
                sign = [1] * E
                for j, e in enumerate(free):
                    if bits >> j & 1:
                        sign[e] = -1
                eg = 2 - V + E - _fast_faces(2 * E, succ, pred, sign)
                if eg < best_n:
                    best_n = eg
                    if eg <= low_n:
                        done = True
                        break
            if done:
                break
    return best_o, best_n


def _genera(g: Graph, cap: int) -> List[Tuple[int, int]]:
    return [_connected_genera(comp, cap) for comp in g.components() if comp.n_edges]


def min_euler_genus(g: Graph, cap: int = DEFAULT_GENUS_CAP) -> int:
    """Least Euler genus of a surface the graph embeds in, by exhaustive search."""
    gd = dissolve_degree_two(g)
    return sum(min(o, n) for o, n in _genera(gd, cap))


def _fits(parts: Sequence[Tuple[int, int]], s: SurfaceComponent) -> bool:
    if s.orientable:
        return sum(o for o, _ in parts) <= s.genus
    if not parts:
        return True
    need = sum(min(o, n) for o, n in parts)
    if all(n > o for o, n in parts):
        need += 1
    return need <= s.genus


def _surfaces_embeddable(genera: List[Tuple[int, int]], surfaces: Sequence[SurfaceComponent]) -> bool:
    if not genera:
        return True
    if not surfaces:
        return False
    for assign in product(range(len(surfaces)), repeat=len(genera)):
        if all(_fits([genera[j] for j in range(len(genera)) if assign[j] == si], s)
               for si, s in enumerate(surfaces)):
            return True
    return False


def embeds_in_surfaces(g: Graph, surfaces: Sequence[SurfaceComponent], cap: int = DEFAULT_GENUS_CAP) -> bool:
    """Whether ``g`` embeds in the disjoint union of ``surfaces`` (boundaries ignored)."""
    closed = [SurfaceComponent(s.orientable, s.genus) for s in surfaces]
    return _surfaces_embeddable(_genera(_core(g), cap), closed)


# ---------------------------------------------------------------------------
# direct search on the complex
# ---------------------------------------------------------------------------

class _Budget:
    def __init__(self, cap: int):
        self.cap, self.used = cap, 0

    def tick(self):
        self.used += 1
        if self.used > self.cap:
            raise CapError(f"embedding search above {self.cap} steps")


def _groups(m: CombinatorialMap) -> Dict[str, Tuple[int, ...]]:
    out: Dict[str, List[int]] = {}
    for i, r in enumerate(m.vertices):
        if r.point is not None:
            out.setdefault(r.point, []).append(i)
    return {p: tuple(vs) for p, vs in out.items()}


@dataclass
class _Rules:
    face_ok: Callable
    gap_ok: Callable
    through_points: bool  # edges may pass through unused singular points
    free_points: Tuple[str, ...]  # points a graph vertex may sit on


def _hops(m: CombinatorialMap, X, Y, name: str, rules: _Rules, budget: _Budget) -> Iterator[CombinatorialMap]:
    i = m.n_edges
    for fi, face in enumerate(m.faces):
        if face.hole or not rules.face_ok(face):
            continue
        budget.tick()
        for m2 in insert_edge_all(m, fi, name):
            if m2.flag_vertex[4 * i] in X and m2.flag_vertex[4 * i + 2] in Y:
                yield m2
    for si, tr in enumerate(m.segments):
        for j in range(1, len(tr), 2):
            if tr[j][0] == "gap" and rules.gap_ok(tr[j][1]):
                a, b = tr[j - 1], tr[j + 1]
                if (a in X and b in Y) or (b in X and a in Y):
                    budget.tick()
                    yield fill_gap(m, si, j, name)


def _route(m, X, Y, eid, hop, used, rules, groups, budget):
    """Draw one graph edge from group X to group Y, maybe through unused points."""
    name = f"{eid}" if hop == 0 else f"{eid}.{hop}"
    for m2 in _hops(m, X, Y, name, rules, budget):
        yield m2, used
    if not rules.through_points:
        return
    for p in rules.free_points:
        if p in used:
            continue
        Z = groups[p]
        for m2 in _hops(m, X, Z, name, rules, budget):
            yield from _route(m2, Z, Y, eid, hop + 1, used | {p}, rules, groups, budget)


def _placements(m, g_vertex, rules, used, label) -> Iterator[Tuple[CombinatorialMap, Tuple[int, ...], frozenset]]:
    groups = _groups(m)
    for p in rules.free_points:
        if p not in used:
            yield m, groups[p], used | {p}
    for fi, face in enumerate(m.faces):
        if not face.hole and rules.face_ok(face):
            m2 = add_isolated_vertex(m, fi, label=label, name=g_vertex)
            yield m2, (len(m2.vertices) - 1,), used
    for si, tr in enumerate(m.segments):
        for j in range(1, len(tr), 2):
            if tr[j][0] == "gap" and rules.gap_ok(tr[j][1]):
                m2 = subdivide_gap(m, si, j, label=label, name=g_vertex)
                yield m2, (len(m2.vertices) - 1,), used


def _edge_order(g: Graph) -> List[Tuple[str, str, str]]:
    """Edges in an order that keeps the drawn part connected where possible."""
    left = list(g.edges)
    out, seen = [], set()
    while left:
        pick = next((e for e in left if e[1] in seen or e[2] in seen), left[0])
        left.remove(pick)
        out.append(pick)
        seen.update(pick[1:])
    return out


def _search(m0: CombinatorialMap, g: Graph, fixed: Dict[str, Tuple[int, ...]], rules: _Rules,
            budget: _Budget, used0: frozenset = frozenset()) -> Optional[CombinatorialMap]:
    verts = [v for v in g.vertices if v not in fixed]
    edges = _edge_order(g)
    groups = _groups(m0)

    index = {v: j + 1 for j, v in enumerate(g.vertices)}
    dead = set()

    def key(m, where, used, k):
        # vertex tags make the canonical form see which graph vertex sits where
        tag = {}
        for v, grp in where.items():
            for i in grp:
                tag[i] = index[v]
        for p in used:
            for i in groups.get(p, ()):
                tag.setdefault(i, len(index) + 1)
        verts = tuple(replace(r, label=r.label * (len(index) + 2) + tag.get(i, 0)) for i, r in enumerate(m.vertices))
        return k, canonical_form(replace(m, vertices=verts))

    def draw(m, where, used, k):
        if k == len(edges):
            return m
        kk = key(m, where, used, k)
        if kk in dead:
            return None
        eid, u, v = edges[k]
        for m2, used2 in _route(m, where[u], where[v], eid, 0, used, rules, groups, budget):
            res = draw(m2, where, used2, k + 1)
            if res is not None:
                return res
        dead.add(kk)
        return None

    def place(m, where, used, k):
        if k == len(verts):
            return draw(m, where, used, 0)
        kk = key(m, where, used, -1 - k)
        if kk in dead:
            return None
        v = verts[k]
        for m2, grp, used2 in _placements(m, v, rules, used, label=0):
            budget.tick()
            res = place(m2, {**where, v: grp}, used2, k + 1)
            if res is not None:
                return res
        dead.add(kk)
        return None

    return place(m0, dict(fixed), used0, 0)


def _core(g: Graph) -> Graph:
    gd = dissolve_degree_two(g)
    keep = {x for _, u, v in gd.edges for x in (u, v)}
    return Graph.build(keep, gd.edges)


@dataclass
class OracleResult:
    embeddable: bool
    certificate: Optional[CombinatorialMap] = None
    method: str = ""


def brute_force_embeddable(g: Graph, t: TopoComplex, genus_cap: int = DEFAULT_GENUS_CAP,
                           search_cap: int = DEFAULT_SEARCH_CAP) -> OracleResult:
    """Ground-truth embeddability of a graph into a topological complex."""
    t = drop_trivial_marks(t)
    empty_complex = not t.components and not t.segments
    if g.n_vertices == 0:
        return OracleResult(True, None, "empty graph")
    if empty_complex:
        return OracleResult(False, None, "empty complex")
    core = _core(g)
    if core.n_edges == 0:
        return OracleResult(True, None, "isolated vertices only")
    closed = not t.segments and all(not c.interior_marks and not any(c.boundaries) for c in t.components)
    if closed:
        ok = _surfaces_embeddable(_genera(core, genus_cap), t.components)
        return OracleResult(ok, None, "rotation systems")
    m0 = cover_all(base_map(t))
    points = tuple(sorted(_groups(m0)))
    rules = _Rules(lambda f: True, lambda lab: True, True, points)
    found = _search(m0, core, {}, rules, _Budget(search_cap))
    return OracleResult(found is not None, found, "direct search")


def respects_check(galpha: Graph, pi: CombinatorialMap, vertex_label: Dict[str, int],
                   search_cap: int = DEFAULT_SEARCH_CAP) -> bool:
    """Whether ``galpha`` embeds respecting the labelled map ``pi``.

    ``vertex_label`` maps graph vertices to the vertex labels used in ``pi``.
    Labelled vertices go to their labelled vertex; every edge interior must
    sit inside a face (or segment gap) labelled 2.
    """
    by_label = {}
    for i, r in enumerate(pi.vertices):
        if r.label:
            by_label[r.label] = i
    groups = _groups(pi)
    fixed = {}
    for v, lab in vertex_label.items():
        if lab not in by_label:
            return False
        i = by_label[lab]
        p = pi.vertices[i].point
        fixed[v] = groups[p] if p is not None else (i,)
    used = frozenset(pi.vertices[by_label[lab]].point for lab in vertex_label.values()
                     if pi.vertices[by_label[lab]].point is not None)
    free = tuple(p for p in sorted(groups) if p not in used
                 and all(not pi.vertices[i].label for i in groups[p]))
    rules = _Rules(lambda f: f.label == 2, lambda lab: lab == 2, False, free)
    # graph edge ids must not clash with edge names already in the map
    taken = set(pi.edge_name) | {e[0] for e in pi.segment_edges()}
    g = Graph.build(galpha.vertices, [(f"g.{e}" if e in taken else e, u, v) for e, u, v in galpha.edges])
    return _search(pi, g, fixed, rules, _Budget(search_cap), used) is not None
