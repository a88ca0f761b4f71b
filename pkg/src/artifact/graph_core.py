"""Multigraphs, rooted branch decompositions, planarity and small-graph isomorphism.

Vertices are strings, edges are ``(edge_id, u, v)`` triples. Loops and
parallel edges are allowed everywhere. All enumerations sort vertices and
edges first so results never depend on insertion order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx


class ParseError(ValueError):
    pass


class CapError(RuntimeError):
    """A configured resource limit was exceeded (never a verdict)."""


def natural_key(s: str):
    return [(0, int(t)) if t.isdigit() else (1, t) for t in re.findall(r"\d+|\D+", str(s))]


@dataclass(frozen=True)
class Graph:
    vertices: Tuple[str, ...]
    edges: Tuple[Tuple[str, str, str], ...]

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertex")
        ids = set()
        for eid, u, v in self.edges:
            if u not in vs or v not in vs:
                raise ValueError(f"edge {eid} has undeclared endpoint")
            if eid in ids:
                raise ValueError(f"duplicate edge id {eid}")
            ids.add(eid)

    @staticmethod
    def build(vertices: Iterable[str], edges: Iterable[Tuple[str, str, str]]) -> "Graph":
        vs = sorted(set(vertices), key=natural_key)
        es = sorted(edges, key=lambda e: natural_key(e[0]))
        return Graph(tuple(vs), tuple(es))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge_map(self) -> Dict[str, Tuple[str, str]]:
        return {eid: (u, v) for eid, u, v in self.edges}

    def degree(self, v: str) -> int:
        # loops count twice
        return sum((u == v) + (w == v) for _, u, w in self.edges)

    def degrees(self) -> Dict[str, int]:
        d = {v: 0 for v in self.vertices}
        for _, u, w in self.edges:
            d[u] += 1
            d[w] += 1
        return d

    def incident(self, v: str) -> List[str]:
        return [eid for eid, a, b in self.edges if a == v or b == v]

    def components(self) -> List["Graph"]:
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for _, u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
        groups: Dict[str, List[str]] = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        out = []
        for vs in groups.values():
            s = set(vs)
            out.append(Graph.build(vs, [e for e in self.edges if e[1] in s]))
        out.sort(key=lambda g: natural_key(g.vertices[0]))
        return out

    def subgraph_edges(self, eids: Iterable[str]) -> "Graph":
        keep = set(eids)
        es = [e for e in self.edges if e[0] in keep]
        vs = {x for e in es for x in e[1:]}
        return Graph.build(vs, es)

    def to_text(self) -> str:
        lines = []
        used = {x for e in self.edges for x in e[1:]}
        for v in self.vertices:
            if v not in used:
                lines.append(f"node {v}")
        for _, u, v in self.edges:
            lines.append(f"{u} {v}")
        return "\n".join(lines) + "\n"

    def to_networkx(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(self.vertices)
        for eid, u, v in self.edges:
            g.add_edge(u, v, key=eid)
        return g


_NAME = re.compile(r"^[A-Za-z0-9]+$")


def parse_graph(text: str) -> Graph:
    vertices: List[str] = []
    seen = set()
    edges = []

    def add(v):
        if v not in seen:
            seen.add(v)
            vertices.append(v)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "node" and len(toks) == 2 and _NAME.match(toks[1]):
            add(toks[1])
        elif len(toks) == 2 and all(_NAME.match(t) for t in toks) and toks[0] != "node":
            add(toks[0])
            add(toks[1])
            edges.append((f"e{len(edges)}", toks[0], toks[1]))
        else:
            raise ParseError(f"line {lineno}: cannot parse {raw!r}")
    return Graph.build(vertices, edges)


# ---------------------------------------------------------------------------
# subdivision and dissolution
# ---------------------------------------------------------------------------

def subdivide_edges(g: Graph, times: int) -> Graph:
    if times < 0:
        raise ValueError("times must be nonnegative")
    if times == 0:
        return g
    vs = list(g.vertices)
    es = []
    for eid, u, v in g.edges:
        chain = [u] + [f"{eid}s{k}" for k in range(1, times + 1)] + [v]
        vs.extend(chain[1:-1])
        for k in range(len(chain) - 1):
            es.append((f"{eid}p{k}", chain[k], chain[k + 1]))
    return Graph.build(vs, es)


def series_paths(g: Graph):
    """Maximal paths through degree-2 vertices.

    Returns ``(h, paths)`` where ``h`` is the dissolved graph and
    ``paths[eid]`` is the ordered list of ``(edge id, from, to)`` steps of
    ``g`` that the edge ``eid`` of ``h`` replaces. A cycle made only of
    degree-2 vertices keeps its smallest vertex and becomes a loop.
    """
    deg = g.degrees()
    inc: Dict[str, List[str]] = {v: [] for v in g.vertices}
    emap = g.edge_map()
    for eid, u, v in g.edges:
        inc[u].append(eid)
        if v != u:
            inc[v].append(eid)
    inner = {v for v in g.vertices if deg[v] == 2 and len(inc[v]) == 2}
    used = set()
    h_edges = []
    paths: Dict[str, List[Tuple[str, str, str]]] = {}

    def walk(start, eid):
        steps = []
        cur = start
        while True:
            a, b = emap[eid]
            nxt = b if a == cur else a
            steps.append((eid, cur, nxt))
            used.add(eid)
            if nxt not in inner or nxt == start:
                return steps, nxt
            e1, e2 = inc[nxt]
            eid = e2 if e1 == eid else e1
            cur = nxt

    for v in g.vertices:
        if v in inner:
            continue
        for eid in inc[v]:
            if eid in used:
                continue
            steps, end = walk(v, eid)
            hid = steps[0][0] if len(steps) == 1 else min((s[0] for s in steps), key=natural_key)
            h_edges.append((hid, v, end))
            paths[hid] = steps
    # pure cycles of degree-2 vertices
    for v in sorted(inner, key=natural_key):
        if any(e not in used for e in inc[v]):
            steps, end = walk(v, inc[v][0])
            hid = min((s[0] for s in steps), key=natural_key)
            h_edges.append((hid, v, v))
            paths[hid] = steps
    kept = [v for v in g.vertices if v not in inner]
    for hid, a, b in h_edges:
        kept.extend([a, b])
    return Graph.build(set(kept), h_edges), paths


def dissolve_degree_two(g: Graph) -> Graph:
    return series_paths(g)[0]


# ---------------------------------------------------------------------------
# branch decompositions
# ---------------------------------------------------------------------------

@dataclass
class BranchDecomposition:
    """Rooted branch decomposition.

    Node 0 is the root leaf. ``children[x]`` lists the two children of an
    internal node; ``leaf_edge[x]`` is the edge of a non-root leaf. Every
    non-root node ``x`` names the arc between ``x`` and its parent.
    """

    top: int
    children: Dict[int, Tuple[int, int]]
    leaf_edge: Dict[int, str]
    _below: Dict[int, frozenset] = field(default_factory=dict, repr=False, compare=False)

    ROOT = 0

    def arcs(self) -> List[int]:
        out = []
        stack = [self.top]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(self.children.get(x, ()))
        return sorted(out)

    def postorder(self) -> List[int]:
        out = []
        stack = [(self.top, False)]
        while stack:
            x, done = stack.pop()
            if done or x in self.leaf_edge:
                out.append(x)
            else:
                stack.append((x, True))
                a, b = self.children[x]
                stack.append((b, False))
                stack.append((a, False))
        return out

    def parent_map(self) -> Dict[int, int]:
        par = {self.top: self.ROOT}
        for x, (a, b) in self.children.items():
            par[a] = x
            par[b] = x
        return par

    def edges_below(self, arc: int) -> frozenset:
        if arc in self._below:
            return self._below[arc]
        if arc in self.leaf_edge:
            res = frozenset([self.leaf_edge[arc]])
        elif arc in self.children:
            a, b = self.children[arc]
            res = self.edges_below(a) | self.edges_below(b)
        else:
            raise KeyError(f"unknown arc {arc}")
        self._below[arc] = res
        return res

    def validate(self, g: Graph) -> List[str]:
        problems = []
        arcs = self.arcs()
        for x in arcs:
            if x not in self.leaf_edge and x not in self.children:
                problems.append(f"node {x} is neither leaf nor internal")
            if x in self.leaf_edge and x in self.children:
                problems.append(f"node {x} is both leaf and internal")
        labels = sorted(self.leaf_edge[x] for x in arcs if x in self.leaf_edge)
        if labels != sorted(e[0] for e in g.edges):
            problems.append("leaf labels are not a bijection with the edges")
        return problems

    def to_json(self) -> dict:
        return {
            "top": self.top,
            "children": {str(k): list(v) for k, v in sorted(self.children.items())},
            "leaf_edge": {str(k): v for k, v in sorted(self.leaf_edge.items())},
        }


def _mid(g_inc: Dict[str, Dict[str, int]], side: frozenset, all_deg: Dict[str, int]) -> frozenset:
    # vertices with at least one incident edge in side and one outside
    out = []
    for v, per in g_inc.items():
        inside = sum(c for e, c in per.items() if e in side)
        if 0 < inside < all_deg[v]:
            out.append(v)
    return frozenset(out)


def _incidence(g: Graph):
    inc: Dict[str, Dict[str, int]] = {v: {} for v in g.vertices}
    for eid, u, v in g.edges:
        inc[u][eid] = inc[u].get(eid, 0) + 1
        inc[v][eid] = inc[v].get(eid, 0) + 1
    deg = {v: sum(per.values()) for v, per in inc.items()}
    return inc, deg


def middle_set(bd: BranchDecomposition, g: Graph, arc: int) -> frozenset:
    """Vertices with an incident edge on each side of the arc.

    A loop at ``v`` contributes to the side holding it, so ``v`` is in the
    middle set only if it also has an edge on the other side.
    """
    side = bd.edges_below(arc)
    inc, deg = _incidence(g)
    return _mid(inc, side, deg)


def width(bd: BranchDecomposition, g: Graph) -> int:
    inc, deg = _incidence(g)
    return max((len(_mid(inc, bd.edges_below(a), deg)) for a in bd.arcs()), default=0)


def _balanced(inc, side: frozenset, mid: frozenset) -> int:
    # mid vertices with at least two edge ends on both sides
    n = 0
    for v in mid:
        inside = sum(c for e, c in inc[v].items() if e in side)
        outside = sum(c for e, c in inc[v].items() if e not in side)
        if inside >= 2 and outside >= 2:
            n += 1
    return n


EXACT_EDGE_CAP = 12


def _exact_decomposition_core(g: Graph, cap: int) -> Tuple[Dict, Dict, int]:
    """Subset dynamic program over rooted binary trees.

    The cost of an arc is (|middle set|, number of middle vertices with two
    or more edge ends on each side); the tree minimizes the maximum of the
    first component, then the sum of the second.
    """
    m = g.n_edges
    if m > cap:
        raise CapError(f"exact branch decomposition refused: {m} edges > cap {cap}")
    eids = [e[0] for e in g.edges]
    inc, deg = _incidence(g)
    full = (1 << m) - 1

    @lru_cache(maxsize=None)
    def arc_cost(mask: int):
        side = frozenset(eids[i] for i in range(m) if mask >> i & 1)
        mid = _mid(inc, side, deg)
        return len(mid), _balanced(inc, side, mid)

    best: Dict[int, Tuple[int, int]] = {}
    choice: Dict[int, int] = {}
    for i in range(m):
        best[1 << i] = (0, 0)
    masks = sorted(range(1, full + 1), key=lambda x: bin(x).count("1"))
    for mask in masks:
        if mask in best:
            continue
        low = mask & -mask
        rest = mask ^ low
        sub = rest
        top = None
        # enumerate A containing the lowest bit, A != mask
        while True:
            a = sub | low
            if a != mask:
                b = mask ^ a
                ca, cb = arc_cost(a), arc_cost(b)
                wa, sa = best[a]
                wb, sb = best[b]
                cand = (max(ca[0], cb[0], wa, wb), sa + sb + ca[1] + cb[1])
                if top is None or cand < top:
                    top = cand
                    choice[mask] = a
            if sub == 0:
                break
            sub = (sub - 1) & rest
        best[mask] = top
    return best, choice, full


def _tree_from_choice(g: Graph, choice: Dict[int, int], full: int) -> BranchDecomposition:
    eids = [e[0] for e in g.edges]
    children: Dict[int, Tuple[int, int]] = {}
    leaf_edge: Dict[int, str] = {}
    counter = [0]

    def build(mask):
        counter[0] += 1
        node = counter[0]
        if mask & (mask - 1) == 0:
            leaf_edge[node] = eids[mask.bit_length() - 1]
            return node
        a = choice[mask]
        children[node] = (build(a), build(mask ^ a))
        return node

    top = build(full)
    return BranchDecomposition(top, children, leaf_edge)


def _join(parts: List[BranchDecomposition]) -> BranchDecomposition:
    """Combine decompositions of edge-disjoint parts under one root."""
    children: Dict[int, Tuple[int, int]] = {}
    leaf_edge: Dict[int, str] = {}
    offset = 0
    tops = []
    for bd in parts:
        ren = {}
        for x in bd.arcs():
            offset += 1
            ren[x] = offset
        for x, (a, b) in bd.children.items():
            children[ren[x]] = (ren[a], ren[b])
        for x, e in bd.leaf_edge.items():
            leaf_edge[ren[x]] = e
        tops.append(ren[bd.top])
    while len(tops) > 1:
        offset += 1
        a, b = tops.pop(0), tops.pop(0)
        children[offset] = (a, b)
        tops.append(offset)
    return BranchDecomposition(tops[0], children, leaf_edge)


def _chain(steps: Sequence[str]) -> BranchDecomposition:
    """Caterpillar over a path: prefixes become arcs."""
    children: Dict[int, Tuple[int, int]] = {}
    leaf_edge: Dict[int, str] = {}
    nid = 0
    cur = None
    for e in steps:
        nid += 1
        leaf_edge[nid] = e
        if cur is None:
            cur = nid
        else:
            nid += 1
            children[nid] = (cur, nid - 1)
            cur = nid
    return BranchDecomposition(cur, children, leaf_edge)


def _lift(h_bd: BranchDecomposition, paths: Dict[str, list]) -> BranchDecomposition:
    """Replace each leaf of a decomposition of the dissolved graph by a
    caterpillar over the corresponding path."""
    children: Dict[int, Tuple[int, int]] = {}
    leaf_edge: Dict[int, str] = {}
    counter = [0]

    def copy(x):
        if x in h_bd.leaf_edge:
            sub = _chain([s[0] for s in paths[h_bd.leaf_edge[x]]])
            ren = {}
            for y in sub.arcs():
                counter[0] += 1
                ren[y] = counter[0]
            for y, (a, b) in sub.children.items():
                children[ren[y]] = (ren[a], ren[b])
            for y, e in sub.leaf_edge.items():
                leaf_edge[ren[y]] = e
            return ren[sub.top]
        a, b = h_bd.children[x]
        ca, cb = copy(a), copy(b)
        counter[0] += 1
        children[counter[0]] = (ca, cb)
        return counter[0]

    top = copy(h_bd.top)
    return BranchDecomposition(top, children, leaf_edge)


def _exact_component(g: Graph, cap: int) -> BranchDecomposition:
    if g.n_edges <= cap:
        _, choice, full = _exact_decomposition_core(g, cap)
        return _tree_from_choice(g, choice, full)
    h, paths = series_paths(g)
    if h.n_edges > cap:
        raise CapError(f"exact branch decomposition refused: {h.n_edges} edges after dissolution > cap {cap}")
    _, choice, full = _exact_decomposition_core(h, cap)
    hbd = _tree_from_choice(h, choice, full)
    if width(hbd, h) >= 2:
        # subdivision leaves branchwidth unchanged once it is at least two
        return _lift(hbd, paths)
    # branchwidth <= 1 (stars): use a length-two compression instead
    g2_edges = []
    short = {}
    for hid, steps in paths.items():
        if len(steps) == 1:
            g2_edges.append(steps[0])
            short[hid] = [steps[0]]
        else:
            a, b = steps[0][1], steps[-1][2]
            mid = f"{hid}m"
            s = [(f"{hid}a", a, mid), (f"{hid}b", mid, b)]
            g2_edges.extend(s)
            short[hid] = s
    vs = {x for e in g2_edges for x in e[1:]} | set(h.vertices)
    g2 = Graph.build(vs, g2_edges)
    if g2.n_edges > cap:
        raise CapError(f"exact branch decomposition refused: {g2.n_edges} edges > cap {cap}")
    _, choice, full = _exact_decomposition_core(g2, cap)
    bd2 = _tree_from_choice(g2, choice, full)
    # map the two-step paths back onto the full paths
    sub_paths = {}
    for hid, steps in paths.items():
        if len(steps) == 1:
            sub_paths[steps[0][0]] = steps
        else:
            sub_paths[f"{hid}a"] = steps[:1]
            sub_paths[f"{hid}b"] = steps[1:]
    return _lift(bd2, sub_paths)


def _heuristic_component(g: Graph) -> BranchDecomposition:
    h, paths = series_paths(g)
    if h.n_edges <= 10:
        _, choice, full = _exact_decomposition_core(h, 10)
        return _lift(_tree_from_choice(h, choice, full), paths)
    inc, deg = _incidence(h)
    emap = h.edge_map()

    def order_edges(es: List[str]) -> List[str]:
        # greedy min-degree elimination order, edges taken as they are exhausted
        sub = {e: emap[e] for e in es}
        remaining = dict(sub)
        vdeg: Dict[str, int] = {}
        for a, b in remaining.values():
            vdeg[a] = vdeg.get(a, 0) + 1
            vdeg[b] = vdeg.get(b, 0) + 1
        out = []
        while remaining:
            v = min(vdeg, key=lambda x: (vdeg[x], natural_key(x)))
            take = sorted((e for e, (a, b) in remaining.items() if v in (a, b)), key=natural_key)
            for e in take:
                a, b = remaining.pop(e)
                vdeg[a] -= 1
                vdeg[b] -= 1
                out.append(e)
            vdeg = {x: d for x, d in vdeg.items() if d > 0}
        return out

    children: Dict[int, Tuple[int, int]] = {}
    leaf_edge: Dict[int, str] = {}
    counter = [0]

    def build(es: List[str]) -> int:
        counter[0] += 1
        node = counter[0]
        if len(es) == 1:
            leaf_edge[node] = es[0]
            return node
        order = order_edges(es)
        best = None
        n = len(order)
        for k in range(max(1, n // 4), min(n - 1, 3 * n // 4) + 1):
            side = frozenset(order[:k])
            score = (len(_mid(inc, side, deg)) + len(_mid(inc, frozenset(order[k:]), deg)), abs(n - 2 * k))
            if best is None or score < best[0]:
                best = (score, k)
        k = best[1]
        children[node] = (build(order[:k]), build(order[k:]))
        return node

    top = build(sorted((e[0] for e in h.edges), key=natural_key))
    return _lift(BranchDecomposition(top, children, leaf_edge), paths)


def compute_branch_decomposition(g: Graph, mode: str = "exact", cap: int = EXACT_EDGE_CAP) -> BranchDecomposition:
    if g.n_edges == 0:
        raise ValueError("graph has no edge")
    if mode not in ("exact", "heuristic"):
        raise ValueError(f"unknown mode {mode}")
    parts = []
    for comp in g.components():
        if comp.n_edges == 0:
            continue
        if mode == "exact":
            parts.append(_exact_component(comp, cap))
        else:
            parts.append(_heuristic_component(comp))
    return _join(parts)


def branchwidth(g: Graph, cap: int = EXACT_EDGE_CAP) -> int:
    if g.n_edges == 0:
        return 0
    return width(compute_branch_decomposition(g, "exact", cap), g)


# ---------------------------------------------------------------------------
# planarity and isomorphism
# ---------------------------------------------------------------------------

def is_planar(g: Graph) -> Tuple[bool, Optional[Dict[str, List[Tuple[str, int]]]]]:
    """Planarity test; on success also a rotation system.

    The rotation at ``v`` is a cyclic list of half-edges ``(edge id, end)``
    where ``end`` is 0 for the first listed endpoint and 1 for the second.
    Every edge is subdivided twice before the test so that loops and
    parallel edges become a simple graph.
    """
    s = nx.Graph()
    s.add_nodes_from(("v", v) for v in g.vertices)
    for eid, u, v in g.edges:
        a, b = ("s", eid, 0), ("s", eid, 1)
        s.add_edge(("v", u), a)
        s.add_edge(a, b)
        s.add_edge(b, ("v", v))
    ok, emb = nx.check_planarity(s)
    if not ok:
        return False, None
    rot: Dict[str, List[Tuple[str, int]]] = {}
    for v in g.vertices:
        nbrs = list(emb.neighbors_cw_order(("v", v))) if emb.has_node(("v", v)) else []
        rot[v] = [(x[1], x[2]) for x in nbrs]
    return True, rot


def rotation_euler_characteristics(g: Graph, rot: Dict[str, List[Tuple[str, int]]]) -> List[int]:
    """Trace faces of an orientable rotation system; return v - e + f per component."""
    emap = g.edge_map()
    nxt = {}
    for v, hs in rot.items():
        for i, h in enumerate(hs):
            nxt[h] = hs[(i + 1) % len(hs)]
    seen = set()
    faces_by_comp: Dict[int, int] = {}
    comp_of_v = {}
    for ci, comp in enumerate(g.components()):
        for v in comp.vertices:
            comp_of_v[v] = ci
        faces_by_comp[ci] = 0
    for eid in emap:
        for end in (0, 1):
            h = (eid, end)
            if h in seen:
                continue
            u = emap[eid][end]
            faces_by_comp[comp_of_v[u]] += 1
            cur = h
            while cur not in seen:
                seen.add(cur)
                e, s = cur
                twin = (e, 1 - s)
                cur = nxt[twin]
    out = []
    for ci, comp in enumerate(g.components()):
        f = faces_by_comp[ci] if comp.n_edges else 1
        out.append(comp.n_vertices - comp.n_edges + f)
    return out


GRAPH_ISO_CAP = 30


def graph_isomorphic(g1: Graph, g2: Graph, cap: int = GRAPH_ISO_CAP) -> bool:
    if max(g1.n_edges, g2.n_edges) > cap:
        raise CapError(f"graph isomorphism refused above {cap} edges")
    if g1.n_vertices != g2.n_vertices or g1.n_edges != g2.n_edges:
        return False
    if sorted(g1.degrees().values()) != sorted(g2.degrees().values()):
        return False
    return nx.is_isomorphic(g1.to_networkx(), g2.to_networkx())
