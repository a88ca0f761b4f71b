"""The dynamic program over a rooted branch decomposition, and the full decision procedure."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..complex_core import SimplicialComplex2, TopoComplex, oversurface, size, to_topological
from ..graph_core import (EXACT_EDGE_CAP, BranchDecomposition, CapError, Graph, compute_branch_decomposition,
                          middle_set, width)
from ..reductions import cellularize_candidates, preprocess_graph, preprocess_instance
from .bounding import DEFAULT_MAX_STATES, ExhaustiveList, combine_node, leaf_bounding_graphs, sparse_bound
from .partition import relabel_vertices

EMBEDDABLE = "EMBEDDABLE"
NOT_EMBEDDABLE = "NOT_EMBEDDABLE"
NO_SPARSE = "NO_SPARSE_PROPER_CELLULAR"
UNKNOWN_CAP = "UNKNOWN_CAP"


@dataclass
class Verdict:
    verdict: str
    candidates_tried: int
    cap: int
    stats: Dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "candidates_tried": self.candidates_tried,
                "cap": self.cap, "stats": self.stats}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False, separators=(",", ":"))


def vertex_labels(g: Graph) -> Dict[str, int]:
    return {v: i + 1 for i, v in enumerate(g.vertices)}


def default_decomposition(g: Graph) -> BranchDecomposition:
    mode = "exact" if g.n_edges <= EXACT_EDGE_CAP else "heuristic"
    return compute_branch_decomposition(g, mode)


def _renamed(lst: ExhaustiveList, f: Dict[int, int], arc: int) -> ExhaustiveList:
    out = ExhaustiveList(arc)
    for p in lst.items():
        out.add(relabel_vertices(p, f))
    return out


class _Memo:
    """Lists depend on labels only through their identity, so inputs are
    renamed to 1..k before lookup and the answer is renamed back."""

    def __init__(self):
        self.table: Dict[Tuple, Tuple[ExhaustiveList, int]] = {}
        self.hits = 0

    @staticmethod
    def naming(labels) -> Tuple[Dict[int, int], Dict[int, int]]:
        fwd = {x: i + 1 for i, x in enumerate(sorted(set(labels)))}
        return fwd, {v: k for k, v in fwd.items()}

    def leaf(self, t, edge: Tuple[int, int], mid: Sequence[int], cap: int, arc: int,
             max_states: int) -> ExhaustiveList:
        fwd, back = self.naming(tuple(edge) + tuple(mid))
        key = ("leaf", tuple(sorted(fwd[x] for x in edge)), tuple(fwd[x] for x in mid))
        if key in self.table:
            self.hits += 1
        else:
            lst = leaf_bounding_graphs(t, tuple(fwd[x] for x in edge), [fwd[x] for x in mid], cap, arc, max_states)
            self.table[key] = (lst, 0)
        return _renamed(self.table[key][0], back, arc)

    def node(self, lb: ExhaustiveList, lc: ExhaustiveList, mid_a, mid_b, mid_c, t, cap: int,
             edge_bound: int, arc: int, max_states: int, workers: int) -> Tuple[ExhaustiveList, int]:
        fwd, back = self.naming(tuple(mid_b) + tuple(mid_c))
        nb, nc = _renamed(lb, fwd, arc), _renamed(lc, fwd, arc)
        ma, mb, mc = ([fwd[x] for x in m] for m in (mid_a, mid_b, mid_c))
        key = ("node", nb.keys(), nc.keys(), tuple(ma), tuple(mb), tuple(mc))
        if key in self.table:
            self.hits += 1
            return _renamed(self.table[key][0], back, arc), 0
        lst, n = combine_node(nb, nc, ma, mb, mc, t, cap, edge_bound, arc, max_states, workers)
        self.table[key] = (lst, n)
        return _renamed(lst, back, arc), n


def decide_sparse_cellular(t: TopoComplex, g: Graph, bd: Optional[BranchDecomposition] = None,
                           cap: Optional[int] = None, max_states: int = DEFAULT_MAX_STATES,
                           workers: int = 1) -> Verdict:
    """Run the bottom-up list computation; three-valued answer.

    ``cap`` bounds the edges of list members (default: the full bound
    74c + 26w). Node candidates get three times that.
    """
    if g.n_edges == 0:
        raise ValueError("graph has no edge")
    bd = bd or default_decomposition(g)
    c = size(t)
    w = width(bd, g)
    full = sparse_bound(c, w)
    cap = full if cap is None else cap
    edge_bound = min(3 * cap, 3 * full)
    labels = vertex_labels(g)
    ends = g.edge_map()
    memo = _Memo()
    lists: Dict[int, ExhaustiveList] = {}
    mids: Dict[int, List[int]] = {}
    tried = 0
    largest = 0
    stats = {"c": c, "w": w, "full_cap": full, "arcs": len(bd.arcs())}
    try:
        for x in bd.postorder():
            mid = sorted(labels[v] for v in middle_set(bd, g, x))
            if x in bd.leaf_edge:
                u, v = ends[bd.leaf_edge[x]]
                lst = memo.leaf(t, (labels[u], labels[v]), mid, cap, x, max_states)
            else:
                a, b = bd.children[x]
                lst, n = memo.node(lists.pop(a), lists.pop(b), mid, mids[a], mids[b], t, cap, edge_bound,
                                   x, max_states, workers)
                tried += n
            lists[x], mids[x] = lst, mid
            largest = max(largest, len(lst))
            if not len(lst):
                stats["empty_arc"] = x
                break
    except CapError as exc:
        stats.update(largest_list=largest, memo_hits=memo.hits, cap_error=str(exc))
        return Verdict(UNKNOWN_CAP, tried, cap, stats)
    stats["largest_list"] = largest
    stats["memo_hits"] = memo.hits
    root = lists.get(bd.top)
    if root is not None and len(root):
        return Verdict(EMBEDDABLE, tried, cap, stats)
    if cap >= full:
        return Verdict(NO_SPARSE, tried, cap, stats)
    return Verdict(UNKNOWN_CAP, tried, cap, stats)


def decide_embeddable_bounded_bw(c: Union[SimplicialComplex2, TopoComplex], g: Graph, cap: Optional[int] = None,
                                 max_states: int = DEFAULT_MAX_STATES, workers: int = 1,
                                 genus_fast_path: bool = True) -> Verdict:
    """Preprocess, reduce to proper cellular candidates, and run the list DP on each."""
    if isinstance(c, SimplicialComplex2):
        pre = preprocess_instance(g, c)
        if pre.verdict is not None:
            return Verdict(EMBEDDABLE, 0, cap or 0, {"by": "preprocessing", "notes": pre.notes})
        g, t, notes = pre.graph, to_topological(pre.complex), pre.notes
    else:
        t = c
        g, notes = preprocess_graph(g)
    stats: Dict = {"notes": notes}
    if g.n_edges == 0:
        ok = g.n_vertices == 0 or bool(t.components or t.segments)
        return Verdict(EMBEDDABLE if ok else NOT_EMBEDDABLE, 0, cap or 0, dict(stats, by="trivial graph"))
    if genus_fast_path:
        from ..oracle import embeds_in_surfaces
        try:
            if not embeds_in_surfaces(g, oversurface(t)):
                return Verdict(NOT_EMBEDDABLE, 0, cap or 0, dict(stats, by="genus of the thickened surface"))
        except CapError:
            stats["genus_fast_path"] = "skipped: above cap"
    red = cellularize_candidates(g, t)
    stats["reduction"] = red.stats
    if red.graph.n_edges == 0:
        return Verdict(EMBEDDABLE, 0, cap or 0, dict(stats, by="only planar components"))
    bd = default_decomposition(red.graph)
    answers = []
    tried = 0
    used_cap = 0
    for cand in red.candidates:
        tried += 1
        v = decide_sparse_cellular(cand, red.graph, bd, cap, max_states, workers)
        answers.append(v.verdict)
        used_cap = max(used_cap, v.cap)
        if v.verdict == EMBEDDABLE:
            stats["answers"] = answers
            return Verdict(EMBEDDABLE, tried, v.cap, stats)
    stats["answers"] = answers
    if all(a == NO_SPARSE for a in answers):
        return Verdict(NOT_EMBEDDABLE, tried, used_cap, stats)
    return Verdict(UNKNOWN_CAP, tried, used_cap, stats)
