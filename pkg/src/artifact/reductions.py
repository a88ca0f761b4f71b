"""Instance preprocessing, surface cutting, and the reduction to proper cellular embeddings."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from more_itertools import set_partitions

from .complex_core import (SimplicialComplex2, SurfaceComponent, TopoComplex, _comp_key, detect_3book,
                           dissolve_segment_points, homeo_key, size)
from .graph_core import CapError, Graph, dissolve_degree_two, is_planar, subdivide_edges

EMBEDDABLE = "EMBEDDABLE"


# ---------------------------------------------------------------------------
# preprocessing
# ---------------------------------------------------------------------------

@dataclass
class Preprocessed:
    graph: Optional[Graph]
    complex: Optional[SimplicialComplex2]
    verdict: Optional[str] = None
    notes: List[str] = field(default_factory=list)


def _fresh(prefix: str, taken: set) -> str:
    k = 0
    while f"{prefix}{k}" in taken:
        k += 1
    taken.add(f"{prefix}{k}")
    return f"{prefix}{k}"


def _is_path_component(comp: Graph) -> bool:
    if comp.n_edges == 0 or comp.n_edges != comp.n_vertices - 1:
        return False
    return all(d <= 2 for d in comp.degrees().values())


def preprocess_instance(g: Graph, c: SimplicialComplex2) -> Preprocessed:
    if detect_3book(c):
        return Preprocessed(None, None, EMBEDDABLE, ["complex contains a 3-book"])
    iso_c = c.isolated_vertices()
    c2 = c.remove_vertices(iso_c)
    g2, notes = preprocess_graph(g, len(iso_c))
    if iso_c:
        notes.insert(0, f"removed {len(iso_c)} isolated complex vertices")
    return Preprocessed(g2, c2, None, notes)


def preprocess_graph(g: Graph, isolated_points: int = 0) -> Tuple[Graph, List[str]]:
    """Graph side of preprocessing: isolated vertices and path components.

    Up to ``isolated_points`` isolated graph vertices are dropped (they go
    to isolated points of the complex); the others become an edge to a fresh
    vertex. Two or more path components collapse into a single edge.
    """
    notes = []
    iso_g = [v for v in g.vertices if g.degree(v) == 0]
    drop = set(iso_g[:isolated_points])
    keep_iso = iso_g[isolated_points:]
    vs = [v for v in g.vertices if v not in drop]
    es = list(g.edges)
    taken = set(g.vertices) | {e[0] for e in g.edges}
    for v in keep_iso:
        w = _fresh(f"{v}x", taken)
        vs.append(w)
        es.append((_fresh("iso", taken), v, w))
    if drop:
        notes.append(f"dropped {len(drop)} isolated graph vertices")
    if keep_iso:
        notes.append(f"replaced {len(keep_iso)} isolated graph vertices by edges")
    g2 = Graph.build(vs, es)
    paths = [comp for comp in g2.components() if _is_path_component(comp)]
    if len(paths) >= 2:
        gone = {v for comp in paths for v in comp.vertices}
        vs = [v for v in g2.vertices if v not in gone]
        es = [e for e in g2.edges if e[1] not in gone]
        a, b = _fresh("pa", taken), _fresh("pb", taken)
        vs += [a, b]
        es.append((_fresh("path", taken), a, b))
        g2 = Graph.build(vs, es)
        notes.append(f"collapsed {len(paths)} path components into one edge")
    return g2, notes


# ---------------------------------------------------------------------------
# cutting operations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CutResult:
    pieces: Tuple[SurfaceComponent, ...]
    essential: bool
    kind: str  # "separating" | "two-sided" | "one-sided"


def _options(parent_orientable: bool, genus: int) -> List[bool]:
    """Orientability flags a piece of the given genus may have."""
    out = []
    if genus % 2 == 0:
        out.append(True)
    if not parent_orientable and genus >= 1:
        out.append(False)
    return out


def _piece(orientable: bool, genus: int, items: Sequence[Tuple[str, object]]) -> SurfaceComponent:
    marks = tuple(x for kind, x in items if kind == "m")
    bnds = tuple(x for kind, x in items if kind == "b")
    return SurfaceComponent(orientable, genus, marks, bnds).normalized()


def cut_results(s: SurfaceComponent) -> List[CutResult]:
    """All cutting operations on one connected surface, up to homeomorphism.

    Marks and boundary components are labelled, so separating cuts list
    every distribution of them between the two sides.
    """
    items = [("m", p) for p in s.interior_marks] + [("b", b) for b in s.boundaries]
    seen = {}
    g = s.genus
    for g1 in range(g + 1):
        g2 = g - g1
        for o1 in _options(s.orientable, g1):
            for o2 in _options(s.orientable, g2):
                if not s.orientable and o1 and o2:
                    continue
                for mask in range(1 << len(items)):
                    left = [items[j] for j in range(len(items)) if mask >> j & 1]
                    right = [items[j] for j in range(len(items)) if not mask >> j & 1]
                    p1, p2 = _piece(o1, g1, left), _piece(o2, g2, right)
                    pieces = tuple(sorted((p1, p2), key=_comp_key))
                    trivial = any(p.orientable and p.genus == 0 and not part
                                  for p, part in ((p1, left), (p2, right)))
                    seen.setdefault(pieces, CutResult(pieces, not trivial, "separating"))
    if g >= 2:
        for o in _options(s.orientable, g - 2):
            p = (_piece(o, g - 2, items),)
            seen.setdefault(p, CutResult(p, True, "two-sided"))
    if not s.orientable and g >= 1:
        for o in _options(False, g - 1):
            p = (_piece(o, g - 1, items),)
            seen.setdefault(p, CutResult(p, True, "one-sided"))
    return sorted(seen.values(), key=lambda r: (r.kind, [_comp_key(p) for p in r.pieces]))


def potential(surface: Sequence[SurfaceComponent]) -> int:
    return 2 * sum(s.genus for s in surface) - len(surface)


def _surface_key(surface) -> Tuple[SurfaceComponent, ...]:
    return tuple(sorted((s.normalized() for s in surface), key=_comp_key))


def enumerate_essential_cuts(surface: Sequence[SurfaceComponent], max_states: int = 100000) -> List[Tuple[SurfaceComponent, ...]]:
    """Closure of a (possibly disconnected) surface under essential cuts, zero cuts included."""
    start = _surface_key(surface)
    seen = {start: potential(start)}
    queue = [start]
    while queue:
        cur = queue.pop(0)
        phi = seen[cur]
        for i, comp in enumerate(cur):
            for r in cut_results(comp):
                if not r.essential:
                    continue
                nxt = _surface_key(cur[:i] + r.pieces + cur[i + 1:])
                assert potential(nxt) < phi, "potential must drop along essential cuts"
                if nxt not in seen:
                    seen[nxt] = potential(nxt)
                    queue.append(nxt)
                    if len(seen) > max_states:
                        raise CapError("essential-cut closure above state cap")
    return sorted(seen, key=lambda s: [_comp_key(p) for p in s])


# ---------------------------------------------------------------------------
# reduction to proper cellular embeddings
# ---------------------------------------------------------------------------

# size(candidate) <= CANDIDATE_SIZE_FACTOR * size(t), checked on every candidate
CANDIDATE_SIZE_FACTOR = 5

_SMALL = "\x00"  # prefix tagging an interior mark while it is treated as a boundary


def reduced_graph(g: Graph, c: int) -> Graph:
    """Dissolve degree-2 vertices, then turn every edge into a path of 5c edges."""
    return subdivide_edges(dissolve_degree_two(g), max(5 * c - 1, 0))


def remove_planar_components(g: Graph) -> Tuple[Graph, int]:
    keep_v, keep_e, removed = [], [], 0
    for comp in g.components():
        if is_planar(comp)[0]:
            removed += 1
            continue
        keep_v.extend(comp.vertices)
        keep_e.extend(comp.edges)
    return Graph.build(keep_v, keep_e), removed


def split_segments(t: TopoComplex, parts: int = 5) -> TopoComplex:
    segs = []
    for si, (a, b) in enumerate(t.segments):
        chain = [a] + [f"{a}~{b}#{si}.{j}" for j in range(1, parts)] + [b]
        segs.extend(zip(chain, chain[1:]))
    return TopoComplex(t.components, tuple(segs))


def _without_segments(t: TopoComplex, mask: int) -> TopoComplex:
    return TopoComplex(t.components, tuple(s for j, s in enumerate(t.segments) if not mask >> j & 1))


def _partitions(t: TopoComplex) -> Iterator[TopoComplex]:
    """Every way of splitting each singular point along a partition of its occurrences."""
    occ = t.singular_points()
    points = [p for p, os_ in occ.items() if len(os_) >= 2]
    choices = [list(set_partitions(list(range(len(occ[p]))))) for p in points]
    for combo in product(*choices):
        names: Dict[str, List[str]] = {}
        for p, blocks in zip(points, combo):
            out = [p] * len(occ[p])
            if len(blocks) > 1:
                for bi, block in enumerate(blocks):
                    for j in block:
                        out[j] = f"{p}/{bi}"
            names[p] = out
        yield _rename_occurrences(t, names)


def _rename_occurrences(t: TopoComplex, names: Dict[str, List[str]]) -> TopoComplex:
    """Rename occurrences by index, walking them in the order ``singular_points`` lists them."""
    seen: Dict[str, int] = {}

    def nxt(p):
        k = seen.get(p, 0)
        seen[p] = k + 1
        return names[p][k] if p in names else p

    comps = []
    for comp in t.components:
        marks = tuple(nxt(m) for m in comp.interior_marks)
        bnds = tuple(tuple(nxt(m) for m in b) for b in comp.boundaries)
        comps.append(SurfaceComponent(comp.orientable, comp.genus, marks, bnds))
    segs = tuple((nxt(a), nxt(b)) for a, b in t.segments)
    return TopoComplex(tuple(comps), segs)


def _marks_to_boundaries(comps: Sequence[SurfaceComponent]) -> List[SurfaceComponent]:
    return [SurfaceComponent(c.orientable, c.genus, (),
                             c.boundaries + tuple((_SMALL + m,) for m in c.interior_marks)) for c in comps]


def _boundaries_to_marks(comp: SurfaceComponent) -> SurfaceComponent:
    marks, bnds = [], []
    for b in comp.boundaries:
        if len(b) == 1 and b[0].startswith(_SMALL):
            marks.append(b[0][len(_SMALL):])
        else:
            bnds.append(b)
    return SurfaceComponent(comp.orientable, comp.genus, tuple(marks), tuple(bnds))


@dataclass
class CellularReduction:
    graph: Graph
    c: int
    candidates: List[TopoComplex]
    removed_planar: int = 0
    stats: Dict[str, int] = field(default_factory=dict)


def iter_candidates(t: TopoComplex, max_candidates: int = 20000) -> Iterator[TopoComplex]:
    """Candidate complexes, deduplicated up to homeomorphism with marks kept.

    Points created by splitting segments are dissolved straight after the
    subset removal: they are regular, and cutting one apart is the same,
    up to homeomorphism, as removing an adjacent piece.
    """
    emitted, removed_seen, split_seen = set(), set(), set()
    bound = CANDIDATE_SIZE_FACTOR * max(size(t), 1)
    split = split_segments(t)
    for mask in range(1 << len(split.segments)):
        t1 = dissolve_segment_points(_without_segments(split, mask))
        k1 = homeo_key(t1, keep_marks=True)
        if k1 in removed_seen:
            continue
        removed_seen.add(k1)
        for t2 in _partitions(t1):
            k2 = homeo_key(t2, keep_marks=True)
            if k2 in split_seen:
                continue
            split_seen.add(k2)
            surface = _marks_to_boundaries(t2.components)
            for cut in enumerate_essential_cuts(surface):
                for keep in range(1 << len(cut)):
                    comps = tuple(_boundaries_to_marks(cut[j]) for j in range(len(cut)) if keep >> j & 1)
                    cand = dissolve_segment_points(TopoComplex(comps, t2.segments)).normalized()
                    key = homeo_key(cand, keep_marks=True)
                    if key in emitted:
                        continue
                    emitted.add(key)
                    assert size(cand) <= bound, "candidate complex larger than K*c"
                    if len(emitted) > max_candidates:
                        raise CapError("candidate complexes above configured cap")
                    yield cand


def cellularize_candidates(g: Graph, t: TopoComplex, max_candidates: int = 20000) -> CellularReduction:
    c = size(t)
    removed = 0
    if t.components:
        g, removed = remove_planar_components(g)
    g2 = reduced_graph(g, c)
    cands = list(iter_candidates(t, max_candidates))
    cands.sort(key=lambda x: homeo_key(x, keep_marks=True))
    n = max(g.n_vertices, g.n_edges)
    stats = {"c": c, "n": n, "vertices": g2.n_vertices, "edges": g2.n_edges,
             "candidates": len(cands), "max_candidate_size": max((size(x) for x in cands), default=0)}
    assert g2.n_vertices <= 5 * c * n and g2.n_edges <= 5 * c * n, "subdivided graph exceeds 5cn"
    return CellularReduction(g2, c, cands, removed, stats)
