"""Enumeration of all small proper embeddings on a topological complex."""

from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Dict, List

from ..complex_core import TopoComplex, homeo_key
from ..graph_core import CapError
from .canon import canonical_form
from .kernel import (CombinatorialMap, add_isolated_vertex, base_map, cover_all, fill_gap,
                     insert_edge_all, is_cellular, is_proper, subdivide_gap, underlying_complex, validate)

DEFAULT_MAX_STATES = 200000


def _placements(base: CombinatorialMap, extra: int) -> List[CombinatorialMap]:
    """Spread ``extra`` isolated vertices over component faces and segment interiors."""
    slots = [("f", fi) for fi, f in enumerate(base.faces) if not f.hole]
    slots += [("s", si) for si in range(len(base.segments))]
    out = []
    for j in range(extra + 1):
        for combo in combinations_with_replacement(range(len(slots)), j):
            m = base
            for s in combo:
                kind, idx = slots[s]
                if kind == "f":
                    m = add_isolated_vertex(m, idx)
                else:
                    m = subdivide_gap(m, idx, 1)
            out.append(m)
    return out


def successors(m: CombinatorialMap, name: str) -> List[CombinatorialMap]:
    out = []
    for fi, face in enumerate(m.faces):
        if not face.hole:
            out.extend(insert_edge_all(m, fi, name))
    for si, tr in enumerate(m.segments):
        for j in range(1, len(tr), 2):
            if tr[j][0] == "gap":
                out.append(fill_gap(m, si, j, name))
    return out


def enumerate_maps(t: TopoComplex, extra_vertices: int, max_edges: int,
                   max_states: int = DEFAULT_MAX_STATES) -> List[CombinatorialMap]:
    """Proper maps with all singular points covered, at most ``extra_vertices``
    further vertices and at most ``max_edges`` graph or segment edges.

    Classes come out sorted by canonical form.
    """
    base = cover_all(base_map(t))
    seen: Dict[bytes, CombinatorialMap] = {}
    level = []
    for m in _placements(base, extra_vertices):
        key = canonical_form(m)
        if key not in seen:
            seen[key] = m
            level.append(m)
    if len(seen) > max_states:
        raise CapError("enumeration stage 1 (vertex placement) above state cap")
    for e in range(max_edges):
        nxt = []
        for m in level:
            for m2 in successors(m, f"e{e}"):
                key = canonical_form(m2)
                if key not in seen:
                    seen[key] = m2
                    nxt.append(m2)
                    if len(seen) > max_states:
                        raise CapError(f"enumeration stage 2 (edge {e + 1}) above state cap")
        level = nxt
        if not level:
            break
    return [seen[key] for key in sorted(seen)]


def enumerate_proper_embeddings(t: TopoComplex, k: int, max_states: int = DEFAULT_MAX_STATES,
                                cellular_only: bool = False, check: bool = True) -> List[CombinatorialMap]:
    """All isomorphism classes of proper embeddings with at most k vertices and k edges.

    Classes come out sorted by canonical form. Every emitted map passes
    validation, is proper, and lives on a complex isomorphic to ``t``.
    """
    n_points = cover_all(base_map(t)).n_graph_vertices()
    if n_points > k:
        return []
    target = homeo_key(t) if check else None
    out = []
    for m in enumerate_maps(t, k - n_points, k, max_states):
        if cellular_only and not is_cellular(m):
            continue
        if check:
            if validate(m) or not is_proper(m) or homeo_key(underlying_complex(m)) != target:
                raise AssertionError("enumerated map fails its own invariants")
        out.append(m)
    return out
