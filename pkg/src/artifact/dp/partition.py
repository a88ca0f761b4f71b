"""Partitioning graphs and the label operations on them.

A labelled map here is a ``CombinatorialMap`` whose face labels (and gap
labels on isolated segments) carry the part index, with 0 reserved for the
small disk faces that separate parts. Vertex labels identify middle-set
vertices of the underlying graph; unlabelled vertices sit on singular points.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple

from ..maps.kernel import CombinatorialMap, Face, is_cellular, remove_edge, remove_vertex, walk_from


@dataclass(frozen=True)
class PartitioningGraph:
    map: CombinatorialMap
    partition: Tuple[frozenset, ...]


def _flag(i: int, end: int, side: int) -> int:
    return 4 * i + 2 * end + side


def edge_classes(gamma: CombinatorialMap, partition: Sequence) -> Dict[str, int]:
    """Edge name -> 1-based part index. Every graph and segment edge must be covered."""
    cls: Dict[str, int] = {}
    for k, part in enumerate(partition, start=1):
        for name in part:
            if name in cls:
                raise ValueError(f"edge {name} appears in two parts")
            cls[name] = k
    names = [gamma.edge_name[i] for i in gamma.graph_edges()] + [n for n, _, _ in gamma.segment_edges()]
    missing = [n for n in names if n not in cls]
    if missing:
        raise ValueError(f"partition misses edges {missing}")
    return cls


def middle_vertices(gamma: CombinatorialMap, cls: Mapping[str, int]) -> Set[int]:
    """Map vertices incident with edges of at least two parts."""
    seen: Dict[int, Set[int]] = {}
    for i in gamma.graph_edges():
        for end in (0, 1):
            seen.setdefault(gamma.flag_vertex[4 * i + 2 * end], set()).add(cls[gamma.edge_name[i]])
    for name, a, b in gamma.segment_edges():
        seen.setdefault(a, set()).add(cls[name])
        seen.setdefault(b, set()).add(cls[name])
    return {v for v, s in seen.items() if len(s) > 1}


def _relabel_faces(m: CombinatorialMap, f) -> CombinatorialMap:
    faces = tuple(F if F.hole else replace(F, label=f(F.label)) for F in m.faces)
    segs = tuple(tuple(x if j % 2 == 0 or x[0] != "gap" else ("gap", f(x[1])) for j, x in enumerate(tr))
                 for tr in m.segments)
    return replace(m, faces=faces, segments=segs)


def _drop_stray_vertices(m: CombinatorialMap, keep: Optional[Set[int]] = None) -> CombinatorialMap:
    """Remove isolated non-singular vertices and non-singular segment vertices between equal gaps."""
    seg_inner: Dict[int, Tuple] = {}
    for tr in m.segments:
        for j in range(2, len(tr) - 1, 2):
            seg_inner[tr[j]] = (tr[j - 1], tr[j + 1])
    for v in range(len(m.vertices) - 1, -1, -1):
        rec = m.vertices[v]
        if rec.point is not None or (keep is not None and v in keep):
            continue
        if rec.comp is not None:
            if not m.vertex_flags[v]:
                m = remove_vertex(m, v)
        elif v in seg_inner:
            left, right = seg_inner[v]
            if left == right and left[0] == "gap":
                m = remove_vertex(m, v)
    return m


def partitioning_graph(gamma: CombinatorialMap, partition: Sequence,
                       vertex_label: Optional[Mapping[str, int]] = None) -> PartitioningGraph:
    """Build the partitioning graph of a proper cellular map for an ordered edge partition.

    ``partition`` lists edge-name sets E_1, ..., E_k (graph and segment
    edges). Boundary arcs of the complex join E_1. Middle vertices get
    ``vertex_label[name]`` (default: 1 + rank of the name in sorted order).
    """
    if not is_cellular(gamma):
        raise ValueError("partitioning graphs need a cellular embedding")
    parts = tuple(frozenset(p) for p in partition)
    cls = edge_classes(gamma, parts)
    mids = middle_vertices(gamma, cls)
    if vertex_label is None:
        names = sorted({gamma.graph_vertex_name(v) for v in range(len(gamma.vertices)) if gamma.vertices[v].covered})
        vertex_label = {n: j + 1 for j, n in enumerate(names)}

    def ecls(i: int) -> int:
        return 1 if gamma.edge_kind[i] == "b" else cls[gamma.edge_name[i]]

    n0 = gamma.n_edges
    tau = list(gamma.tau1)
    fv = list(gamma.flag_vertex)
    kinds, names = list(gamma.edge_kind), list(gamma.edge_name)
    faces: List[Face] = []
    for F in gamma.faces:
        if F.hole:
            faces.append(F)
            continue
        anchors = [a for a in F.walks if isinstance(a, int)]
        if not anchors:
            faces.append(replace(F, label=1))
            continue
        w = walk_from(gamma.tau1, anchors[0])
        L = len(w) // 2
        trav = [ecls(w[2 * j] >> 2) for j in range(L)]
        if len(set(trav)) == 1:
            faces.append(replace(F, label=trav[0]))
            continue
        # rotate so traversal 0 starts a group
        s = next(j for j in range(L) if trav[j] != trav[j - 1])
        order = [(s + j) % L for j in range(L)]
        groups: List[List[int]] = []
        for j in order:
            if groups and trav[groups[-1][-1]] == trav[j]:
                groups[-1].append(j)
            else:
                groups.append([j])
        first = len(kinds)
        for gi, grp in enumerate(groups):
            e = first + gi
            kinds.append("g")
            names.append(f"pi{e}")
            fv.extend([gamma.flag_vertex[w[2 * grp[0]]]] * 2 + [gamma.flag_vertex[w[2 * grp[-1] + 1]]] * 2)
            tau.extend([0, 0, 0, 0])
        for gi, grp in enumerate(groups):
            prev = first + gi
            nxt = first + (gi + 1) % len(groups)
            a = w[2 * grp[-1] + 1]
            b = w[(2 * grp[-1] + 2) % len(w)]
            pairs = ((a, _flag(prev, 1, 1)), (_flag(prev, 1, 0), _flag(nxt, 0, 0)), (_flag(nxt, 0, 1), b))
            for x, y in pairs:
                tau[x], tau[y] = y, x
        iso = tuple(a for a in F.walks if not isinstance(a, int))
        faces.append(Face(F.comp, True, 0, (_flag(first, 0, 0),) + iso, 0, 0))
        for gi, grp in enumerate(groups):
            faces.append(Face(F.comp, True, 0, (_flag(first + gi, 0, 1),), 0, trav[grp[0]]))
    m = replace(gamma, flag_vertex=tuple(fv), tau1=tuple(tau), edge_kind=tuple(kinds),
                edge_name=tuple(names), faces=tuple(faces))
    for i in range(n0 - 1, -1, -1):
        if m.edge_kind[i] == "g":
            m = remove_edge(m, i, label=ecls(i))
    segs = tuple(tuple(x if j % 2 == 0 or x[0] != "e" else ("gap", cls[x[1]]) for j, x in enumerate(tr))
                 for tr in m.segments)
    verts = tuple(replace(r, covered=True,
                          label=vertex_label[gamma.graph_vertex_name(v)] if v in mids else 0)
                  for v, r in enumerate(m.vertices))
    m = replace(m, segments=segs, vertices=verts)
    keep = {v for v, r in enumerate(m.vertices) if r.point is not None or v in mids}
    for v in range(len(m.vertices) - 1, -1, -1):
        if v not in keep:
            m = remove_vertex(m, v)
    return PartitioningGraph(m, parts)


def minus(p: CombinatorialMap) -> CombinatorialMap:
    """Relabel faces 3 -> 2."""
    return _relabel_faces(p, lambda x: 2 if x == 3 else x)


def _is_zero_disk(F: Face) -> bool:
    anchors = [a for a in F.walks if isinstance(a, int)]
    return (not F.hole and F.label == 0 and F.orientable and F.genus == 0 and F.q == 0 and len(anchors) == 1)


def merge_faces(p: CombinatorialMap, i: int, j: int) -> CombinatorialMap:
    """Merge labels j into i and simplify the 0-disks that now border label i."""
    if i == j or i not in (1, 2, 3) or j not in (1, 2, 3):
        raise ValueError("merge_faces needs two distinct labels in {1, 2, 3}")
    m = _relabel_faces(p, lambda x: i if x == j else x)
    tau = list(m.tau1)
    fv = list(m.flag_vertex)
    kinds, names = list(m.edge_kind), list(m.edge_name)
    faces = list(m.faces)
    extra: List[Face] = []
    doomed: Set[int] = set()
    for fi, F in enumerate(m.faces):
        if not _is_zero_disk(F):
            continue
        anchor = next(a for a in F.walks if isinstance(a, int))
        w = walk_from(m.tau1, anchor)
        L = len(w) // 2
        hit = [m.edge_kind[w[2 * k] >> 2] == "g" and m.faces[m.face_of_flag(w[2 * k] ^ 1)].label == i
               and not m.faces[m.face_of_flag(w[2 * k] ^ 1)].hole for k in range(L)]
        if not any(hit):
            continue
        if all(hit):
            doomed.update(w[2 * k] >> 2 for k in range(L))
            continue
        s = next(k for k in range(L) if not hit[k])
        runs: List[List[int]] = []
        cur: List[int] = []
        for k in [(s + r) % L for r in range(L)] + [s]:
            if hit[k]:
                cur.append(k)
            else:
                if len(cur) >= 2:
                    runs.append(cur)
                cur = []
        if not runs:
            continue
        chords = []
        for run in runs:
            c = len(kinds)
            kinds.append("g")
            names.append(f"ch{c}")
            a, b = w[2 * run[0] - 1], w[2 * run[0]]
            a2, b2 = w[2 * run[-1] + 1], w[(2 * run[-1] + 2) % len(w)]
            fv.extend([fv[b], fv[b], fv[a2], fv[a2]])
            tau.extend([0, 0, 0, 0])
            for x, y in ((a, _flag(c, 0, 0)), (_flag(c, 0, 1), b), (a2, _flag(c, 1, 1)), (_flag(c, 1, 0), b2)):
                tau[x], tau[y] = y, x
            chords.append(c)
            doomed.update(w[2 * k] >> 2 for k in run)
            extra.append(Face(F.comp, True, 0, (_flag(c, 0, 1),), 0, 0))
        iso = tuple(a for a in F.walks if not isinstance(a, int))
        faces[fi] = replace(F, walks=(_flag(chords[0], 0, 0),) + iso)
    m = replace(m, flag_vertex=tuple(fv), tau1=tuple(tau), edge_kind=tuple(kinds),
                edge_name=tuple(names), faces=tuple(faces) + tuple(extra))
    for e in sorted(doomed, reverse=True):
        m = remove_edge(m, e, label=i)
    return _drop_stray_vertices(m)


def restrict_labels(p: CombinatorialMap, allowed) -> CombinatorialMap:
    """Forget vertex labels outside ``allowed``; unlabelled non-singular leftovers are removed."""
    allowed = set(allowed)
    verts = tuple(r if r.label in allowed or r.label == 0 else replace(r, label=0) for r in p.vertices)
    return _drop_stray_vertices(replace(p, vertices=verts))


def labels_of(p: CombinatorialMap) -> List[int]:
    return sorted(r.label for r in p.vertices if r.label)


def relabel_vertices(p: CombinatorialMap, f: Mapping[int, int]) -> CombinatorialMap:
    """Rename vertex labels through ``f``; label 0 stays 0."""
    verts = tuple(replace(r, label=f[r.label]) if r.label else r for r in p.vertices)
    return replace(p, vertices=verts)
