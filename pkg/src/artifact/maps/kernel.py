"""Flag-based combinatorial maps of graphs properly embedded on 2-complexes.

Edge ``i`` owns flags ``4i + 2*end + side``. Two of the three involutions
are implicit: tau0 flips the end bit, tau2 flips the side bit. Only tau1
(the corner pairing around a vertex) is stored. A face boundary walk is a
<tau0, tau1> orbit; a vertex rotation is a <tau1, tau2> orbit.

Boundary circles of the complex that carry marks are drawn as ``"b"`` edges
between the marks, with a hole face on the far side. Unmarked boundary
circles are counted per face in ``q``. Isolated segments are traces
alternating vertices and ``("e", name)`` / ``("gap", label)`` marks.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from ..complex_core import SurfaceComponent, TopoComplex
from ..graph_core import Graph


@dataclass(frozen=True)
class Vertex:
    comp: Optional[int]  # surface component, None for segment vertices
    point: Optional[str] = None  # singular point this occurrence realizes
    covered: bool = True  # False: a singular occurrence no graph vertex sits on
    label: int = 0
    name: Optional[str] = None


@dataclass(frozen=True)
class Face:
    comp: int
    orientable: bool
    genus: int
    walks: Tuple = ()  # anchor flag per walk, or ("v", vid) for an isolated vertex
    q: int = 0  # unmarked boundary circles of the complex inside the face
    label: int = 0
    hole: bool = False


@dataclass(frozen=True)
class Component:
    orientable: bool
    genus: int


@dataclass(frozen=True)
class CombinatorialMap:
    components: Tuple[Component, ...]
    vertices: Tuple[Vertex, ...]
    flag_vertex: Tuple[int, ...]
    tau1: Tuple[int, ...]
    edge_kind: Tuple[str, ...]  # "g" graph edge, "b" boundary arc
    edge_name: Tuple[str, ...]
    faces: Tuple[Face, ...]
    segments: Tuple[Tuple, ...] = ()

    # -- basic structure ---------------------------------------------------

    @property
    def n_edges(self) -> int:
        return len(self.edge_kind)

    @property
    def n_flags(self) -> int:
        return 4 * len(self.edge_kind)

    @cached_property
    def walks(self) -> List[Tuple[int, ...]]:
        """Face boundary walks as flag sequences, starting at the least flag."""
        seen = [False] * self.n_flags
        out = []
        for f in range(self.n_flags):
            if not seen[f]:
                w = walk_from(self.tau1, f)
                for x in w:
                    seen[x] = True
                out.append(w)
        return out

    @cached_property
    def walk_of(self) -> Dict[int, int]:
        return {f: i for i, w in enumerate(self.walks) for f in w}

    @cached_property
    def face_of_walk(self) -> Dict[int, int]:
        out = {}
        for fi, face in enumerate(self.faces):
            for a in face.walks:
                if isinstance(a, int) and 0 <= a < self.n_flags:
                    out.setdefault(self.walk_of[a], fi)
        return out

    def face_of_flag(self, f: int) -> int:
        return self.face_of_walk[self.walk_of[f]]

    @cached_property
    def vertex_flags(self) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = {v: [] for v in range(len(self.vertices))}
        for f, v in enumerate(self.flag_vertex):
            out[v].append(f)
        return out

    def graph_edges(self) -> List[int]:
        return [i for i, k in enumerate(self.edge_kind) if k == "g"]

    def segment_edges(self) -> List[Tuple[str, int, int]]:
        out = []
        for tr in self.segments:
            for j in range(1, len(tr) - 1, 2):
                if tr[j][0] == "e":
                    out.append((tr[j][1], tr[j - 1], tr[j + 1]))
        return out

    def has_gaps(self) -> bool:
        return any(tr[j][0] == "gap" for tr in self.segments for j in range(1, len(tr), 2))

    def positive_class(self, anchor: int) -> frozenset:
        """Flags at even distance from ``anchor`` along its walk."""
        w = walk_from(self.tau1, anchor)
        return frozenset(w[0::2])

    # -- graph view ----------------------------------------------------------

    def graph_vertex_name(self, v: int) -> str:
        rec = self.vertices[v]
        if rec.point is not None:
            return rec.point
        return rec.name if rec.name is not None else f"v{v}"

    def abstract_graph(self) -> Graph:
        names = set()
        for i, rec in enumerate(self.vertices):
            if rec.covered:
                names.add(self.graph_vertex_name(i))
        edges = []
        for i in self.graph_edges():
            u = self.graph_vertex_name(self.flag_vertex[4 * i])
            v = self.graph_vertex_name(self.flag_vertex[4 * i + 2])
            edges.append((self.edge_name[i], u, v))
        for name, u, v in self.segment_edges():
            edges.append((name, self.graph_vertex_name(u), self.graph_vertex_name(v)))
        return Graph.build(names, edges)

    def n_graph_vertices(self) -> int:
        return len({self.graph_vertex_name(i) for i, r in enumerate(self.vertices) if r.covered})

    def n_graph_edges(self) -> int:
        return len(self.graph_edges()) + len(self.segment_edges())


def walk_from(tau1: Sequence[int], f: int) -> Tuple[int, ...]:
    out = [f]
    x = f ^ 2
    while True:
        out.append(x)
        y = tau1[x]
        if y == f:
            break
        out.append(y)
        x = y ^ 2
    return tuple(out)


def euler_char(face: Face) -> int:
    return 2 - face.genus - len(face.walks)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

class _UF:
    def __init__(self):
        self.parent: Dict = {}
        self.parity: Dict = {}

    def find(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.parity[x] = 0
            return x, 0
        p = 0
        root = x
        path = []
        while self.parent[root] != root:
            path.append(root)
            p ^= self.parity[root]
            root = self.parent[root]
        # path compression
        acc = p
        for node in path:
            nxt_par = self.parity[node]
            self.parent[node] = root
            self.parity[node] = acc
            acc ^= nxt_par
        return root, p

    def union(self, a, b, diff: int) -> bool:
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa ^ pb) == diff
        self.parent[ra] = rb
        self.parity[ra] = pa ^ pb ^ diff
        return True


def flag_orientation(m: CombinatorialMap, comp: int) -> Optional[Dict[int, int]]:
    """A global +/- assignment on the flags of ``comp`` if it is orientable."""
    uf = _UF()
    ok = True
    flags = [f for f in range(m.n_flags) if m.vertices[m.flag_vertex[f]].comp == comp]
    for f in flags:
        uf.find(f)
        ok &= uf.union(f, f ^ 1, 1)
        ok &= uf.union(f, f ^ 2, 1)
        ok &= uf.union(f, m.tau1[f], 1)
    for face in m.faces:
        if face.comp != comp:
            continue
        if not face.orientable:
            return None
        anchors = [a for a in face.walks if isinstance(a, int)]
        for a in anchors[1:]:
            ok &= uf.union(anchors[0], a, 0)
    if not ok:
        return None
    return {f: uf.find(f)[1] for f in flags}


def validate(m: CombinatorialMap) -> List[str]:
    bad: List[str] = []
    nf, nv = m.n_flags, len(m.vertices)
    if len(m.flag_vertex) != nf or len(m.tau1) != nf or len(m.edge_name) != len(m.edge_kind):
        return ["array lengths disagree"]
    for f in range(nf):
        t = m.tau1[f]
        if not 0 <= t < nf or m.tau1[t] != f or t == f:
            return [f"tau1 is not a fixed-point-free involution at flag {f}"]
        if not 0 <= m.flag_vertex[f] < nv:
            return [f"flag {f} has no vertex"]
        if m.flag_vertex[f] != m.flag_vertex[f ^ 1] or m.flag_vertex[f] != m.flag_vertex[t]:
            bad.append(f"flag {f}: vertex not constant on its corner")
    if bad:
        return bad
    for f in range(nf):
        if m.vertices[m.flag_vertex[f]].comp is None:
            bad.append(f"flag {f} sits on a segment vertex")
            return bad
    names = list(m.edge_name) + [e[0] for e in m.segment_edges()]
    if len(set(names)) != len(names):
        bad.append("edge names are not unique")
    for i, k in enumerate(m.edge_kind):
        if k not in ("g", "b"):
            bad.append(f"edge {i}: unknown kind {k}")
        a, b = m.vertices[m.flag_vertex[4 * i]], m.vertices[m.flag_vertex[4 * i + 2]]
        if a.comp != b.comp:
            bad.append(f"edge {i} joins two components")
        if k == "b" and (a.point is None or b.point is None):
            bad.append(f"boundary arc {i} ends at an unmarked vertex")
        if k == "g" and (not a.covered or not b.covered):
            bad.append(f"edge {i} ends at an uncovered point")
    # walks and anchors
    seen_walk: Dict[int, int] = {}
    seen_iso: Dict[int, int] = {}
    for fi, face in enumerate(m.faces):
        if not 0 <= face.comp < len(m.components):
            bad.append(f"face {fi}: bad component")
            continue
        if face.genus < 0 or face.q < 0 or face.label not in (0, 1, 2, 3):
            bad.append(f"face {fi}: bad record")
        if face.orientable and face.genus % 2:
            bad.append(f"face {fi}: orientable with odd genus")
        if not face.orientable and face.genus < 1:
            bad.append(f"face {fi}: non-orientable with genus 0")
        for a in face.walks:
            if isinstance(a, int):
                if not 0 <= a < nf:
                    bad.append(f"face {fi}: anchor {a} out of range")
                    continue
                w = m.walk_of[a]
                if w in seen_walk:
                    bad.append(f"walk of flag {a} claimed twice")
                seen_walk[w] = fi
                if m.vertices[m.flag_vertex[a]].comp != face.comp:
                    bad.append(f"face {fi}: walk in another component")
            else:
                v = a[1]
                if not 0 <= v < nv or m.vertex_flags[v] or m.vertices[v].comp != face.comp:
                    bad.append(f"face {fi}: bad isolated vertex walk {a}")
                    continue
                if v in seen_iso:
                    bad.append(f"isolated vertex {v} claimed twice")
                seen_iso[v] = fi
        if face.hole:
            kinds = {m.edge_kind[a >> 2] for a in face.walks if isinstance(a, int)}
            walk = walk_from(m.tau1, face.walks[0]) if face.walks and isinstance(face.walks[0], int) else ()
            if (face.genus or not face.orientable or face.q or len(face.walks) != 1
                    or kinds != {"b"} or any(m.edge_kind[x >> 2] != "b" for x in walk)):
                bad.append(f"face {fi}: malformed hole")
    if len(seen_walk) != len(m.walks):
        bad.append("some walk belongs to no face")
    for i in range(len(m.edge_kind)):
        if m.edge_kind[i] == "b" and i * 4 < nf and len(seen_walk) == len(m.walks):
            holes = [m.faces[m.face_of_flag(4 * i + s)].hole for s in (0, 1)]
            if sorted(holes) != [False, True]:
                bad.append(f"boundary arc {i} must separate a hole from the surface")
    for v, rec in enumerate(m.vertices):
        if rec.comp is not None and not m.vertex_flags[v] and v not in seen_iso:
            bad.append(f"isolated vertex {v} lies in no face")
        if rec.point is None and not rec.covered:
            bad.append(f"vertex {v}: only singular occurrences may be uncovered")
        if rec.label < 0:
            bad.append(f"vertex {v}: bad label")
    if bad:
        return bad
    # segments
    used_seg = set()
    for si, tr in enumerate(m.segments):
        if len(tr) < 3 or len(tr) % 2 == 0:
            bad.append(f"segment {si}: malformed trace")
            continue
        for j, x in enumerate(tr):
            if j % 2 == 0:
                if not isinstance(x, int) or not 0 <= x < nv or m.vertices[x].comp is not None:
                    bad.append(f"segment {si}: bad vertex at {j}")
                    continue
                end = j in (0, len(tr) - 1)
                if end and m.vertices[x].point is None:
                    bad.append(f"segment {si}: end vertex is not singular")
                if not end and m.vertices[x].point is not None:
                    bad.append(f"segment {si}: non-singular vertex identified with a singular point")
                if x in used_seg:
                    bad.append(f"segment vertex {x} used twice")
                used_seg.add(x)
                if not end and not m.vertices[x].covered:
                    bad.append(f"segment {si}: uncovered interior vertex")
            else:
                if not (isinstance(x, tuple) and len(x) == 2 and x[0] in ("e", "gap")):
                    bad.append(f"segment {si}: bad mark at {j}")
                elif x[0] == "e":
                    for y in (tr[j - 1], tr[j + 1]):
                        if isinstance(y, int) and 0 <= y < nv and not m.vertices[y].covered:
                            bad.append(f"segment {si}: edge at an uncovered end")
    for v, rec in enumerate(m.vertices):
        if rec.comp is None and v not in used_seg:
            bad.append(f"segment vertex {v} lies on no segment")
    # Euler characteristic, orientability, connectivity per component
    for c, comp in enumerate(m.components):
        if comp.orientable and comp.genus % 2:
            bad.append(f"component {c}: orientable with odd genus")
        V = sum(1 for r in m.vertices if r.comp == c)
        E = sum(1 for i in range(m.n_edges) if m.vertices[m.flag_vertex[4 * i]].comp == c)
        faces = [f for f in m.faces if f.comp == c]
        chi = V - E + sum(euler_char(f) for f in faces)
        if chi != 2 - comp.genus:
            bad.append(f"component {c}: Euler characteristic {chi} does not match genus {comp.genus}")
        ori = flag_orientation(m, c) is not None
        if ori != comp.orientable:
            bad.append(f"component {c}: orientability mismatch")
        if not faces:
            bad.append(f"component {c}: no face")
            continue
        uf = _UF()
        for fi, face in enumerate(m.faces):
            if face.comp != c:
                continue
            uf.find(("f", fi))
            for a in face.walks:
                if isinstance(a, int):
                    for x in walk_from(m.tau1, a):
                        uf.union(("f", fi), ("v", m.flag_vertex[x]), 0)
                else:
                    uf.union(("f", fi), ("v", a[1]), 0)
        roots = {uf.find(("f", fi))[0] for fi, face in enumerate(m.faces) if face.comp == c}
        if len(roots) != 1:
            bad.append(f"component {c} is disconnected")
    return bad


def is_proper(m: CombinatorialMap) -> bool:
    return all(r.covered for r in m.vertices)


def is_cellular(m: CombinatorialMap) -> bool:
    for f in m.faces:
        if f.hole:
            continue
        if f.genus or not f.orientable or f.q or len(f.walks) != 1:
            return False
    return not m.has_gaps()


def has_monogon_or_bigon(m: CombinatorialMap) -> bool:
    """Some face is an open disk bounded by one edge side or by two."""
    for f in m.faces:
        if f.hole or f.genus or not f.orientable or f.q or len(f.walks) != 1:
            continue
        (a,) = f.walks
        if isinstance(a, int) and len(walk_from(m.tau1, a)) <= 4:
            return True
    return False


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def base_map(t: TopoComplex) -> CombinatorialMap:
    """The complex itself: marks as uncovered vertices, no graph edges."""
    comps, verts, fv, tau1, kinds, names, faces, segs = [], [], [], [], [], [], [], []
    for ci, sc in enumerate(t.components):
        comps.append(Component(sc.orientable, sc.genus))
        walks = []
        for p in sc.interior_marks:
            verts.append(Vertex(ci, p, covered=False))
            walks.append(("v", len(verts) - 1))
        q = 0
        for b in sc.boundaries:
            if not b:
                q += 1
                continue
            vids = []
            for p in b:
                verts.append(Vertex(ci, p, covered=False))
                vids.append(len(verts) - 1)
            r = len(vids)
            first = len(kinds)
            for j in range(r):
                i = first + j
                kinds.append("b")
                names.append(f"bd{i}")
                fv.extend([vids[j], vids[j], vids[(j + 1) % r], vids[(j + 1) % r]])
                tau1.extend([0, 0, 0, 0])
            for j in range(r):
                i = first + j
                nxt = first + (j + 1) % r
                # end 1 of arc j meets end 0 of arc j+1; side 0 faces the hole
                tau1[4 * i + 2] = 4 * nxt + 0
                tau1[4 * nxt + 0] = 4 * i + 2
                tau1[4 * i + 3] = 4 * nxt + 1
                tau1[4 * nxt + 1] = 4 * i + 3
            faces.append(Face(ci, True, 0, (4 * first,), hole=True))
            walks.append(4 * first + 1)
        faces.append(Face(ci, sc.orientable, sc.genus, tuple(walks), q=q))
    for a, b in t.segments:
        verts.append(Vertex(None, a, covered=False))
        verts.append(Vertex(None, b, covered=False))
        segs.append((len(verts) - 2, ("gap", 0), len(verts) - 1))
    return CombinatorialMap(tuple(comps), tuple(verts), tuple(fv), tuple(tau1), tuple(kinds),
                            tuple(names), tuple(faces), tuple(segs))


def cover_all(m: CombinatorialMap) -> CombinatorialMap:
    return replace(m, vertices=tuple(replace(v, covered=True) for v in m.vertices))


def add_isolated_vertex(m: CombinatorialMap, face_idx: int, label: int = 0, name: Optional[str] = None) -> CombinatorialMap:
    f = m.faces[face_idx]
    verts = m.vertices + (Vertex(f.comp, None, True, label, name),)
    faces = list(m.faces)
    faces[face_idx] = replace(f, walks=f.walks + (("v", len(verts) - 1),))
    return replace(m, vertices=verts, faces=tuple(faces))


def subdivide_gap(m: CombinatorialMap, seg: int, pos: int, label: int = 0, name: Optional[str] = None) -> CombinatorialMap:
    """Put a new segment vertex inside the gap at trace position ``pos``."""
    tr = m.segments[seg]
    mark = tr[pos]
    assert mark[0] == "gap"
    verts = m.vertices + (Vertex(None, None, True, label, name),)
    v = len(verts) - 1
    new = tr[:pos] + (mark, v, mark) + tr[pos + 1:]
    segs = list(m.segments)
    segs[seg] = new
    return replace(m, vertices=verts, segments=tuple(segs))


def fill_gap(m: CombinatorialMap, seg: int, pos: int, name: str) -> CombinatorialMap:
    tr = m.segments[seg]
    segs = list(m.segments)
    segs[seg] = tr[:pos] + (("e", name),) + tr[pos + 1:]
    return replace(m, segments=tuple(segs))


def corners(m: CombinatorialMap, face_idx: int) -> List:
    """Corners of a face: tau1 pairs on its walks, plus its isolated vertices."""
    out = []
    for a in m.faces[face_idx].walks:
        if isinstance(a, int):
            w = walk_from(m.tau1, a)
            for j in range(1, len(w), 2):
                out.append((w[j], w[(j + 1) % len(w)]))
        else:
            out.append(a)
    return out


def _corner_usable(m: CombinatorialMap, c) -> bool:
    v = m.flag_vertex[c[0]] if isinstance(c[0], int) else c[1]
    return m.vertices[v].covered


def _topologies(face_orientable: bool, chi: int, k: int):
    """(orientable, genus) pairs with 2 - genus - k == chi."""
    g = 2 - k - chi
    if g < 0:
        return []
    out = []
    if g % 2 == 0:
        out.append((True, g))
    if not face_orientable and g >= 1:
        out.append((False, g))
    return out


def _place_end(tau: List[int], corner, p: int, r: int, variant: int) -> bool:
    """Hang the edge end with flags (p, r) in ``corner``; False if the variant is void."""
    if isinstance(corner[0], int):
        x, y = corner
        if variant:
            p, r = r, p
        tau[x], tau[p] = p, x
        tau[y], tau[r] = r, y
        return True
    if variant:
        return False
    tau[p], tau[r] = r, p
    return True


def insert_edge_all(m: CombinatorialMap, face_idx: int, name: str, labels=None) -> List[CombinatorialMap]:
    """Every valid map obtained by drawing one new graph edge inside a face.

    ``labels`` optionally fixes the labels of the resulting face(s): a
    1-tuple when the face stays whole, a 2-tuple (side 0, side 1) when it
    splits. By default faces inherit the old label.
    """
    face = m.faces[face_idx]
    if face.hole:
        return []
    i = m.n_edges
    a0, b0, a1, b1 = 4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3
    walk_sets = {a: set(walk_from(m.tau1, a)) for a in face.walks if isinstance(a, int)}
    out = []
    for c1 in [c for c in corners(m, face_idx) if _corner_usable(m, c)]:
        for v0 in (0, 1):
            tau = list(m.tau1) + [0, 0, 0, 0]
            if not _place_end(tau, c1, a0, b0, v0):
                continue
            tau[a1], tau[b1] = b1, a1  # dangling far end
            u = m.flag_vertex[c1[0]] if isinstance(c1[0], int) else c1[1]
            touched1 = {a for a, ws in walk_sets.items() if isinstance(c1[0], int) and c1[0] in ws}
            if not isinstance(c1[0], int):
                touched1.add(c1)
            # corners available to the far end
            cands = []
            seen = set()
            for a in face.walks:
                if a in touched1:
                    continue
                if isinstance(a, int):
                    w = walk_from(tau, a)
                    for j in range(1, len(w), 2):
                        pair = frozenset((w[j], w[(j + 1) % len(w)]))
                        if pair not in seen:
                            seen.add(pair)
                            cands.append(((w[j], w[(j + 1) % len(w)]), a))
                elif m.vertices[a[1]].covered:
                    cands.append((a, a))
            w = walk_from(tau, a0)
            for j in range(1, len(w), 2):
                pair = (w[j], w[(j + 1) % len(w)])
                if a1 in pair or b1 in pair or frozenset(pair) in seen:
                    continue
                seen.add(frozenset(pair))
                cands.append((pair, None))
            for c2, owner in cands:
                if isinstance(c2[0], int):
                    fl = c2[0]
                    if fl < m.n_flags and not m.vertices[m.flag_vertex[fl]].covered:
                        continue
                for v1 in (0, 1):
                    t2 = list(tau)
                    if not _place_end(t2, c2, a1, b1, v1):
                        continue
                    w_end = (m.flag_vertex[c2[0]] if c2[0] < m.n_flags else u) if isinstance(c2[0], int) else c2[1]
                    fv = list(m.flag_vertex) + [u, u, w_end, w_end]
                    touched = set(touched1)
                    if owner is not None:
                        touched.add(owner)
                    rest = [a for a in face.walks if a not in touched]
                    m2 = replace(m, tau1=tuple(t2), flag_vertex=tuple(fv),
                                 edge_kind=m.edge_kind + ("g",), edge_name=m.edge_name + (name,))
                    out.extend(_refit_faces(m, m2, face_idx, rest, (a0, b0), labels))
    return out


def _refit_faces(m_old, m2, face_idx, rest, new_flags, labels):
    """Face records for a freshly inserted edge whose side flags are ``new_flags``."""
    face = m_old.faces[face_idx]
    w0 = walk_from(m2.tau1, new_flags[0])
    new_walks = [w0]
    if new_flags[1] not in w0:
        new_walks.append(walk_from(m2.tau1, new_flags[1]))
    chi = euler_char(face) + 1
    options = []
    k = len(rest) + len(new_walks)
    lab = labels[0] if labels and len(labels) == 1 else face.label
    for ori, g in _topologies(face.orientable, chi, k):
        options.append([(ori, g, list(rest), new_walks, face.q, lab)])
    if len(new_walks) == 2:
        l1, l2 = labels if labels and len(labels) == 2 else (face.label, face.label)
        n = len(rest)
        for mask in range(1 << n):
            r1 = [rest[j] for j in range(n) if mask >> j & 1]
            r2 = [rest[j] for j in range(n) if not mask >> j & 1]
            k1, k2 = len(r1) + 1, len(r2) + 1
            total_g = 4 - k1 - k2 - chi
            for q1 in range(face.q + 1):
                for g1 in range(total_g + 1):
                    for (o1, gg1), (o2, gg2) in product(_topologies(face.orientable, 2 - g1 - k1, k1),
                                                        _topologies(face.orientable, 2 - (total_g - g1) - k2, k2)):
                        if not face.orientable and o1 and o2:
                            continue
                        options.append([(o1, gg1, r1, [new_walks[0]], q1, l1),
                                        (o2, gg2, r2, [new_walks[1]], face.q - q1, l2)])
    out = []
    for opt in options:
        slots = []
        for (ori, g, r, nw, q, lb) in opt:
            for w in nw:
                several = len(r) + len(nw) > 1
                slots.append((w[0], w[1]) if ori and several else (w[0],))
        for choice in product(*slots):
            it = iter(choice)
            newf = [Face(face.comp, ori, g, tuple(r) + tuple(next(it) for _ in nw), q, lb)
                    for (ori, g, r, nw, q, lb) in opt]
            faces = list(m_old.faces)
            faces[face_idx] = newf[0]
            faces.extend(newf[1:])
            cand = replace(m2, faces=tuple(faces))
            if not validate(cand):
                out.append(cand)
    return out


# ---------------------------------------------------------------------------
# removal
# ---------------------------------------------------------------------------

def _signs(m: CombinatorialMap, face: Face) -> Dict[int, int]:
    s = {}
    for a in face.walks:
        if isinstance(a, int):
            for j, x in enumerate(walk_from(m.tau1, a)):
                s[x] = 1 if j % 2 == 0 else -1
    return s


def remove_edge(m: CombinatorialMap, i: int, label: Optional[int] = None) -> CombinatorialMap:
    """Delete graph edge ``i``; the one or two faces around it merge.

    The merged face gets ``label`` if given, else the nonzero label of the
    two sides (side 0 wins a tie).
    """
    gone = {4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3}
    fa, fb = m.face_of_flag(4 * i), m.face_of_flag(4 * i + 1)
    Fa, Fb = m.faces[fa], m.faces[fb]
    sign = _signs(m, Fa)
    orientable = Fa.orientable and Fb.orientable
    if fa == fb:
        if sign[4 * i] != -sign[4 * i + 1]:
            orientable = False
        old = list(Fa.walks)
    else:
        sb = _signs(m, Fb)
        flip = -sign[4 * i] * sb[4 * i + 1]
        sign.update({x: flip * v for x, v in sb.items()})
        old = list(Fa.walks) + list(Fb.walks)
    tau = list(m.tau1)
    for x in range(m.n_flags):
        if x not in gone:
            y = tau[x]
            while y in gone:
                y = tau[y ^ 1]
            tau[x] = y
    keep = [x for x in range(m.n_flags) if x // 4 != i]

    def rf(x):
        return x if x < 4 * i else x - 4

    anchors = []
    touched = []
    for a in old:
        if isinstance(a, int) and gone & set(walk_from(m.tau1, a)):
            touched.append(a)
        elif isinstance(a, int):
            anchors.append(rf(a if not orientable or sign[a] == 1 else a ^ 2))
        else:
            anchors.append(a)
    seen = set()
    for a in touched:
        for x in walk_from(m.tau1, a):
            if x in gone or x in seen:
                continue
            w = walk_from(tau, x)
            seen.update(w)
            start = min(w)
            if orientable and sign[start] != 1:
                start ^= 2
            anchors.append(rf(start))
    for v in sorted({m.flag_vertex[x] for x in gone}):
        if all(m.flag_vertex[x] != v for x in keep):
            anchors.append(("v", v))
    chi = euler_char(Fa) + (euler_char(Fb) if fa != fb else 0) - 1
    genus = 2 - len(anchors) - chi
    if label is None:
        label = Fa.label or Fb.label
    merged = Face(Fa.comp, orientable, genus, tuple(anchors), Fa.q + (Fb.q if fa != fb else 0), label)
    faces = []
    for j, F in enumerate(m.faces):
        if j == fa:
            faces.append(merged)
        elif j != fb:
            faces.append(replace(F, walks=tuple(rf(a) if isinstance(a, int) else a for a in F.walks)))
    return replace(m, flag_vertex=tuple(m.flag_vertex[x] for x in keep),
                   tau1=tuple(rf(tau[x]) for x in keep),
                   edge_kind=m.edge_kind[:i] + m.edge_kind[i + 1:],
                   edge_name=m.edge_name[:i] + m.edge_name[i + 1:], faces=tuple(faces))


def remove_vertex(m: CombinatorialMap, v: int) -> CombinatorialMap:
    """Remove an isolated surface vertex, or a degree-2 segment vertex whose gaps agree."""
    rec = m.vertices[v]
    faces = list(m.faces)
    segs = list(m.segments)
    if rec.comp is not None:
        if m.vertex_flags[v]:
            raise ValueError("vertex has edges")
        faces = [replace(F, walks=tuple(a for a in F.walks if a != ("v", v))) for F in faces]
    else:
        for si, tr in enumerate(segs):
            inner = [j for j in range(2, len(tr) - 1, 2) if tr[j] == v]
            if inner:
                j = inner[0]
                left, right = tr[j - 1], tr[j + 1]
                if left != right or left[0] != "gap":
                    raise ValueError("segment vertex is not between two equal gaps")
                segs[si] = tr[:j - 1] + (left,) + tr[j + 2:]
                break
        else:
            raise ValueError("vertex is not an interior segment vertex")

    def rv(x):
        return x - 1 if x > v else x

    verts = m.vertices[:v] + m.vertices[v + 1:]
    fv = tuple(rv(x) for x in m.flag_vertex)
    faces = [replace(F, walks=tuple(a if isinstance(a, int) else ("v", rv(a[1])) for a in F.walks)) for F in faces]
    segs = [tuple(x if j % 2 else rv(x) for j, x in enumerate(tr)) for tr in segs]
    return replace(m, vertices=verts, flag_vertex=fv, faces=tuple(faces), segments=tuple(segs))


# ---------------------------------------------------------------------------
# the complex a map lives on
# ---------------------------------------------------------------------------

def underlying_complex(m: CombinatorialMap) -> TopoComplex:
    comps = []
    for c, comp in enumerate(m.components):
        orient = flag_orientation(m, c) if comp.orientable else None
        interior = []
        bnds = []
        q = 0
        on_bd = {m.flag_vertex[x] for x in range(m.n_flags) if m.edge_kind[x >> 2] == "b"}
        for v, rec in enumerate(m.vertices):
            if rec.comp == c and rec.point is not None and v not in on_bd:
                interior.append(rec.point)
        for F in m.faces:
            if F.comp != c:
                continue
            q += F.q
            if F.hole:
                a = F.walks[0]
                if orient is not None and orient[a] != 0:
                    a ^= 2
                w = walk_from(m.tau1, a)
                bnds.append(tuple(m.vertices[m.flag_vertex[x]].point for x in w[0::2]))
        bnds.extend(() for _ in range(q))
        comps.append(SurfaceComponent(comp.orientable, comp.genus, tuple(interior), tuple(bnds)))
    segs = tuple((m.vertices[tr[0]].point, m.vertices[tr[-1]].point) for tr in m.segments)
    return TopoComplex(tuple(comps), segs).normalized()


def strip_graph(m: CombinatorialMap) -> CombinatorialMap:
    """Remove every graph edge and every non-singular vertex, one at a time."""
    while True:
        gs = m.graph_edges()
        if not gs:
            break
        m = remove_edge(m, gs[-1])
    v = len(m.vertices) - 1
    while v >= 0:
        rec = m.vertices[v]
        if rec.point is None:
            if rec.comp is not None:
                m = remove_vertex(m, v)
            else:
                segs = list(m.segments)
                for si, tr in enumerate(segs):
                    if v in tr:
                        j = tr.index(v)
                        segs[si] = tr[:j - 1] + (("gap", 0),) + tr[j + 2:]
                m = replace(m, segments=tuple(segs))
                m = _drop_vertex_index(m, v)
        v -= 1
    segs = tuple(tuple(("gap", 0) if j % 2 else x for j, x in enumerate(tr)) for tr in m.segments)
    return replace(m, segments=segs)


def _drop_vertex_index(m: CombinatorialMap, v: int) -> CombinatorialMap:
    def rv(x):
        return x - 1 if x > v else x

    verts = m.vertices[:v] + m.vertices[v + 1:]
    fv = tuple(rv(x) for x in m.flag_vertex)
    faces = tuple(replace(F, walks=tuple(a if isinstance(a, int) else ("v", rv(a[1])) for a in F.walks)) for F in m.faces)
    segs = tuple(tuple(x if j % 2 else rv(x) for j, x in enumerate(tr)) for tr in m.segments)
    return replace(m, vertices=verts, flag_vertex=fv, faces=faces, segments=segs)


def underlying_complex_by_removal(m: CombinatorialMap) -> TopoComplex:
    """Recover the complex from face records alone, by deleting the graph."""
    s = strip_graph(m)
    comps = []
    for c in range(len(s.components)):
        faces = [F for F in s.faces if F.comp == c]
        V = sum(1 for r in s.vertices if r.comp == c)
        E = sum(1 for i in range(s.n_edges) if s.vertices[s.flag_vertex[4 * i]].comp == c)
        chi = V - E + sum(euler_char(F) for F in faces)
        ori = all(F.orientable for F in faces)
        comps.append(Component(ori, 2 - chi))
    s2 = replace(s, components=tuple(comps))
    return underlying_complex(s2)
