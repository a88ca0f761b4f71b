"""Canonical forms and isomorphism tests for combinatorial maps.

``canonical_form`` encodes a map as a vertex-coloured graph and asks nauty
for a canonical certificate. Flags are nodes; each involution contributes
one pair node per flag pair. Orientable faces with several walks hang
their two orientation classes on an interchangeable O+/O- pair, so the
per-face reversal is an automorphism while relative orientations are kept.

``map_isomorphic`` is an independent backtracking matcher used to check
the canonical form.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from ..complex_core import _certificate
from ..graph_core import CapError
from .kernel import CombinatorialMap, walk_from

CANON_NODE_CAP = 20000


def _encode(m: CombinatorialMap) -> Tuple[List, List[Tuple[int, int]]]:
    nodes: List = []
    edges: List[Tuple[int, int]] = []

    def node(color) -> int:
        nodes.append(color)
        return len(nodes) - 1

    nf = m.n_flags
    flag = [node(("flag", m.edge_kind[f >> 2])) for f in range(nf)]
    for f in range(nf):
        for inv, partner in (("t0", f ^ 2), ("t2", f ^ 1), ("t1", m.tau1[f])):
            if f < partner:
                p = node((inv,))
                edges += [(p, flag[f]), (p, flag[partner])]
    vnode = []
    for v, rec in enumerate(m.vertices):
        kind = "surf" if rec.comp is not None else "seg"
        vnode.append(node(("vertex", kind, rec.point is not None, rec.covered, rec.label)))
    for f in range(nf):
        edges.append((vnode[m.flag_vertex[f]], flag[f]))
    points: Dict[str, int] = {}
    for v, rec in enumerate(m.vertices):
        if rec.point is not None:
            if rec.point not in points:
                points[rec.point] = node(("point",))
            edges.append((points[rec.point], vnode[v]))
    cnode = [node(("comp", c.orientable, c.genus)) for c in m.components]
    for fi, face in enumerate(m.faces):
        fn = node(("face", face.orientable, face.genus, face.q, face.label, face.hole, len(face.walks)))
        edges.append((fn, cnode[face.comp]))
        anchors = [a for a in face.walks if isinstance(a, int)]
        for a in face.walks:
            if not isinstance(a, int):
                edges.append((fn, vnode[a[1]]))
        for a in anchors:
            w = walk_from(m.tau1, a)
            wn = node(("walk",))
            edges.append((fn, wn))
            for x in w:
                edges.append((wn, flag[x]))
        if face.orientable and len(anchors) > 1:
            op, om = node(("orient",)), node(("orient",))
            edges += [(fn, op), (fn, om)]
            for a in anchors:
                w = walk_from(m.tau1, a)
                for j, x in enumerate(w):
                    edges.append((op if j % 2 == 0 else om, flag[x]))
    for tr in m.segments:
        sn = node(("segment",))
        prev = vnode[tr[0]]
        edges.append((sn, vnode[tr[0]]))
        edges.append((sn, vnode[tr[-1]]))
        for j in range(1, len(tr), 2):
            mark = tr[j]
            mn = node(("segmark", mark[0], mark[1] if mark[0] == "gap" else 0))
            edges += [(sn, mn), (prev, mn), (mn, vnode[tr[j + 1]])]
            prev = vnode[tr[j + 1]]
    return nodes, edges


def canonical_form(m: CombinatorialMap, cap: int = CANON_NODE_CAP) -> bytes:
    nodes, edges = _encode(m)
    if len(nodes) > cap:
        raise CapError(f"canonical form above {cap} nodes")
    return _certificate(nodes, edges)


# ---------------------------------------------------------------------------
# independent isomorphism search
# ---------------------------------------------------------------------------

def _gem_components(m: CombinatorialMap) -> List[List[int]]:
    seen = set()
    out = []
    for f in range(m.n_flags):
        if f in seen:
            continue
        comp, stack = [], [f]
        seen.add(f)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in (x ^ 1, x ^ 2, m.tau1[x]):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out.append(sorted(comp))
    return out


def _extend(m1, m2, f1: int, f2: int) -> Optional[Dict[int, int]]:
    """Flag bijection of the gem component of f1 sending f1 to f2, if any."""
    phi = {f1: f2}
    stack = [f1]
    while stack:
        x = stack.pop()
        y = phi[x]
        if m1.edge_kind[x >> 2] != m2.edge_kind[y >> 2]:
            return None
        for a, b in ((x ^ 1, y ^ 1), (x ^ 2, y ^ 2), (m1.tau1[x], m2.tau1[y])):
            if a in phi:
                if phi[a] != b:
                    return None
            else:
                phi[a] = b
                stack.append(a)
    if len(set(phi.values())) != len(phi):
        return None
    return phi


def _vertex_sig(rec):
    return (rec.comp is None, rec.point is not None, rec.covered, rec.label)


def _face_sig(face):
    return (face.orientable, face.genus, face.q, face.label, face.hole, len(face.walks),
            sum(1 for a in face.walks if not isinstance(a, int)))


class _State:
    def __init__(self):
        self.vmap: Dict[int, int] = {}
        self.fmap: Dict[int, int] = {}
        self.fsign: Dict[int, int] = {}
        self.pmap: Dict[str, str] = {}
        self.cmap: Dict[int, int] = {}

    def copy(self):
        s = _State()
        s.vmap, s.fmap, s.fsign = dict(self.vmap), dict(self.fmap), dict(self.fsign)
        s.pmap, s.cmap = dict(self.pmap), dict(self.cmap)
        return s


def _bind(d: Dict, a, b) -> bool:
    if a in d:
        return d[a] == b
    if b in d.values():
        return False
    d[a] = b
    return True


def _bind_vertex(m1, m2, st: _State, v1: int, v2: int) -> bool:
    r1, r2 = m1.vertices[v1], m2.vertices[v2]
    if _vertex_sig(r1) != _vertex_sig(r2):
        return False
    if not _bind(st.vmap, v1, v2):
        return False
    if r1.point is not None and not _bind(st.pmap, r1.point, r2.point):
        return False
    if r1.comp is not None and not _bind_comp(m1, m2, st, r1.comp, r2.comp):
        return False
    return True


def _bind_comp(m1, m2, st: _State, c1: int, c2: int) -> bool:
    return m1.components[c1] == m2.components[c2] and _bind(st.cmap, c1, c2)


def _bind_face(m1, m2, st: _State, fi: int, fj: int) -> bool:
    F1, F2 = m1.faces[fi], m2.faces[fj]
    if _face_sig(F1) != _face_sig(F2):
        return False
    return _bind(st.fmap, fi, fj) and _bind_comp(m1, m2, st, F1.comp, F2.comp)


def _apply_gem(m1, m2, st: _State, phi: Dict[int, int]) -> bool:
    for x, y in phi.items():
        if not _bind_vertex(m1, m2, st, m1.flag_vertex[x], m2.flag_vertex[y]):
            return False
    # faces through walks, with orientation signs for orientable multi-walk faces
    done = set()
    for x in phi:
        w = m1.walk_of[x]
        if w in done:
            continue
        done.add(w)
        fi = m1.face_of_walk[w]
        fj = m2.face_of_flag(phi[x])
        if not _bind_face(m1, m2, st, fi, fj):
            return False
        F1, F2 = m1.faces[fi], m2.faces[fj]
        a1 = [a for a in F1.walks if isinstance(a, int)]
        if F1.orientable and len(a1) > 1:
            anchor1 = next(a for a in a1 if m1.walk_of[a] == w)
            pos1 = {f: j % 2 for j, f in enumerate(walk_from(m1.tau1, anchor1))}
            w2 = m2.walk_of[phi[anchor1]]
            anchor2 = next(a for a in F2.walks if isinstance(a, int) and m2.walk_of[a] == w2)
            pos2 = {f: j % 2 for j, f in enumerate(walk_from(m2.tau1, anchor2))}
            sign = pos1[anchor1] ^ pos2[phi[anchor1]]
            if not _bind_sign(st, fi, sign):
                return False
    return True


def _bind_sign(st: _State, fi: int, sign: int) -> bool:
    if fi in st.fsign:
        return st.fsign[fi] == sign
    st.fsign[fi] = sign
    return True


def map_isomorphic(m1: CombinatorialMap, m2: CombinatorialMap, cap: int = 200000) -> bool:
    if (m1.n_flags != m2.n_flags or len(m1.vertices) != len(m2.vertices)
            or len(m1.faces) != len(m2.faces) or len(m1.segments) != len(m2.segments)
            or len(m1.components) != len(m2.components)):
        return False
    if sorted(map(_face_sig, m1.faces)) != sorted(map(_face_sig, m2.faces)):
        return False
    if sorted(map(_vertex_sig, m1.vertices)) != sorted(map(_vertex_sig, m2.vertices)):
        return False
    if sorted((c.orientable, c.genus) for c in m1.components) != sorted((c.orientable, c.genus) for c in m2.components):
        return False
    g1, g2 = _gem_components(m1), _gem_components(m2)
    if sorted(map(len, g1)) != sorted(map(len, g2)):
        return False
    iso1 = [v for v, r in enumerate(m1.vertices) if r.comp is not None and not m1.vertex_flags[v]]
    iso2 = [v for v, r in enumerate(m2.vertices) if r.comp is not None and not m2.vertex_flags[v]]
    if len(iso1) != len(iso2):
        return False
    face_iso1 = {a[1]: fi for fi, F in enumerate(m1.faces) for a in F.walks if not isinstance(a, int)}
    face_iso2 = {a[1]: fi for fi, F in enumerate(m2.faces) for a in F.walks if not isinstance(a, int)}
    budget = [cap]

    def tick():
        budget[0] -= 1
        if budget[0] < 0:
            raise CapError("map isomorphism search above configured size")

    # items: gem components, then isolated vertices, then segments, then faces/components
    def match_gems(k: int, used: set, st: _State) -> bool:
        if k == len(g1):
            return match_iso(0, st)
        root = g1[k][0]
        for j, comp2 in enumerate(g2):
            if j in used or len(comp2) != len(g1[k]):
                continue
            for f2 in comp2:
                tick()
                phi = _extend(m1, m2, root, f2)
                if phi is None:
                    continue
                st2 = st.copy()
                if _apply_gem(m1, m2, st2, phi) and match_gems(k + 1, used | {j}, st2):
                    return True
        return False

    def match_iso(k: int, st: _State) -> bool:
        if k == len(iso1):
            return match_segments(0, set(), st)
        v1 = iso1[k]
        for v2 in iso2:
            tick()
            st2 = st.copy()
            if _bind_vertex(m1, m2, st2, v1, v2) and _bind_face(m1, m2, st2, face_iso1[v1], face_iso2[v2]):
                if match_iso(k + 1, st2):
                    return True
        return False

    def match_segments(k: int, used: set, st: _State) -> bool:
        if k == len(m1.segments):
            return finish(st)
        t1 = m1.segments[k]
        for j, t2 in enumerate(m2.segments):
            if j in used or len(t1) != len(t2):
                continue
            for cand in (t2, tuple(reversed(t2))):
                tick()
                st2 = st.copy()
                ok = True
                for x, y in zip(t1, cand):
                    if isinstance(x, int):
                        ok = _bind_vertex(m1, m2, st2, x, y)
                    else:
                        ok = x[0] == y[0] and (x[0] != "gap" or x[1] == y[1])
                    if not ok:
                        break
                if ok and match_segments(k + 1, used | {j}, st2):
                    return True
        return False

    def finish(st: _State) -> bool:
        # faces without walks, matched by signature within matched components
        rest1 = [fi for fi, F in enumerate(m1.faces) if fi not in st.fmap]
        rest2 = [fj for fj in range(len(m2.faces)) if fj not in st.fmap.values()]
        return match_faces(rest1, rest2, st)

    def match_faces(rest1, rest2, st: _State) -> bool:
        if not rest1:
            return len(st.cmap) == len(m1.components) or match_comps(st)
        fi = rest1[0]
        for fj in rest2:
            tick()
            st2 = st.copy()
            if _bind_face(m1, m2, st2, fi, fj) and match_faces(rest1[1:], [x for x in rest2 if x != fj], st2):
                return True
        return False

    def match_comps(st: _State) -> bool:
        c1 = [c for c in range(len(m1.components)) if c not in st.cmap]
        c2 = [c for c in range(len(m2.components)) if c not in st.cmap.values()]
        return sorted((m1.components[c].orientable, m1.components[c].genus) for c in c1) == \
            sorted((m2.components[c].orientable, m2.components[c].genus) for c in c2)

    return match_gems(0, set(), _State())
