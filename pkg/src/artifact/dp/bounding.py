"""Bounding graphs and the exhaustive lists of the dynamic program.

A bounding graph for the edges below an arc is a proper labelled map whose
labelled vertices are exactly the arc's middle set (one label per vertex),
whose unlabelled vertices sit on singular points, and whose faces carry
labels 0, 1 or 2. Lists are keyed by canonical form, so duplicates vanish
on insertion and iteration order is canonical.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import permutations, product
from typing import Dict, FrozenSet, Iterator, List, Sequence, Tuple

from ..complex_core import TopoComplex
from ..graph_core import CapError
from ..maps.canon import canonical_form
from ..maps.enumerate import enumerate_maps
from ..maps.kernel import CombinatorialMap, walk_from
from .partition import labels_of, merge_faces, minus, restrict_labels

DEFAULT_MAX_STATES = 200_000


def sparse_bound(c: int, w: int) -> int:
    return 74 * c + 26 * w


def n_edges(p: CombinatorialMap) -> int:
    """Graph edges of a labelled map, segment edges included; boundary arcs excluded."""
    return len(p.graph_edges()) + len(p.segment_edges())


@dataclass
class ExhaustiveList:
    arc: int
    members: Dict[bytes, CombinatorialMap] = field(default_factory=dict)

    def add(self, p: CombinatorialMap) -> None:
        self.members.setdefault(canonical_form(p), p)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, p: CombinatorialMap) -> bool:
        return canonical_form(p) in self.members

    def keys(self) -> FrozenSet[bytes]:
        return frozenset(self.members)

    def items(self) -> List[CombinatorialMap]:
        return [self.members[k] for k in sorted(self.members)]


# ---------------------------------------------------------------------------
# labelled enumeration
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _skeletons(t: TopoComplex, extra: int, max_edges: int, max_states: int) -> Tuple[CombinatorialMap, ...]:
    return tuple(enumerate_maps(t, extra, max_edges, max_states))


def _slots(m: CombinatorialMap) -> List[Tuple]:
    out: List[Tuple] = [("f", fi) for fi, F in enumerate(m.faces) if not F.hole]
    for si, tr in enumerate(m.segments):
        for j in range(1, len(tr), 2):
            if tr[j][0] == "gap":
                out.append(("s", si, j))
    return out


def _with_face_labels(m: CombinatorialMap, slots, labs) -> CombinatorialMap:
    faces = list(m.faces)
    segs = [list(tr) for tr in m.segments]
    for s, lab in zip(slots, labs):
        if s[0] == "f":
            faces[s[1]] = replace(faces[s[1]], label=lab)
        else:
            segs[s[1]][s[2]] = ("gap", lab)
    return replace(m, faces=tuple(faces), segments=tuple(tuple(tr) for tr in segs))


def labellings(m: CombinatorialMap, labels: Sequence[int], face_labels: Sequence[int]) -> Iterator[CombinatorialMap]:
    """Every way to put ``labels`` on vertices (all non-singular vertices labelled) and labels on faces."""
    new = [v for v, r in enumerate(m.vertices) if r.point is None]
    sing = [v for v, r in enumerate(m.vertices) if r.point is not None]
    labels = sorted(labels)
    if len(new) > len(labels) or len(labels) > len(new) + len(sing):
        return
    slots = _slots(m)
    for on_new in permutations(labels, len(new)):
        rest = [x for x in labels if x not in on_new]
        for where in permutations(sing, len(rest)):
            assign = dict(zip(new, on_new))
            assign.update(zip(where, rest))
            verts = tuple(replace(r, label=assign.get(v, 0)) for v, r in enumerate(m.vertices))
            mv = replace(m, vertices=verts)
            for labs in product(face_labels, repeat=len(slots)):
                yield _with_face_labels(mv, slots, labs)


def _boundary_labels(m: CombinatorialMap, fi: int) -> set:
    out = set()
    for a in m.faces[fi].walks:
        if isinstance(a, int):
            out.update(m.vertices[m.flag_vertex[x]].label for x in walk_from(m.tau1, a))
        else:
            out.add(m.vertices[a[1]].label)
    return out


def hosts_edge(p: CombinatorialMap, ends: Sequence[int], loop: bool = False) -> bool:
    """Some 2-labelled face or gap has every label in ``ends`` on its boundary.

    A gap is an open interval, so it never hosts a loop.
    """
    need = set(ends)
    for fi, F in enumerate(p.faces):
        if not F.hole and F.label == 2 and need <= _boundary_labels(p, fi):
            return True
    if loop:
        return False
    for tr in p.segments:
        for j in range(1, len(tr), 2):
            if tr[j] == ("gap", 2) and need <= {p.vertices[tr[j - 1]].label, p.vertices[tr[j + 1]].label}:
                return True
    return False


def is_bounding_shape(p: CombinatorialMap, mid: Sequence[int], cap: int) -> bool:
    """Labels exactly ``mid``, unlabelled vertices singular, at most ``cap`` edges."""
    if labels_of(p) != sorted(mid):
        return False
    if any(r.label == 0 and r.point is None for r in p.vertices):
        return False
    return n_edges(p) <= cap


def leaf_bounding_graphs(t: TopoComplex, edge: Tuple[int, int], mid: Sequence[int], bound: int,
                         arc: int = -1, max_states: int = DEFAULT_MAX_STATES) -> ExhaustiveList:
    """All bounding graphs with at most ``bound`` edges for the single edge ``edge``.

    ``edge`` gives the labels of its endpoints; ``mid`` the labels of the
    middle set, a subset of them. Endpoints outside ``mid`` are free.
    """
    ends = [x for x in edge if x in mid]
    out = ExhaustiveList(arc)
    tried = 0
    for m in _skeletons(t, len(mid), bound, max_states):
        for p in labellings(m, mid, (0, 1, 2)):
            tried += 1
            if tried > max_states:
                raise CapError(f"leaf list above {max_states} labelled maps")
            if hosts_edge(p, ends, loop=edge[0] == edge[1]):
                out.add(p)
    return out


# ---------------------------------------------------------------------------
# the induction step
# ---------------------------------------------------------------------------

def face_signature(m: CombinatorialMap, fi: int, allowed) -> Tuple:
    """What merging other labels cannot change about a face: its topology,
    walk lengths, and the surviving labels around it."""
    F = m.faces[fi]
    comp = m.components[F.comp]
    lens, around, iso = [], [], []
    for a in F.walks:
        if isinstance(a, int):
            w = walk_from(m.tau1, a)
            lens.append(len(w))
            around.extend(m.vertices[m.flag_vertex[x]].label for x in w)
        elif m.vertices[a[1]].point is not None:
            iso.append(m.vertices[a[1]].label)
    keep = lambda x: x if x in allowed else 0  # noqa: E731
    return (comp.orientable, comp.genus, F.orientable, F.genus, F.q, tuple(sorted(lens)),
            tuple(sorted(map(keep, around))), tuple(sorted(map(keep, iso))))


def label_signature(p: CombinatorialMap, label: int, allowed) -> Tuple:
    return tuple(sorted(face_signature(p, fi, allowed) for fi, F in enumerate(p.faces)
                        if not F.hole and F.label == label))


def _subsets(items: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    for mask in range(1 << len(items)):
        yield tuple(x for j, x in enumerate(items) if mask >> j & 1)


@dataclass(frozen=True)
class _Job:
    skeletons: Tuple[CombinatorialMap, ...]
    labels: Tuple[int, ...]
    mid_a: Tuple[int, ...]
    mid_b: Tuple[int, ...]
    mid_c: Tuple[int, ...]
    keys_b: FrozenSet[bytes]
    keys_c: FrozenSet[bytes]
    sigs_b: FrozenSet[Tuple]
    sigs_c: FrozenSet[Tuple]
    cap: int
    budget: int
    prune: bool = True


def _candidates(m: CombinatorialMap, job: _Job) -> Iterator[CombinatorialMap]:
    """Labelled candidates on one skeleton whose 2-faces and 3-faces can match the child lists.

    Merging 1 with 3 leaves every 2-face as it is (up to dropped stray
    vertices), and merging 1 with 2 leaves every 3-face, so the pruning
    loses no candidate that could pass the membership tests.
    """
    slots = _slots(m)
    faces = [k for k, s in enumerate(slots) if s[0] == "f"]
    gaps = [k for k, s in enumerate(slots) if s[0] == "s"]
    if not job.prune:
        yield from labellings(m, job.labels, (0, 1, 2, 3))
        return
    for mv in labellings(m, job.labels, (0,)):
        sb = {k: face_signature(mv, slots[k][1], job.mid_b) for k in faces}
        sc = {k: face_signature(mv, slots[k][1], job.mid_c) for k in faces}
        for two in _subsets(faces):
            if tuple(sorted(sb[k] for k in two)) not in job.sigs_b:
                continue
            rest = [k for k in faces if k not in two]
            for three in _subsets(rest):
                if tuple(sorted(sc[k] for k in three)) not in job.sigs_c:
                    continue
                free = [k for k in rest if k not in three]
                for low in product((0, 1), repeat=len(free)):
                    for glabs in product((0, 1, 2, 3), repeat=len(gaps)):
                        labs = [0] * len(slots)
                        for k in two:
                            labs[k] = 2
                        for k in three:
                            labs[k] = 3
                        for k, x in zip(free, low):
                            labs[k] = x
                        for k, x in zip(gaps, glabs):
                            labs[k] = x
                        yield _with_face_labels(mv, slots, labs)


def _run_job(job: _Job) -> Tuple[int, List[Tuple[bytes, CombinatorialMap]]]:
    tried = 0
    found: Dict[bytes, CombinatorialMap] = {}
    for m in job.skeletons:
        for p in _candidates(m, job):
            tried += 1
            if tried > job.budget:
                return tried, []
            pb = restrict_labels(merge_faces(p, 1, 3), job.mid_b)
            if canonical_form(pb) not in job.keys_b:
                continue
            pc = restrict_labels(minus(merge_faces(p, 1, 2)), job.mid_c)
            if canonical_form(pc) not in job.keys_c:
                continue
            pa = restrict_labels(merge_faces(p, 2, 3), job.mid_a)
            if is_bounding_shape(pa, job.mid_a, job.cap):
                found.setdefault(canonical_form(pa), pa)
    return tried, sorted(found.items(), key=lambda kv: kv[0])


def combine_node(lb: ExhaustiveList, lc: ExhaustiveList, mid_a: Sequence[int], mid_b: Sequence[int],
                 mid_c: Sequence[int], t: TopoComplex, cap: int, edge_bound: int, arc: int = -1,
                 max_states: int = DEFAULT_MAX_STATES, workers: int = 1,
                 prune: bool = True) -> Tuple[ExhaustiveList, int]:
    """Exhaustive list for the parent arc from the lists of its two children.

    Returns the list and the number of labelled candidates examined.
    ``prune=False`` skips the face-signature filter (for cross-checks).
    """
    out = ExhaustiveList(arc)
    if not len(lb) or not len(lc):
        return out, 0
    labels = tuple(sorted(set(mid_b) | set(mid_c)))
    skel = _skeletons(t, len(labels), edge_bound, max_states)
    sigs_b = frozenset(label_signature(p, 2, mid_b) for p in lb.items())
    sigs_c = frozenset(label_signature(p, 2, mid_c) for p in lc.items())
    args = (labels, tuple(sorted(mid_a)), tuple(sorted(mid_b)), tuple(sorted(mid_c)), lb.keys(), lc.keys(),
            sigs_b, sigs_c, cap, max_states, prune)
    chunk = max(1, len(skel) // (4 * max(1, workers)))
    jobs = [_Job(skel[i:i + chunk], *args) for i in range(0, len(skel), chunk)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_job, jobs))
    else:
        results = [_run_job(j) for j in jobs]
    tried = sum(n for n, _ in results)
    if tried > max_states:
        raise CapError(f"node candidates above {max_states} labelled maps")
    for _, found in results:
        for _, p in found:
            out.add(p)
    return out, tried


def direct_bounding_graphs(t: TopoComplex, galpha, vertex_label: Dict[str, int], mid: Sequence[int],
                           bound: int, max_states: int = DEFAULT_MAX_STATES) -> ExhaustiveList:
    """Reference list by brute force: every labelled map the oracle says ``galpha`` respects."""
    from ..oracle import respects_check

    out = ExhaustiveList(-1)
    mid_names = {v: lab for v, lab in vertex_label.items() if lab in set(mid)}
    for m in _skeletons(t, len(mid), bound, max_states):
        for p in labellings(m, mid, (0, 1, 2)):
            if respects_check(galpha, p, mid_names):
                out.add(p)
    return out
