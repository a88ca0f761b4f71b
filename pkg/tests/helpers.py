"""Independent reference computations used to freeze expected values."""

from itertools import permutations

from artifact.graph_core import Graph


def graph(pairs, extra=()):
    vs = {x for p in pairs for x in p} | set(extra)
    return Graph.build(vs, [(f"e{i}", u, v) for i, (u, v) in enumerate(pairs)])


def rooted_trees(items):
    """Every rooted binary tree with the given leaves, as nested pairs."""
    items = list(items)
    if len(items) == 1:
        yield items[0]
        return
    first, rest = items[0], items[1:]
    # split rest into the part that goes with ``first``; unordered children
    n = len(rest)
    for mask in range(1 << n):
        left = [first] + [rest[i] for i in range(n) if mask >> i & 1]
        right = [rest[i] for i in range(n) if not mask >> i & 1]
        if not right:
            continue
        for a in rooted_trees(left):
            for b in rooted_trees(right):
                yield (a, b)


def _leaves(t):
    return [t] if not isinstance(t, tuple) else _leaves(t[0]) + _leaves(t[1])


def brute_branchwidth(g: Graph) -> int:
    """Minimum over all branch decompositions of the largest middle set."""
    ends = g.edge_map()

    def mid(side):
        inside = {x for e in side for x in ends[e]}
        outside = {x for e in ends if e not in side for x in ends[e]}
        return len(inside & outside)

    def subtrees(t):
        yield t
        if isinstance(t, tuple):
            yield from subtrees(t[0])
            yield from subtrees(t[1])

    best = None
    for t in rooted_trees(sorted(ends)):
        w = max(mid(set(_leaves(s))) for s in subtrees(t))
        best = w if best is None else min(best, w)
    return best


def brute_isomorphic(g1: Graph, g2: Graph) -> bool:
    if (g1.n_vertices, g1.n_edges) != (g2.n_vertices, g2.n_edges):
        return False

    def multiset(g, f):
        return sorted(tuple(sorted((f[u], f[v]))) for _, u, v in g.edges)

    target = multiset(g2, {v: v for v in g2.vertices})
    for perm in permutations(g2.vertices):
        f = dict(zip(g1.vertices, perm))
        if multiset(g1, f) == target:
            return True
    return False


def relabel_map(m, rng):
    """An isomorphic copy of ``m``: edges, ends, sides, vertices, faces,
    components and segments renumbered, segment traces possibly reversed."""
    from dataclasses import replace

    ne = m.n_edges
    perm = list(range(ne))
    rng.shuffle(perm)
    flip_end = [rng.random() < 0.5 for _ in range(ne)]
    flip_side = [rng.random() < 0.5 for _ in range(ne)]

    def phi(f):
        i, end, side = f >> 2, (f >> 1) & 1, f & 1
        return 4 * perm[i] + 2 * (end ^ flip_end[i]) + (side ^ flip_side[i])

    nv = len(m.vertices)
    vperm = list(range(nv))
    rng.shuffle(vperm)
    vinv = {new: old for old, new in enumerate(vperm)}
    cperm = list(range(len(m.components)))
    rng.shuffle(cperm)
    cinv = {new: old for old, new in enumerate(cperm)}

    n_flags = m.n_flags
    tau1 = [0] * n_flags
    fv = [0] * n_flags
    for f in range(n_flags):
        tau1[phi(f)] = phi(m.tau1[f])
        fv[phi(f)] = vperm[m.flag_vertex[f]]
    kinds = [None] * ne
    names = [None] * ne
    for i in range(ne):
        kinds[perm[i]] = m.edge_kind[i]
        names[perm[i]] = m.edge_name[i]
    verts = []
    for new in range(nv):
        r = m.vertices[vinv[new]]
        verts.append(replace(r, comp=None if r.comp is None else cperm[r.comp]))

    def walk(a):
        return phi(a) if isinstance(a, int) else ("v", vperm[a[1]])

    faces = [replace(F, comp=cperm[F.comp], walks=tuple(walk(a) for a in F.walks)) for F in m.faces]
    rng.shuffle(faces)
    segs = []
    for tr in m.segments:
        t2 = [vperm[x] if j % 2 == 0 else x for j, x in enumerate(tr)]
        if rng.random() < 0.5:
            t2 = t2[::-1]
        segs.append(tuple(t2))
    rng.shuffle(segs)
    comps = [m.components[cinv[new]] for new in range(len(m.components))]
    return replace(m, components=tuple(comps), vertices=tuple(verts), flag_vertex=tuple(fv), tau1=tuple(tau1),
                   edge_kind=tuple(kinds), edge_name=tuple(names), faces=tuple(faces), segments=tuple(segs))


def has_proper_cellular_embedding(g, t):
    """Enumeration oracle: some proper cellular map on ``t`` carries a graph isomorphic to ``g``."""
    from artifact.graph_core import graph_isomorphic
    from artifact.maps import enumerate_maps, is_cellular, is_proper
    return any(is_proper(m) and is_cellular(m) and graph_isomorphic(m.abstract_graph(), g)
               for m in enumerate_maps(t, g.n_vertices, g.n_edges))
