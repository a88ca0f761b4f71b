"""Fixture catalog of small complexes and graphs."""

from __future__ import annotations

from itertools import combinations
from typing import Dict

from .complex_core import SimplicialComplex2
from .graph_core import Graph


def _grid_surface(m: int, n: int, twist: bool) -> SimplicialComplex2:
    """m x n grid with the torus gluing, or the Klein gluing when ``twist``."""

    def v(i, j):
        if i >= m:
            i -= m
            if twist:
                j = (-j) % n
        return f"v{i}_{j % n}"

    tris = []
    for i in range(m):
        for j in range(n):
            a, b, c, d = v(i, j), v(i + 1, j), v(i, j + 1), v(i + 1, j + 1)
            tris += [(a, b, d), (a, c, d)]
    return SimplicialComplex2.build(triangles=tris)


def tetrahedron(prefix: str = "") -> SimplicialComplex2:
    return SimplicialComplex2.build(triangles=[[prefix + x for x in t] for t in combinations("abcd", 3)])


def octahedron() -> SimplicialComplex2:
    tris = []
    for top in ("n", "s"):
        for a, b in (("x", "y"), ("y", "X"), ("X", "Y"), ("Y", "x")):
            tris.append((top, a, b))
    return SimplicialComplex2.build(triangles=tris)


def torus7() -> SimplicialComplex2:
    tris = []
    for i in range(7):
        tris.append((f"t{i}", f"t{(i + 1) % 7}", f"t{(i + 3) % 7}"))
        tris.append((f"t{i}", f"t{(i + 2) % 7}", f"t{(i + 3) % 7}"))
    return SimplicialComplex2.build(triangles=tris)


def projective_plane6() -> SimplicialComplex2:
    raw = ["123", "134", "145", "156", "162", "235", "346", "452", "563", "624"]
    return SimplicialComplex2.build(triangles=[[f"p{c}" for c in t] for t in raw])


def klein_bottle() -> SimplicialComplex2:
    return _grid_surface(3, 4, twist=True)


def three_book() -> SimplicialComplex2:
    return SimplicialComplex2.build(triangles=[("a", "b", "c"), ("a", "b", "d"), ("a", "b", "e")])


def pinched_spheres() -> SimplicialComplex2:
    tris = [t for t in tetrahedron("l").triangles] + [t for t in tetrahedron("r").triangles]
    # glue vertex ra onto la
    tris = [tuple("la" if x == "ra" else x for x in t) for t in tris]
    return SimplicialComplex2.build(triangles=tris)


def sphere_with_segment() -> SimplicialComplex2:
    return SimplicialComplex2.build(edges=[("a", "z")], triangles=tetrahedron().triangles)


def lone_segment() -> SimplicialComplex2:
    return SimplicialComplex2.build(edges=[("a", "b")])


def disk() -> SimplicialComplex2:
    return SimplicialComplex2.build(triangles=[("a", "b", "c")])


def moebius() -> SimplicialComplex2:
    return SimplicialComplex2.build(triangles=[(f"m{i}", f"m{(i + 1) % 5}", f"m{(i + 2) % 5}") for i in range(5)])


def mixed_complex() -> SimplicialComplex2:
    """Two surfaces, two dangling segments and several kinds of singular point.

    A disk and a sphere share a vertex (boundary corner against cone), a
    second disk touches the first along a boundary vertex, one segment joins
    the two disks and another runs from the sphere back to the first disk.
    Five singular points, two isolated segments.
    """
    tris = [("a", "b", "c"), ("c", "d", "e")]
    tris += [tuple("b" if x == "sa" else x for x in t) for t in tetrahedron("s").triangles]
    edges = [("a", "e"), ("sb", "a")]
    return SimplicialComplex2.build(edges=edges, triangles=tris)


COMPLEXES = {
    "sphere": tetrahedron,
    "octahedron": octahedron,
    "torus": torus7,
    "projective_plane": projective_plane6,
    "klein_bottle": klein_bottle,
    "three_book": three_book,
    "pinched_spheres": pinched_spheres,
    "sphere_with_segment": sphere_with_segment,
    "lone_segment": lone_segment,
    "disk": disk,
    "moebius": moebius,
    "mixed": mixed_complex,
}


def _graph(vs, pairs) -> Graph:
    return Graph.build(vs, [(f"e{i}", u, v) for i, (u, v) in enumerate(pairs)])


def complete_graph(n: int, prefix: str = "") -> Graph:
    vs = [f"{prefix}{i}" for i in range(1, n + 1)]
    return _graph(vs, [(u, v) for u, v in combinations(vs, 2)])


def complete_bipartite(m: int, n: int) -> Graph:
    a = [f"a{i}" for i in range(1, m + 1)]
    b = [f"b{i}" for i in range(1, n + 1)]
    return _graph(a + b, [(u, v) for u in a for v in b])


def cycle(n: int) -> Graph:
    vs = [f"{i}" for i in range(1, n + 1)]
    return _graph(vs, [(vs[i], vs[(i + 1) % n]) for i in range(n)])


def petersen() -> Graph:
    outer = [f"o{i}" for i in range(5)]
    inner = [f"i{i}" for i in range(5)]
    es = [(outer[i], outer[(i + 1) % 5]) for i in range(5)]
    es += [(inner[i], inner[(i + 2) % 5]) for i in range(5)]
    es += [(outer[i], inner[i]) for i in range(5)]
    return _graph(outer + inner, es)


def two_k5() -> Graph:
    a, b = complete_graph(5, "x"), complete_graph(5, "y")
    return _graph(a.vertices + b.vertices, [(u, v) for _, u, v in a.edges + b.edges])


GRAPHS = {
    "K4": lambda: complete_graph(4),
    "K5": lambda: complete_graph(5),
    "K6": lambda: complete_graph(6),
    "K33": lambda: complete_bipartite(3, 3),
    "C4": lambda: cycle(4),
    "petersen": petersen,
    "K13": lambda: complete_bipartite(1, 3),
    "two_K5": two_k5,
}


def all_complexes() -> Dict[str, SimplicialComplex2]:
    return {k: f() for k, f in COMPLEXES.items()}


def all_graphs() -> Dict[str, Graph]:
    return {k: f() for k, f in GRAPHS.items()}
