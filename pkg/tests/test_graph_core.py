import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact import corpus
from artifact.graph_core import (CapError, Graph, ParseError, branchwidth, compute_branch_decomposition,
                                 dissolve_degree_two, graph_isomorphic, is_planar, middle_set, parse_graph,
                                 rotation_euler_characteristics, subdivide_edges, width)
from artifact.oracle import min_euler_genus
from helpers import brute_branchwidth, brute_isomorphic, graph

TRIANGLE = [("a", "b"), ("b", "c"), ("c", "a")]


# parsing

def test_parse_simple_path():
    g = parse_graph("a b\nb c")
    assert g.n_vertices == 3 and g.n_edges == 2


def test_parse_loop():
    g = parse_graph("a a")
    assert g.vertices == ("a",) and g.edges == (("e0", "a", "a"),)


def test_parse_parallel_edges():
    g = parse_graph("a b\na b")
    assert g.n_edges == 2 and g.edge_map() == {"e0": ("a", "b"), "e1": ("a", "b")}


def test_parse_node_and_comment():
    g = parse_graph("# header\nnode z\na b  # trailing\n")
    assert g.vertices == ("a", "b", "z") and g.n_edges == 1


@pytest.mark.parametrize("text,line", [("a b c", 1), ("a b\n-x y", 2), ("node", 1)])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError, match=f"line {line}"):
        parse_graph(text)


def test_graph_rejects_undeclared_endpoint():
    with pytest.raises(ValueError):
        Graph(("a",), (("e0", "a", "b"),))


@pytest.mark.parametrize("name", sorted(corpus.GRAPHS))
def test_text_round_trip(name):
    g = corpus.GRAPHS[name]()
    text = g.to_text()
    assert parse_graph(text).to_text() == text
    assert graph_isomorphic(parse_graph(text), g)


# middle sets and width

def _arc_of(bd, eid):
    return next(x for x, e in bd.leaf_edge.items() if e == eid)


def test_middle_set_triangle_leaf():
    g = graph(TRIANGLE)
    bd = compute_branch_decomposition(g, "exact")
    assert middle_set(bd, g, _arc_of(bd, "e0")) == {"a", "b"}


def test_middle_set_path_leaf():
    g = graph([("a", "b"), ("b", "c")])
    bd = compute_branch_decomposition(g, "exact")
    assert middle_set(bd, g, _arc_of(bd, "e0")) == {"b"}


def test_middle_set_top_arc_empty():
    g = corpus.GRAPHS["K4"]()
    bd = compute_branch_decomposition(g, "exact")
    assert middle_set(bd, g, bd.top) == frozenset()


def test_middle_set_unknown_arc():
    g = graph(TRIANGLE)
    bd = compute_branch_decomposition(g, "exact")
    with pytest.raises(KeyError):
        middle_set(bd, g, 999)


@pytest.mark.parametrize("pairs,expected", [
    ([("a", "b")], 0),
    ([("a", "b"), ("b", "c")], 1),
    (TRIANGLE, 2),
])
def test_width_small(pairs, expected):
    g = graph(pairs)
    assert width(compute_branch_decomposition(g, "exact"), g) == expected


def test_k4_exact_width():
    g = corpus.GRAPHS["K4"]()
    bd = compute_branch_decomposition(g, "exact")
    assert bd.validate(g) == [] and width(bd, g) == 3


def test_exact_refuses_large():
    with pytest.raises(CapError):
        compute_branch_decomposition(corpus.GRAPHS["petersen"](), "exact", cap=9)


@pytest.mark.parametrize("name", ["K5", "K33", "petersen", "two_K5", "K6"])
def test_heuristic_is_valid(name):
    g = corpus.GRAPHS[name]()
    bd = compute_branch_decomposition(g, "heuristic")
    assert bd.validate(g) == []
    assert len(bd.postorder()) == 2 * g.n_edges - 1


small_graphs = st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=6).map(
    lambda es: graph([(f"v{u}", f"v{v}") for u, v in es]))


@settings(max_examples=60, deadline=None)
@given(small_graphs)
def test_exact_width_matches_brute_force(g):
    assert branchwidth(g) == brute_branchwidth(g)


@settings(max_examples=40, deadline=None)
@given(small_graphs)
def test_decompositions_are_valid(g):
    for mode in ("exact", "heuristic"):
        bd = compute_branch_decomposition(g, mode)
        assert bd.validate(g) == []
        assert width(bd, g) >= branchwidth(g)


@settings(max_examples=30, deadline=None)
@given(small_graphs)
def test_branchwidth_subdivision_invariant(g):
    if branchwidth(g) >= 2 and g.n_edges <= 4:
        assert branchwidth(subdivide_edges(g, 1)) == branchwidth(g)


# subdivision and dissolution

def test_subdivide_single_edge():
    g = subdivide_edges(graph([("a", "b")]), 2)
    assert g.n_edges == 3 and graph_isomorphic(g, graph([("a", "x"), ("x", "y"), ("y", "b")]))


def test_dissolve_path():
    assert graph_isomorphic(dissolve_degree_two(graph([("a", "b"), ("b", "c"), ("c", "d")])), graph([("a", "d")]))


def test_dissolve_cycle_keeps_loop():
    h = dissolve_degree_two(graph(TRIANGLE))
    assert h.n_vertices == 1 and h.n_edges == 1


@pytest.mark.parametrize("name", ["K4", "K5", "K33", "petersen", "K13"])
@pytest.mark.parametrize("times", [1, 3])
def test_subdivide_then_dissolve(name, times):
    g = corpus.GRAPHS[name]()
    assert graph_isomorphic(dissolve_degree_two(subdivide_edges(g, times)), g)


# planarity

@pytest.mark.parametrize("name,planar", [("C4", True), ("K4", True), ("K5", False), ("K33", False),
                                         ("K13", True), ("petersen", False)])
def test_is_planar(name, planar):
    ok, rot = is_planar(corpus.GRAPHS[name]())
    assert ok is planar
    if ok:
        assert all(chi == 2 for chi in rotation_euler_characteristics(corpus.GRAPHS[name](), rot))


def test_planar_witness_with_loops_and_parallels():
    g = graph([("a", "a"), ("a", "b"), ("a", "b")])
    ok, rot = is_planar(g)
    assert ok and rotation_euler_characteristics(g, rot) == [2]


@pytest.mark.parametrize("name", [n for n, f in corpus.GRAPHS.items() if f().n_edges <= 10])
def test_planar_agrees_with_genus(name):
    g = corpus.GRAPHS[name]()
    assert is_planar(g)[0] == (min_euler_genus(g) == 0)


# isomorphism

def test_k4_relabelled():
    a = corpus.GRAPHS["K4"]()
    b = graph([("w", "x"), ("w", "y"), ("w", "z"), ("x", "y"), ("x", "z"), ("y", "z")])
    assert graph_isomorphic(a, b)


def test_triangle_vs_path():
    assert not graph_isomorphic(graph(TRIANGLE), graph([("a", "b"), ("b", "c"), ("c", "d")]))


def test_loop_edge_vs_parallel():
    assert not graph_isomorphic(graph([("a", "a"), ("a", "b")]), graph([("a", "b"), ("a", "b")]))


@settings(max_examples=80, deadline=None)
@given(small_graphs, small_graphs)
def test_isomorphism_matches_brute_force(g1, g2):
    assert graph_isomorphic(g1, g2) == brute_isomorphic(g1, g2)
