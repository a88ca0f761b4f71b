import random
from dataclasses import replace
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact import corpus
from artifact.complex_core import SurfaceComponent, TopoComplex, are_homeomorphic, to_topological
from artifact.graph_core import ParseError
from artifact.maps import (add_isolated_vertex, base_map, canonical_form, cover_all, dumps_map, has_monogon_or_bigon,
                           enumerate_maps, enumerate_proper_embeddings, insert_edge_all, is_cellular, is_proper,
                           loads_map, map_isomorphic, underlying_complex, underlying_complex_by_removal, validate)
from helpers import relabel_map

SPHERE = TopoComplex((SurfaceComponent(True, 0),))
TORUS = TopoComplex((SurfaceComponent(True, 2),))


@lru_cache(maxsize=None)
def maps_on(name, k):
    return tuple(enumerate_proper_embeddings(to_topological(corpus.COMPLEXES[name]()), k))


def loops(t):
    m = add_isolated_vertex(base_map(t), 0)
    return insert_edge_all(m, len(m.faces) - 1, "e0")


def sphere_loop():
    (m,) = [x for x in loops(SPHERE) if len(x.faces) == 2]
    return m


# enumeration

@pytest.mark.parametrize("name,counts", [
    ("sphere", [1, 3, 12, 80]),
    ("lone_segment", [0, 0, 2, 5]),
    ("torus", [1, 4, 33]),
    ("projective_plane", [1, 4, 29]),
    ("pinched_spheres", [0, 2, 21]),
    ("sphere_with_segment", [0, 0, 5, 65]),
])
def test_enumeration_counts(name, counts):
    assert [len(maps_on(name, k)) for k in range(len(counts))] == counts


def test_sphere_k1_classes():
    shapes = sorted((m.n_graph_vertices(), m.n_graph_edges(), len(m.faces)) for m in maps_on("sphere", 1))
    assert shapes == [(0, 0, 1), (1, 0, 1), (1, 1, 2)]


def test_lone_segment_needs_two_vertices():
    assert maps_on("lone_segment", 1) == ()


def test_torus_no_cellular_with_one_edge():
    ms = maps_on("torus", 1)
    assert not any(is_cellular(m) for m in ms)
    assert any(m.n_graph_edges() == 1 for m in ms)


@pytest.mark.parametrize("name", ["sphere", "torus", "projective_plane", "sphere_with_segment",
                                  "pinched_spheres", "lone_segment"])
def test_enumerated_maps_are_valid(name):
    t = to_topological(corpus.COMPLEXES[name]())
    for m in maps_on(name, 2):
        assert validate(m) == [] and is_proper(m)
        assert are_homeomorphic(underlying_complex(m), t, keep_marks=True)
        assert are_homeomorphic(underlying_complex_by_removal(m), t, keep_marks=True)


def test_enumeration_is_canonically_sorted():
    ms = maps_on("sphere", 2)
    keys = [canonical_form(m) for m in ms]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)


def test_enumerate_maps_separate_bounds():
    ms = enumerate_maps(SPHERE, 1, 3)
    assert max(m.n_graph_edges() for m in ms) == 3
    assert max(m.n_graph_vertices() for m in ms) == 1


# validation

def test_sphere_loop_valid_and_cellular():
    m = sphere_loop()
    assert validate(m) == [] and is_proper(m) and is_cellular(m)
    assert underlying_complex(m) == SPHERE


def test_face_genus_violation():
    m = sphere_loop()
    faces = list(m.faces)
    faces[0] = replace(faces[0], genus=2)
    assert any("Euler" in v or "genus" in v for v in validate(replace(m, faces=tuple(faces))))


def test_identifying_regular_vertex_is_a_violation():
    m = next(x for x in maps_on("lone_segment", 3) if len(x.segments[0]) > 3)
    inner = m.segments[0][2]
    verts = tuple(replace(r, point="a") if v == inner else r for v, r in enumerate(m.vertices))
    assert any("non-singular" in v for v in validate(replace(m, vertices=verts)))


def test_two_points_pinched_is_valid():
    m = add_isolated_vertex(add_isolated_vertex(base_map(SPHERE), 0), 0)
    verts = tuple(replace(r, point="p") for r in m.vertices)
    assert validate(replace(m, vertices=verts)) == []


def test_empty_sphere_proper_not_cellular():
    m = base_map(SPHERE)
    assert validate(m) == [] and is_proper(m) and not is_cellular(m)


def test_uncovered_singular_point_not_proper():
    m = base_map(to_topological(corpus.lone_segment()))
    assert not is_proper(m) and is_proper(cover_all(m))


def test_edge_along_segment():
    ms = maps_on("lone_segment", 2)
    full = [m for m in ms if m.n_graph_edges() == 1]
    assert len(full) == 1
    assert underlying_complex(full[0]) == to_topological(corpus.lone_segment())


# monogons and bigons

def test_sphere_loop_is_monogon():
    assert has_monogon_or_bigon(sphere_loop())


def test_sphere_edge_is_not_a_bigon():
    # one face bounded by the same edge twice is a disk of degree two
    (edge,) = [m for m in maps_on("sphere", 2) if m.n_graph_vertices() == 2 and m.n_graph_edges() == 1
               and m.flag_vertex[0] != m.flag_vertex[2]]
    assert has_monogon_or_bigon(edge)


def test_nonseparating_torus_loop_clean():
    b = next(m for m in loops(TORUS) if len(m.faces) == 1)
    assert not has_monogon_or_bigon(b)


def test_projective_loop_is_bigon():
    pp = TopoComplex((SurfaceComponent(False, 1),))
    one_sided = [m for m in loops(pp) if len(m.faces) == 1]
    assert one_sided and all(has_monogon_or_bigon(m) for m in one_sided)


@pytest.mark.parametrize("orientable,g,v,e", [(True, 0, 2, 3), (False, 1, 2, 3), (True, 2, 1, 4), (False, 2, 1, 3)])
def test_nogon_edge_bound(orientable, g, v, e):
    for m in enumerate_maps(TopoComplex((SurfaceComponent(orientable, g),)), v, e):
        if not has_monogon_or_bigon(m):
            assert m.n_graph_edges() <= max(0, 3 * g + 3 * m.n_graph_vertices() - 6)


def test_torus_triangulation_reaches_bound():
    ms = [m for m in enumerate_maps(TORUS, 1, 3) if not has_monogon_or_bigon(m) and m.n_graph_edges() == 3]
    assert ms and all(is_cellular(m) for m in ms)


# canonical forms and isomorphism

def test_relabelled_loop_same_form():
    m = sphere_loop()
    m2 = relabel_map(m, random.Random(3))
    assert canonical_form(m) == canonical_form(m2) and map_isomorphic(m, m2)


def test_loop_vs_edge():
    (edge,) = [m for m in maps_on("sphere", 2) if m.n_graph_vertices() == 2 and m.n_graph_edges() == 1
               and m.flag_vertex[0] != m.flag_vertex[2]]
    assert canonical_form(sphere_loop()) != canonical_form(edge)
    assert not map_isomorphic(sphere_loop(), edge)


def test_face_labels_matter():
    m = sphere_loop()
    faces = list(m.faces)
    faces[0] = replace(faces[0], label=1)
    m2 = replace(m, faces=tuple(faces))
    assert not map_isomorphic(m, m2) and canonical_form(m) != canonical_form(m2)


def test_torus_loops_contractible_vs_not():
    ls = loops(TORUS)
    kinds = {(len(m.faces), tuple(sorted((f.genus, len(f.walks)) for f in m.faces))) for m in ls}
    # contractible: a disk and a one-holed torus; non-separating: one annulus
    assert (2, ((0, 1), (2, 1))) in kinds and (1, ((0, 2),)) in kinds
    a = next(m for m in ls if len(m.faces) == 2)
    b = next(m for m in ls if len(m.faces) == 1)
    assert not map_isomorphic(a, b) and canonical_form(a) != canonical_form(b)


def test_mirror_image_same_form():
    # reflecting every edge side is the mirror image
    rng = random.Random(0)
    for m in maps_on("torus", 2):
        mirror = replace(m, tau1=tuple(m.tau1[f ^ 1] ^ 1 for f in range(m.n_flags)),
                         faces=tuple(replace(F, walks=tuple(a ^ 1 if isinstance(a, int) else a for a in F.walks))
                                     for F in m.faces))
        assert validate(mirror) == []
        assert canonical_form(mirror) == canonical_form(m)
        assert map_isomorphic(mirror, relabel_map(m, rng))


POOL = [m for name in ("sphere", "torus", "projective_plane", "pinched_spheres", "sphere_with_segment")
        for m in maps_on(name, 2)]


@settings(max_examples=150, deadline=None)
@given(st.integers(0, len(POOL) - 1), st.integers(0, len(POOL) - 1), st.integers(0, 2 ** 32))
def test_canonical_form_iff_isomorphic(i, j, seed):
    rng = random.Random(seed)
    a, b = relabel_map(POOL[i], rng), relabel_map(POOL[j], rng)
    assert validate(a) == [] and validate(b) == []
    assert (canonical_form(a) == canonical_form(b)) == map_isomorphic(a, b) == (i == j)


# exchange format

@pytest.mark.parametrize("name", ["sphere", "projective_plane", "lone_segment", "sphere_with_segment"])
def test_map_round_trip(name):
    for m in maps_on(name, 2):
        text = dumps_map(m)
        back = loads_map(text)
        assert back == m and dumps_map(back) == text


def test_map_rejects_bad_tau0():
    import json
    d = json.loads(dumps_map(sphere_loop()))
    d["tau0"] = list(range(len(d["tau0"])))
    with pytest.raises(ParseError):
        loads_map(json.dumps(d))
    with pytest.raises(ParseError):
        loads_map("{not json")
