"""Combinatorial maps: kernel, canonical forms, enumeration, file format."""

from .kernel import (CombinatorialMap, Component, Face, Vertex, add_isolated_vertex, base_map,
                     cover_all, has_monogon_or_bigon, insert_edge_all, is_cellular, is_proper, remove_edge, remove_vertex,
                     underlying_complex, underlying_complex_by_removal, validate)
from .canon import canonical_form, map_isomorphic
from .enumerate import enumerate_maps, enumerate_proper_embeddings
from .io import dumps_map, loads_map, map_from_json, map_to_json

__all__ = [
    "CombinatorialMap", "Component", "Face", "Vertex", "add_isolated_vertex", "base_map", "cover_all",
    "has_monogon_or_bigon", "insert_edge_all", "is_cellular", "is_proper", "remove_edge", "remove_vertex", "underlying_complex",
    "underlying_complex_by_removal", "validate", "canonical_form", "map_isomorphic",
    "enumerate_maps", "enumerate_proper_embeddings", "dumps_map", "loads_map", "map_from_json", "map_to_json",
]
