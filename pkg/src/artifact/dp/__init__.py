"""Partitioning graphs, bounding graphs and the list dynamic program."""

from .bounding import (DEFAULT_MAX_STATES, ExhaustiveList, combine_node, direct_bounding_graphs,
                       leaf_bounding_graphs, sparse_bound)
from .decide import (EMBEDDABLE, NO_SPARSE, NOT_EMBEDDABLE, UNKNOWN_CAP, Verdict, decide_embeddable_bounded_bw,
                     decide_sparse_cellular)
from .partition import PartitioningGraph, merge_faces, minus, partitioning_graph, restrict_labels

__all__ = [
    "DEFAULT_MAX_STATES", "ExhaustiveList", "combine_node", "direct_bounding_graphs", "leaf_bounding_graphs",
    "sparse_bound", "EMBEDDABLE", "NO_SPARSE", "NOT_EMBEDDABLE", "UNKNOWN_CAP", "Verdict",
    "decide_embeddable_bounded_bw", "decide_sparse_cellular", "PartitioningGraph", "merge_faces", "minus",
    "partitioning_graph", "restrict_labels",
]
