from . import families
from .families import (
    RandomGraphs,
    banana,
    connected_multigraphs,
    cycle,
    disjoint_union,
    edgeless,
    load_example,
    path,
    self_loop,
    single_edge,
    star,
    triangle,
)

__all__ = [
    "families",
    "RandomGraphs",
    "banana",
    "connected_multigraphs",
    "cycle",
    "disjoint_union",
    "edgeless",
    "load_example",
    "path",
    "self_loop",
    "single_edge",
    "star",
    "triangle",
]
