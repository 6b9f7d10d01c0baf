from ._graph import (
    DecoratedGraph,
    Edge,
    GraphClass,
    build_graph,
    classify,
    contract_edge,
    cycle_matrix,
    delete_edge,
    first_betti,
    spanning_forest,
)
from ._io import (
    dumps_graph,
    graph_from_dict,
    graph_to_dict,
    parse_graph_file,
    write_graph_file,
)

__all__ = [
    "DecoratedGraph",
    "Edge",
    "GraphClass",
    "build_graph",
    "classify",
    "contract_edge",
    "cycle_matrix",
    "delete_edge",
    "first_betti",
    "spanning_forest",
    "dumps_graph",
    "graph_from_dict",
    "graph_to_dict",
    "parse_graph_file",
    "write_graph_file",
]
