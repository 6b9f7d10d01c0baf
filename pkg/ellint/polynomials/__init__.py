from ._collapse import (
    FlatCollapseResult,
    FlatTestFunction,
    RationalConstant,
    a_constant,
    a_constant_quadrature,
    flat_collapse_check,
)
from ._matrix import (
    BasedGraphMatrix,
    CutSet,
    cuts,
    deletion_contraction_residual,
    edge_coeff,
    edge_coeff_bound,
    graph_matrix,
    incidence,
    inverse_via_cuts,
    kirchhoff_det,
    schwinger_vector,
    spanning_trees,
    tree_polynomial,
)
from ._schwinger import SchwingerIntegral, schwinger_integral

__all__ = [
    "BasedGraphMatrix",
    "CutSet",
    "FlatCollapseResult",
    "FlatTestFunction",
    "RationalConstant",
    "SchwingerIntegral",
    "a_constant",
    "a_constant_quadrature",
    "cuts",
    "deletion_contraction_residual",
    "edge_coeff",
    "edge_coeff_bound",
    "flat_collapse_check",
    "graph_matrix",
    "incidence",
    "inverse_via_cuts",
    "kirchhoff_det",
    "schwinger_integral",
    "schwinger_vector",
    "spanning_trees",
    "tree_polynomial",
]
