"""
Incidence matrix, graph matrix and the matrix-tree / cut-set identities.

For a graph with vertices ``v(1), ..., v(V)`` and a base vertex ``v•`` the graph
matrix is

.. math::

    M_\\Gamma(t)_{ij} = \\sum_e \\rho_{v(i),e} \\frac{1}{t_e} \\rho_{v(j),e},

over the vertices different from the base. Its determinant is the weighted
spanning tree sum and its inverse is a weighted sum over cut sets.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import FrozenSet, Hashable, Iterable, List, Tuple

import numpy as np
from networkx.utils import UnionFind

from ellint.exceptions import (
    DisconnectedError,
    InvalidEdgeIndexError,
    SeedsOverlapError,
    SelfLoopPresentError,
    ValidationError,
)
from ellint.graphs import DecoratedGraph, classify, contract_edge, delete_edge
from ellint.utils import _process_parameter

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BasedGraphMatrix:
    """
    Graph matrix with its base vertex.

    Attributes
    ----------
    base : hashable
        Excluded vertex.
    vertices : tuple
        Row/column labels, the non-base vertices in vertex order.
    matrix : ndarray of shape (V - 1, V - 1)
    t : ndarray of shape (E,)
        Schwinger vector used.
    """

    base: Hashable
    vertices: Tuple[Hashable, ...]
    matrix: np.ndarray
    t: np.ndarray


@dataclass(frozen=True)
class CutSet:
    """Edges whose removal leaves exactly the two trees spanning ``side1`` and ``side2``."""

    edges: Tuple[int, ...]
    side1: FrozenSet[Hashable]
    side2: FrozenSet[Hashable]


def schwinger_vector(g: DecoratedGraph, t) -> np.ndarray:
    """
    Validate a Schwinger vector.

    Parameters
    ----------
    g : DecoratedGraph
    t : float, sequence of float or dict of edge index to float
        Broadcast from a scalar.

    Returns
    -------
    t : ndarray of shape (n_edges,)
    """
    t = np.asarray(_process_parameter("t", t, 1.0, g.n_edges), dtype=float)
    if np.any(~np.isfinite(t)) or np.any(t <= 0):
        raise ValidationError(f"Schwinger times must be positive, got {t}")
    return t


def _base(g: DecoratedGraph, base) -> Hashable:
    if g.n_vertices == 0:
        raise ValidationError("graph has no vertices")
    if base is None:
        return g.vertices[-1]
    g.vertex_index(base)
    return base


def _require_connected(g: DecoratedGraph):
    if not classify(g).connected:
        raise DisconnectedError("graph must be connected")


def incidence(g: DecoratedGraph) -> np.ndarray:
    """
    Incidence matrix ρ with ρ[v, e] = +1 if h(e) = v, −1 if t(e) = v.

    Returns
    -------
    rho : ndarray of int, shape (n_vertices, n_edges)

    Raises
    ------
    SelfLoopPresentError
    """
    rho = np.zeros((g.n_vertices, g.n_edges), dtype=int)
    for i, e in enumerate(g.edges):
        if e.is_self_loop:
            raise SelfLoopPresentError(f"edge {i} is a self-loop")
        rho[g.vertex_index(e.head), i] = 1
        rho[g.vertex_index(e.tail), i] = -1
    return rho


def _reduced_incidence(g: DecoratedGraph, base) -> Tuple[np.ndarray, Tuple]:
    rho = incidence(g)
    keep = [i for i, v in enumerate(g.vertices) if v != base]
    return rho[keep], tuple(g.vertices[i] for i in keep)


def graph_matrix(g: DecoratedGraph, t, base=None) -> BasedGraphMatrix:
    """
    Graph matrix M_Γ(t) over the non-base vertices.

    Parameters
    ----------
    g : DecoratedGraph
        Connected, without self-loops.
    t : Schwinger vector
    base : hashable, optional
        Base vertex. Default is the last vertex.
    """
    base = _base(g, base)
    t = schwinger_vector(g, t)
    rho, rows = _reduced_incidence(g, base)
    _require_connected(g)
    matrix = (rho / t) @ rho.T
    return BasedGraphMatrix(base=base, vertices=rows, matrix=matrix, t=t)


def _is_forest(g: DecoratedGraph, edges) -> Tuple[bool, UnionFind]:
    forest = UnionFind(g.vertices)
    for i in edges:
        e = g.edges[i]
        if e.is_self_loop or forest[e.head] == forest[e.tail]:
            return False, forest
        forest.union(e.head, e.tail)
    return True, forest


def spanning_trees(g: DecoratedGraph) -> List[Tuple[int, ...]]:
    """
    Every spanning tree, as sorted tuples of edge indices in lexicographic order.

    Self-loops never belong to a tree.

    Raises
    ------
    DisconnectedError
    """
    _require_connected(g)
    candidates = [i for i, e in enumerate(g.edges) if not e.is_self_loop]
    trees = []
    for subset in itertools.combinations(candidates, g.n_vertices - 1):
        acyclic, _ = _is_forest(g, subset)
        if acyclic:
            trees.append(subset)
    logger.debug("%d spanning trees on %d edges", len(trees), g.n_edges)
    return trees


def kirchhoff_det(g: DecoratedGraph, t, base=None) -> float:
    """
    det M_Γ(t), equal to Σ_T Π_{e∈T} 1/t_e by the matrix-tree theorem.

    Examples
    --------
    >>> from ellint.data import banana
    >>> kirchhoff_det(banana(2), [1.0, 2.0])
    1.5
    """
    bgm = graph_matrix(g, t, base)
    if bgm.matrix.size == 0:
        return 1.0
    return float(np.linalg.det(bgm.matrix))


def tree_polynomial(g: DecoratedGraph, t, allow_disconnected: bool = False) -> float:
    """
    P_Γ(t) = Σ_T Π_{e∉T} t_e over spanning trees T.

    Parameters
    ----------
    allow_disconnected : bool, optional
        Return 0 (empty sum) for disconnected graphs instead of raising.
    """
    t = schwinger_vector(g, t)
    if allow_disconnected and not classify(g).connected:
        return 0.0
    trees = spanning_trees(g)
    mask = np.ones((len(trees), g.n_edges), dtype=bool)
    for row, tree in enumerate(trees):
        mask[row, list(tree)] = False
    return float(np.sum(np.prod(np.where(mask, t, 1.0), axis=1)))


def deletion_contraction_residual(g: DecoratedGraph, t, e: int) -> float:
    """
    |P_Γ − P_{Γ/e} − t_e P_{Γ∖e}| for a non-self-loop edge ``e``.
    """
    t = schwinger_vector(g, t)
    if not 0 <= e < g.n_edges:
        raise InvalidEdgeIndexError(f"edge index {e} out of range")
    rest = np.delete(t, e)
    whole = tree_polynomial(g, t)
    contracted = tree_polynomial(contract_edge(g, e), rest)
    deleted = tree_polynomial(delete_edge(g, e), rest, allow_disconnected=True)
    return abs(whole - contracted - t[e] * deleted)


def _two_forests(g: DecoratedGraph) -> Iterable[Tuple[Tuple[int, ...], UnionFind]]:
    # acyclic with V - 2 edges means exactly two components
    candidates = [i for i, e in enumerate(g.edges) if not e.is_self_loop]
    for subset in itertools.combinations(candidates, g.n_vertices - 2):
        acyclic, forest = _is_forest(g, subset)
        if acyclic:
            yield subset, forest


def cuts(g: DecoratedGraph, side1_seed: Iterable, side2_seed: Iterable) -> List[CutSet]:
    """
    Cut(Γ; V₁, V₂): edge sets whose removal leaves two trees, one containing
    ``side1_seed`` and the other ``side2_seed``.

    Parameters
    ----------
    g : DecoratedGraph
    side1_seed, side2_seed : iterable of vertices
        Disjoint seed sets.

    Returns
    -------
    cuts : list of CutSet
        Ordered lexicographically by the complementary forest.
    """
    seed1, seed2 = frozenset(side1_seed), frozenset(side2_seed)
    for v in seed1 | seed2:
        g.vertex_index(v)
    if seed1 & seed2:
        raise SeedsOverlapError(f"seeds share vertices {sorted(map(str, seed1 & seed2))}")
    found = []
    for forest_edges, forest in _two_forests(g):
        roots = {}
        for v in g.vertices:
            roots.setdefault(forest[v], set()).add(v)
        a, b = (frozenset(s) for s in roots.values())
        if seed1 <= b and seed2 <= a:
            a, b = b, a
        if not (seed1 <= a and seed2 <= b):
            continue
        kept = set(forest_edges)
        found.append(
            CutSet(
                edges=tuple(i for i in range(g.n_edges) if i not in kept),
                side1=a,
                side2=b,
            )
        )
    return found


def inverse_via_cuts(g: DecoratedGraph, t, base=None) -> np.ndarray:
    """
    Inverse of the graph matrix from the cut-set formula

    .. math::

        (M_\\Gamma^{-1})_{ij} = \\frac{1}{P_\\Gamma(t)}
        \\sum_{C \\in Cut(\\Gamma; \\{v(i), v(j)\\}, \\{v_\\bullet\\})} \\prod_{e \\in C} t_e.
    """
    base = _base(g, base)
    t = schwinger_vector(g, t)
    incidence(g)
    _require_connected(g)
    rows = [v for v in g.vertices if v != base]
    position = {v: i for i, v in enumerate(rows)}
    inverse = np.zeros((len(rows), len(rows)))
    for forest_edges, forest in _two_forests(g):
        root = forest[base]
        side = [v for v in rows if forest[v] != root]
        weight = np.prod(np.delete(t, list(forest_edges)))
        idx = [position[v] for v in side]
        inverse[np.ix_(idx, idx)] += weight
    return inverse / tree_polynomial(g, t)


def _edge_coefficients(g: DecoratedGraph, t, base) -> np.ndarray:
    bgm = graph_matrix(g, t, base)
    rho, _ = _reduced_incidence(g, bgm.base)
    if bgm.matrix.size == 0:
        return np.zeros((g.n_edges, 0))
    return (rho.T @ np.linalg.inv(bgm.matrix)) / bgm.t[:, None]


def edge_coeff(g: DecoratedGraph, t, base, e: int, j: int) -> float:
    """
    (Σ_i ρ_{v(i),e} M⁻¹_{ij}) / t_e.

    Parameters
    ----------
    e : int
        Edge index.
    j : int
        Row of the graph matrix, counted from 1 over the non-base vertices.
    """
    coeffs = _edge_coefficients(g, t, base)
    if not 0 <= e < g.n_edges:
        raise InvalidEdgeIndexError(f"edge index {e} out of range")
    if not 1 <= j <= coeffs.shape[1]:
        raise ValidationError(f"j must lie in 1..{coeffs.shape[1]}, got {j}")
    return float(coeffs[e, j - 1])


def edge_coeff_bound(g: DecoratedGraph, t, base=None) -> float:
    """
    Largest |edge_coeff| over all edges and rows.

    Each coefficient is the share of a unit current injected at a vertex
    that flows through one edge, so the value is at most 1 and in
    particular within the bound of 2 used by the regulator estimates.
    """
    coeffs = _edge_coefficients(g, t, base)
    return float(np.max(np.abs(coeffs))) if coeffs.size else 0.0
