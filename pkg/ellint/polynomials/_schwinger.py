"""
Schwinger-parameter integral ∫_{[ε,L]^E} Π_e (dt_e/4π) · 1/P_Γ(t).
"""
import logging
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import logsumexp

from ellint.exceptions import QuadratureFailure, ValidationError
from ellint.graphs import DecoratedGraph
from ellint.polynomials._matrix import _require_connected, incidence, spanning_trees
from ellint.propagator import RegularizationWindow

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SchwingerIntegral:
    """Value of :func:`schwinger_integral` with its estimated absolute error."""

    value: float
    err: float
    n_evaluations: int

    def __float__(self):
        return self.value


def _composite_rule(low: float, high: float, n_panels: int, n_nodes: int):
    x, w = leggauss(n_nodes)
    edges = np.linspace(low, high, n_panels + 1)
    half = np.diff(edges) / 2
    mid = (edges[:-1] + edges[1:]) / 2
    nodes = (mid[:, None] + half[:, None] * x).ravel()
    weights = (half[:, None] * w).ravel()
    return nodes, weights


def _tensor_sum(integrand, nodes, weights, dim, chunk=1 << 18):
    shape = (nodes.size,) * dim
    total = nodes.size**dim
    acc = 0.0
    for start in range(0, total, chunk):
        idx = np.unravel_index(np.arange(start, min(start + chunk, total)), shape)
        s = np.stack([nodes[i] for i in idx], axis=1)
        w = np.prod(np.stack([weights[i] for i in idx], axis=1), axis=1)
        acc += np.dot(w, integrand(s))
    return acc


def schwinger_integral(
    g: DecoratedGraph,
    window: RegularizationWindow,
    tol: float = 1e-8,
    panel_width: float = 1.0,
    max_points: int = 20_000_000,
) -> SchwingerIntegral:
    """
    Convergent Schwinger-parameter integral of a connected graph.

    In log coordinates t_e = e^{s_e} the integrand
    exp(Σ s_e − log Σ_T exp(Σ_{e∉T} s_e)) / (4π)^E is smooth, so a tensor
    product of composite Gauss-Legendre panels of width ``panel_width`` is
    refined (4, 8, 16, ... nodes per panel) until two successive rules agree
    to ``tol`` relative to the value.

    Parameters
    ----------
    g : DecoratedGraph
        Connected, without self-loops.
    window : RegularizationWindow
        Integration box [ε, L] in every t_e.
    tol : float, optional
        Relative accuracy target. Default is 1e-8.
    panel_width : float, optional
        Width of a Gauss-Legendre panel in log t. Default is 1.
    max_points : int, optional
        Largest tensor grid attempted. Default is 2e7.

    Returns
    -------
    result : SchwingerIntegral

    Raises
    ------
    QuadratureFailure
        If the refinement reaches ``max_points`` without meeting ``tol``.
    """
    if not isinstance(window, RegularizationWindow):
        raise ValidationError(f"expected a RegularizationWindow, got {type(window).__name__}")
    incidence(g)
    _require_connected(g)
    E = g.n_edges
    if E == 0:
        return SchwingerIntegral(1.0, 0.0, 0)
    trees = spanning_trees(g)
    complement = np.ones((len(trees), E))
    for row, tree in enumerate(trees):
        complement[row, list(tree)] = 0.0

    def integrand(s):
        return np.exp(s.sum(axis=1) - logsumexp(s @ complement.T, axis=1)) / (4 * np.pi) ** E

    low, high = np.log(window.eps), np.log(window.L)
    n_panels = max(1, int(np.ceil((high - low) / panel_width)))
    previous, n_nodes, evaluations = None, 4, 0
    while True:
        size = (n_panels * n_nodes) ** E
        if size > max_points:
            raise QuadratureFailure(
                f"Schwinger integral did not reach tol={tol} within {max_points} points"
                + ("" if previous is None else f" (last estimate {previous:.12g})")
            )
        nodes, weights = _composite_rule(low, high, n_panels, n_nodes)
        value = _tensor_sum(integrand, nodes, weights, E)
        evaluations += size
        logger.debug("Schwinger rule with %d nodes/panel: %.15g", n_nodes, value)
        if previous is not None:
            err = abs(value - previous)
            if err <= tol * max(abs(value), 1e-300):
                return SchwingerIntegral(float(value), float(err), evaluations)
        previous, n_nodes = value, 2 * n_nodes
