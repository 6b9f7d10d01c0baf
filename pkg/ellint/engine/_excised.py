"""
Direct integration of the ε → 0, L → ∞ propagators over a two-vertex component.

With the second vertex pinned at 0 the integrand f(z) = Π_e ±∂^{n_e}P_{0,∞}(z)
is meromorphic and doubly periodic with its only pole at z = 0. The principal
value over the disk |z| < r keeps only the constant Laurent coefficient, and the
integral over the rest of the period parallelogram follows from Stokes' theorem,
∫ f d²z = −(i/2)∮ z̄ f dz, as two straight sides and the circle |z| = r.
"""
import logging

import numpy as np

from ellint.exceptions import UnsupportedTopologyError
from ellint.graphs import DecoratedGraph
from ellint.modular._lattice import lattice_disk
from ellint.propagator import bcov_limit

logger = logging.getLogger(__name__)


def _integrand(g: DecoratedGraph, tau: complex):
    free = g.vertices[0]
    signs = [1 if e.head == free else -1 for e in g.edges]

    def f(z):
        value = np.ones(np.shape(z), dtype=complex)
        for s, e in zip(signs, g.edges):
            value *= s**e.n * bcov_limit(z, tau, e.n)
        return value

    return f


def _boundary(f, tau: complex, n: int) -> complex:
    """−(i/2)[−τ̄ ∫_{c}^{c+1} f dz + ∫_{c}^{c+τ} f dz] for the centred parallelogram."""
    corner = -(1 + tau) / 2
    nodes = (np.arange(n) + 0.5) / n
    along_one = f(corner + nodes).mean()
    along_tau = f(corner + nodes * tau).mean() * tau
    return -0.5j * (-np.conj(tau) * along_one + along_tau)


def _disk_and_circle(f, radius: float, n: int) -> complex:
    theta = 2 * np.pi * np.arange(n) / n
    z = radius * np.exp(1j * theta)
    values = f(z)
    disk = np.pi * radius**2 * values.mean()
    # +(i/2)∮ z̄ f dz, dz = iz dθ
    circle = 0.5j * np.sum(np.conj(z) * values * 1j * z) * (2 * np.pi / n)
    return disk + circle


def shortest_period(tau: complex) -> float:
    _, _, lam = lattice_disk(tau, 1.0)
    return float(np.min(np.abs(lam[lam != 0])))


def excised_integral(g: DecoratedGraph, tau: complex, ctl):
    """
    W of a connected two-vertex component from the closed-form propagators.

    Returns
    -------
    value : complex
    err : float
        Change under halving the excision radius and the boundary grid, plus
        ``ctl.tol``.
    details : dict

    Raises
    ------
    UnsupportedTopologyError
        Unless the component has exactly two vertices.
    """
    if g.n_vertices != 2:
        raise UnsupportedTopologyError(
            f"the excised method handles two-vertex components, got {g.n_vertices} vertices"
        )
    f = _integrand(g, tau)
    y = tau.imag
    radius = ctl.excision_radius * shortest_period(tau)
    n_boundary = ctl.grid_per_dim
    n_circle = max(64, 4 * n_boundary)

    def total(r, n):
        return (_boundary(f, tau, n) + _disk_and_circle(f, r, n_circle)) / y

    value = total(radius, n_boundary)
    coarse = total(radius / 2, n_boundary // 2)
    err = abs(value - coarse) + ctl.tol
    logger.debug(
        "excised integral: radius %.4g, %d boundary nodes, value %s, err %.3g",
        radius,
        n_boundary,
        value,
        err,
    )
    return complex(value), float(err), {"excision_radius_abs": radius}
