"""
Weierstrass ℘ and its z-derivatives.

Both evaluation paths first move τ into the fundamental domain, using

.. math::

    \\partial_z^d \\wp(z; \\tau) = (C\\tau + D)^{-2-d}
    (\\partial_z^d \\wp)\\left(\\frac{z}{C\\tau + D}; \\gamma\\tau\\right),

then reduce z into the period parallelogram centred at 0.
"""
import logging
from numbers import Integral
from typing import Tuple

import numpy as np
from numpy.polynomial import Polynomial
from scipy.special import factorial

from ellint._base import _sum_control
from ellint.exceptions import PoleAtLatticePointError, ValidationError
from ellint.modular._eisenstein import eisenstein, zeta_even
from ellint.modular._group import TauLike, _as_point, reduce_to_fundamental_domain
from ellint.modular._lattice import centre_mod_lattice, row_sum, rows_needed

logger = logging.getLogger(__name__)

METHODS = ("lattice", "q")


def _cot_derivative(order: int) -> Polynomial:
    """Polynomial f with d^order/du^order [π cot(πu)] = f(cot(πu))."""
    f = Polynomial([0, np.pi])
    one_plus_c2 = Polynomial([1, 0, 1])
    for _ in range(order):
        f = -np.pi * one_plus_c2 * f.deriv()
    return f


def _row_closed_form(u: np.ndarray, j: int) -> np.ndarray:
    """Σ_m (m + u)^{-j} = (−1)^{j-1}/(j−1)! · d^{j-1}/du^{j-1} π cot(πu)."""
    c = 1 / np.tan(np.pi * u)
    return (-1) ** (j - 1) / factorial(j - 1, exact=True) * _cot_derivative(j - 1)(c)


def _lattice_path(w, tau, j, ctl):
    n_max = rows_needed(tau.imag, j, ctl.tol, ctl.lattice_radius)
    shifts = np.arange(-n_max, n_max + 1) * tau
    total = np.sum(row_sum(shifts - w[..., None], j, ctl.lattice_radius), axis=-1)
    total = (-1) ** j * total
    if j == 2:
        total = total - np.sum(row_sum(shifts, 2, ctl.lattice_radius))
    return total


def _q_path(w, tau, j, ctl):
    n_max = rows_needed(tau.imag, j, ctl.tol, ctl.lattice_radius)
    shifts = np.arange(-n_max, n_max + 1) * tau
    total = (-1) ** j * np.sum(_row_closed_form(shifts - w[..., None], j), axis=-1)
    if j == 2:
        total = total - np.pi**2 / 3 * eisenstein(2, tau, ctl)
    return total


def weierstrass_p(z, tau: TauLike, deriv: int = 0, ctl=None, method: str = "lattice"):
    """
    ∂_z^deriv ℘(z; τ).

    Parameters
    ----------
    z : complex or array_like of complex
        Points off the lattice Λ_τ = Z + τZ.
    tau : ModularPoint or complex
    deriv : int, optional
        Number of z-derivatives. Default is 0.
    ctl : SumControl, optional
    method : {"lattice", "q"}, optional
        ``"lattice"`` sums 1/z² + Σ'[1/(z−λ)² − 1/λ²] (or the absolutely
        convergent Σ (−1)^d (d+1)!/(z−λ)^{d+2}) in Eisenstein order;
        ``"q"`` uses the closed form of every row and the q-series of E_2.

    Returns
    -------
    value : complex or ndarray of complex

    Raises
    ------
    PoleAtLatticePointError
        If some ``z`` lies on the lattice.
    """
    if isinstance(deriv, bool) or not isinstance(deriv, Integral) or deriv < 0:
        raise ValidationError(f"deriv must be a non-negative integer, got {deriv!r}")
    if method not in METHODS:
        raise ValidationError(f"method must be one of {METHODS}, got {method!r}")
    ctl = _sum_control(ctl)
    point = _as_point(tau)
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))

    reduced, gamma = reduce_to_fundamental_domain(point)
    factor = gamma.automorphy(point)
    w = centre_mod_lattice(z / factor, reduced.tau)
    on_lattice = np.abs(w) < 1e-12
    if np.any(on_lattice):
        raise PoleAtLatticePointError(f"z={z[on_lattice][0]} is a lattice point")

    j = deriv + 2
    path = _lattice_path if method == "lattice" else _q_path
    value = (-1) ** deriv * factorial(deriv + 1, exact=True) * path(w, reduced.tau, j, ctl)
    value = value / factor**j
    return complex(value[0]) if scalar else value


def weierstrass_invariants(tau: TauLike, ctl=None) -> Tuple[complex, complex]:
    """
    g₂ = 60 G₄ and g₃ = 140 G₆, so that ℘′² = 4℘³ − g₂℘ − g₃.
    """
    g4 = 2 * zeta_even(4) * eisenstein(4, tau, ctl)
    g6 = 2 * zeta_even(6) * eisenstein(6, tau, ctl)
    return 60 * g4, 140 * g6
