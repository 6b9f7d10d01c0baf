"""
Closed values and consistency identities of the heat kernel and the propagator.
"""
import logging
from numbers import Integral

import numpy as np
from scipy.special import factorial
from sklearn.base import clone

from ellint._base import _sum_control
from ellint.exceptions import ValidationError
from ellint.modular import ModularGroupElement, e2_star, eisenstein, zeta_even
from ellint.modular._group import TauLike, _as_point
from ellint.propagator._bcov import bcov_propagator, e2_star_coefficient
from ellint.propagator._heat import RegularizationWindow, _check_time, heat_kernel

logger = logging.getLogger(__name__)


def self_loop_value(n: int, tau: TauLike, ctl=None) -> complex:
    """
    Value of a self-loop decorated by ``n``, ∂^n P_{0,∞}(0) with the λ = 0 term removed.

    * n = 0: c_* E_2^*(τ, τ̄)
    * n odd: 0
    * n even, n > 0: (n+1)! ζ(n+2) E_{n+2}(τ) / 2π

    Examples
    --------
    >>> self_loop_value(1, 1j)
    0j
    """
    if isinstance(n, bool) or not isinstance(n, Integral) or n < 0:
        raise ValidationError(f"n must be a non-negative integer, got {n!r}")
    if n == 0:
        return complex(e2_star_coefficient() * e2_star(tau, ctl))
    if n % 2:
        return 0j
    return complex(
        factorial(n + 1, exact=True) * zeta_even(n + 2) * eisenstein(n + 2, tau, ctl) / (2 * np.pi)
    )


def transform_check(
    z12,
    tau: TauLike,
    gamma: ModularGroupElement,
    window: RegularizationWindow,
    m: int = 0,
    ctl=None,
) -> float:
    """
    Residual of the SL(2, Z) transformation law of the propagator,

    .. math::

        \\partial^m P^{\\gamma\\tau}_{\\epsilon,L}(z)
        = (C\\tau + D)^{m+2}\\, \\partial^m P^{\\tau}_{|C\\tau+D|^2\\epsilon,\\,|C\\tau+D|^2 L}((C\\tau + D) z).

    Returns
    -------
    residual : float
        Largest absolute difference over ``z12``.
    """
    point = _as_point(tau)
    if not isinstance(gamma, ModularGroupElement):
        raise ValidationError(f"expected a ModularGroupElement, got {type(gamma).__name__}")
    factor = gamma.automorphy(point)
    z = np.asarray(z12, dtype=complex)
    lhs = bcov_propagator(z, gamma.act(point), window, m, ctl)
    rhs = factor ** (m + 2) * bcov_propagator(
        factor * z, point, window.scaled(abs(factor) ** 2), m, ctl
    )
    return float(np.max(np.abs(lhs - rhs)))


def poisson_theta_check(a: float, L: float) -> float:
    """
    Residual of Σ_n (4πL)^{-1/2} e^{−(a−n)²/4L} = Σ_m e^{−4π²m²L + 2πima}.

    Both sides are truncated independently where their terms fall below 1e-17.
    """
    if isinstance(a, bool) or not np.isfinite(a):
        raise ValidationError(f"a must be a finite real, got {a!r}")
    if isinstance(L, bool) or not np.isfinite(L) or L <= 0:
        raise ValidationError(f"L must be a positive real, got {L!r}")
    X = 40.0
    reach = np.sqrt(4 * L * X)
    n = np.arange(np.floor(a - reach) - 1, np.ceil(a + reach) + 2)
    lhs = np.sum(np.exp(-((a - n) ** 2) / (4 * L))) / np.sqrt(4 * np.pi * L)
    m_max = int(np.ceil(np.sqrt(X / (4 * np.pi**2 * L)))) + 1
    m = np.arange(-m_max, m_max + 1)
    rhs = np.sum(np.exp(-4 * np.pi**2 * m**2 * L + 2j * np.pi * m * a))
    return float(abs(lhs - rhs))


def heat_equation_residual(z12, tau: TauLike, t: float, ctl=None) -> float:
    """
    |(∂_t + Δ) K_t(z)| with Δ = −4∂_z∂_z̄, both derivatives by finite differences.

    ∂_t uses a central difference with step 1e-5·t; the Laplacian a five-point
    stencil with step 1e-2·√t and one Richardson level. The heat kernel is
    evaluated at tol ≤ 1e-14 so that truncation changes do not enter the
    differences.
    """
    t = _check_time(t)
    base = _sum_control(ctl)
    ctl = clone(base).set_params(tol=min(base.tol, 1e-14))
    z = complex(z12)
    ht = 1e-5 * t
    dt = (heat_kernel(z, tau, t + ht, ctl) - heat_kernel(z, tau, t - ht, ctl)) / (2 * ht)

    def five_point(h):
        offsets = np.array([h, -h, 1j * h, -1j * h])
        around = heat_kernel(z + offsets, tau, t, ctl)
        return (around.sum() - 4 * heat_kernel(z, tau, t, ctl)) / h**2

    h = 1e-2 * np.sqrt(t)
    laplacian = (4 * five_point(h / 2) - five_point(h)) / 3
    # Δ = −∇²
    return float(abs(dt - laplacian))


def semigroup_residual(
    z12, tau: TauLike, s: float, t: float, ctl=None, grid: int = 64
) -> float:
    """
    |∫_{E_τ} K_s(z − w) K_t(w) d²w − K_{s+t}(z)|, the integral by the periodic
    trapezoid rule on a ``grid`` × ``grid`` mesh of lattice coordinates.
    """
    point = _as_point(tau)
    s, t = _check_time(s), _check_time(t)
    nodes = np.arange(grid) / grid
    a, b = np.meshgrid(nodes, nodes, indexing="ij")
    w = (a + b * point.tau).ravel()
    z = complex(z12)
    integrand = heat_kernel(z - w, point, s, ctl) * heat_kernel(w, point, t, ctl)
    integral = integrand.mean() * point.im
    return float(abs(integral - heat_kernel(z, point, s + t, ctl)))
