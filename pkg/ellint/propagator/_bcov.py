"""
The regularised BCOV propagator and its limit.

.. math::

    \\partial_z^m P_{\\epsilon,L}(z) = \\int_\\epsilon^L dt\\, \\partial_z^{m+2} K_t(z).

The t-integral is split at t_s = (Im τ)²/4 (clipped to the window). Below t_s
every lattice point w = z − λ contributes in closed form

.. math::

    \\frac{(-1)^m (m+1)!}{4\\pi w^{m+2}}
    \\left[P\\left(m+2, \\frac{|w|^2}{4\\epsilon}\\right)
        - P\\left(m+2, \\frac{|w|^2}{4t_s}\\right)\\right],

P the regularised lower incomplete gamma function. Above t_s the momentum sum
with coefficients :func:`propagator_fourier_coefficient` converges fast.
"""
import logging
from functools import lru_cache
from numbers import Integral

import numpy as np
from scipy.special import factorial, gammainc, gammaincc, gammainccinv

from ellint._base import _sum_control
from ellint.exceptions import QuadratureFailure, ValidationError
from ellint.modular import e2_star, weierstrass_p
from ellint.modular._group import TauLike, _as_point
from ellint.modular._lattice import centre_mod_lattice, lattice_disk
from ellint.propagator._heat import (
    RegularizationWindow,
    _gaussian_cut,
    characters,
    momentum_radius,
)

logger = logging.getLogger(__name__)

E2_STAR_CANDIDATES = {"pi/12": np.pi / 12, "1/(12 pi)": 1 / (12 * np.pi)}
_CALIBRATION_TAUS = (0.1 + 0.8j, 0.3 + 1.2j, -0.2 + 0.9j, 0.45 + 1.05j)
_CALIBRATION_ZS = np.array([0.31 + 0.17j, -0.22 + 0.41j, 0.12 - 0.28j, 0.43 + 0.05j])


def _check_order(m) -> int:
    if isinstance(m, bool) or not isinstance(m, Integral) or m < 0:
        raise ValidationError(f"derivative order must be a non-negative integer, got {m!r}")
    return int(m)


def _check_window(window) -> RegularizationWindow:
    if not isinstance(window, RegularizationWindow):
        raise ValidationError(
            f"expected a RegularizationWindow, got {type(window).__name__}"
        )
    return window


def propagator_fourier_coefficient(mu, tau: TauLike, window: RegularizationWindow, k: int = 0):
    """
    Fourier coefficient of ∂^k P_{ε,L} at momentum μ.

    .. math::

        \\hat p_k(\\mu) = \\frac{1}{4y} \\frac{\\bar\\mu}{\\mu}
        \\left(\\frac{\\pi\\bar\\mu}{y}\\right)^k (e^{-\\epsilon\\kappa} - e^{-L\\kappa}),
        \\qquad \\hat p_k(0) = 0.

    Parameters
    ----------
    mu : complex or array_like of complex
        Lattice momenta n − mτ.
    tau : ModularPoint or complex
    window : RegularizationWindow
    k : int, optional
        Derivative order. Default is 0.
    """
    k = _check_order(k)
    window = _check_window(window)
    y = _as_point(tau).im
    mu = np.asarray(mu, dtype=complex)
    zero = mu == 0
    safe = np.where(zero, 1.0, mu)
    kappa = 4 * np.pi**2 * np.abs(safe) ** 2 / y**2
    damping = np.exp(-window.eps * kappa) * -np.expm1(-(window.L - window.eps) * kappa)
    coeff = np.conj(safe) / safe * (np.pi * np.conj(safe) / y) ** k * damping / (4 * y)
    return np.where(zero, 0.0, coeff)


def _direct(z, tau, eps, t_split, m, tol):
    a = m + 2
    u_cut = gammainccinv(a, tol * 1e-2)
    radius = np.sqrt(4 * t_split * u_cut) + np.max(np.abs(z))
    _, _, lam = lattice_disk(tau, radius)
    w = z[:, None] - lam[None, :]
    r2 = np.abs(w) ** 2
    u_eps, u_split = r2 / (4 * eps), r2 / (4 * t_split)
    # whichever tail is small carries the digits
    lower = gammainc(a, u_eps) - gammainc(a, u_split)
    upper = gammaincc(a, u_split) - gammaincc(a, u_eps)
    window = np.where(u_split > a, upper, lower)
    zero = r2 == 0
    terms = np.where(zero, 0.0, window / np.where(zero, 1.0, w) ** a)
    logger.debug("propagator direct part: %d lattice points", lam.size)
    return (-1) ** m * factorial(m + 1, exact=True) / (4 * np.pi) * terms.sum(axis=1)


def _dual(z, tau, t_split, L, m, tol):
    y = tau.imag
    X = _gaussian_cut(tol)
    p, q, mu = lattice_disk(tau, momentum_radius(y, t_split, X, power=m))
    coeff = propagator_fourier_coefficient(mu, tau, RegularizationWindow(t_split, L), m)
    logger.debug("propagator momentum part: %d momenta", mu.size)
    return (characters(z, p, q, tau) * coeff).sum(axis=1)


def bcov_propagator(z12, tau: TauLike, window: RegularizationWindow, m: int = 0, ctl=None):
    """
    ∂_z^m P_{ε,L}(z₁₂) on E_τ.

    Parameters
    ----------
    z12 : complex or array_like of complex
        Separation z_h − z_t; lattice points are allowed.
    tau : ModularPoint or complex
    window : RegularizationWindow
    m : int, optional
        Number of holomorphic derivatives. Default is 0.
    ctl : SumControl, optional

    Returns
    -------
    value : complex or ndarray of complex
    """
    m = _check_order(m)
    window = _check_window(window)
    ctl = _sum_control(ctl)
    point = _as_point(tau)
    scalar = np.ndim(z12) == 0
    z = centre_mod_lattice(np.atleast_1d(np.asarray(z12, dtype=complex)), point.tau)
    t_split = float(np.clip(point.im**2 / 4, window.eps, window.L))
    value = np.zeros(z.shape, dtype=complex)
    if t_split > window.eps:
        value += _direct(z, point.tau, window.eps, t_split, m, ctl.tol)
    if window.L > t_split:
        value += _dual(z, point.tau, t_split, window.L, m, ctl.tol)
    return complex(value[0]) if scalar else value


@lru_cache(maxsize=None)
def e2_star_coefficient() -> float:
    """
    Coefficient c_* of E_2^* in P_{0,∞} = ℘/4π + c_* E_2^*.

    Fitted once by least squares from the regulated propagator at
    (ε, L) = (1e-5, 1e4) and matched against the two closed forms in
    :data:`E2_STAR_CANDIDATES`.

    Raises
    ------
    QuadratureFailure
        If the fit matches neither candidate to 1e-4.
    """
    window = RegularizationWindow(1e-5, 1e4)
    num, den = 0j, 0.0
    for tau in _CALIBRATION_TAUS:
        e2s = e2_star(tau)
        residual = bcov_propagator(_CALIBRATION_ZS, tau, window) - weierstrass_p(
            _CALIBRATION_ZS, tau, method="q"
        ) / (4 * np.pi)
        num += np.sum(np.conj(e2s) * residual)
        den += _CALIBRATION_ZS.size * abs(e2s) ** 2
    fitted = (num / den).real
    name, value = min(E2_STAR_CANDIDATES.items(), key=lambda item: abs(item[1] - fitted))
    if abs(fitted - value) > 1e-4:
        raise QuadratureFailure(
            f"E2* coefficient fitted as {fitted:.8f}, matching none of {list(E2_STAR_CANDIDATES)}"
        )
    logger.info("E2* coefficient fitted as %.10f, matches %s", fitted, name)
    return value


def bcov_limit(z12, tau: TauLike, m: int = 0, ctl=None):
    """
    ε → 0, L → ∞ limit: (1/4π) ∂^m ℘(z₁₂; τ) + [m = 0] c_* E_2^*(τ, τ̄).

    Raises
    ------
    PoleAtLatticePointError
    """
    m = _check_order(m)
    value = weierstrass_p(z12, tau, m, ctl, method="q") / (4 * np.pi)
    if m == 0:
        value = value + e2_star_coefficient() * e2_star(tau, ctl)
    return value
