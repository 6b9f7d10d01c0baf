"""
Heat kernel of the flat torus E_τ = C / (Z + τZ).

.. math::

    K_t(z) = \\frac{1}{4\\pi t} \\sum_{\\lambda} e^{-|z + \\lambda|^2 / 4t}
           = \\frac{1}{\\mathrm{Im}\\,\\tau} \\sum_{\\mu} e^{-t\\kappa_\\mu} \\chi_\\mu(z),

with momenta μ = n − mτ, κ_μ = 4π²|μ|²/(Im τ)² and characters
χ_μ(a + bτ) = e^{2πi(ma + nb)}. The lattice form is used for t < (Im τ)²/4, the
momentum form otherwise.
"""
import logging
from dataclasses import dataclass

import numpy as np

from ellint._base import _sum_control
from ellint.exceptions import NonpositiveTimeError, ValidationError
from ellint.modular._group import TauLike, _as_point
from ellint.modular._lattice import centre_mod_lattice, lattice_disk

logger = logging.getLogger(__name__)

_SLACK = 5.0


@dataclass(frozen=True)
class RegularizationWindow:
    """
    Schwinger-time cutoffs 0 < eps < L.

    Examples
    --------
    >>> RegularizationWindow(1e-3, 10.0).scaled(4.0)
    RegularizationWindow(eps=0.004, L=40.0)
    """

    eps: float
    L: float

    def __post_init__(self):
        for name in ("eps", "L"):
            value = getattr(self, name)
            if isinstance(value, bool) or not np.isfinite(value):
                raise ValidationError(f"window {name} must be a finite real, got {value!r}")
            object.__setattr__(self, name, float(value))
        if not 0 < self.eps < self.L:
            raise ValidationError(f"window needs 0 < eps < L, got eps={self.eps}, L={self.L}")

    def scaled(self, factor: float) -> "RegularizationWindow":
        return RegularizationWindow(self.eps * factor, self.L * factor)


@dataclass(frozen=True)
class TorusPoint:
    """
    A point z = a + bτ of E_τ in lattice coordinates, a, b ∈ [0, 1).
    """

    a: float
    b: float

    def __post_init__(self):
        for name in ("a", "b"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value!r}")
            value = float(value) % 1.0
            # x % 1.0 rounds up to 1.0 for tiny negative x
            object.__setattr__(self, name, 0.0 if value >= 1.0 else value)

    @classmethod
    def from_complex(cls, z: complex, tau: TauLike) -> "TorusPoint":
        t = _as_point(tau).tau
        z = complex(z)
        b = z.imag / t.imag
        return cls(z.real - b * t.real, b)

    def to_complex(self, tau: TauLike) -> complex:
        return self.a + self.b * _as_point(tau).tau


def _check_time(t) -> float:
    if isinstance(t, bool) or not np.isfinite(t):
        raise ValidationError(f"t must be a finite real, got {t!r}")
    if t <= 0:
        raise NonpositiveTimeError(f"heat-kernel time must be > 0, got {t}")
    return float(t)


def _gaussian_cut(tol: float) -> float:
    return np.log(1 / tol) + _SLACK


def characters(z: np.ndarray, p: np.ndarray, q: np.ndarray, tau: complex) -> np.ndarray:
    """
    χ_μ(z) for momenta μ = p + qτ (that is n = p, m = −q).

    Returns
    -------
    chi : ndarray of shape z.shape + p.shape
    """
    b = z.imag / tau.imag
    a = z.real - b * tau.real
    phase = -np.multiply.outer(a, q) + np.multiply.outer(b, p)
    return np.exp(2j * np.pi * phase)


def momentum_radius(y: float, t: float, X: float, power: int = 0) -> float:
    """|μ| beyond which e^{-tκ} (π|μ|/y)^power drops below e^{-X}."""
    radius = y / (2 * np.pi) * np.sqrt(X / t)
    for _ in range(3):
        growth = power * np.log(max(1.0, np.pi * radius / y))
        radius = y / (2 * np.pi) * np.sqrt((X + growth) / t)
    return radius


def heat_kernel(z12, tau: TauLike, t: float, ctl=None):
    """
    Heat kernel K_t(z₁₂) on E_τ.

    Parameters
    ----------
    z12 : complex or array_like of complex
        Separation z₁ − z₂.
    tau : ModularPoint or complex
    t : float
        Time, strictly positive.
    ctl : SumControl, optional

    Returns
    -------
    value : float or ndarray of float

    Raises
    ------
    NonpositiveTimeError
    """
    t = _check_time(t)
    ctl = _sum_control(ctl)
    point = _as_point(tau)
    tau_c, y = point.tau, point.im
    scalar = np.ndim(z12) == 0
    z = centre_mod_lattice(np.atleast_1d(np.asarray(z12, dtype=complex)), tau_c)
    X = _gaussian_cut(ctl.tol)
    if t < y**2 / 4:
        radius = np.sqrt(4 * t * X) + np.max(np.abs(z))
        _, _, lam = lattice_disk(tau_c, radius)
        r2 = np.abs(z[:, None] + lam[None, :]) ** 2
        value = np.exp(-r2 / (4 * t)).sum(axis=1) / (4 * np.pi * t)
        logger.debug("heat kernel t=%g: %d lattice points", t, lam.size)
    else:
        p, q, mu = lattice_disk(tau_c, momentum_radius(y, t, X))
        kappa = 4 * np.pi**2 * np.abs(mu) ** 2 / y**2
        chi = characters(z, p, q, tau_c)
        value = (chi * np.exp(-t * kappa)).sum(axis=1).real / y
        logger.debug("heat kernel t=%g: %d momenta", t, mu.size)
    return float(value[0]) if scalar else value


