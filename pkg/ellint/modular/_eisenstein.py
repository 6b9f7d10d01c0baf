"""
Eisenstein series, E_2^* and even zeta values.

The Eisenstein series are normalised to constant term 1,

.. math::

    E_k(\\tau) = 1 - \\frac{2k}{B_k} \\sum_{n \\geq 1} \\frac{n^{k-1} q^n}{1 - q^n},
    \\qquad q = e^{2\\pi i \\tau},

so that G_k = Σ'(m + nτ)^{-k} = 2ζ(k) E_k in Eisenstein summation order.
"""
import logging
from fractions import Fraction
from functools import lru_cache
from math import factorial
from numbers import Integral

import numpy as np
import sympy

from ellint._base import _sum_control
from ellint.exceptions import OddWeightError, UnsupportedError, ValidationError
from ellint.modular._group import (
    ModularPoint,
    TauLike,
    _as_point,
    reduce_to_fundamental_domain,
)
from ellint.modular._lattice import row_sum, rows_needed

logger = logging.getLogger(__name__)

_MAX_Q_TERMS = 100000


@lru_cache(maxsize=None)
def _bernoulli(m: int) -> Fraction:
    b = sympy.bernoulli(m)
    return Fraction(int(b.p), int(b.q))


def zeta_even(m: int) -> float:
    """
    ζ(m) for even m ≥ 2 from the Bernoulli numbers.

    Examples
    --------
    >>> round(zeta_even(2) * 6 / np.pi**2, 12)
    1.0
    """
    if isinstance(m, bool) or not isinstance(m, Integral):
        raise ValidationError(f"m must be an integer, got {m!r}")
    if m < 2 or m % 2:
        raise UnsupportedError(f"zeta_even needs an even integer m >= 2, got {m}")
    m = int(m)
    coeff = (-1) ** (m // 2 + 1) * _bernoulli(m) / (2 * factorial(m))
    return float(coeff) * (2 * np.pi) ** m


def _check_weight(k) -> int:
    if isinstance(k, bool) or not isinstance(k, Integral):
        raise ValidationError(f"weight must be an integer, got {k!r}")
    if k % 2:
        raise OddWeightError(f"Eisenstein series need an even weight, got {k}")
    if k < 2:
        raise ValidationError(f"weight must be >= 2, got {k}")
    return int(k)


def _q_terms_needed(k: int, abs_q: float, tol: float) -> int:
    scale = 2 * k / abs(float(_bernoulli(k))) / (1 - abs_q) ** 2
    peak = (k - 1) / -np.log(abs_q)
    n = 1
    while n < _MAX_Q_TERMS:
        if n > peak and scale * n ** (k - 1) * abs_q**n < tol:
            break
        n += 1
    return n


def _eisenstein_q(k: int, tau: complex, n_terms: int) -> complex:
    q = np.exp(2j * np.pi * tau)
    n = np.arange(1, n_terms + 1)
    qn = q**n
    series = np.sum(n.astype(float) ** (k - 1) * qn / (1 - qn))
    return complex(1 - float(2 * k / _bernoulli(k)) * series)


def eisenstein(k: int, tau: TauLike, ctl=None) -> complex:
    """
    Eisenstein series E_k(τ) of even weight k.

    Parameters
    ----------
    k : int
        Even weight, at least 2.
    tau : ModularPoint or complex
    ctl : SumControl, optional

    Returns
    -------
    value : complex

    Notes
    -----
    When the q-series would need more than ``ctl.q_terms`` terms to reach
    ``ctl.tol`` the value is obtained at the SL(2, Z)-reduced point and pulled
    back with the automorphy factor, including the quasimodular correction of E_2.
    """
    k = _check_weight(k)
    ctl = _sum_control(ctl)
    point = _as_point(tau)
    abs_q = np.exp(-2 * np.pi * point.im)
    needed = _q_terms_needed(k, abs_q, ctl.tol)
    if needed <= ctl.q_terms:
        return _eisenstein_q(k, point.tau, needed)
    reduced, gamma = reduce_to_fundamental_domain(point)
    abs_q = np.exp(-2 * np.pi * reduced.im)
    n_terms = min(ctl.q_terms, _q_terms_needed(k, abs_q, ctl.tol))
    logger.debug(
        "E_%d at tau=%s via reduced point %s (%d q-terms)", k, point.tau, reduced.tau, n_terms
    )
    value = _eisenstein_q(k, reduced.tau, n_terms)
    factor = gamma.automorphy(point)
    if k == 2:
        value = value + 6j * gamma.C / np.pi * factor
    return complex(value / factor**k)


def e2_star(tau: TauLike, ctl=None) -> complex:
    """
    Almost holomorphic E_2^*(τ, τ̄) = E_2(τ) − 3/(π Im τ), modular of weight 2.

    Examples
    --------
    >>> abs(e2_star(1j)) < 1e-10
    True
    """
    point = _as_point(tau)
    return eisenstein(2, point, ctl) - 3 / (np.pi * point.im)


def eisenstein_lattice(k: int, tau: TauLike, ctl=None) -> complex:
    """
    E_k(τ) from the lattice sum Σ'(m + nτ)^{-k} / 2ζ(k) in Eisenstein order.

    Independent of the q-series; the order (inner m, outer n) matters for k = 2.
    """
    k = _check_weight(k)
    ctl = _sum_control(ctl)
    point = _as_point(tau)
    n_max = rows_needed(point.im, k, ctl.tol, ctl.lattice_radius)
    n = np.arange(-n_max, n_max + 1)
    rows = row_sum(n * point.tau, k, ctl.lattice_radius)
    return complex(np.sum(rows) / (2 * zeta_even(k)))
