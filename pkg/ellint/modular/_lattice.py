"""
Lattice sums in Eisenstein order: inner sum over m, outer sum over n.

Every row Σ_m (m + u)^{-j} is summed directly for |m| ≤ M and its two tails are
added from the midpoint Euler-Maclaurin expansion, which is accurate to
O(M^{-j-5}) for j ≥ 2. Rows n ≠ 0 of the sums used here decay like e^{-2π|n| Im τ}.
"""
import logging
import warnings

import numpy as np

logger = logging.getLogger(__name__)


def _tail(u: np.ndarray, j: int, M: int) -> np.ndarray:
    """Σ_{m > M} (m + u)^{-j}."""
    x = M + 0.5 + u
    return (
        x ** (1 - j) / (j - 1)
        - j / 24 * x ** (-j - 1)
        + 7 * j * (j + 1) * (j + 2) / 5760 * x ** (-j - 3)
        - 31 * j * (j + 1) * (j + 2) * (j + 3) * (j + 4) / 967680 * x ** (-j - 5)
    )


def row_sum(u, j: int, M: int) -> np.ndarray:
    """
    Σ_{m ∈ Z} (m + u)^{-j}, skipping a vanishing base ``m + u = 0``.

    Parameters
    ----------
    u : array_like of complex
    j : int
        Power, at least 2.
    M : int
        Number of terms summed directly on each side.
    """
    u = np.asarray(u, dtype=complex)
    m = np.arange(-M, M + 1)
    base = u[..., None] + m
    zero = base == 0
    terms = np.where(zero, 0, 1 / np.where(zero, 1, base) ** j)
    return terms.sum(axis=-1) + _tail(u, j, M) + (-1) ** j * _tail(-u, j, M)


def rows_needed(y: float, j: int, tol: float, cap: int) -> int:
    """Largest |n| of the outer sum so that the dropped rows stay below ``tol``."""
    n = int(np.ceil((np.log(1 / tol) + j * np.log(2 * np.pi) + 5) / (2 * np.pi * y))) + 1
    if n > cap:
        warnings.warn(
            f"lattice sum needs {n} rows at Im tau={y:.3g} but lattice_radius caps it at {cap}"
        )
        n = cap
    logger.debug("Eisenstein-order sum over |n| <= %d rows (j=%d)", n, j)
    return n


def centre_mod_lattice(z, tau: complex) -> np.ndarray:
    """Representative of z modulo Z + τZ in the period parallelogram centred at 0."""
    z = np.asarray(z, dtype=complex)
    b = z.imag / tau.imag
    a = z.real - b * tau.real
    return (a - np.round(a)) + (b - np.round(b)) * tau


def lattice_disk(tau: complex, radius: float, centre: complex = 0j):
    """
    Lattice points λ = p + qτ with |λ − centre| ≤ radius.

    Returns
    -------
    p, q : ndarray of int
    lam : ndarray of complex
    """
    y = tau.imag
    q = np.arange(
        np.floor((centre.imag - radius) / y), np.ceil((centre.imag + radius) / y) + 1
    )
    low = np.floor(centre.real - q * tau.real - radius)
    width = int(np.ceil(2 * radius)) + 2
    p = low[:, None] + np.arange(width)
    q = np.broadcast_to(q[:, None], p.shape)
    lam = p + q * tau
    inside = np.abs(lam - centre) <= radius
    return p[inside].astype(int), q[inside].astype(int), lam[inside]
