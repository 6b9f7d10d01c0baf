"""
Regulated graph integrals by momentum sums.

After pinning one vertex, the integral of Π_e ∂^{n_e}P_{ε,L}(z_{h(e)} − z_{t(e)})
against the normalised measure d²z/Im τ keeps exactly the momentum assignments
conserved at every vertex, μ = B·ℓ with B the fundamental cycle matrix and
ℓ ∈ Λ_τ^{b₁} one lattice momentum per independent loop. The value at each ε is
therefore

.. math::

    W(P_{\\epsilon,L}) = \\sum_{\\ell} \\prod_e \\hat p_{n_e}(\\mu_e),

which is then extrapolated to ε = 0.
"""
import logging
import warnings
from math import factorial

import numpy as np
from sklearn.utils.parallel import Parallel, delayed
from tqdm import tqdm

from ellint.exceptions import QuadratureBudgetExceeded
from ellint.graphs import DecoratedGraph, cycle_matrix
from ellint.modular._lattice import lattice_disk
from ellint.propagator import RegularizationWindow, propagator_fourier_coefficient
from ellint.propagator._heat import _gaussian_cut
from ellint.utils import _resolve_n_jobs

logger = logging.getLogger(__name__)

CHUNK_ROWS = 1 << 16


def richardson_extrapolate(eps, values, order: int, tol: float = 0.0):
    """
    Neville extrapolation of ``values`` sampled at ``eps`` to ε = 0.

    The last ``order + 1`` samples are used.

    Returns
    -------
    value : complex
    err : float
        Difference between the two highest-order estimates, plus ``tol``.
    table : list of ndarray
        The Neville tableau, column by column.
    """
    order = min(order, len(values) - 1)
    x = np.asarray(eps, dtype=float)[-(order + 1) :]
    table = [np.asarray(values, dtype=complex)[-(order + 1) :]]
    for j in range(1, order + 1):
        prev = table[-1]
        table.append((x[j:] * prev[:-1] - x[:-j] * prev[1:]) / (x[j:] - x[:-j]))
    value = table[order][0]
    err = abs(value - table[order - 1][-1]) + tol
    if order >= 2 and abs(value - table[order - 1][-1]) > abs(
        table[order - 1][-1] - table[order - 2][-1]
    ):
        warnings.warn(
            "Richardson corrections grow with the order; the eps schedule may be too coarse"
        )
    logger.debug("Richardson table: %s", [np.round(col, 14).tolist() for col in table])
    return complex(value), float(err), table


def _loop_radius(y: float, eps: float, gram: np.ndarray, weight: int, tol: float) -> float:
    """Radius of the ball in loop momenta outside of which exp(−ε Σκ) < tol."""
    eigenvalues = np.linalg.eigvalsh(gram)
    low, high = eigenvalues[0], eigenvalues[-1]
    X = _gaussian_cut(tol)
    radius2 = X * y**2 / (4 * np.pi**2 * eps * low)
    for _ in range(3):
        growth = weight * np.log(max(1.0, np.pi * np.sqrt(radius2 * high) / y))
        radius2 = (X + growth) * y**2 / (4 * np.pi**2 * eps * low)
    return float(np.sqrt(radius2))


def _estimated_terms(radius: float, y: float, loops: int) -> float:
    return np.pi**loops * radius ** (2 * loops) / (factorial(loops) * y**loops)


def _prefixes(lam: np.ndarray, loops: int, radius: float):
    """All (ℓ_1, ..., ℓ_{loops−1}) inside the ball, with their squared norms."""
    norms = np.abs(lam) ** 2
    prefix = np.zeros((1, 0), dtype=complex)
    prefix_norm = np.zeros(1)
    for _ in range(loops - 1):
        total = prefix_norm[:, None] + norms[None, :]
        keep = np.nonzero(total <= radius**2)
        prefix = np.concatenate([prefix[keep[0]], lam[keep[1]][:, None]], axis=1)
        prefix_norm = total[keep]
    return prefix, prefix_norm


def _chunk_sum(prefix, prefix_norm, lam, radius, B, decorations, tau, window):
    norms = prefix_norm[:, None] + np.abs(lam)[None, :] ** 2
    rows, cols = np.nonzero(norms <= radius**2)
    loops = np.concatenate([prefix[rows], lam[cols][:, None]], axis=1)
    mu = loops @ B.T
    terms = np.ones(mu.shape[0], dtype=complex)
    for e, n in enumerate(decorations):
        terms *= propagator_fourier_coefficient(mu[:, e], tau, window, n)
    return terms.sum(), mu.shape[0]


def regulated_sum(g: DecoratedGraph, tau: complex, window: RegularizationWindow, ctl):
    """
    Momentum sum of one connected component at a fixed regulator.

    Returns
    -------
    value : complex
    n_terms : int
    """
    B = cycle_matrix(g).astype(float)
    loops = B.shape[1]
    if loops == 0 or np.any(~B.any(axis=1)):
        # a bridge carries zero momentum and p̂(0) = 0
        return 0j, 0
    y = tau.imag
    radius = _loop_radius(y, window.eps, B.T @ B, sum(g.decorations), ctl.tol)
    estimate = _estimated_terms(radius, y, loops)
    if estimate > ctl.max_terms:
        raise QuadratureBudgetExceeded(
            f"momentum sum over {loops} loops at eps={window.eps:g} needs about "
            f"{estimate:.3g} terms, more than max_terms={ctl.max_terms:g}"
        )
    _, _, lam = lattice_disk(tau, radius)
    prefix, prefix_norm = _prefixes(lam, loops, radius)
    step = max(1, CHUNK_ROWS // max(lam.size, 1))
    results = Parallel(n_jobs=_resolve_n_jobs(ctl.n_jobs), prefer="threads")(
        delayed(_chunk_sum)(
            prefix[start : start + step],
            prefix_norm[start : start + step],
            lam,
            radius,
            B,
            g.decorations,
            tau,
            window,
        )
        for start in range(0, prefix.shape[0], step)
    )
    value = sum((r[0] for r in results), 0j)
    n_terms = sum(r[1] for r in results)
    logger.debug(
        "momentum sum eps=%g: %d loops, radius %.4g, %d terms", window.eps, loops, radius, n_terms
    )
    return complex(value), int(n_terms)


def regulated_integral(g: DecoratedGraph, tau: complex, ctl):
    """
    ε → 0 limit of a connected component by Richardson extrapolation over
    ``ctl.eps_schedule``.

    Returns
    -------
    value : complex
    err : float
    details : dict
        The per-ε sums and term counts.
    """
    schedule = tuple(float(e) for e in ctl.eps_schedule)
    sums, counts = [], []
    for eps in tqdm(
        schedule,
        desc="eps schedule",
        position=0,
        leave=True,
        disable=not ctl.verbose,
    ):
        value, n_terms = regulated_sum(g, tau, RegularizationWindow(eps, ctl.L), ctl)
        sums.append(value)
        counts.append(n_terms)
    if not any(counts):
        return 0j, 0.0, {"sums": [0.0] * len(schedule), "terms": counts}
    value, err, _ = richardson_extrapolate(schedule, sums, ctl.richardson_order, ctl.tol)
    return value, err, {"sums": [[s.real, s.imag] for s in sums], "terms": counts}
