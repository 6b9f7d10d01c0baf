"""
Checks of the structural properties of graph integrals: modular weight, the
∂_τ̄ recursion over edge deletions and contractions, and the polynomial
dependence on 1/Im τ.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Sequence

import numpy as np
import scipy.linalg
from sklearn.utils.parallel import Parallel, delayed

from ellint.engine._control import _quadrature_control
from ellint.engine._integral import graph_integral
from ellint.exceptions import (
    IllConditionedFit,
    NotSimpleError,
    StepTooLargeError,
    ValidationError,
)
from ellint.graphs import DecoratedGraph, classify, contract_edge, delete_edge
from ellint.modular import ModularGroupElement, ModularPoint, e2_star, eisenstein
from ellint.modular._group import TauLike, _as_point
from ellint.utils import _check_integer, _check_positive, _resolve_n_jobs

logger = logging.getLogger(__name__)

FLOOR = 1e-12
MAX_CONDITION = 1e12


def banana2_closed_form(tau: TauLike, ctl=None) -> complex:
    """
    W of two vertices joined by two undecorated edges,

    .. math::

        W = \\frac{\\pi^2}{144}\\left(E_4(\\tau) - E_2^*(\\tau, \\bar\\tau)^2\\right).

    ``ctl`` is a :class:`~ellint.SumControl` for the Eisenstein series.
    """
    return complex(np.pi**2 / 144 * (eisenstein(4, tau, ctl) - e2_star(tau, ctl) ** 2))


@dataclass(frozen=True)
class CheckResult:
    """Both sides of an identity, their relative residual and its error estimate."""

    lhs: complex
    rhs: complex
    residual: float
    err: float
    params: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lhs": {"re": self.lhs.real, "im": self.lhs.imag},
            "rhs": {"re": self.rhs.real, "im": self.rhs.imag},
            "residual": self.residual,
            "err": self.err,
            "params": self.params,
        }


def _evaluate_all(g, taus, ctl):
    return Parallel(n_jobs=_resolve_n_jobs(ctl.n_jobs), prefer="threads")(
        delayed(graph_integral)(g, t, ctl) for t in taus
    )


def modularity_check(
    g: DecoratedGraph, tau: TauLike, gamma: ModularGroupElement, ctl=None
) -> CheckResult:
    """
    Weight of W under γ ∈ SL(2, Z).

    Returns
    -------
    result : CheckResult
        ``lhs`` = W(γτ), ``rhs`` = (Cτ + D)^w W(τ) with w = Σ_e (n_e + 2), and
        ``residual`` = |lhs − rhs| / max(|W(τ)|, 1e-12).
    """
    if not isinstance(gamma, ModularGroupElement):
        raise ValidationError(f"expected a ModularGroupElement, got {type(gamma).__name__}")
    ctl = _quadrature_control(ctl)
    point = _as_point(tau)
    moved, here = _evaluate_all(g, [gamma.act(point), point], ctl)
    factor = gamma.automorphy(point) ** g.weight
    rhs = factor * here.value
    scale = max(abs(here.value), FLOOR)
    residual = abs(moved.value - rhs) / scale
    err = (moved.err + abs(factor) * here.err) / scale
    logger.info("modularity residual %.3g (err %.3g) for gamma=%s", residual, err, gamma.as_tuple())
    return CheckResult(
        lhs=moved.value,
        rhs=rhs,
        residual=float(residual),
        err=float(err),
        params={**here.params, "gamma": list(gamma.as_tuple()), "weight": g.weight},
    )


@dataclass(frozen=True)
class DerivativeEstimate:
    """A finite-difference derivative with its estimated error and the step used."""

    value: complex
    err: float
    h: float

    def __complex__(self):
        return self.value


def wirtinger_dbar(
    f: Callable, tau: TauLike, h: Optional[float] = None, n_jobs=None
) -> DerivativeEstimate:
    """
    ∂_τ̄ f = ½(∂_x + i∂_y) f by central differences.

    The two-sided differences at steps h and h/2 are combined by one Richardson
    level; the error estimate is the change against the h/2 difference.

    Parameters
    ----------
    f : callable
        Takes a complex τ and returns something ``complex()`` accepts, for
        example a :class:`GraphIntegralResult`.
    tau : ModularPoint or complex
    h : float, optional
        Step, below Im τ / 10. Default is 1e-3 · Im τ.
    n_jobs : int, optional
        Threads used for the eight evaluations.

    Examples
    --------
    >>> round(wirtinger_dbar(lambda t: t.imag, 1j).value.imag, 12)
    0.5
    """
    point = _as_point(tau)
    h = 1e-3 * point.im if h is None else _check_positive("h", h)
    if h >= point.im / 10:
        raise StepTooLargeError(f"h={h} must be below Im tau / 10 = {point.im / 10}")
    steps = [h, -h, 1j * h, -1j * h, h / 2, -h / 2, 0.5j * h, -0.5j * h]
    values = Parallel(n_jobs=_resolve_n_jobs(n_jobs), prefer="threads")(
        delayed(f)(point.tau + s) for s in steps
    )
    values = [complex(v) for v in values]

    def difference(offset, step):
        dx = (values[offset] - values[offset + 1]) / (2 * step)
        dy = (values[offset + 2] - values[offset + 3]) / (2 * step)
        return (dx + 1j * dy) / 2

    coarse, fine = difference(0, h), difference(4, h / 2)
    value = (4 * fine - coarse) / 3
    return DerivativeEstimate(value=complex(value), err=float(abs(value - fine)), h=float(h))


@dataclass(frozen=True)
class AnomalyCheckResult:
    """
    ∂_τ̄ W_Γ against (i/8(Im τ)²) Σ_e (W_{Γ∖e} − W_{Γ/e}).

    ``rhs_reversed`` and ``residual_reversed`` hold the same comparison with
    the opposite sign of the edge sum; ``orientation`` names the better fit.
    """

    lhs: complex
    rhs: complex
    residual: float
    rhs_reversed: complex
    residual_reversed: float
    orientation: str
    err: float
    params: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        def pair(z):
            return {"re": z.real, "im": z.imag}

        return {
            "lhs": pair(self.lhs),
            "rhs": pair(self.rhs),
            "residual": self.residual,
            "rhs_reversed": pair(self.rhs_reversed),
            "residual_reversed": self.residual_reversed,
            "orientation": self.orientation,
            "err": self.err,
            "params": self.params,
        }


def anomaly_check(
    g: DecoratedGraph, tau: TauLike, ctl=None, h: Optional[float] = None
) -> AnomalyCheckResult:
    """
    The ∂_τ̄ recursion of an undecorated simple graph.

    .. math::

        \\partial_{\\bar\\tau} W_\\Gamma = \\frac{i}{8(\\mathrm{Im}\\,\\tau)^2}
        \\sum_{e} \\left(W_{\\Gamma \\setminus e} - W_{\\Gamma / e}\\right)

    The left side is :func:`wirtinger_dbar` of :func:`graph_integral`, the right
    side is assembled from graph integrals of every deletion and contraction.

    Raises
    ------
    NotSimpleError
        If ``g`` has self-loops, parallel edges or a decorated edge.
    """
    if not classify(g).simple or any(e.n for e in g.edges):
        raise NotSimpleError("anomaly_check needs a simple graph with undecorated edges")
    ctl = _quadrature_control(ctl)
    point = _as_point(tau)
    y = point.im

    lhs = wirtinger_dbar(
        lambda t: graph_integral(g, t, ctl), point, h, n_jobs=_resolve_n_jobs(ctl.n_jobs)
    )
    deleted = _evaluate_all_graphs([delete_edge(g, e) for e in range(g.n_edges)], point, ctl)
    contracted = _evaluate_all_graphs(
        [contract_edge(g, e) for e in range(g.n_edges)], point, ctl
    )
    edge_sum = sum((d.value - c.value for d, c in zip(deleted, contracted)), 0j)
    edge_err = sum(d.err + c.err for d, c in zip(deleted, contracted))
    rhs = 1j / (8 * y**2) * edge_sum
    scale = max(abs(rhs), FLOOR)
    residual = abs(lhs.value - rhs) / scale
    residual_reversed = abs(lhs.value + rhs) / scale
    orientation = (
        "deletion-minus-contraction"
        if residual <= residual_reversed
        else "contraction-minus-deletion"
    )
    err = (lhs.err + edge_err / (8 * y**2)) / scale
    logger.info(
        "anomaly residual %.3g, reversed %.3g: %s fits", residual, residual_reversed, orientation
    )
    return AnomalyCheckResult(
        lhs=lhs.value,
        rhs=complex(rhs),
        residual=float(residual),
        rhs_reversed=complex(-rhs),
        residual_reversed=float(residual_reversed),
        orientation=orientation,
        err=float(err),
        params={**ctl.resolved_params(), "tau": {"re": point.re, "im": point.im}, "h": lhs.h},
    )


def _evaluate_all_graphs(graphs, point, ctl):
    return Parallel(n_jobs=_resolve_n_jobs(ctl.n_jobs), prefer="threads")(
        delayed(graph_integral)(graph, point, ctl) for graph in graphs
    )


@dataclass(frozen=True)
class ImTauFit:
    """
    Least-squares fit W(τ) ≈ Σ_{i,k} c_{ik} (τ − τ₀)^k (Im τ)^{−i}.

    ``coefficients[i, k]`` is c_{ik}; ``residual`` is the relative l2 misfit
    and ``condition`` the condition number of the column-normalised design.
    ``taus`` are the points W was evaluated at, which include the horizontal
    shifts added to a vertical segment.
    """

    coefficients: np.ndarray
    center: complex
    residual: float
    condition: float
    taus: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))

    def holomorphic_part(self, i: int) -> complex:
        """f_i(τ₀), the coefficient of (Im τ)^{−i} at the centre."""
        return complex(self.coefficients[i, 0])


def _is_vertical(tau: np.ndarray) -> bool:
    return np.ptp(tau.real) <= 1e-12 * (1 + np.ptp(tau.imag))


def _widen_segment(tau: np.ndarray, taylor_order: int) -> np.ndarray:
    # a vertical line alone cannot separate f(τ) from g(τ)/Im τ
    half_width = np.ptp(tau.imag) / 2
    offsets = np.linspace(-half_width, half_width, taylor_order + 1)
    return (tau[None, :] + offsets[:, None]).ravel()


def imtau_fit(
    g: DecoratedGraph,
    taus: Sequence[TauLike],
    ctl=None,
    order: int = 1,
    taylor_order: int = 4,
    center: Optional[TauLike] = None,
) -> ImTauFit:
    """
    Fit the 1/Im τ expansion of W over a patch of sample points.

    Each f_i is modelled by its Taylor polynomial of degree ``taylor_order``
    around ``center``. When ``taus`` lie on a vertical segment and
    ``taylor_order > 0`` the segment is widened into a grid of
    ``taylor_order + 1`` horizontal copies spanning the segment length, since
    values on a vertical line do not determine the f_i. With
    ``taylor_order=0`` the f_i are taken as locally constant along the
    samples, which biases f_1 by the slope of f_0.

    Parameters
    ----------
    g : DecoratedGraph
    taus : sequence of ModularPoint or complex
        A two-dimensional patch of at least (order + 1)(taylor_order + 1)
        points, or a vertical segment with at least order + taylor_order + 1
        distinct heights.
    ctl : QuadratureControl, optional
    order : int, optional
        Highest power of 1/Im τ. Default is 1.
    taylor_order : int, optional
        Default is 4.
    center : ModularPoint or complex, optional
        Default is the mean of ``taus``.

    Returns
    -------
    fit : ImTauFit

    Raises
    ------
    IllConditionedFit
        If the normalised design matrix has condition number above 1e12.
    """
    ctl = _quadrature_control(ctl)
    order = _check_integer("order", order)
    taylor_order = _check_integer("taylor_order", taylor_order)
    tau = np.array([_as_point(t).tau for t in taus])
    n_columns = (order + 1) * (taylor_order + 1)
    tau0 = complex(np.mean(tau)) if center is None else _as_point(center).tau
    if taylor_order > 0 and len(tau) and _is_vertical(tau):
        heights = len(np.unique(np.round(tau.imag, 12)))
        if heights < order + taylor_order + 1:
            raise ValidationError(
                f"need at least {order + taylor_order + 1} distinct heights on a vertical "
                f"segment for order={order}, taylor_order={taylor_order}, got {heights}"
            )
        tau = _widen_segment(tau, taylor_order)
        logger.info("vertical segment widened to %d sample points", len(tau))
    if len(tau) < n_columns:
        raise ValidationError(
            f"need at least {n_columns} sample points for order={order}, "
            f"taylor_order={taylor_order}, got {len(tau)}"
        )
    points = [ModularPoint.from_complex(t) for t in tau]
    results = _evaluate_all(g, points, ctl)
    w = np.array([r.value for r in results])

    powers = tau.imag[:, None] ** -np.arange(order + 1)[None, :]
    shifts = (tau - tau0)[:, None] ** np.arange(taylor_order + 1)[None, :]
    design = (powers[:, :, None] * shifts[:, None, :]).reshape(len(tau), n_columns)
    norms = np.linalg.norm(design, axis=0)
    scaled = design / np.where(norms > 0, norms, 1.0)
    condition = float(np.linalg.cond(scaled))
    if not np.isfinite(condition) or condition > MAX_CONDITION:
        raise IllConditionedFit(
            f"design matrix condition number {condition:.3g} exceeds {MAX_CONDITION:g}"
        )
    solution, _, _, _ = scipy.linalg.lstsq(scaled, w)
    coefficients = (solution / norms).reshape(order + 1, taylor_order + 1)
    misfit = np.linalg.norm(design @ coefficients.ravel() - w)
    residual = misfit / max(np.linalg.norm(w), FLOOR)
    logger.debug("imtau fit: condition %.3g, residual %.3g", condition, residual)
    return ImTauFit(
        coefficients=coefficients,
        center=tau0,
        residual=float(residual),
        condition=condition,
        taus=tau,
    )
