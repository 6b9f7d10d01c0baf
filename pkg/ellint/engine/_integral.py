import logging

import numpy as np

from ellint._base import _jsonable
from ellint.engine._control import METHOD_TAGS, GraphIntegralResult, _quadrature_control
from ellint.engine._excised import excised_integral
from ellint.engine._regulated import regulated_integral
from ellint.exceptions import QuadratureBudgetExceeded, ValidationError
from ellint.graphs import DecoratedGraph
from ellint.modular._group import TauLike, _as_point
from ellint.propagator import self_loop_value

logger = logging.getLogger(__name__)

MAX_DIMENSION = 6


def graph_integral(g: DecoratedGraph, tau: TauLike, ctl=None) -> GraphIntegralResult:
    """
    The graph integral W_{(Γ,n)}(τ, τ̄).

    .. math::

        W = \\prod_v \\int_{E_\\tau} \\frac{d^2 z_v}{\\mathrm{Im}\\,\\tau}
            \\prod_e \\partial^{n_e} P_{\\epsilon,L}(z_{h(e)} - z_{t(e)}),
        \\qquad \\epsilon \\to 0,\\ L \\to \\infty.

    Self-loops are replaced by their closed values, every connected component
    is evaluated separately with its last vertex pinned at 0, and the results
    are multiplied.

    Parameters
    ----------
    g : DecoratedGraph
    tau : ModularPoint or complex
    ctl : QuadratureControl, optional

    Returns
    -------
    result : GraphIntegralResult

    Raises
    ------
    QuadratureBudgetExceeded
        If a component has more than 4 vertices (6 real dimensions after
        pinning) or its momentum sum exceeds ``ctl.max_terms``.
    UnsupportedTopologyError
        If the excised method meets a component with more than two vertices.

    Examples
    --------
    >>> from ellint.data import edgeless
    >>> graph_integral(edgeless(3), 1j).value
    (1+0j)
    """
    if not isinstance(g, DecoratedGraph):
        raise ValidationError(f"expected a DecoratedGraph, got {type(g).__name__}")
    ctl = _quadrature_control(ctl)
    point = _as_point(tau)

    loops = [i for i, e in enumerate(g.edges) if e.is_self_loop]
    factor = 1 + 0j
    for i in loops:
        factor *= self_loop_value(g.edges[i].n, point)
    rest = DecoratedGraph(g.vertices, tuple(e for e in g.edges if not e.is_self_loop))

    values, errs, pinned, details = [], [], [], []
    integrated = False
    for vertices in rest.components():
        component, _ = rest.subgraph(vertices)
        pinned.append(_jsonable(vertices[-1]))
        if component.n_edges == 0:
            values.append(1 + 0j)
            errs.append(0.0)
            continue
        dimension = 2 * (component.n_vertices - 1)
        if dimension > MAX_DIMENSION:
            raise QuadratureBudgetExceeded(
                f"component {list(vertices)} has {dimension} real dimensions after pinning, "
                f"more than {MAX_DIMENSION}"
            )
        logger.info(
            "component %s: %d edges, method %s", list(vertices), component.n_edges, ctl.method
        )
        if ctl.method == "regulated":
            value, err, info = regulated_integral(component, point.tau, ctl)
        else:
            value, err, info = excised_integral(component, point.tau, ctl)
        integrated = True
        values.append(value)
        errs.append(err)
        details.append(info)

    magnitudes = np.abs(values)
    value = factor * np.prod(values)
    err = abs(factor) * sum(
        e * np.prod(np.delete(magnitudes, i)) for i, e in enumerate(errs)
    )
    params = ctl.resolved_params()
    params.update(
        tau={"re": point.re, "im": point.im},
        pinned=pinned,
        self_loops=loops,
        components=details,
    )
    return GraphIntegralResult(
        value=value,
        err=float(err),
        method=METHOD_TAGS[ctl.method] if integrated else "closed-form",
        params=params,
    )
