import json
from dataclasses import dataclass, field
from numbers import Integral
from typing import Any, Dict

import numpy as np

from ellint._base import BaseControl
from ellint.exceptions import ValidationError
from ellint.utils import _check_decreasing, _check_integer, _check_positive

METHODS = ("regulated", "excised")
METHOD_TAGS = {"regulated": "regulated-extrapolated", "excised": "excised-direct"}


class QuadratureControl(BaseControl):
    """
    Parameters of a graph integral evaluation.

    Parameters
    ----------
    method : {"regulated", "excised"}, optional
        ``"regulated"`` sums the Fourier expansion of the regulated propagators
        at every ε of ``eps_schedule`` and extrapolates to ε = 0.
        ``"excised"`` integrates the ε → 0 propagators directly with a
        symmetric disk cut out around the diagonal (two-vertex components
        only). Default is ``"regulated"``.
    eps_schedule : sequence of float, optional
        Strictly decreasing lower Schwinger cutoffs.
        Default is (1e-3, 5e-4, 2.5e-4, 1.25e-4).
    L : float, optional
        Upper Schwinger cutoff. Default is 1e3.
    grid_per_dim : int, optional
        Quadrature nodes per real dimension of the excised method. Default is 64.
    excision_radius : float, optional
        Radius of the excised disk in units of the shorter lattice period,
        below 0.25. Default is 0.05.
    richardson_order : int, optional
        Polynomial order of the ε → 0 extrapolation. Default is 3.
    tol : float, optional
        Truncation tolerance of the momentum sums, also the error floor.
        Default is 1e-12.
    max_terms : float, optional
        Largest momentum sum attempted. Default is 5e7.
    n_jobs : int, optional
        Number of threads, capped by ``ELLINT_THREADS``. Default is None.
    verbose : bool, optional
        Show a progress bar over the ε schedule. Default is False.

    Examples
    --------
    >>> QuadratureControl(eps_schedule=(1e-2, 1e-3)).resolved_params()["eps_schedule"]
    [0.01, 0.001]
    """

    def __init__(
        self,
        method: str = "regulated",
        eps_schedule=(1e-3, 5e-4, 2.5e-4, 1.25e-4),
        L: float = 1e3,
        grid_per_dim: int = 64,
        excision_radius: float = 0.05,
        richardson_order: int = 3,
        tol: float = 1e-12,
        max_terms: float = 5e7,
        n_jobs=None,
        verbose: bool = False,
    ):
        self.method = method
        self.eps_schedule = eps_schedule
        self.L = L
        self.grid_per_dim = grid_per_dim
        self.excision_radius = excision_radius
        self.richardson_order = richardson_order
        self.tol = tol
        self.max_terms = max_terms
        self.n_jobs = n_jobs
        self.verbose = verbose

    def _check_params(self):
        if self.method not in METHODS:
            raise ValidationError(f"method must be one of {METHODS}, got {self.method!r}")
        schedule = _check_decreasing("eps_schedule", self.eps_schedule)
        if self.method == "regulated" and len(schedule) < 2:
            raise ValidationError("the regulated method needs at least two eps values")
        L = _check_positive("L", self.L)
        if schedule[0] >= L:
            raise ValidationError(f"eps_schedule must lie below L={L}, got {schedule[0]}")
        _check_integer("grid_per_dim", self.grid_per_dim, minimum=8)
        radius = _check_positive("excision_radius", self.excision_radius)
        if radius >= 0.25:
            raise ValidationError(f"excision_radius must be < 0.25, got {radius}")
        _check_integer("richardson_order", self.richardson_order, minimum=1)
        tol = _check_positive("tol", self.tol)
        if tol >= 1:
            raise ValidationError(f"tol must be < 1, got {tol}")
        _check_positive("max_terms", self.max_terms)
        if self.n_jobs is not None and (
            isinstance(self.n_jobs, bool) or not isinstance(self.n_jobs, Integral)
        ):
            raise ValidationError(f"n_jobs must be an integer or None, got {self.n_jobs!r}")


def _quadrature_control(ctl) -> QuadratureControl:
    if ctl is None:
        ctl = QuadratureControl()
    elif not isinstance(ctl, QuadratureControl):
        raise ValidationError(f"expected a QuadratureControl, got {type(ctl).__name__}")
    ctl._check_params()
    return ctl


@dataclass(frozen=True)
class GraphIntegralResult:
    """
    Value of a graph integral W(τ, τ̄) with its estimated absolute error.

    ``method`` is ``"regulated-extrapolated"``, ``"excised-direct"`` or
    ``"closed-form"`` (nothing left to integrate after factorisation).
    ``params`` records everything needed to reproduce the number.
    """

    value: complex
    err: float
    method: str
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))
        err = float(self.err)
        if not np.isfinite(err) or err < 0:
            raise ValidationError(f"err must be a finite non-negative real, got {self.err!r}")
        object.__setattr__(self, "err", err)

    def __complex__(self):
        return self.value

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": {"re": self.value.real, "im": self.value.imag},
            "err": self.err,
            "method": self.method,
            "params": self.params,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)
