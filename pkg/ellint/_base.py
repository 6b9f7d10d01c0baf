from numbers import Integral, Real
from typing import Any, Dict

import numpy as np
from sklearn.base import BaseEstimator

from ellint.exceptions import ValidationError
from ellint.utils import _check_integer, _check_positive


def _jsonable(value):
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, Integral):
        return int(value)
    if isinstance(value, Real):
        return float(value)
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return repr(value)


class BaseControl(BaseEstimator):
    """
    A base class for the numerical control objects of ellint.

    Controls hold the truncation and quadrature parameters of a computation.
    They follow the scikit-learn estimator conventions: ``__init__`` only stores
    its arguments, ``get_params``/``set_params``/``clone`` work as usual and the
    parameters are validated lazily by :meth:`_check_params` whenever an
    operation consumes the control.
    """

    def _check_params(self):
        """
        Checks the parameters of the control.
        """
        pass

    def resolved_params(self) -> Dict[str, Any]:
        """
        Validated parameters as a JSON-serialisable dictionary.

        Returns
        -------
        params : dict
        """
        self._check_params()
        return {key: _jsonable(value) for key, value in self.get_params().items()}


class SumControl(BaseControl):
    """
    Truncation of the q-series and lattice sums.

    Parameters
    ----------
    q_terms : int, optional
        Maximum number of terms of a q-series. Default is 64.
    lattice_radius : int, optional
        Truncation radius of lattice sums, in units of the shorter lattice
        period. Default is 60.
    tol : float, optional
        Target absolute accuracy of tail bounds. Default is 1e-10.

    Examples
    --------
    >>> from ellint import SumControl
    >>> SumControl(q_terms=32).get_params()["q_terms"]
    32
    """

    def __init__(self, q_terms: int = 64, lattice_radius: int = 60, tol: float = 1e-10):
        self.q_terms = q_terms
        self.lattice_radius = lattice_radius
        self.tol = tol

    def _check_params(self):
        _check_integer("q_terms", self.q_terms, minimum=1)
        _check_integer("lattice_radius", self.lattice_radius, minimum=1)
        _check_positive("tol", self.tol)
        if self.tol >= 1:
            raise ValidationError(f"tol must be < 1, got {self.tol}")


def _sum_control(ctl) -> SumControl:
    if ctl is None:
        ctl = SumControl()
    elif not isinstance(ctl, SumControl):
        raise ValidationError(f"expected a SumControl, got {type(ctl).__name__}")
    ctl._check_params()
    return ctl
