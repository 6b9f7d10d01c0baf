import os
import warnings
from numbers import Integral, Real

import numpy as np

from ellint.exceptions import ValidationError

THREADS_ENV = "ELLINT_THREADS"


def _process_parameter(parameter_name: str, parameter, default, n_items: int):
    if parameter is None:
        parameter = [default] * n_items
    elif not isinstance(parameter, (list, tuple, np.ndarray, dict)):
        parameter = [parameter] * n_items
    elif isinstance(parameter, dict):
        missing = [i for i in range(n_items) if i not in parameter]
        if missing:
            raise ValidationError(
                f"{parameter_name} must give a value for every edge, missing {missing}"
            )
        parameter = [parameter[i] for i in range(n_items)]
    _check_parameter_number(parameter_name, parameter, n_items)
    return list(parameter)


def _check_parameter_number(parameter_name: str, parameter, n_items: int):
    if len(parameter) != n_items:
        raise ValidationError(
            f"number of entries in {parameter_name} should match the number of edges: "
            f"expected {n_items} and "
            f"len({parameter_name})={len(parameter)}"
        )


def _check_positive(parameter_name: str, value, strict: bool = True):
    if not isinstance(value, Real) or not np.isfinite(value):
        raise ValidationError(f"{parameter_name} must be a finite real, got {value!r}")
    if strict and value <= 0:
        raise ValidationError(f"{parameter_name} must be > 0, got {value}")
    if not strict and value < 0:
        raise ValidationError(f"{parameter_name} must be >= 0, got {value}")
    return float(value)


def _check_integer(parameter_name: str, value, minimum: int = 0):
    if isinstance(value, bool) or not isinstance(value, Integral):
        raise ValidationError(f"{parameter_name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValidationError(f"{parameter_name} must be >= {minimum}, got {value}")
    return int(value)


def _check_decreasing(parameter_name: str, values):
    values = [float(v) for v in values]
    if len(values) == 0:
        raise ValidationError(f"{parameter_name} must not be empty")
    if any(v <= 0 for v in values):
        raise ValidationError(f"{parameter_name} must be positive, got {values}")
    if any(b >= a for a, b in zip(values, values[1:])):
        raise ValidationError(f"{parameter_name} must be strictly decreasing, got {values}")
    return tuple(values)


def _resolve_n_jobs(n_jobs=None):
    """Number of workers, capped by the ``ELLINT_THREADS`` environment variable."""
    cap = os.environ.get(THREADS_ENV)
    if cap is None or cap.strip() == "":
        return n_jobs
    try:
        cap = int(cap)
    except ValueError:
        warnings.warn(f"ignoring {THREADS_ENV}={cap!r}: not an integer")
        return n_jobs
    if cap < 1:
        warnings.warn(f"ignoring {THREADS_ENV}={cap}: must be >= 1")
        return n_jobs
    if n_jobs is None or n_jobs < 0 or n_jobs > cap:
        return cap
    return n_jobs
