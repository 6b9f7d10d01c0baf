from .check_values import (
    THREADS_ENV,
    _check_decreasing,
    _check_integer,
    _check_parameter_number,
    _check_positive,
    _process_parameter,
    _resolve_n_jobs,
)
