from ._bcov import (
    E2_STAR_CANDIDATES,
    bcov_limit,
    bcov_propagator,
    e2_star_coefficient,
    propagator_fourier_coefficient,
)
from ._heat import RegularizationWindow, TorusPoint, heat_kernel
from ._identities import (
    heat_equation_residual,
    poisson_theta_check,
    self_loop_value,
    semigroup_residual,
    transform_check,
)

__all__ = [
    "E2_STAR_CANDIDATES",
    "RegularizationWindow",
    "TorusPoint",
    "bcov_limit",
    "bcov_propagator",
    "e2_star_coefficient",
    "heat_equation_residual",
    "heat_kernel",
    "poisson_theta_check",
    "propagator_fourier_coefficient",
    "self_loop_value",
    "semigroup_residual",
    "transform_check",
]
