from ._eisenstein import e2_star, eisenstein, eisenstein_lattice, zeta_even
from ._group import (
    ModularGroupElement,
    ModularPoint,
    reduce_to_fundamental_domain,
)
from ._weierstrass import weierstrass_invariants, weierstrass_p

__all__ = [
    "ModularGroupElement",
    "ModularPoint",
    "e2_star",
    "eisenstein",
    "eisenstein_lattice",
    "reduce_to_fundamental_domain",
    "weierstrass_invariants",
    "weierstrass_p",
    "zeta_even",
]
