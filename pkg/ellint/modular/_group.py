"""
Points of the upper half-plane and the action of SL(2, Z) on them.
"""
import logging
import warnings
from dataclasses import dataclass
from numbers import Integral
from typing import Tuple, Union

import numpy as np

from ellint.exceptions import ValidationError

logger = logging.getLogger(__name__)

_MAX_REDUCTION_STEPS = 1000


@dataclass(frozen=True)
class ModularPoint:
    """
    A point τ = re + i·im of the upper half-plane.

    Parameters
    ----------
    re : float
        Re τ.
    im : float
        Im τ, strictly positive.

    Examples
    --------
    >>> ModularPoint(0.0, 1.0).tau
    1j
    """

    re: float
    im: float

    def __post_init__(self):
        for name in ("re", "im"):
            value = getattr(self, name)
            if isinstance(value, bool) or not np.isfinite(value):
                raise ValidationError(f"tau.{name} must be a finite real, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.im <= 0:
            raise ValidationError(f"Im tau must be > 0, got {self.im}")

    @classmethod
    def from_complex(cls, tau: complex) -> "ModularPoint":
        tau = complex(tau)
        return cls(tau.real, tau.imag)

    @property
    def tau(self) -> complex:
        return complex(self.re, self.im)

    def __complex__(self):
        return self.tau


TauLike = Union[ModularPoint, complex]


def _as_point(tau: TauLike) -> ModularPoint:
    if isinstance(tau, ModularPoint):
        return tau
    return ModularPoint.from_complex(tau)


@dataclass(frozen=True)
class ModularGroupElement:
    """
    γ = (A B; C D) in SL(2, Z), acting by τ ↦ (Aτ + B)/(Cτ + D).

    Examples
    --------
    >>> S = ModularGroupElement.S()
    >>> S.act(2j).im
    0.5
    """

    A: int
    B: int
    C: int
    D: int

    def __post_init__(self):
        for name in "ABCD":
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, Integral):
                raise ValidationError(f"gamma entry {name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.A * self.D - self.B * self.C != 1:
            raise ValidationError(
                f"gamma must have determinant 1, got AD - BC = {self.A * self.D - self.B * self.C}"
            )

    @classmethod
    def identity(cls) -> "ModularGroupElement":
        return cls(1, 0, 0, 1)

    @classmethod
    def S(cls) -> "ModularGroupElement":
        return cls(0, -1, 1, 0)

    @classmethod
    def T(cls, n: int = 1) -> "ModularGroupElement":
        return cls(1, n, 0, 1)

    @classmethod
    def from_word(cls, word: str) -> "ModularGroupElement":
        """Product of generators, e.g. ``"ST"`` is S·T (T acts first)."""
        gamma = cls.identity()
        for letter in word:
            if letter not in "ST":
                raise ValidationError(f"unknown generator {letter!r} in {word!r}")
            gamma = gamma @ (cls.S() if letter == "S" else cls.T())
        return gamma

    def __matmul__(self, other: "ModularGroupElement") -> "ModularGroupElement":
        return ModularGroupElement(
            self.A * other.A + self.B * other.C,
            self.A * other.B + self.B * other.D,
            self.C * other.A + self.D * other.C,
            self.C * other.B + self.D * other.D,
        )

    def inverse(self) -> "ModularGroupElement":
        return ModularGroupElement(self.D, -self.B, -self.C, self.A)

    def automorphy(self, tau: TauLike) -> complex:
        """Automorphy factor Cτ + D."""
        return self.C * _as_point(tau).tau + self.D

    def act(self, tau: TauLike) -> ModularPoint:
        t = _as_point(tau).tau
        return ModularPoint.from_complex((self.A * t + self.B) / (self.C * t + self.D))

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return self.A, self.B, self.C, self.D


def reduce_to_fundamental_domain(tau: TauLike) -> Tuple[ModularPoint, ModularGroupElement]:
    """
    Move τ into the standard fundamental domain.

    Returns
    -------
    reduced : ModularPoint
        τ' with |Re τ'| ≤ 1/2 and |τ'| ≥ 1.
    gamma : ModularGroupElement
        The element with γτ = τ'.

    Examples
    --------
    >>> reduced, gamma = reduce_to_fundamental_domain(5 + 1j)
    >>> reduced.tau, gamma.as_tuple()
    (1j, (1, -5, 0, 1))
    """
    point = _as_point(tau)
    gamma = ModularGroupElement.identity()
    t = point.tau
    for _ in range(_MAX_REDUCTION_STEPS):
        n = int(np.floor(t.real + 0.5))
        if n:
            t -= n
            gamma = ModularGroupElement.T(-n) @ gamma
        if abs(t) < 1.0 - 1e-15:
            t = -1.0 / t
            gamma = ModularGroupElement.S() @ gamma
        else:
            break
    else:
        warnings.warn(
            f"fundamental-domain reduction of tau={point.tau} did not settle "
            f"within {_MAX_REDUCTION_STEPS} steps"
        )
    # recompute from gamma so that the returned pair is consistent
    reduced = gamma.act(point)
    logger.debug("reduced tau=%s to %s via %s", point.tau, reduced.tau, gamma.as_tuple())
    return reduced, gamma
