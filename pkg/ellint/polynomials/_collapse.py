"""
Collapse of a flat two-vertex graph onto the diagonal.

For a two-vertex graph with k + 1 parallel edges decorated (n_0; n_1, ..., n_k),
the kernel ∂^{n_0}U_ε on edge 0 and ∂^{n_i}P_ε^L on the others, paired with a
test function Φ(z_1, z_2), tends as ε → 0 to

.. math::

    (-1)^{\\sum n} \\frac{A(n_0; n_1, \\ldots, n_k)}{(4\\pi)^k}
    \\int d^2z\\, \\partial_{z_1}^N \\Phi(z, z),
    \\qquad N = n_0 + 1 + \\sum_i (n_i + 2),

with the rational constant

.. math::

    A(n_0; n_1, \\ldots, n_k) = \\int_{[0,1]^k} \\prod_i du_i\\,
    \\frac{\\prod_i u_i^{n_i + 1}}{(1 + \\sum_i u_i)^{\\sum_{j=0}^k (n_j + 2)}}.
"""
import logging
import math
import warnings
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral
from typing import Dict, Optional, Sequence, Tuple

import mpmath
import numpy as np
import sympy
from numpy.polynomial.legendre import leggauss
from scipy.special import gamma, gammainc

from ellint.exceptions import (
    UnsupportedArityError,
    UnsupportedError,
    ValidationError,
    WrongShapeError,
)
from ellint.graphs import DecoratedGraph
from ellint.utils import _check_decreasing, _check_integer, _check_positive

logger = logging.getLogger(__name__)

MAX_DERIVATIVE_ORDER = 8


@dataclass(frozen=True)
class RationalConstant:
    """
    A rational number in lowest terms, flagged when it was reconstructed
    from a floating-point quadrature instead of computed exactly.

    Examples
    --------
    >>> str(RationalConstant(Fraction(2, 24)))
    '1/12'
    """

    value: Fraction
    exact: bool = True

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def __float__(self):
        return float(self.value)

    def __str__(self):
        return f"{self.numerator}/{self.denominator}"


def _check_decorations(n0, ns) -> Tuple[int, Tuple[int, ...]]:
    n0 = _check_integer("n0", n0)
    ns = tuple(_check_integer(f"ns[{i}]", n) for i, n in enumerate(ns))
    return n0, ns


def _integrate_last(terms: Dict) -> Dict:
    """
    Integrate the last variable u ∈ [0, 1] out of Σ coeff · Π u_i^{a_i} · S^{-p},
    S = c + Σ u_i, keeping every term of the same shape.
    """
    out = defaultdict(Fraction)
    for (exponents, c, p), coeff in terms.items():
        *rest, a = exponents
        rest = tuple(rest)
        # u^a = Σ_j C(a,j) (S+u)^j (−S)^{a−j}; ∫_0^1 (S+u)^{j−p} du = [(S+1)^e − S^e]/e
        for j in range(a + 1):
            e = j - p + 1
            base = coeff * math.comb(a, j) * (-1) ** (a - j) / e
            out[(rest, c, p - a - 1)] -= base
            # S^{a−j} = ((S+1) − 1)^{a−j}
            for l in range(a - j + 1):
                out[(rest, c + 1, -(l + e))] += base * math.comb(a - j, l) * (-1) ** (a - j - l)
    return {key: value for key, value in out.items() if value}


def _a_constant_exact(n0: int, ns: Tuple[int, ...]) -> Fraction:
    power = sum(n + 2 for n in (n0,) + ns)
    terms = {(tuple(n + 1 for n in ns), Fraction(1), power): Fraction(1)}
    for _ in ns:
        terms = _integrate_last(terms)
    logger.debug("a_constant(%d; %s): %d final terms", n0, list(ns), len(terms))
    return sum((coeff / c**p for (_, c, p), coeff in terms.items()), Fraction(0))


def a_constant_quadrature(n0: int, ns: Sequence[int], dps: int = 30) -> mpmath.mpf:
    """
    A(n_0; ns) by high-precision quadrature of its one-dimensional form

    .. math::

        \\frac{1}{\\Gamma(p)} \\int_0^\\infty x^{p-1} e^{-x}
        \\prod_i \\frac{\\gamma(n_i + 2, x)}{x^{n_i + 2}}\\, dx.
    """
    n0, ns = _check_decorations(n0, ns)
    power = sum(n + 2 for n in (n0,) + ns)
    with mpmath.workdps(dps):

        def integrand(x):
            value = x ** (power - 1) * mpmath.exp(-x)
            for n in ns:
                value *= mpmath.gammainc(n + 2, 0, x) / x ** (n + 2)
            return value

        return +(mpmath.quad(integrand, [0, 1, 10, 100, mpmath.inf]) / mpmath.gamma(power))


def a_constant(
    n0: int, ns: Sequence[int] = (), exact: bool = True, max_arity: int = 6
) -> RationalConstant:
    """
    The rational collapse constant A(n_0; n_1, ..., n_k).

    Parameters
    ----------
    n0 : int
        Decoration of the edge carrying U_ε.
    ns : sequence of int, optional
        Decorations of the k remaining edges.
    exact : bool, optional
        Require exact rational arithmetic. Default is True.
    max_arity : int, optional
        Largest k computed exactly. Default is 6.

    Returns
    -------
    constant : RationalConstant

    Raises
    ------
    UnsupportedArityError
        If ``k > max_arity`` and ``exact`` is set.

    Examples
    --------
    >>> str(a_constant(0, [0]))
    '1/12'
    """
    n0, ns = _check_decorations(n0, ns)
    if len(ns) <= max_arity:
        return RationalConstant(_a_constant_exact(n0, ns))
    if exact:
        raise UnsupportedArityError(
            f"exact A(n0; ns) is implemented for k <= {max_arity}, got k = {len(ns)}"
        )
    warnings.warn(
        f"A({n0}; {list(ns)}) reconstructed from quadrature and is only approximately rational"
    )
    value = Fraction(str(a_constant_quadrature(n0, ns))).limit_denominator(10**12)
    return RationalConstant(value, exact=False)


class FlatTestFunction:
    """
    Compactly supported test function Φ(z_1, z_2) on C².

    Φ is a polynomial in (z_1, z̄_1, z_2, z̄_2) times the bump
    (1 − (|z_1|² + |z_2|²)/R²)^power inside the ball of radius R and 0 outside.
    Holomorphic derivatives are taken symbolically with z and z̄ as independent
    variables.

    Parameters
    ----------
    coefficients : dict, optional
        Map ``(i, j, k, l) -> c`` for the monomial c·z_1^i z̄_1^j z_2^k z̄_2^l.
        Default is ``{(0, 0, 0, 0): 1, (3, 0, 0, 0): 1, (1, 0, 0, 1): 0.5}``.
    radius : float, optional
        Support radius R. Default is 1.
    power : int, optional
        Exponent of the bump, Φ is C^{power-1}. Default is 4.

    Examples
    --------
    >>> phi = FlatTestFunction()
    >>> phi(0.0, 0.0)
    (1+0j)
    """

    def __init__(
        self,
        coefficients: Optional[Dict[Tuple[int, int, int, int], complex]] = None,
        radius: float = 1.0,
        power: int = 4,
    ):
        if coefficients is None:
            coefficients = {(0, 0, 0, 0): 1, (3, 0, 0, 0): 1, (1, 0, 0, 1): 0.5}
        self.coefficients = dict(coefficients)
        self.radius = _check_positive("radius", radius)
        self.power = _check_integer("power", power, minimum=1)
        for key in self.coefficients:
            if len(key) != 4 or any(
                isinstance(i, bool) or not isinstance(i, Integral) or i < 0 for i in key
            ):
                raise ValidationError(f"monomial exponents must be 4 non-negative ints, got {key}")
        self._symbols = sympy.symbols("z1 zb1 z2 zb2")
        z1, zb1, z2, zb2 = self._symbols
        polynomial = sum(
            (
                sympy.sympify(complex(c) if isinstance(c, complex) else c)
                * z1**i * zb1**j * z2**k * zb2**l
                for (i, j, k, l), c in self.coefficients.items()
            ),
            sympy.Integer(0),
        )
        bump = (1 - (z1 * zb1 + z2 * zb2) / sympy.Float(self.radius) ** 2) ** self.power
        self.expression = sympy.expand(polynomial * bump)
        self._compiled = {}

    @property
    def degree(self) -> int:
        """Total degree in (z_1, z̄_1, z_2, z̄_2) inside the support."""
        if not self.coefficients:
            return 0
        return max(sum(key) for key in self.coefficients) + 2 * self.power

    def _function(self, d1: int, d2: int):
        if (d1, d2) not in self._compiled:
            z1, _, z2, _ = self._symbols
            expression = self.expression
            if d1:
                expression = sympy.diff(expression, z1, d1)
            if d2:
                expression = sympy.diff(expression, z2, d2)
            self._compiled[(d1, d2)] = sympy.lambdify(self._symbols, expression, "numpy")
        return self._compiled[(d1, d2)]

    def derivative(self, z1, z2, d1: int = 0, d2: int = 0):
        """
        ∂_{z_1}^{d1} ∂_{z_2}^{d2} Φ at (z1, z2).

        Raises
        ------
        UnsupportedError
            If d1 + d2 exceeds 8.
        """
        d1, d2 = _check_integer("d1", d1), _check_integer("d2", d2)
        if d1 + d2 > MAX_DERIVATIVE_ORDER:
            raise UnsupportedError(
                f"derivative order {d1 + d2} exceeds {MAX_DERIVATIVE_ORDER}"
            )
        if d1 + d2 >= self.power:
            warnings.warn(
                f"derivative order {d1 + d2} is not continuous for a bump of power {self.power}"
            )
        z1, z2 = np.broadcast_arrays(
            np.asarray(z1, dtype=complex), np.asarray(z2, dtype=complex)
        )
        inside = np.abs(z1) ** 2 + np.abs(z2) ** 2 < self.radius**2
        value = self._function(d1, d2)(z1, np.conj(z1), z2, np.conj(z2))
        value = np.asarray(value, dtype=complex) + np.zeros(z1.shape)
        value = np.where(inside, value, 0)
        return complex(value) if value.ndim == 0 else value

    def __call__(self, z1, z2):
        return self.derivative(z1, z2)

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_compiled"] = {}
        return state


@dataclass(frozen=True)
class FlatCollapseResult:
    """Both sides of the flat collapse identity along an ε schedule."""

    eps: Tuple[float, ...]
    lhs: Tuple[complex, ...]
    rhs: complex
    constant: RationalConstant
    derivative_order: int
    residual: float
    relative: float


def _polar_rule(radius: float, n_radial: int, n_angular: int):
    x, w = leggauss(n_radial)
    s = radius * (x + 1) / 2
    ws = radius / 2 * w * s
    phi = 2 * np.pi * np.arange(n_angular) / n_angular
    points = s[:, None] * np.exp(1j * phi)[None, :]
    weights = np.repeat(ws[:, None], n_angular, axis=1) * (2 * np.pi / n_angular)
    return points.ravel(), weights.ravel()


def _diagonal_integral(phi: FlatTestFunction, order: int) -> complex:
    """∫ d²z ∂_{z_1}^order Φ(z, z) over the disk |z|² ≤ R²/2 where it lives."""
    degree = phi.degree
    points, weights = _polar_rule(phi.radius / np.sqrt(2), degree // 2 + 2, degree + 2)
    return complex(np.dot(weights, phi.derivative(points, points, order)))


def _relative_integral(phi: FlatTestFunction, z: np.ndarray) -> np.ndarray:
    """F(z) = ∫ d²y Φ(y + z, y), exact for the polynomial inside the support."""
    degree = phi.degree
    rho = np.sqrt(np.maximum(phi.radius**2 - np.abs(z) ** 2 / 2, 0.0) / 2)
    x, w = leggauss(degree // 2 + 2)
    n_angular = degree + 2
    angles = np.exp(2j * np.pi * np.arange(n_angular) / n_angular)
    s = rho[:, None] * (x + 1) / 2
    ws = rho[:, None] / 2 * w * s * (2 * np.pi / n_angular)
    y = -z[:, None, None] / 2 + s[:, :, None] * angles[None, None, :]
    values = phi(y + z[:, None, None], y)
    return np.einsum("ij,ijk->i", ws, values)


def flat_collapse_check(
    two_vertex_g: DecoratedGraph,
    phi: FlatTestFunction,
    schedule: Sequence[float],
    L: float = 1.0,
    n_radial: int = 32,
) -> FlatCollapseResult:
    """
    Flat two-vertex graph integral against Φ along a decreasing ε schedule,
    compared with its collapsed limit.

    Parameters
    ----------
    two_vertex_g : DecoratedGraph
        Two vertices, k + 1 ≥ 1 edges all oriented from the first vertex to
        the second. Edge 0 carries U_ε, the others P_ε^L.
    phi : FlatTestFunction
    schedule : sequence of float
        Strictly decreasing ε values, each below L.
    L : float, optional
        Upper Schwinger cutoff. Default is 1.
    n_radial : int, optional
        Gauss-Legendre nodes per radial panel. Default is 32.

    Returns
    -------
    result : FlatCollapseResult
        ``residual`` is |LHS − RHS| at the smallest ε.

    Raises
    ------
    WrongShapeError
    """
    g = two_vertex_g
    if g.n_vertices != 2 or g.n_edges == 0:
        raise WrongShapeError(
            f"need two vertices and at least one edge, got {g.n_vertices} and {g.n_edges}"
        )
    first, second = g.vertices
    if any(e.head != first or e.tail != second for e in g.edges):
        raise WrongShapeError(f"every edge must run {first!r} -> {second!r}")
    schedule = _check_decreasing("schedule", schedule)
    L = _check_positive("L", L)
    if schedule[0] >= L:
        raise ValidationError(f"schedule must lie below L={L}, got {schedule[0]}")

    n0, ns = g.edges[0].n, tuple(e.n for e in g.edges[1:])
    k = len(ns)
    order = n0 + 1 + sum(n + 2 for n in ns)
    sign = (-1) ** (n0 + sum(ns))
    constant = a_constant(n0, ns)

    degree = phi.degree + 2
    n_angular = degree + order + 4
    angles = 2 * np.pi * np.arange(n_angular) / n_angular
    x, w = leggauss(n_radial)
    panels = np.linspace(0.0, 7.0, 5)
    half = np.diff(panels) / 2
    nodes = ((panels[:-1] + panels[1:])[:, None] / 2 + half[:, None] * x).ravel()
    weights = (half[:, None] * w).ravel()

    lhs = []
    for eps in schedule:
        r = 2 * np.sqrt(eps) * nodes
        kernel = np.exp(-(r**2) / (4 * eps)) / (4 * np.pi * eps) / (4 * eps) ** (n0 + 1)
        for n in ns:
            m = n + 2
            window = gammainc(m, r**2 / (4 * eps)) - gammainc(m, r**2 / (4 * L))
            kernel = kernel * gamma(m) * window / (4 * np.pi * r ** (2 * m))
        z = (r[:, None] * np.exp(1j * angles)[None, :]).ravel()
        F = _relative_integral(phi, z).reshape(r.size, n_angular)
        G = (F * np.exp(-1j * order * angles)[None, :]).sum(axis=1) * (2 * np.pi / n_angular)
        integrand = r ** (order + 1) * kernel * G
        lhs.append(complex(sign * np.dot(weights, integrand) * 2 * np.sqrt(eps)))
        logger.debug("flat collapse eps=%g: lhs=%s", eps, lhs[-1])

    rhs = complex(sign * float(constant) / (4 * np.pi) ** k * _diagonal_integral(phi, order))
    residual = abs(lhs[-1] - rhs)
    relative = residual / abs(rhs) if rhs != 0 else residual
    return FlatCollapseResult(
        eps=schedule,
        lhs=tuple(lhs),
        rhs=rhs,
        constant=constant,
        derivative_order=order,
        residual=float(residual),
        relative=float(relative),
    )
