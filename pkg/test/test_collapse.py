import itertools
from fractions import Fraction

import numpy as np
import pytest

from ellint.data import banana, single_edge, triangle
from ellint.exceptions import UnsupportedArityError, UnsupportedError, WrongShapeError
from ellint.graphs import build_graph
from ellint.polynomials import (
    FlatTestFunction,
    RationalConstant,
    a_constant,
    a_constant_quadrature,
    flat_collapse_check,
)


def test_a_constant_without_propagators():
    assert a_constant(0).value == 1
    assert a_constant(3, []).value == 1


def test_a_constant_one_propagator():
    constant = a_constant(0, [0])
    assert constant.value == Fraction(1, 12)
    assert constant.exact
    assert str(constant) == "1/12"


@pytest.mark.parametrize(
    "n0,ns",
    [(0, [1]), (1, [0]), (2, [3]), (0, [0, 0]), (1, [2, 0]), (0, [1, 3])],
)
def test_a_constant_matches_quadrature(n0, ns):
    exact = a_constant(n0, ns)
    assert exact.exact
    assert float(exact) == pytest.approx(float(a_constant_quadrature(n0, ns)), rel=1e-12)


@pytest.mark.slow
@pytest.mark.parametrize("n0", range(4))
@pytest.mark.parametrize("k", [0, 1, 2])
def test_a_constant_matches_quadrature_on_grid(n0, k):
    for ns in itertools.product(range(4), repeat=k):
        exact = float(a_constant(n0, ns))
        assert exact == pytest.approx(float(a_constant_quadrature(n0, ns)), rel=1e-12)


def test_a_constant_is_symmetric():
    assert a_constant(1, [0, 2]).value == a_constant(1, [2, 0]).value


def test_a_constant_arity_cap():
    with pytest.raises(UnsupportedArityError):
        a_constant(0, [0, 0, 0], max_arity=2)
    with pytest.warns(UserWarning):
        approx = a_constant(0, [0, 0, 0], exact=False, max_arity=2)
    assert not approx.exact
    assert float(approx) == pytest.approx(float(a_constant(0, [0, 0, 0])), rel=1e-9)


def test_rational_constant_lowest_terms():
    c = RationalConstant(Fraction(6, 4))
    assert (c.numerator, c.denominator) == (3, 2)
    assert float(c) == 1.5


def test_test_function_support():
    phi = FlatTestFunction(radius=0.5)
    assert phi(0.0, 0.0) == 1
    assert phi(0.4, 0.4) == 0
    np.testing.assert_array_equal(phi(np.array([0.6, 0.0]), 0.0) == 0, [True, False])


def test_test_function_derivative_matches_finite_difference():
    phi = FlatTestFunction()
    z1, z2, h = 0.2 + 0.1j, 0.1 - 0.2j, 1e-6
    dx = (phi(z1 + h, z2) - phi(z1 - h, z2)) / (2 * h)
    dy = (phi(z1 + 1j * h, z2) - phi(z1 - 1j * h, z2)) / (2 * h)
    assert phi.derivative(z1, z2, d1=1) == pytest.approx(0.5 * (dx - 1j * dy), abs=1e-6)


def test_test_function_order_limits():
    phi = FlatTestFunction(power=2)
    with pytest.warns(UserWarning):
        phi.derivative(0.1, 0.1, d1=2)
    with pytest.raises(UnsupportedError):
        phi.derivative(0.1, 0.1, d1=5, d2=4)


@pytest.mark.parametrize(
    "g",
    [
        triangle(),
        build_graph([("a", "b", 0), ("b", "a", 0)]),
        build_graph([("a", "a", 0), ("a", "b", 0)], ["a", "b"]),
    ],
)
def test_flat_collapse_wrong_shape(g):
    with pytest.raises(WrongShapeError):
        flat_collapse_check(g, FlatTestFunction(), [1e-2, 1e-3])


def test_flat_collapse_of_zero_function():
    result = flat_collapse_check(single_edge(), FlatTestFunction({}), [1e-2, 1e-3])
    assert result.rhs == 0
    assert result.residual == 0
    assert result.derivative_order == 1


@pytest.mark.slow
def test_flat_collapse_one_propagator():
    schedule = [1e-2, 1e-3, 1e-4, 1e-5]
    result = flat_collapse_check(banana(2), FlatTestFunction(power=6), schedule)
    assert result.constant.value == Fraction(1, 12)
    assert result.derivative_order == 3
    errors = [abs(v - result.rhs) for v in result.lhs]
    assert errors[-1] < errors[0]
    assert result.relative < 0.01
