import numpy as np
import pytest
from sklearn.utils.validation import check_random_state

from ellint import SumControl
from ellint.exceptions import NonpositiveTimeError, ValidationError
from ellint.modular import ModularGroupElement, e2_star, eisenstein, weierstrass_p
from ellint.propagator import (
    E2_STAR_CANDIDATES,
    RegularizationWindow,
    TorusPoint,
    bcov_limit,
    bcov_propagator,
    e2_star_coefficient,
    heat_equation_residual,
    heat_kernel,
    poisson_theta_check,
    propagator_fourier_coefficient,
    self_loop_value,
    semigroup_residual,
    transform_check,
)

Z = np.array([0.21 + 0.13j, -0.34 + 0.27j, 0.05 - 0.41j])


def test_window_validation():
    assert RegularizationWindow(1e-3, 10.0).scaled(2.0) == RegularizationWindow(2e-3, 20.0)
    with pytest.raises(ValidationError):
        RegularizationWindow(1.0, 0.5)
    with pytest.raises(ValidationError):
        RegularizationWindow(0.0, 1.0)


def test_torus_point_wraps():
    p = TorusPoint(1.25, -0.5)
    assert p.a == pytest.approx(0.25)
    assert p.b == pytest.approx(0.5)
    tau = 0.3 + 1.2j
    q = TorusPoint.from_complex(1.4 + 0.6j, tau)
    assert 0 <= q.a < 1 and 0 <= q.b < 1
    assert q.to_complex(tau) == pytest.approx(1.4 + 0.6j - 1)


@pytest.mark.parametrize("a", [0.0, 0.3, 0.5, 0.9, 1.7, -2.45])
@pytest.mark.parametrize("L", [0.01, 0.1, 0.3, 1.0, 5.0, 10.0])
def test_poisson_theta(a, L):
    assert poisson_theta_check(a, L) < 1e-12


def test_heat_kernel_time_must_be_positive():
    with pytest.raises(NonpositiveTimeError):
        heat_kernel(0.1, 1j, 0.0)


@pytest.mark.parametrize("t", [0.05, 0.5])
def test_heat_kernel_is_normalised(t):
    tau = 0.2 + 1j
    grid = 64
    nodes = np.arange(grid) / grid
    a, b = np.meshgrid(nodes, nodes, indexing="ij")
    values = heat_kernel((a + b * tau).ravel(), tau, t)
    assert values.mean() * tau.imag == pytest.approx(1.0, abs=1e-9)


def test_heat_kernel_forms_agree():
    # Im τ² / 4 separates the position and momentum sums
    tau = 0.1 + 1.2j
    t = tau.imag**2 / 4
    below = heat_kernel(Z, tau, t * (1 - 1e-10))
    above = heat_kernel(Z, tau, t * (1 + 1e-10))
    np.testing.assert_allclose(below, above, rtol=1e-8)


def test_heat_kernel_is_periodic():
    tau = -0.3 + 0.9j
    base = heat_kernel(Z, tau, 0.1)
    np.testing.assert_allclose(heat_kernel(Z + 1, tau, 0.1), base, rtol=1e-12)
    np.testing.assert_allclose(heat_kernel(Z - tau, tau, 0.1), base, rtol=1e-12)


def test_heat_equation():
    assert heat_equation_residual(0.2 + 0.3j, 1j, 0.1) < 1e-6


def test_semigroup():
    assert semigroup_residual(0.2 + 0.3j, 1j, 0.1, 0.2) < 1e-8


def test_fourier_coefficient():
    window = RegularizationWindow(1e-2, 1.0)
    assert propagator_fourier_coefficient(0, 1j, window) == 0
    kappa = 4 * np.pi**2
    expected = (np.exp(-1e-2 * kappa) - np.exp(-kappa)) / 4
    assert propagator_fourier_coefficient(1, 1j, window) == pytest.approx(expected)
    # μ̄/μ (πμ̄/y)^k at μ = i
    assert propagator_fourier_coefficient(1j, 1j, window, 1) == pytest.approx(
        -1 * (-1j * np.pi) * expected
    )


def test_propagator_derivative_matches_finite_difference():
    tau = 0.1 + 1.1j
    window = RegularizationWindow(1e-2, 10.0)
    z, h = 0.23 + 0.17j, 1e-5
    dx = (bcov_propagator(z + h, tau, window) - bcov_propagator(z - h, tau, window)) / (2 * h)
    dy = (bcov_propagator(z + 1j * h, tau, window) - bcov_propagator(z - 1j * h, tau, window)) / (
        2 * h
    )
    assert bcov_propagator(z, tau, window, m=1) == pytest.approx(0.5 * (dx - 1j * dy), abs=1e-5)


def test_propagator_integrates_to_zero():
    tau = 1j
    window = RegularizationWindow(0.05, 2.0)
    grid = 64
    nodes = (np.arange(grid) + 0.5) / grid
    a, b = np.meshgrid(nodes, nodes, indexing="ij")
    values = bcov_propagator((a + b * tau).ravel(), tau, window)
    assert abs(values.mean()) < 1e-9


@pytest.mark.parametrize(
    "gamma",
    [ModularGroupElement.T(), ModularGroupElement.S(), ModularGroupElement(1, 0, 1, 1)],
)
@pytest.mark.parametrize("m", [0, 1, 2])
def test_transformation_law(gamma, m):
    window = RegularizationWindow(1e-2, 1.0)
    assert transform_check(Z, 0.1 + 1.1j, gamma, window, m) < 1e-7


def test_e2_star_coefficient():
    assert e2_star_coefficient() == E2_STAR_CANDIDATES["pi/12"]


def test_self_loop_values():
    tau = 0.2 + 1.3j
    assert self_loop_value(1, tau) == 0
    assert self_loop_value(3, tau) == 0
    assert self_loop_value(2, tau) == pytest.approx(np.pi**3 / 30 * eisenstein(4, tau))
    with pytest.raises(ValidationError):
        self_loop_value(-1, tau)


@pytest.mark.slow
@pytest.mark.parametrize("m", [0, 1, 2])
def test_limit_matches_small_regulator(m):
    tau = 0.1 + 1.1j
    ctl = SumControl(tol=1e-12)
    regulated = bcov_propagator(Z, tau, RegularizationWindow(1e-4, 100.0), m, ctl)
    np.testing.assert_allclose(regulated, bcov_limit(Z, tau, m, ctl), atol=1e-7)


def test_window_additivity():
    ctl = SumControl(tol=1e-14)
    tau = 0.1 + 1.1j
    lower = bcov_propagator(Z, tau, RegularizationWindow(1e-3, 0.5), ctl=ctl)
    upper = bcov_propagator(Z, tau, RegularizationWindow(0.5, 20.0), ctl=ctl)
    split = lower + upper
    whole = bcov_propagator(Z, tau, RegularizationWindow(1e-3, 20.0), ctl=ctl)
    np.testing.assert_allclose(split, whole, rtol=0, atol=1e-12)


def test_window_convergence_is_monotone():
    # close to the diagonal the small-t tail is still visible at ε = 1e-4
    z = np.array([0.03, 0.02 + 0.02j, -0.025 + 0.01j])
    tau = 0.1 + 1.1j
    ctl = SumControl(tol=1e-12)
    limit = bcov_limit(z, tau, ctl=ctl)
    coarse = np.abs(bcov_propagator(z, tau, RegularizationWindow(1e-4, 1e3), ctl=ctl) - limit)
    fine = np.abs(bcov_propagator(z, tau, RegularizationWindow(1e-5, 1e4), ctl=ctl) - limit)
    assert np.all(coarse > fine)


@pytest.mark.slow
def test_propagator_matches_closed_form_at_random_points():
    rng = check_random_state(0)
    window = RegularizationWindow(1e-5, 1e4)
    for _ in range(10):
        tau = rng.uniform(-0.5, 0.5) + 1j * rng.uniform(0.8, 1.6)
        z = rng.uniform(0.2, 0.8) + rng.uniform(0.2, 0.8) * tau
        regulated = bcov_propagator(z, tau, window)
        closed = weierstrass_p(z, tau, method="q") / (4 * np.pi) + np.pi / 12 * e2_star(tau)
        assert regulated == pytest.approx(closed, abs=1e-4)


@pytest.mark.parametrize("tau", [1j, 0.3 + 0.8j])
def test_self_loop_second_derivative(tau):
    expected = np.pi**3 / 30 * eisenstein(4, tau)
    assert self_loop_value(2, tau) == pytest.approx(expected, rel=1e-6)
    # constant Laurent term of ∂²P at the diagonal, read off a circle
    z = 0.2 * np.exp(2j * np.pi * np.arange(16) / 16)
    regular = bcov_limit(z, tau, m=2) - 6 / (4 * np.pi * z**4)
    assert np.mean(regular) == pytest.approx(expected, rel=1e-6)
