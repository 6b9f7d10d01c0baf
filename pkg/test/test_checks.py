import numpy as np
import pytest

from ellint.data import banana, edgeless, self_loop, single_edge, triangle
from ellint.engine import (
    QuadratureControl,
    anomaly_check,
    banana2_closed_form,
    imtau_fit,
    modularity_check,
    wirtinger_dbar,
)
from ellint.exceptions import IllConditionedFit, NotSimpleError, StepTooLargeError, ValidationError
from ellint.modular import ModularGroupElement, e2_star, eisenstein


def _patch(center, radius=0.1, n=5):
    steps = radius * np.linspace(-1, 1, n)
    return [center + a + 1j * b for a in steps for b in steps]


def _segment(x, low, high, n=11):
    return [x + 1j * y for y in np.linspace(low, high, n)]


@pytest.mark.parametrize(
    "f,expected",
    [
        (lambda t: t, lambda t: 0),
        (lambda t: t.imag, lambda t: 0.5j),
        (lambda t: np.conj(t) ** 2, lambda t: 2 * np.conj(t)),
        (e2_star, lambda t: 3j / (2 * np.pi * t.imag**2)),
    ],
)
def test_wirtinger_dbar(f, expected):
    tau = 0.15 + 1.05j
    estimate = wirtinger_dbar(f, tau)
    assert estimate.value == pytest.approx(expected(tau), abs=1e-6)
    assert estimate.err < 1e-5
    assert estimate.h == pytest.approx(1e-3 * tau.imag)


def test_wirtinger_step_too_large():
    with pytest.raises(StepTooLargeError):
        wirtinger_dbar(lambda t: t, 1j, h=0.2)


@pytest.mark.parametrize("gamma", [ModularGroupElement.T(), ModularGroupElement.S()])
def test_modularity_self_loop(gamma):
    result = modularity_check(self_loop(2), 0.2 + 1.1j, gamma)
    assert result.residual < 1e-9
    assert result.params["weight"] == 4


@pytest.mark.parametrize(
    "gamma,tol",
    [(ModularGroupElement.T(), 1e-10), (ModularGroupElement.S(), 1e-6)],
)
def test_modularity_banana2(gamma, tol):
    result = modularity_check(banana(2), 0.2 + 1.1j, gamma)
    assert result.residual < tol
    assert result.params["gamma"] == list(gamma.as_tuple())
    assert result.rhs == pytest.approx(
        gamma.automorphy(0.2 + 1.1j) ** 4 * banana2_closed_form(0.2 + 1.1j), rel=1e-6
    )


def test_modularity_needs_group_element():
    with pytest.raises(ValidationError):
        modularity_check(banana(2), 1j, (0, -1, 1, 0))


def test_anomaly_single_edge():
    result = anomaly_check(single_edge(), 1j)
    assert result.lhs == 0
    assert result.rhs == 0
    assert result.residual == 0


@pytest.mark.parametrize("g", [banana(2), self_loop(0), single_edge(1)])
def test_anomaly_needs_simple_graph(g):
    with pytest.raises(NotSimpleError):
        anomaly_check(g, 1j)


@pytest.mark.slow
def test_anomaly_triangle():
    result = anomaly_check(triangle(), 1j)
    expected = -3j / 8 * banana2_closed_form(1j)
    assert result.rhs == pytest.approx(expected, rel=1e-6)
    assert result.residual < 0.02
    assert result.orientation == "deletion-minus-contraction"
    assert result.residual_reversed > 1


def test_imtau_fit_edgeless():
    fit = imtau_fit(edgeless(2), _segment(0.0, 1.0, 2.0))
    np.testing.assert_allclose(fit.coefficients[:, 0], [1, 0], atol=1e-8)
    assert fit.residual < 1e-10


def test_imtau_fit_holomorphic_graph():
    taus = _patch(0.2 + 2j)
    fit = imtau_fit(self_loop(2), taus, taylor_order=2, center=0.2 + 2j)
    c0 = fit.holomorphic_part(0)
    assert c0 == pytest.approx(np.pi**3 / 30 * eisenstein(4, 0.2 + 2j), rel=1e-4)
    assert abs(fit.holomorphic_part(1)) < 1e-3 * abs(c0)


def test_imtau_fit_recovers_e2_star_shift():
    # c_* E_2^* = (π/12) E_2 − 1/(4 Im τ)
    taus = _patch(0.2 + 2j)
    fit = imtau_fit(self_loop(0), taus, taylor_order=2, center=0.2 + 2j)
    assert fit.holomorphic_part(1) == pytest.approx(-0.25, abs=1e-3)


def test_imtau_fit_on_a_vertical_segment():
    fit = imtau_fit(self_loop(0), _segment(0.0, 0.9, 1.1))
    assert fit.center == pytest.approx(1j)
    assert len(fit.taus) == 5 * 11
    assert fit.holomorphic_part(0) == pytest.approx(np.pi / 12 * eisenstein(2, 1j), rel=1e-2)
    assert fit.holomorphic_part(1) == pytest.approx(-0.25, rel=1e-2)


def test_imtau_fit_segment_of_holomorphic_graph():
    fit = imtau_fit(self_loop(2), _segment(0.1, 1.9, 2.1))
    c0 = fit.holomorphic_part(0)
    assert c0 == pytest.approx(np.pi**3 / 30 * eisenstein(4, 0.1 + 2j), rel=1e-5)
    assert abs(fit.holomorphic_part(1)) < 1e-3 * abs(c0)


def test_imtau_fit_locally_constant_segment_is_biased():
    fit = imtau_fit(self_loop(0), _segment(0.0, 0.9, 1.1), taylor_order=0)
    assert len(fit.taus) == 11
    assert abs(fit.holomorphic_part(1) + 0.25) > 0.01


def test_imtau_fit_ill_conditioned():
    with pytest.raises(IllConditionedFit):
        imtau_fit(edgeless(1), [1j, 0.1 + 1j, 0.2 + 1j], taylor_order=0)


@pytest.mark.parametrize(
    "taus,params",
    [([1j, 2j], {"order": 2, "taylor_order": 0}), (_segment(0.0, 1.0, 2.0, n=4), {})],
)
def test_imtau_fit_needs_enough_points(taus, params):
    with pytest.raises(ValidationError):
        imtau_fit(edgeless(1), taus, **params)


def test_checks_share_the_control():
    ctl = QuadratureControl(eps_schedule=(1e-2, 5e-3, 2.5e-3))
    result = modularity_check(banana(2), 0.2 + 1.1j, ModularGroupElement.T(), ctl)
    assert result.params["eps_schedule"] == [1e-2, 5e-3, 2.5e-3]
