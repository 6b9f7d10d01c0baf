import numpy as np
import pytest
from mpmath import zeta
from sklearn.utils.validation import check_random_state
from sympy import divisor_sigma

from ellint import SumControl
from ellint.exceptions import (
    OddWeightError,
    PoleAtLatticePointError,
    UnsupportedError,
    ValidationError,
)
from ellint.modular import (
    ModularGroupElement,
    ModularPoint,
    e2_star,
    eisenstein,
    eisenstein_lattice,
    reduce_to_fundamental_domain,
    weierstrass_invariants,
    weierstrass_p,
    zeta_even,
)

TAUS = [1j, 0.3 + 0.9j, -0.45 + 1.7j, 0.1 + 0.4j, 2.2 + 0.3j]


def test_point_validation():
    assert ModularPoint.from_complex(0.5 + 2j).tau == 0.5 + 2j
    with pytest.raises(ValidationError):
        ModularPoint(0.0, 0.0)
    with pytest.raises(ValidationError):
        ModularPoint(np.nan, 1.0)


def test_group_law():
    S, T = ModularGroupElement.S(), ModularGroupElement.T()
    assert (S @ S @ S @ S).as_tuple() == (1, 0, 0, 1)
    ST = ModularGroupElement.from_word("ST")
    assert (ST @ ST @ ST).as_tuple() in {(1, 0, 0, 1), (-1, 0, 0, -1)}
    assert (T @ T.inverse()).as_tuple() == (1, 0, 0, 1)
    with pytest.raises(ValidationError):
        ModularGroupElement(1, 1, 1, 1)
    with pytest.raises(ValidationError):
        ModularGroupElement.from_word("SX")


@pytest.mark.parametrize("tau", TAUS)
def test_action_composes(tau):
    g1 = ModularGroupElement.from_word("STT")
    g2 = ModularGroupElement(2, 1, 1, 1)
    lhs = (g1 @ g2).act(tau).tau
    rhs = g1.act(g2.act(tau)).tau
    assert lhs == pytest.approx(rhs, rel=1e-12)


@pytest.mark.parametrize("tau", TAUS)
def test_reduction(tau):
    reduced, gamma = reduce_to_fundamental_domain(tau)
    assert abs(reduced.re) <= 0.5 + 1e-12
    assert abs(reduced.tau) >= 1 - 1e-12
    assert gamma.act(tau).tau == pytest.approx(reduced.tau, abs=1e-12)


@pytest.mark.parametrize("m", [2, 4, 6, 8, 12, 20, 40])
def test_zeta_even(m):
    assert zeta_even(m) == pytest.approx(float(zeta(m)), rel=1e-13)


def test_zeta_even_uses_exact_bernoulli_numbers():
    assert zeta_even(4) == pytest.approx(np.pi**4 / 90, rel=1e-15)
    assert zeta_even(6) == pytest.approx(np.pi**6 / 945, rel=1e-15)


@pytest.mark.parametrize("k,c", [(4, 240), (6, -504), (8, 480)])
def test_eisenstein_q_coefficients(k, c):
    tau = 0.05 + 0.5j
    q = np.exp(2j * np.pi * tau)
    expected = 1 + c * sum(int(divisor_sigma(n, k - 1)) * q**n for n in range(1, 60))
    value = eisenstein(k, tau, SumControl(tol=1e-15))
    assert value == pytest.approx(complex(expected), rel=1e-13)


def test_zeta_even_rejects_odd():
    with pytest.raises(UnsupportedError):
        zeta_even(3)


def test_e2_star_vanishes_at_i():
    assert abs(e2_star(1j)) < 1e-10
    assert abs(eisenstein(6, 1j)) < 1e-10


@pytest.mark.parametrize("k", [4, 6, 8])
@pytest.mark.parametrize("tau", TAUS)
def test_eisenstein_modularity(k, tau):
    ctl = SumControl(q_terms=400)
    gamma = ModularGroupElement(1, 0, 1, 1) @ ModularGroupElement.S()
    factor = gamma.automorphy(tau)
    lhs = eisenstein(k, gamma.act(tau), ctl)
    rhs = factor**k * eisenstein(k, tau, ctl)
    # E_6(i) = 0
    assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-9 * abs(factor) ** k)


@pytest.mark.parametrize("tau", TAUS)
def test_e2_star_is_modular(tau):
    ctl = SumControl(q_terms=400)
    gamma = ModularGroupElement.S()
    lhs = e2_star(gamma.act(tau), ctl)
    rhs = gamma.automorphy(tau) ** 2 * e2_star(tau, ctl)
    assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-9)


GROUP_ELEMENTS = [
    ModularGroupElement.S(),
    ModularGroupElement.T(),
    ModularGroupElement.from_word("ST"),
    ModularGroupElement(1, 0, 1, 1) @ ModularGroupElement.S(),
]


@pytest.mark.parametrize("gamma", GROUP_ELEMENTS, ids=["S", "T", "ST", "TST"])
@pytest.mark.parametrize("tau", TAUS)
def test_e2_quasimodularity(gamma, tau):
    ctl = SumControl(q_terms=400, tol=1e-13)
    factor = gamma.automorphy(tau)
    lhs = eisenstein(2, gamma.act(tau), ctl)
    rhs = factor**2 * eisenstein(2, tau, ctl) + 6 * gamma.C * factor / (np.pi * 1j)
    assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(factor) ** 2)


@pytest.mark.parametrize("gamma", GROUP_ELEMENTS[:3], ids=["S", "T", "ST"])
def test_e2_star_is_modular_at_random_points(gamma):
    rng = check_random_state(0)
    ctl = SumControl(q_terms=400, tol=1e-13)
    for _ in range(20):
        tau = rng.uniform(-1, 1) + 1j * rng.uniform(0.3, 2)
        factor = gamma.automorphy(tau)
        residual = e2_star(gamma.act(tau), ctl) - factor**2 * e2_star(tau, ctl)
        assert abs(residual) < 1e-9 * max(1.0, abs(factor) ** 2)


@pytest.mark.parametrize("k", [4, 6])
@pytest.mark.parametrize("tau", [1j, 0.3 + 0.9j, -0.45 + 1.7j])
def test_eisenstein_lattice_matches_q_series(k, tau):
    assert eisenstein_lattice(k, tau) == pytest.approx(eisenstein(k, tau), rel=1e-7, abs=1e-8)


def test_eisenstein_weight_checks():
    with pytest.raises(OddWeightError):
        eisenstein(3, 1j)
    with pytest.raises(ValidationError):
        eisenstein(0, 1j)


@pytest.mark.parametrize("tau", [1j, 0.3 + 0.9j, -0.2 + 1.4j])
def test_weierstrass_methods_agree(tau):
    z = np.array([0.1 + 0.05j, 0.3 + 0.2j, 0.5 * tau + 0.2])
    for deriv in (0, 1, 2):
        lattice = weierstrass_p(z, tau, deriv, method="lattice")
        q = weierstrass_p(z, tau, deriv, method="q")
        np.testing.assert_allclose(lattice, q, rtol=1e-7, atol=1e-7)


@pytest.mark.parametrize("tau", [1j, 0.3 + 0.9j])
def test_weierstrass_differential_equation(tau):
    z = 0.31 + 0.17j
    p = weierstrass_p(z, tau)
    dp = weierstrass_p(z, tau, deriv=1)
    g2, g3 = weierstrass_invariants(tau)
    assert dp**2 == pytest.approx(4 * p**3 - g2 * p - g3, rel=1e-7)


def test_weierstrass_periodicity_and_parity():
    tau = 0.2 + 1.1j
    z = 0.13 + 0.21j
    p = weierstrass_p(z, tau)
    assert weierstrass_p(z + 1, tau) == pytest.approx(p, rel=1e-9)
    assert weierstrass_p(z + tau, tau) == pytest.approx(p, rel=1e-9)
    assert weierstrass_p(-z, tau) == pytest.approx(p, rel=1e-9)
    assert abs(weierstrass_p(0.5, tau, deriv=1)) < 1e-7


def test_weierstrass_near_origin():
    # Laurent expansion 1/z² + O(z²)
    z = 1e-3 + 1e-3j
    assert weierstrass_p(z, 1j) == pytest.approx(1 / z**2, rel=1e-5)


def test_weierstrass_pole():
    with pytest.raises(PoleAtLatticePointError):
        weierstrass_p(1 + 1j, 1j)
    with pytest.raises(ValidationError):
        weierstrass_p(0.3, 1j, method="series")
