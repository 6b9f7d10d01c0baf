"""
Test the ability to pickle controls, graphs and results
"""

import pickle

import pytest

from ellint import QuadratureControl, SumControl
from ellint.data import triangle
from ellint.engine import GraphIntegralResult
from ellint.polynomials import FlatTestFunction, a_constant
from ellint.propagator import RegularizationWindow


@pytest.mark.parametrize(
    "obj",
    [
        SumControl(q_terms=32),
        QuadratureControl(method="excised", eps_schedule=(1e-2, 1e-3)),
        triangle(),
        RegularizationWindow(1e-3, 10.0),
        GraphIntegralResult(1 + 2j, 1e-9, "closed-form", {"tau": {"re": 0.0, "im": 1.0}}),
        a_constant(1, [0]),
    ],
)
def test_pickle(obj):
    restored = pickle.loads(pickle.dumps(obj))
    if hasattr(obj, "get_params"):
        assert restored.get_params() == obj.get_params()
    else:
        assert restored == obj


def test_pickle_test_function():
    phi = FlatTestFunction(radius=2.0)
    phi(0.1, 0.2)
    restored = pickle.loads(pickle.dumps(phi))
    assert restored(0.1, 0.2) == phi(0.1, 0.2)
    assert restored.coefficients == phi.coefficients
