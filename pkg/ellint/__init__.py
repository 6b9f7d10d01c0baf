"""
Feynman graph integrals on elliptic curves: graph polynomials, modular forms,
the regularised propagator on E_τ and the evaluation of decorated graph
integrals W_{(Γ,n)}(τ, τ̄).
"""
import logging

from . import data, engine, graphs, modular, polynomials, propagator
from ._base import SumControl
from .engine import QuadratureControl, graph_integral

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    "data",
    "engine",
    "graphs",
    "modular",
    "polynomials",
    "propagator",
    "QuadratureControl",
    "SumControl",
    "graph_integral",
]
