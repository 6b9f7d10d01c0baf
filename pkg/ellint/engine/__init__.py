from ._checks import (
    AnomalyCheckResult,
    CheckResult,
    DerivativeEstimate,
    ImTauFit,
    anomaly_check,
    banana2_closed_form,
    imtau_fit,
    modularity_check,
    wirtinger_dbar,
)
from ._control import GraphIntegralResult, QuadratureControl
from ._integral import graph_integral
from ._regulated import richardson_extrapolate

__all__ = [
    "AnomalyCheckResult",
    "CheckResult",
    "DerivativeEstimate",
    "GraphIntegralResult",
    "ImTauFit",
    "QuadratureControl",
    "anomaly_check",
    "banana2_closed_form",
    "graph_integral",
    "imtau_fit",
    "modularity_check",
    "richardson_extrapolate",
    "wirtinger_dbar",
]
