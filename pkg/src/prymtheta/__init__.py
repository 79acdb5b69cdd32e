"""Numerical period map and theta constants for 4-fold covers of the line
branching at 8 points, with the 105 squared-form comparison against the
partition-polynomial embedding."""

from . import exact, f2, forms, lattice, periods, theta
from .forms import FormsContext, TraceContext, theta_map
from .periods import BranchConfig, ball_point, normalized_tau, period_matrix
from .theta import BACKEND, Characteristic, ThetaEvaluator

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BranchConfig",
    "Characteristic",
    "FormsContext",
    "ThetaEvaluator",
    "TraceContext",
    "ball_point",
    "exact",
    "f2",
    "forms",
    "lattice",
    "normalized_tau",
    "period_matrix",
    "periods",
    "theta",
    "theta_map",
]
