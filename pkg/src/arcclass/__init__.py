"""Exact computation of infinitesimal Abel-Jacobi classes of formal arcs on
hyperelliptic curves, with the supporting truncated power series, Kähler
differential and formal flow machinery."""

from .abeljacobi import (
    AbelJacobiClass,
    ZeroCycle,
    class_of_cycle,
    construct_cycle,
    verify_surjectivity,
)
from .curve import AffinePoint, FormalArc, HyperellipticCurve, curve_through_points, make_curve
from .flow import FlowProblem, FlowSolution, solve_flow, verify_flow
from .forms import DeRhamSpace, DifferentialForm, omega_space
from .points import PointSelection, choose_points
from .series import TruncatedSeries

__version__ = "0.1.0"
