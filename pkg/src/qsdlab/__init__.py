"""Numerical laboratory for quantum speed limits of a dissipative two-level
system, built on the excited-state survival amplitude u(t) of its exact
non-Markovian dynamics."""

from .bound_state import BoundStateInfo, find_bound_state, y_value
from .kernel import AmplitudeGrid, solve_u, solve_u_kernel
from .markov import MarkovParams, markov_params, qsl_markov_asymptote
from .qsl import QslReport, report, report_series
from .spectral import CorrelationFunction, SpectralDensity, alpha_closed
from .spin_boson import PolaronParams, sbm_qsl_pipeline, solve_theta

__all__ = [
    "AmplitudeGrid",
    "BoundStateInfo",
    "CorrelationFunction",
    "MarkovParams",
    "PolaronParams",
    "QslReport",
    "SpectralDensity",
    "alpha_closed",
    "find_bound_state",
    "markov_params",
    "qsl_markov_asymptote",
    "report",
    "report_series",
    "sbm_qsl_pipeline",
    "solve_theta",
    "solve_u",
    "solve_u_kernel",
    "y_value",
]

__version__ = "1.0.0"
