"""Simulation engines: stochastic chains, the ODE oracle, and metrics."""
from .abm import DEFAULT_AGENT_CAP, run_abm, run_phenomenon, run_stochastic
from .ensemble import EnsembleResult, ensemble
from .kernels import backend_name
from .ode import analytic_peak_fraction, run_ode
from .trajectory import RunMetrics, Trajectory, metrics

__all__ = [
    "DEFAULT_AGENT_CAP",
    "EnsembleResult",
    "RunMetrics",
    "Trajectory",
    "analytic_peak_fraction",
    "backend_name",
    "ensemble",
    "metrics",
    "run_abm",
    "run_ode",
    "run_phenomenon",
    "run_stochastic",
]
