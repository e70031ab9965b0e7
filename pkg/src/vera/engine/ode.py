"""Deterministic mean-field SIR oracle.

Classical SIR dynamics

    dS/dt = -beta * S * I / N
    dI/dt =  beta * S * I / N - gamma * I
    dR/dt =  gamma * I

integrated with the classical 4th-order Runge-Kutta one-step method at a
fixed step (spec.dt_ode, default 0.1 day).  Independent of the seed.
"""
import math

import numpy as np

from ..compiler import SimulationSpec
from ..errors import IntegrationError
from .trajectory import Trajectory


def run_ode(spec: SimulationSpec) -> Trajectory:
    s0 = float(spec.populations.get("susceptible", 0))
    i0 = float(spec.populations.get("infected", 0))
    r0 = float(spec.populations.get("recovered", 0))
    n = s0 + i0 + r0
    if n <= 0:
        raise IntegrationError(
            "ODE oracle requires a positive compartment population")

    dt = spec.dt_ode
    steps = int(round(spec.horizon / dt))
    beta, gamma = spec.beta, spec.gamma

    S = np.empty(steps + 1)
    I = np.empty(steps + 1)  # noqa: E741
    R = np.empty(steps + 1)
    S[0], I[0], R[0] = s0, i0, r0

    def deriv(s, i):
        flow = beta * s * i / n
        return -flow, flow - gamma * i, gamma * i

    # overflow surfaces as the IntegrationError below, not as a warning
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(steps):
            s, i = S[k], I[k]
            ds1, di1, dr1 = deriv(s, i)
            ds2, di2, dr2 = deriv(s + 0.5 * dt * ds1, i + 0.5 * dt * di1)
            ds3, di3, dr3 = deriv(s + 0.5 * dt * ds2, i + 0.5 * dt * di2)
            ds4, di4, dr4 = deriv(s + dt * ds3, i + dt * di3)
            S[k + 1] = s + dt / 6.0 * (ds1 + 2 * ds2 + 2 * ds3 + ds4)
            I[k + 1] = i + dt / 6.0 * (di1 + 2 * di2 + 2 * di3 + di4)
            R[k + 1] = R[k] + dt / 6.0 * (dr1 + 2 * dr2 + 2 * dr3 + dr4)
            if not (math.isfinite(S[k + 1]) and math.isfinite(I[k + 1])
                    and math.isfinite(R[k + 1])):
                raise IntegrationError(
                    f"non-finite state at step {k + 1} "
                    f"(t = {(k + 1) * dt:.3f})",
                    {"step": k + 1, "t": (k + 1) * dt})

    times = np.linspace(0.0, steps * dt, steps + 1)
    return Trajectory(times=times,
                      series={"susceptible": S, "infected": I, "recovered": R},
                      spec_ref=spec.id, kind="ODE")


def analytic_peak_fraction(r0_basic: float) -> float:
    """Closed-form SIR peak infected fraction, 1 - (1 + ln R0) / R0.

    Valid for R0 > 1 with a nearly fully susceptible start; used as the
    independent oracle for the integrator.
    """
    if r0_basic <= 1:
        return 0.0
    return 1.0 - (1.0 + math.log(r0_basic)) / r0_basic
