"""Seeded stochastic engines: SIR agent chain and the case-spread chain."""
from __future__ import annotations

import numpy as np

from ..compiler import SimulationSpec
from ..errors import AgentCapError, CompileError
from . import kernels
from .trajectory import Trajectory

# Largest population the per-agent engine accepts by default.
DEFAULT_AGENT_CAP = 1_000_000


def _check_cap(n: int, agent_cap: int):
    if n > agent_cap:
        raise AgentCapError(
            f"population {n} exceeds the agent cap ({agent_cap}); "
            "use the ODE engine for populations this large",
            {"population": n, "agent_cap": agent_cap})


def run_abm(spec: SimulationSpec, seed: int | None = None,
            agent_cap: int = DEFAULT_AGENT_CAP) -> Trajectory:
    """One seeded SIR chain at daily resolution.

    Deterministic given (spec, seed); conservation S+I+R = N holds exactly
    at every step.  ``seed`` defaults to spec.seed (ensembles pass derived
    member seeds).
    """
    s0 = int(spec.populations.get("susceptible", 0))
    i0 = int(spec.populations.get("infected", 0))
    r0 = int(spec.populations.get("recovered", 0))
    _check_cap(s0 + i0 + r0, agent_cap)
    cs = spec.contact_structure
    p_eff = cs.transmission_likelihood * (1.0 - cs.block_probability)
    S, I, R = kernels.sir_chain(  # noqa: E741
        s0, i0, r0, cs.contacts_per_day, p_eff, spec.gamma, spec.horizon,
        spec.seed if seed is None else seed)
    times = np.arange(spec.horizon + 1, dtype=np.int64)
    return Trajectory(times=times,
                      series={"susceptible": S, "infected": I, "recovered": R},
                      spec_ref=spec.id, kind="ABM")


def run_phenomenon(spec: SimulationSpec, seed: int | None = None,
                   agent_cap: int = DEFAULT_AGENT_CAP) -> Trajectory:
    """One seeded case-spread chain (active and cumulative case counts)."""
    rules = spec.phenomenon_rules
    if rules is None:
        raise CompileError(
            "spec has no phenomenon rules; compile a model with a "
            "Phenomenon component to run this engine")
    n0 = int(spec.populations.get("cases", 0))
    _check_cap(rules.population, agent_cap)
    success = 1.0 - rules.block_probability
    active, cumulative = kernels.phenomenon_chain(
        n0, rules.population, rules.transmission_count, success, rules.onset,
        rules.interval, rules.duration, spec.horizon,
        spec.seed if seed is None else seed)
    times = np.arange(spec.horizon + 1, dtype=np.int64)
    return Trajectory(times=times,
                      series={"active": active, "cumulative": cumulative},
                      spec_ref=spec.id, kind="ABM")


def run_stochastic(spec: SimulationSpec, seed: int | None = None,
                   agent_cap: int = DEFAULT_AGENT_CAP) -> Trajectory:
    """Dispatch to the phenomenon chain when the spec carries its rules."""
    if spec.phenomenon_rules is not None:
        return run_phenomenon(spec, seed=seed, agent_cap=agent_cap)
    return run_abm(spec, seed=seed, agent_cap=agent_cap)
