"""NumPy implementations of the simulation kernels.

Must stay draw-for-draw identical to the compiled kernels in _kernels.pyx:
both walk the same splitmix64 counter stream in the same order, so a (spec,
seed) pair gives bit-identical trajectories on either backend.

Draw order per simulated day:
  SIR chain:        one uniform per susceptible agent (infection trial),
                    then one per infected agent (recovery trial).
  phenomenon chain: one uniform per transmission attempt, i.e.
                    transmission_count per case at a transmitting age.
"""
import math

import numpy as np

from ..rng import uniform_block

BACKEND = "python"


def sir_chain(s0: int, i0: int, r0: int, contacts: float, p_eff: float,
              gamma: float, horizon: int, seed: int):
    """Daily stochastic SIR chain over `horizon` days.

    Each susceptible is infected with probability
    1 - (1 - p_eff * I_t / (N - 1)) ** contacts and each infected recovers
    with probability 1 - exp(-gamma); both evaluated at the start of day t.
    Returns int64 arrays (S, I, R) of length horizon + 1.
    """
    n = s0 + i0 + r0
    S = np.empty(horizon + 1, dtype=np.int64)
    I = np.empty(horizon + 1, dtype=np.int64)  # noqa: E741
    R = np.empty(horizon + 1, dtype=np.int64)
    S[0], I[0], R[0] = s0, i0, r0
    p_rec = 1.0 - math.exp(-gamma)
    ctr = 0
    for t in range(horizon):
        s, i, r = int(S[t]), int(I[t]), int(R[t])
        if n > 1:
            p_inf = 1.0 - (1.0 - p_eff * i / (n - 1)) ** contacts
        else:
            p_inf = 0.0
        u = uniform_block(seed, ctr, s)
        ctr += s
        new_inf = int(np.count_nonzero(u < p_inf))
        u = uniform_block(seed, ctr, i)
        ctr += i
        new_rec = int(np.count_nonzero(u < p_rec))
        S[t + 1] = s - new_inf
        I[t + 1] = i + new_inf - new_rec
        R[t + 1] = r + new_rec
    return S, I, R


def phenomenon_chain(n0: int, population: int, transmission_count: int,
                     success: float, onset: int, interval: int, duration: int,
                     horizon: int, seed: int):
    """Daily case-spread chain: active and cumulative case counts.

    A case transmits at ages onset, onset+interval, ... while younger than
    `duration`, making `transmission_count` attempts per transmitting day.
    An attempt succeeds with probability success * S_t / population where
    S_t is the never-infected pool at the start of the day (new infections
    are capped by the pool).  Cases deactivate on reaching age `duration`.
    Returns int64 arrays (active, cumulative) of length horizon + 1.
    """
    ages = np.zeros(max(duration, 1), dtype=np.int64)
    ages[0] = n0
    susceptible = max(population - n0, 0)
    active = np.empty(horizon + 1, dtype=np.int64)
    cumulative = np.empty(horizon + 1, dtype=np.int64)
    active[0] = n0
    cumulative[0] = n0
    ctr = 0
    for t in range(horizon):
        transmitting = 0
        if interval > 0:
            for age in range(onset, duration, interval):
                transmitting += int(ages[age])
        attempts = transmitting * transmission_count
        threshold = success * (susceptible / population) if population > 0 else 0.0
        u = uniform_block(seed, ctr, attempts)
        ctr += attempts
        births = int(np.count_nonzero(u < threshold))
        if births > susceptible:
            births = susceptible
        susceptible -= births
        ages[1:] = ages[:-1]
        ages[0] = births
        active[t + 1] = int(ages.sum())
        cumulative[t + 1] = cumulative[t] + births
    return active, cumulative
