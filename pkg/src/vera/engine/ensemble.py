"""Seed ensembles: mean trajectory, per-seed metrics, percentile bands."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..compiler import SimulationSpec
from ..rng import derive_seed
from .abm import run_stochastic
from .trajectory import RunMetrics, Trajectory, metrics


@dataclass
class EnsembleResult:
    mean: Trajectory
    per_seed_metrics: list[RunMetrics]
    band_low: dict[str, np.ndarray]  # 5th percentile per time point
    band_high: dict[str, np.ndarray]  # 95th percentile per time point
    seeds: list[int]

    def mean_metrics(self) -> RunMetrics:
        """Field-wise mean of the per-seed metrics.

        The crossing day averages over the members that crossed; it is None
        when none did.
        """
        ms = self.per_seed_metrics

        def avg(values):
            values = [v for v in values if v is not None]
            return float(np.mean(values)) if values else None

        return RunMetrics(
            peak_infected=avg(m.peak_infected for m in ms),
            peak_day=avg(m.peak_day for m in ms),
            capacity_crossing_day=avg(m.capacity_crossing_day for m in ms),
            exceedance_duration=avg(m.exceedance_duration for m in ms),
            attack_rate=avg(m.attack_rate for m in ms),
            r0_basic=ms[0].r0_basic if ms else None,
        )

    def to_json_dict(self) -> dict:
        return {
            "mean": self.mean.to_json_dict(),
            "mean_metrics": self.mean_metrics().to_json_dict(),
            "per_seed_metrics": [m.to_json_dict() for m in self.per_seed_metrics],
            "band_low": {k: np.asarray(v).tolist()
                         for k, v in sorted(self.band_low.items())},
            "band_high": {k: np.asarray(v).tolist()
                          for k, v in sorted(self.band_high.items())},
            "seeds": list(self.seeds),
        }


def ensemble(spec: SimulationSpec, n_seeds: int) -> EnsembleResult:
    """Run ``n_seeds`` independent members with seeds derived from spec.seed.

    Member i runs with derive_seed(spec.seed, i); members are combined in
    seed order, so the result does not depend on execution schedule.
    """
    if n_seeds < 1:
        raise ValueError("n_seeds must be >= 1")
    seeds = [derive_seed(spec.seed, i) for i in range(n_seeds)]
    if spec.phenomenon_rules is not None:
        population = spec.phenomenon_rules.population
    else:
        population = sum(spec.populations.values())

    trajectories: list[Trajectory] = []
    per_seed: list[RunMetrics] = []
    for s in seeds:
        traj = run_stochastic(spec, seed=s)
        trajectories.append(traj)
        per_seed.append(metrics(traj, spec.capacity, population=population,
                                beta=spec.beta, gamma=spec.gamma))

    names = trajectories[0].columns()
    stacks = {name: np.stack([t.series[name] for t in trajectories])
              for name in names}
    mean = Trajectory(
        times=trajectories[0].times.copy(),
        series={name: stack.mean(axis=0) for name, stack in stacks.items()},
        spec_ref=spec.id, kind="ABM")
    band_low = {name: np.percentile(stack, 5, axis=0)
                for name, stack in stacks.items()}
    band_high = {name: np.percentile(stack, 95, axis=0)
                 for name, stack in stacks.items()}
    return EnsembleResult(mean=mean, per_seed_metrics=per_seed,
                          band_low=band_low, band_high=band_high, seeds=seeds)
