"""Time-series results and the metrics derived from them."""
from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

# canonical column orders for CSV export
_SIR_COLUMNS = ("susceptible", "infected", "recovered")
_PHENOMENON_COLUMNS = ("active", "cumulative")


@dataclass
class Trajectory:
    times: np.ndarray  # days; step 1 for ABM, dt_ode for the oracle
    series: dict[str, np.ndarray]
    spec_ref: str
    kind: str  # "ABM" | "ODE"

    def columns(self) -> tuple[str, ...]:
        for order in (_SIR_COLUMNS, _PHENOMENON_COLUMNS):
            if all(name in self.series for name in order):
                return order
        return tuple(sorted(self.series))

    def infected_series(self) -> np.ndarray:
        """The series the capacity threshold applies to."""
        if "infected" in self.series:
            return self.series["infected"]
        if "active" in self.series:
            return self.series["active"]
        raise KeyError("trajectory has no infected/active series")

    def to_json_dict(self) -> dict:
        return {
            "spec_ref": self.spec_ref,
            "kind": self.kind,
            "times": [_num(t) for t in self.times],
            "series": {k: [_num(v) for v in vs]
                       for k, vs in sorted(self.series.items())},
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Trajectory":
        return cls(times=np.asarray(doc["times"]),
                   series={k: np.asarray(v) for k, v in doc["series"].items()},
                   spec_ref=doc["spec_ref"], kind=doc["kind"])

    def to_csv_bytes(self) -> bytes:
        cols = self.columns()
        out = io.StringIO()
        out.write("day," + ",".join(cols) + "\n")
        for i, t in enumerate(self.times):
            row = [_fmt(t)] + [_fmt(self.series[c][i]) for c in cols]
            out.write(",".join(row) + "\n")
        return out.getvalue().encode("utf-8")


def _num(v):
    """Plain Python number with ints kept integral."""
    f = float(v)
    if f.is_integer() and isinstance(v, (int, np.integer)):
        return int(v)
    return f


def _fmt(v) -> str:
    return repr(_num(v))


@dataclass
class RunMetrics:
    peak_infected: float
    peak_day: float
    capacity_crossing_day: float | None
    exceedance_duration: float
    attack_rate: float | None
    r0_basic: float | None

    def to_json_dict(self) -> dict:
        return {
            "peak_infected": self.peak_infected,
            "peak_day": self.peak_day,
            "capacity_crossing_day": self.capacity_crossing_day,
            "exceedance_duration": self.exceedance_duration,
            "attack_rate": self.attack_rate,
            "r0_basic": self.r0_basic,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "RunMetrics":
        return cls(**{k: doc.get(k) for k in (
            "peak_infected", "peak_day", "capacity_crossing_day",
            "exceedance_duration", "attack_rate", "r0_basic")})


def metrics(trajectory: Trajectory, capacity: float | None,
            population: float | None = None, beta: float | None = None,
            gamma: float | None = None) -> RunMetrics:
    """Peak / capacity metrics of one trajectory.

    Peak day is the earliest maximizer; a capacity crossing is the first
    strict exceedance (I > C); exceedance duration is time spent above C.
    """
    infected = np.asarray(trajectory.infected_series(), dtype=np.float64)
    if infected.size == 0:
        raise ValueError("empty trajectory")
    times = np.asarray(trajectory.times, dtype=np.float64)
    step = float(times[1] - times[0]) if times.size > 1 else 1.0

    peak_idx = int(np.argmax(infected))  # argmax takes the earliest maximizer
    peak = float(infected[peak_idx])
    peak_day = float(times[peak_idx])

    crossing_day = None
    exceedance = 0.0
    if capacity is not None:
        above = infected > capacity
        if above.any():
            crossing_day = float(times[int(np.argmax(above))])
            exceedance = float(np.count_nonzero(above)) * step

    attack = None
    series = trajectory.series
    if "recovered" in series and "susceptible" in series and "infected" in series:
        n = population
        if n is None:
            n = float(series["susceptible"][0] + series["infected"][0]
                      + series["recovered"][0])
        if n > 0:
            attack = float(series["recovered"][-1]) / n
    elif "cumulative" in series and population:
        attack = float(series["cumulative"][-1]) / float(population)

    r0 = None
    if beta is not None and gamma is not None and gamma > 0:
        r0 = beta / gamma

    return RunMetrics(peak_infected=peak, peak_day=peak_day,
                      capacity_crossing_day=crossing_day,
                      exceedance_duration=exceedance, attack_rate=attack,
                      r0_basic=r0)
