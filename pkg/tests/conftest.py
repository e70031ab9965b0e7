"""Shared fixtures: rate-filled SIR models, ODE-generated series, JHU CSVs."""
from datetime import date, timedelta

import numpy as np
import pytest

from vera.compiler import ContactStructure, Overrides, SimulationSpec, compile_model
from vera.datafit import Dataset
from vera.engine.ode import run_ode
from vera.model import ConceptualModel, sir_template, with_param

DEFAULT_RATES = {"contacts_per_day": 16, "transmission_likelihood": 0.025,
                 "recovery_time": 14}


def fill_sir_rates(model: ConceptualModel, contacts=16.0, likelihood=0.025,
                   recovery_time=14.0) -> ConceptualModel:
    model = with_param(model, "becomes", "contacts_per_day", contacts)
    model = with_param(model, "becomes", "transmission_likelihood", likelihood)
    return with_param(model, "recovers", "recovery_time", recovery_time)


def make_sir_model(n_susceptible=9990, n_infected=10, capacity=3000,
                   contacts=16.0, likelihood=0.025, recovery_time=14.0):
    return fill_sir_rates(sir_template(n_susceptible, n_infected, capacity),
                          contacts, likelihood, recovery_time)


def make_sir_spec(seed=0, horizon=120, **model_kwargs) -> SimulationSpec:
    return compile_model(make_sir_model(**model_kwargs),
                         Overrides(seed=seed, horizon=horizon))


def raw_spec(populations, beta, gamma, horizon=120, seed=0, capacity=None,
             contacts=0.0, likelihood=0.0, block=0.0) -> SimulationSpec:
    """Hand-built spec for engine-level tests."""
    return SimulationSpec(
        id="spec-test", populations=populations, beta=beta, gamma=gamma,
        capacity=capacity, horizon=horizon, dt_ode=0.1, seed=seed,
        contact_structure=ContactStructure(
            contacts_per_day=contacts, transmission_likelihood=likelihood,
            block_probability=block),
        phenomenon_rules=None)


def ode_cumulative_cases(beta=0.4, gamma=1 / 14, n=10_000, i0=10,
                         days=120) -> np.ndarray:
    """Daily-sampled cumulative infections (I + R) from the ODE oracle."""
    spec = raw_spec({"susceptible": n - i0, "infected": i0, "recovered": 0},
                    beta, gamma, horizon=days)
    traj = run_ode(spec)
    sample = (np.arange(days + 1) / spec.dt_ode).astype(int)
    return (traj.series["infected"] + traj.series["recovered"])[sample]


def make_dataset(cumulative, country="Synthetistan", province=None,
                 start=date(2020, 1, 22)) -> Dataset:
    values = np.asarray(cumulative)
    dates = [start + timedelta(days=i) for i in range(len(values))]
    return Dataset(country=country, province=province, dates=dates,
                   cumulative=values, source="synthetic")


def jhu_csv(rows, n_days=60, start=date(2020, 1, 22)) -> bytes:
    """CSV in the published global time-series layout.

    rows: list of (province, country, counts) with len(counts) == n_days.
    """
    dates = [start + timedelta(days=i) for i in range(n_days)]
    header = "Province/State,Country/Region,Lat,Long," + ",".join(
        f"{d.month}/{d.day}/{d.year % 100:02d}" for d in dates)
    lines = [header]
    for province, country, counts in rows:
        cells = [province or "", country, "1.5", "-2.5"]
        cells += [str(c) for c in counts]
        lines.append(",".join(cells))
    return ("\n".join(lines) + "\n").encode("utf-8")


@pytest.fixture
def sir_model():
    return make_sir_model()


@pytest.fixture
def sir_spec():
    return make_sir_spec()


@pytest.fixture
def jhu_fixture_csv():
    growth = [int(20 * np.exp(0.2 * t)) for t in range(60)]
    flat = [5] * 60
    late = [0] * 30 + [int(np.exp(0.25 * t)) for t in range(30)]
    return jhu_csv([
        (None, "Synthetistan", growth),
        ("Flatland", "Synthetistan", flat),
        (None, "Latistan", late),
    ])
