"""Scenario execution and comparison: the generate-evaluate-revise loop."""
from __future__ import annotations

from dataclasses import dataclass

from .compiler import Overrides, SimulationSpec, compile_model, spec_from_dict
from .engine import ensemble, metrics, run_ode
from .errors import CompileError, NotFoundError, VeraError
from .model import validate_model
from .store import Store

DEFAULT_ABM_SEEDS = 32  # ODE runs are deterministic and always use 1


def run_scenario(store: Store, scenario_id: str, n_seeds: int | None = None,
                 engine: str = "abm") -> str:
    """Compile, execute and durably store one run of a scenario.

    The stored run embeds the compiled spec, trajectory and metrics, so it
    is reproducible from the document alone.  Engine failures are stored as
    failed-run records; validation failures raise without creating a run.
    """
    engine = engine.lower()
    if engine not in ("abm", "ode"):
        raise VeraError(f"unknown engine '{engine}'; expected abm or ode")
    scenario = store.get_scenario(scenario_id)
    model = store.get_model(scenario["model_id"])

    report = validate_model(model)
    if not report.ok:
        raise CompileError(
            f"model of scenario '{scenario_id}' fails validation",
            {"report": report.to_json_dict()})

    overrides = Overrides.from_json_dict(scenario.get("overrides", {}))
    spec = compile_model(model, overrides)
    if n_seeds is None:
        n_seeds = 1 if engine == "ode" else DEFAULT_ABM_SEEDS

    doc: dict = {
        "scenario_id": scenario_id,
        "engine": engine,
        "n_seeds": 1 if engine == "ode" else n_seeds,
        "spec": spec.to_json_dict(),
        "status": "completed",
    }
    try:
        if engine == "ode":
            traj = run_ode(spec)
            run_metrics = metrics(traj, spec.capacity,
                                  population=sum(spec.populations.values()),
                                  beta=spec.beta, gamma=spec.gamma)
            doc["trajectory"] = traj.to_json_dict()
            doc["metrics"] = run_metrics.to_json_dict()
        else:
            result = ensemble(spec, n_seeds)
            doc["trajectory"] = result.mean.to_json_dict()
            doc["metrics"] = result.mean_metrics().to_json_dict()
            doc["per_seed_metrics"] = [m.to_json_dict()
                                       for m in result.per_seed_metrics]
            doc["seeds"] = list(result.seeds)
            doc["bands"] = {
                "low": {k: list(map(float, v))
                        for k, v in sorted(result.band_low.items())},
                "high": {k: list(map(float, v))
                         for k, v in sorted(result.band_high.items())},
            }
    except VeraError as exc:
        doc["status"] = "failed"
        doc["error"] = {"code": exc.code, "message": exc.message,
                        "details": exc.details}

    run_id = store.create_run(doc)
    store.attach_run(scenario_id, run_id)
    if doc["status"] == "failed":
        return run_id
    return run_id


@dataclass
class ComparisonReport:
    scenario_ids: list[str]
    metrics_by_scenario: dict[str, dict]
    by_peak: list[str]  # highest peak first
    by_peak_day: list[str]  # earliest peak first
    by_crossing_day: list[str]  # earliest crossing first; never-crossed last
    flattened: bool  # peak strictly decreases across the given order

    def to_json_dict(self) -> dict:
        return {
            "scenario_ids": list(self.scenario_ids),
            "metrics": self.metrics_by_scenario,
            "orderings": {
                "by_peak": self.by_peak,
                "by_peak_day": self.by_peak_day,
                "by_crossing_day": self.by_crossing_day,
            },
            "flattened": self.flattened,
        }


def _latest_completed_run(store: Store, scenario: dict) -> dict:
    for run_id in reversed(scenario.get("run_ids", [])):
        try:
            run = store.get_run(run_id)
        except NotFoundError:
            continue
        if run.get("status") == "completed":
            return run
    raise VeraError(
        f"scenario '{scenario['id']}' has no completed run",
        {"scenario_id": scenario["id"]})


def compare_metrics(scenario_ids: list[str],
                    metric_docs: dict[str, dict]) -> ComparisonReport:
    """Orderings over per-scenario mean metrics (ids may repeat)."""
    unique = list(dict.fromkeys(scenario_ids))

    def peak_key(sid):
        m = metric_docs[sid]
        # stable sort: ties keep input order; peak day breaks peak ties
        return (-m["peak_infected"], m["peak_day"])

    def day_key(sid):
        return metric_docs[sid]["peak_day"]

    def crossing_key(sid):
        day = metric_docs[sid].get("capacity_crossing_day")
        return (1, 0.0) if day is None else (0, day)

    peaks = [metric_docs[sid]["peak_infected"] for sid in scenario_ids]
    flattened = len(peaks) > 1 and all(a > b for a, b in zip(peaks, peaks[1:]))
    return ComparisonReport(
        scenario_ids=list(scenario_ids),
        metrics_by_scenario={sid: metric_docs[sid] for sid in unique},
        by_peak=sorted(unique, key=peak_key),
        by_peak_day=sorted(unique, key=day_key),
        by_crossing_day=sorted(unique, key=crossing_key),
        flattened=flattened,
    )


def compare(store: Store, scenario_ids: list[str]) -> ComparisonReport:
    """Compare scenarios by the mean metrics of their latest completed runs."""
    if len(scenario_ids) < 2:
        raise VeraError("compare needs at least 2 scenarios")
    metric_docs: dict[str, dict] = {}
    for sid in dict.fromkeys(scenario_ids):
        scenario = store.get_scenario(sid)
        run = _latest_completed_run(store, scenario)
        metric_docs[sid] = run["metrics"]
    return compare_metrics(scenario_ids, metric_docs)


def recompile_run_spec(store: Store, run_id: str) -> SimulationSpec:
    """Recompile a stored run's model + overrides; provenance check helper."""
    run = store.get_run(run_id)
    scenario = store.get_scenario(run["scenario_id"])
    model = store.get_model(scenario["model_id"])
    overrides = Overrides.from_json_dict(scenario.get("overrides", {}))
    stored = spec_from_dict(run["spec"])
    return compile_model(model, overrides, horizon=stored.horizon,
                         seed=stored.seed, dt_ode=stored.dt_ode,
                         phenomenon_population=(
                             stored.phenomenon_rules.population
                             if stored.phenomenon_rules else 10_000))
