"""Command-line interface.

Every command is also reachable through the HTTP API; both paths produce
identical documents (canonical JSON / CSV writers are shared).
"""
from __future__ import annotations

import os
import sys
from fractions import Fraction
from pathlib import Path

import click

from .compiler import Overrides, compile_model
from .datafit import derive_spec_inputs, fit_growth, parse_time_series_csv
from .engine import ensemble, metrics, run_ode
from .errors import VeraError
from .jsonutil import canonical_bytes, canonical_dumps
from .model import deserialize, validate_model
from .workbench import DEFAULT_ABM_SEEDS, compare_metrics


def _load_model(path: str):
    return deserialize(Path(path).read_bytes())


def _rate(text: str) -> float:
    """Accept plain floats or fractions like 1/14."""
    return float(Fraction(text))


class _Group(click.Group):
    """Turn workbench errors into clean CLI errors (message, exit 1)."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except VeraError as exc:
            raise click.ClickException(exc.message) from exc


@click.group(cls=_Group)
def main():
    """What-if epidemic modeling workbench."""


@main.command()
@click.argument("model_file", type=click.Path(exists=True, dir_okay=False))
def validate(model_file):
    """Validate a model document and print the report."""
    report = validate_model(_load_model(model_file))
    click.echo(canonical_dumps(report.to_json_dict()))
    if not report.ok:
        sys.exit(1)


def _overrides_option(f):
    return click.option(
        "--set", "assignments", multiple=True, metavar="ID.PARAM=VALUE",
        help="Override a model parameter, e.g. becomes.contacts_per_day=16.",
    )(f)


@main.command(name="compile")
@click.argument("model_file", type=click.Path(exists=True, dir_okay=False))
@_overrides_option
@click.option("--horizon", type=int, default=None, help="Days to simulate.")
@click.option("--seed", type=int, default=None, help="Base random seed.")
@click.option("-o", "--out", type=click.Path(dir_okay=False), default=None)
def compile_cmd(model_file, assignments, horizon, seed, out):
    """Compile a model (plus overrides) into a simulation spec."""
    overrides = Overrides.from_assignments(list(assignments), horizon, seed)
    spec = compile_model(_load_model(model_file), overrides)
    data = canonical_bytes(spec.to_json_dict())
    if out:
        Path(out).write_bytes(data)
        click.echo(f"wrote {out}")
    else:
        click.echo(data.decode("utf-8"), nl=False)


@main.command()
@click.argument("model_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--engine", type=click.Choice(["abm", "ode"]), default="abm")
@click.option("--seeds", type=int, default=None,
              help=f"Ensemble size for the ABM engine (default "
                   f"{DEFAULT_ABM_SEEDS}).")
@_overrides_option
@click.option("--horizon", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(file_okay=False), default=None,
              help="Directory for spec.json, trajectory.csv/json, "
                   "metrics.json (default run-<spec id>).")
def run(model_file, engine, seeds, assignments, horizon, seed, out):
    """Compile and run a model, writing the run documents to a directory."""
    overrides = Overrides.from_assignments(list(assignments), horizon, seed)
    spec = compile_model(_load_model(model_file), overrides)

    if engine == "ode":
        traj = run_ode(spec)
        run_metrics = metrics(traj, spec.capacity,
                              population=sum(spec.populations.values()),
                              beta=spec.beta, gamma=spec.gamma)
        extra = {}
    else:
        result = ensemble(spec, seeds or DEFAULT_ABM_SEEDS)
        traj = result.mean
        run_metrics = result.mean_metrics()
        extra = {"per_seed_metrics.json": canonical_bytes(
            [m.to_json_dict() for m in result.per_seed_metrics])}

    out_dir = Path(out) if out else Path(f"run-{spec.id}")
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "spec.json").write_bytes(canonical_bytes(spec.to_json_dict()))
    (out_dir / "trajectory.csv").write_bytes(traj.to_csv_bytes())
    (out_dir / "trajectory.json").write_bytes(
        canonical_bytes(traj.to_json_dict()))
    (out_dir / "metrics.json").write_bytes(
        canonical_bytes(run_metrics.to_json_dict()))
    for name, data in extra.items():
        (out_dir / name).write_bytes(data)

    click.echo(f"engine={engine} peak={run_metrics.peak_infected:.1f} "
               f"peak_day={run_metrics.peak_day:.1f} "
               f"crossing={run_metrics.capacity_crossing_day} -> {out_dir}")


@main.command()
@click.argument("cases_csv", type=click.Path(exists=True, dir_okay=False))
@click.option("--region", required=True, help="Country/Region to fit.")
@click.option("--province", default=None, help="Province/State filter.")
@click.option("--gamma", default="1/14", help="Assumed recovery rate per day.")
@click.option("--min-cases", type=int, default=50)
@click.option("--max-window", type=int, default=30)
@click.option("--contacts", type=float, default=16.0,
              help="Assumed contacts/day for the likelihood derivation.")
def fit(cases_csv, region, province, gamma, min_cases, max_window, contacts):
    """Estimate growth rate and transmission parameters from case counts."""
    datasets = parse_time_series_csv(Path(cases_csv).read_bytes(),
                                     source=cases_csv)
    matches = [d for d in datasets if d.country == region
               and (province is None or d.province == province)]
    if not matches:
        regions = sorted({d.region_label for d in datasets})
        raise VeraError(f"no rows for region '{region}'",
                        {"available": regions})
    result = fit_growth(matches[0], min_cases=min_cases,
                        max_window=max_window, gamma_assumed=_rate(gamma))
    inputs = derive_spec_inputs(result, contacts)
    click.echo(canonical_dumps({"fit": result.to_json_dict(),
                                "spec_inputs": inputs.to_json_dict()}))


@main.command()
@click.argument("run_dirs", nargs=-1, required=True,
                type=click.Path(exists=True, file_okay=False))
def compare(run_dirs):
    """Compare completed run directories written by `vera run`."""
    import json

    if len(run_dirs) < 2:
        raise VeraError("compare needs at least 2 run directories")
    metric_docs = {}
    order = []
    for d in run_dirs:
        label = Path(d).name
        metric_docs[label] = json.loads((Path(d) / "metrics.json").read_text())
        order.append(label)
    report = compare_metrics(order, metric_docs)
    click.echo(canonical_dumps(report.to_json_dict()))


@main.command()
@click.option("--port", type=int, default=None,
              help="Port to listen on (default $VERA_PORT or 8000).")
@click.option("--data", type=click.Path(file_okay=False), default=None,
              help="Store directory (default $VERA_DATA_DIR or ./vera-data).")
@click.option("--host", default="127.0.0.1")
def serve(port, data, host):
    """Serve the HTTP API (and the web UI when frontend/dist exists)."""
    import uvicorn

    from .api import create_app
    from .store import Store

    data_dir = data or os.environ.get("VERA_DATA_DIR", "vera-data")
    port = port or int(os.environ.get("VERA_PORT", "8000"))
    ui_dir = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    try:
        store = Store(data_dir)
        app = create_app(store, ui_dir=ui_dir if ui_dir.is_dir() else None)
    except OSError as exc:
        click.echo(f"cannot open store at {data_dir}: {exc}", err=True)
        sys.exit(1)
    click.echo(f"serving on http://{host}:{port} (store: {data_dir})")
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
