"""Case-count ingestion and initial-parameter estimation.

Reads cumulative case-count CSVs in the JHU CSSE global layout
(``Province/State,Country/Region,Lat,Long`` followed by M/D/YY date columns,
one region per row) and estimates the early exponential growth rate by
ordinary least squares on ln(cumulative), from which the transmission rate
follows as beta = r + gamma.
"""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta

import numpy as np

from .errors import DataWarning, FitError, FormatError

_HEADER_PREFIX = ["Province/State", "Country/Region", "Lat", "Long"]

DEFAULT_MIN_CASES = 50
DEFAULT_MAX_WINDOW = 30
DEFAULT_GAMMA = 1.0 / 14.0


@dataclass
class Dataset:
    country: str
    province: str | None
    dates: list[date]
    cumulative: np.ndarray  # int64, aligned with dates
    source: str = ""

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (self.country == other.country
                and self.province == other.province
                and self.dates == other.dates
                and np.array_equal(self.cumulative, other.cumulative)
                and self.source == other.source)

    @property
    def region_label(self) -> str:
        if self.province:
            return f"{self.province}, {self.country}"
        return self.country

    def to_json_dict(self) -> dict:
        return {
            "region": {"province": self.province, "country": self.country},
            "dates": [d.isoformat() for d in self.dates],
            "cumulative": [int(v) for v in self.cumulative],
            "source": self.source,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Dataset":
        region = doc.get("region", {})
        return cls(country=region.get("country", ""),
                   province=region.get("province"),
                   dates=[date.fromisoformat(d) for d in doc["dates"]],
                   cumulative=np.asarray(doc["cumulative"], dtype=np.int64),
                   source=doc.get("source", ""))


@dataclass
class FitResult:
    growth_rate: float  # r, per day
    window: tuple[date, date]
    beta_hat: float
    gamma_assumed: float
    r0_hat: float
    goodness: float  # R^2 of the log-linear fit
    warnings: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "growth_rate": self.growth_rate,
            "window": [self.window[0].isoformat(), self.window[1].isoformat()],
            "beta_hat": self.beta_hat,
            "gamma_assumed": self.gamma_assumed,
            "r0_hat": self.r0_hat,
            "goodness": self.goodness,
            "warnings": list(self.warnings),
        }


@dataclass
class SpecInputs:
    transmission_likelihood: float
    beta: float
    gamma: float
    warnings: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {"transmission_likelihood": self.transmission_likelihood,
                "beta": self.beta, "gamma": self.gamma,
                "warnings": list(self.warnings)}


def _parse_date(text: str) -> date:
    return datetime.strptime(text.strip(), "%m/%d/%y").date()


def _format_date(d: date) -> str:
    return f"{d.month}/{d.day}/{d.year % 100:02d}"


def parse_time_series_csv(data: bytes, source: str = "") -> list[Dataset]:
    """One Dataset per CSV row; bad rows warn and are skipped.

    Raises FormatError when the file is empty or the header does not start
    with Province/State, Country/Region, Lat, Long followed by date columns.
    """
    try:
        text = data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise FormatError(f"CSV is not UTF-8: {exc}") from exc
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or not any(cell.strip() for cell in rows[0]):
        raise FormatError("CSV file is empty")
    header = rows[0]
    if [h.strip() for h in header[:4]] != _HEADER_PREFIX:
        raise FormatError(
            "unexpected header; expected columns "
            "'Province/State,Country/Region,Lat,Long' followed by dates",
            {"header": header[:4]})
    if len(header) < 5:
        raise FormatError("header has no date columns")
    try:
        dates = [_parse_date(h) for h in header[4:]]
    except ValueError as exc:
        raise FormatError(f"bad date column in header: {exc}") from exc
    for a, b in zip(dates, dates[1:]):
        if b - a != timedelta(days=1):
            raise FormatError(
                f"date columns must be consecutive days; {a} -> {b}")

    datasets: list[Dataset] = []
    for row_idx, row in enumerate(rows[1:], start=1):
        if not any(cell.strip() for cell in row):
            continue
        try:
            if len(row) != len(header):
                raise ValueError(f"expected {len(header)} cells, got {len(row)}")
            float(row[2])  # Lat / Long parsed but unused
            float(row[3])
            counts = np.empty(len(dates), dtype=np.int64)
            for col, cell in enumerate(row[4:], start=4):
                value = float(cell)
                if value < 0 or not value.is_integer():
                    raise ValueError(f"column {col}: bad count {cell!r}")
                counts[col - 4] = int(value)
        except ValueError as exc:
            bad_col = _first_bad_column(row, len(header))
            warnings.warn(
                f"skipping row {row_idx} (column {bad_col}): {exc}",
                DataWarning, stacklevel=2)
            continue
        datasets.append(Dataset(country=row[1].strip(),
                                province=row[0].strip() or None,
                                dates=list(dates), cumulative=counts,
                                source=source))
    return datasets


def _first_bad_column(row: list[str], width: int) -> int:
    for col, cell in enumerate(row[2:width], start=2):
        try:
            float(cell)
        except ValueError:
            return col
    return len(row)


def emit_time_series_csv(datasets: list[Dataset]) -> bytes:
    """Inverse of parse_time_series_csv (all datasets share one date axis)."""
    if not datasets:
        raise FormatError("nothing to emit")
    dates = datasets[0].dates
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(_HEADER_PREFIX + [_format_date(d) for d in dates])
    for ds in datasets:
        if ds.dates != dates:
            raise FormatError("datasets have mismatched date axes")
        writer.writerow([ds.province or "", ds.country, "0.0", "0.0"]
                        + [str(int(v)) for v in ds.cumulative])
    return out.getvalue().encode("utf-8")


def to_daily(dataset: Dataset) -> np.ndarray:
    """Daily new cases: max(0, c[t] - c[t-1]) with day 0 equal to c[0].

    Negative increments (reporting corrections) clamp to zero and warn with
    the affected date.
    """
    cumulative = np.asarray(dataset.cumulative, dtype=np.int64)
    daily = np.empty_like(cumulative)
    if cumulative.size == 0:
        return daily
    daily[0] = max(int(cumulative[0]), 0)
    diffs = np.diff(cumulative)
    for i, d in enumerate(diffs, start=1):
        if d < 0:
            warnings.warn(
                f"cumulative count drops on {dataset.dates[i].isoformat()} "
                f"({int(cumulative[i - 1])} -> {int(cumulative[i])}); "
                "clamping daily count to 0",
                DataWarning, stacklevel=2)
            daily[i] = 0
        else:
            daily[i] = d
    return daily


def _ols_line(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Least-squares slope, intercept and R^2 (R^2 = 1 for a constant fit)."""
    xm, ym = x.mean(), y.mean()
    ss_tot = float(((y - ym) ** 2).sum())
    # constant input up to float rounding: perfect flat fit
    if ss_tot <= 1e-20 * len(y) * max(ym * ym, 1.0):
        return 0.0, ym, 1.0
    sxx = float(((x - xm) ** 2).sum())
    sxy = float(((x - xm) * (y - ym)).sum())
    slope = sxy / sxx if sxx > 0 else 0.0
    intercept = ym - slope * xm
    residuals = y - (intercept + slope * x)
    r2 = 1.0 - float((residuals ** 2).sum()) / ss_tot
    return slope, intercept, r2


def growth_window(cumulative: np.ndarray, min_cases: int = DEFAULT_MIN_CASES,
                  max_window: int = DEFAULT_MAX_WINDOW) -> tuple[int, int]:
    """[start, end] day indices of the pre-saturation growth window.

    Starts at the first day with cumulative >= min_cases and extends until
    cumulative exceeds 10x min_cases, capped at max_window days.
    """
    cumulative = np.asarray(cumulative)
    eligible = np.nonzero(cumulative >= min_cases)[0]
    if eligible.size == 0:
        raise FitError(
            f"no day reaches {min_cases} cumulative cases",
            {"required": min_cases})
    start = int(eligible[0])
    saturated = np.nonzero(cumulative > 10 * min_cases)[0]
    end = int(saturated[0]) if saturated.size else len(cumulative) - 1
    end = min(end, start + max_window, len(cumulative) - 1)
    return start, end


def fit_growth(dataset: Dataset, min_cases: int = DEFAULT_MIN_CASES,
               max_window: int = DEFAULT_MAX_WINDOW,
               gamma_assumed: float = DEFAULT_GAMMA) -> FitResult:
    """Log-linear growth-rate fit over the early window.

    The slope of ln(cumulative) against the day index is the growth rate r;
    beta_hat = r + gamma_assumed (early SIR growth identity r = beta - gamma).
    """
    cumulative = np.asarray(dataset.cumulative, dtype=np.float64)
    start, end = growth_window(cumulative, min_cases, max_window)
    window = np.arange(start, end + 1)
    window = window[cumulative[window] > 0]
    if window.size < 5:
        raise FitError(
            f"growth window has {window.size} usable points; 5 required",
            {"found": int(window.size), "required": 5})

    slope, _, r2 = _ols_line(window.astype(np.float64),
                             np.log(cumulative[window]))
    notes: list[str] = []
    if abs(slope) < 1e-12:
        slope = 0.0
        notes.append("no growth detected in the fit window")
    elif slope < 0:
        notes.append("negative growth in the fit window")

    beta_hat = slope + gamma_assumed
    if beta_hat < 0:
        notes.append("decay faster than recovery; beta_hat clamped to 0")
        beta_hat = 0.0
    return FitResult(
        growth_rate=slope,
        window=(dataset.dates[start], dataset.dates[int(window[-1])]),
        beta_hat=beta_hat,
        gamma_assumed=gamma_assumed,
        r0_hat=beta_hat / gamma_assumed if gamma_assumed > 0 else math.inf,
        goodness=max(0.0, min(1.0, r2)),
        warnings=notes,
    )


def derive_spec_inputs(fit: FitResult,
                       contacts_assumed: float) -> SpecInputs:
    """Transmission parameters implied by a fit at an assumed contact rate."""
    if contacts_assumed <= 0:
        raise FitError("contacts_assumed must be > 0")
    beta = fit.beta_hat
    likelihood = beta / contacts_assumed
    notes: list[str] = []
    if likelihood > 1.0:
        notes.append(
            f"transmission likelihood {likelihood:.3f} exceeds 1; clamped "
            "(assumed contact rate is too low for the fitted beta)")
        likelihood = 1.0
    elif likelihood < 0.0:
        notes.append("negative likelihood clamped to 0")
        likelihood = 0.0
    return SpecInputs(transmission_likelihood=likelihood, beta=beta,
                      gamma=fit.gamma_assumed, warnings=notes)


def fit_sir_grid(dataset: Dataset, population: float,
                 initial_infected: float,
                 min_cases: int = DEFAULT_MIN_CASES,
                 max_window: int = DEFAULT_MAX_WINDOW,
                 beta_grid: np.ndarray | None = None,
                 gamma_grid: np.ndarray | None = None) -> FitResult:
    """Second estimator: grid search of (beta, gamma) against the ODE oracle.

    Minimizes squared log error between observed cumulative cases and the
    oracle's cumulative infections (I + R) over the same growth window.
    Slower but does not rely on the pure-exponential approximation.
    """
    from .compiler import ContactStructure, SimulationSpec
    from .engine.ode import run_ode

    if beta_grid is None:
        beta_grid = np.round(np.arange(0.05, 1.01, 0.025), 4)
    if gamma_grid is None:
        gamma_grid = np.array([1 / 21, 1 / 14, 1 / 10, 1 / 7, 1 / 5])

    cumulative = np.asarray(dataset.cumulative, dtype=np.float64)
    start, end = growth_window(cumulative, min_cases, max_window)
    idx = np.arange(start, end + 1)
    idx = idx[cumulative[idx] > 0]
    if idx.size < 5:
        raise FitError(
            f"growth window has {idx.size} usable points; 5 required",
            {"found": int(idx.size), "required": 5})
    observed = np.log(cumulative[idx])

    horizon = int(idx[-1]) + 1
    best = None
    for gamma in gamma_grid:
        for beta in beta_grid:
            spec = SimulationSpec(
                id="grid", populations={
                    "susceptible": int(population - initial_infected),
                    "infected": int(initial_infected), "recovered": 0},
                beta=float(beta), gamma=float(gamma), capacity=None,
                horizon=horizon, dt_ode=0.1, seed=0,
                contact_structure=ContactStructure(), phenomenon_rules=None)
            traj = run_ode(spec)
            sample = (idx / spec.dt_ode).astype(int)
            model_cum = (traj.series["infected"] + traj.series["recovered"])[sample]
            if (model_cum <= 0).any():
                continue
            sse = float(((np.log(model_cum) - observed) ** 2).sum())
            if best is None or sse < best[0]:
                best = (sse, float(beta), float(gamma))
    if best is None:
        raise FitError("grid search found no finite candidate")
    sse, beta, gamma = best
    ss_tot = float(((observed - observed.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - sse / ss_tot)
    return FitResult(
        growth_rate=beta - gamma,
        window=(dataset.dates[start], dataset.dates[int(idx[-1])]),
        beta_hat=beta, gamma_assumed=gamma,
        r0_hat=beta / gamma, goodness=min(1.0, r2),
        warnings=[f"grid estimator over {len(beta_grid)}x{len(gamma_grid)} "
                  "(beta, gamma) candidates"],
    )
