"""Five-dimensional gap-filling benchmark: variables x feature sets x models
x gap sizes x sites, scored per coverage fold with R2, RMSE, nRMSE and MAE.

For every configuration the target series is tiled into a coverage-complete
mask plan, each fold is hidden in turn, the model is fitted on what remains
(neighbor stations and reanalysis are side inputs, never masked) and the
hidden values are scored.  Everything derives from one master seed through
per-configuration child seeds, so runs repeat bit-for-bit.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .debias import debias_model, fit_debias
from .errors import FairmetError
from .features import ALL, FEATURE_SETS, NONE, TEMPORAL_REANALYSIS, build_features
from .filling import FillContext, fill_gaps
from .masking import apply_mask, plan_for_series
from .regressors import (BASELINE_DEBIAS, BASELINE_LINEAR_INTERP,
                         BASELINE_MODEL_KINDS, MODEL_KINDS, fit,
                         linear_baseline_model)
from .rng import mix_seed
from .timeseries import TimeSeries


class LengthMismatch(FairmetError):
    pass


class Empty(FairmetError):
    pass


class EmptyDimension(FairmetError):
    pass


class MissingData(FairmetError):
    def __init__(self, site: str, variable: str):
        super().__init__(f"no series for site {site!r} variable {variable!r}")
        self.site = site
        self.variable = variable


# ---------------------------------------------------------------------------
# Metrics

RANGE_EPS = 1e-9


@dataclass(frozen=True)
class MetricSet:
    """r2 and nrmse are None (UNDEFINED) when their denominator vanishes."""

    r2: float | None
    rmse: float
    nrmse: float | None
    mae: float

    def as_dict(self) -> dict:
        return {"r2": self.r2, "rmse": self.rmse, "nrmse": self.nrmse,
                "mae": self.mae}


def score(truth, pred) -> MetricSet:
    """Standard error metrics of predictions against hidden truth.

    rmse = sqrt(mean((t-p)^2)); mae = mean|t-p|;
    r2 = 1 - SS_res/SS_tot (UNDEFINED when the truth has zero variance);
    nrmse = rmse / (max(t) - min(t)) (UNDEFINED when the range is ~zero).
    """
    t = np.asarray(truth, dtype=float)
    p = np.asarray(pred, dtype=float)
    if t.shape != p.shape:
        raise LengthMismatch(f"{t.shape} vs {p.shape}")
    if t.size == 0:
        raise Empty("cannot score zero points")
    err = t - p
    rmse = float(np.sqrt(np.mean(err ** 2)))
    mae = float(np.mean(np.abs(err)))
    ss_res = float(np.sum(err ** 2))
    ss_tot = float(np.sum((t - t.mean()) ** 2))
    r2 = None if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    spread = float(t.max() - t.min())
    nrmse = None if spread < RANGE_EPS else rmse / spread
    return MetricSet(r2=r2, rmse=rmse, nrmse=nrmse, mae=mae)


# ---------------------------------------------------------------------------
# Grid

DEFAULT_GAP_SIZES = (1, 4, 36, 288)


@dataclass(frozen=True)
class BenchGrid:
    variables: tuple[str, ...]
    feature_sets: tuple[str, ...]
    models: tuple[str, ...]
    gap_sizes: tuple[int, ...] = DEFAULT_GAP_SIZES
    sites: tuple[str, ...] = ()

    def __post_init__(self):
        for name in ("variables", "models", "gap_sizes", "sites"):
            if not getattr(self, name):
                raise EmptyDimension(f"grid dimension {name} is empty")
        ml = [m for m in self.models if m not in BASELINE_MODEL_KINDS]
        if ml and not self.feature_sets:
            raise EmptyDimension("grid dimension feature_sets is empty")
        for m in self.models:
            if m not in MODEL_KINDS:
                raise ValueError(f"unknown model kind {m!r}")
        for f in self.feature_sets:
            if f not in FEATURE_SETS:
                raise ValueError(f"unknown feature set {f!r}")


@dataclass(frozen=True)
class Configuration:
    variable: str
    feature_set: str
    model: str
    gap_size: int
    site: str

    def canonical(self) -> str:
        return f"{self.variable}|{self.feature_set}|{self.model}|{self.gap_size}|{self.site}"


def enumerate_grid(grid: BenchGrid) -> list[Configuration]:
    """Deterministic configuration order: variables, then feature sets, then
    models, then gap sizes, then sites.  Baselines ignore feature sets and
    appear once per (variable, gap size, site) under the NONE set."""
    ml_models = [m for m in grid.models if m not in BASELINE_MODEL_KINDS]
    baselines = [m for m in grid.models if m in BASELINE_MODEL_KINDS]
    feature_sets = [(fs, ml_models) for fs in grid.feature_sets if ml_models]
    if baselines:
        feature_sets.append((NONE, baselines))
    out = []
    for variable in grid.variables:
        for fs, models in feature_sets:
            for model in models:
                for gap in grid.gap_sizes:
                    for site in grid.sites:
                        out.append(Configuration(variable, fs, model, gap, site))
    return out


# ---------------------------------------------------------------------------
# Execution

@dataclass(frozen=True)
class DataContext:
    """Observation and reanalysis series keyed by (site, variable code)."""

    series: dict
    reanalysis: dict = field(default_factory=dict)

    def target(self, site: str, variable: str) -> TimeSeries:
        try:
            return self.series[(site, variable)]
        except KeyError:
            raise MissingData(site, variable) from None

    def neighbors_of(self, site: str, variable: str) -> list[TimeSeries]:
        return [s for (st, var), s in sorted(self.series.items())
                if var == variable and st != site]


@dataclass(frozen=True)
class ResultRow:
    variable: str
    feature_set: str
    model: str
    gap_size: int
    site: str
    fold: int
    metrics: MetricSet
    n_points: int
    runtime_ms: float
    seed: int


def _fit_for_config(config: Configuration, train: TimeSeries,
                    neighbors, reanalysis, config_seed: int, params):
    if config.model == BASELINE_LINEAR_INTERP:
        return linear_baseline_model(config_seed)
    if config.model == BASELINE_DEBIAS:
        if reanalysis is None:
            raise MissingData(config.site, f"reanalysis:{config.variable}")
        return debias_model(fit_debias(train, reanalysis), config_seed)
    observed = [int(i) for i in np.flatnonzero(~train.missing_mask)]
    matrix = build_features(train, neighbors, reanalysis, config.feature_set,
                            observed, require_target=True)
    kind_params = (params or {}).get(config.model)
    return fit(config.model, matrix, params=kind_params, seed=config_seed,
               feature_set=config.feature_set)


def run_benchmark(grid: BenchGrid, context: DataContext, seed: int = 42,
                  max_missing_frac: float = 0.2,
                  params: dict | None = None) -> list[ResultRow]:
    """One ResultRow per (configuration, fold)."""
    rows = []
    for config in enumerate_grid(grid):
        series = context.target(config.site, config.variable)
        needs_rea = (config.model == BASELINE_DEBIAS
                     or config.feature_set in (TEMPORAL_REANALYSIS, ALL))
        reanalysis = context.reanalysis.get((config.site, config.variable))
        if needs_rea and reanalysis is None:
            raise MissingData(config.site, f"reanalysis:{config.variable}")
        neighbors = context.neighbors_of(config.site, config.variable)
        config_seed = mix_seed(seed, config.canonical())
        plan = plan_for_series(series, config.gap_size, max_missing_frac,
                               config_seed)
        fill_context = FillContext(neighbors=tuple(neighbors),
                                   reanalysis=reanalysis)
        for fold in range(plan.n_folds):
            started = time.perf_counter()
            train, truth = apply_mask(series, plan, fold)
            model = _fit_for_config(config, train, neighbors, reanalysis,
                                    config_seed, params)
            result = fill_gaps(train, model, fill_context)
            filled = result.series.values
            scored = [(t, filled[i]) for i, t in truth
                      if not math.isnan(filled[i])]
            if not scored:
                continue
            truth_vals = [t for t, _ in scored]
            pred_vals = [p for _, p in scored]
            elapsed_ms = (time.perf_counter() - started) * 1000.0
            rows.append(ResultRow(
                variable=config.variable, feature_set=config.feature_set,
                model=config.model, gap_size=config.gap_size,
                site=config.site, fold=fold,
                metrics=score(truth_vals, pred_vals),
                n_points=len(scored), runtime_ms=elapsed_ms,
                seed=config_seed))
    return rows


# ---------------------------------------------------------------------------
# Aggregation

MEAN = "MEAN"
MEDIAN = "MEDIAN"
CV = "CV"

DIMENSIONS = ("variable", "feature_set", "model", "gap_size", "site")
METRIC_NAMES = ("r2", "rmse", "nrmse", "mae")


def _aggregate_values(values: list[float], statistic: str) -> float | None:
    arr = np.array(values, dtype=float)
    if statistic == MEAN:
        return float(arr.mean())
    if statistic == MEDIAN:
        return float(np.median(arr))
    if statistic == CV:
        mean = arr.mean()
        if abs(mean) < 1e-12:
            return None
        return float(arr.std() / mean)      # population standard deviation
    raise ValueError(f"unknown statistic {statistic!r}")


def aggregate(rows: list[ResultRow], group_by: tuple[str, ...],
              statistic: str = MEAN) -> list[dict]:
    """Group result rows by a subset of the five dimensions and aggregate
    each metric.  UNDEFINED metrics are excluded; the per-metric exclusion
    count is reported alongside the aggregate."""
    if not rows:
        raise Empty("nothing to aggregate")
    for dim in group_by:
        if dim not in DIMENSIONS:
            raise ValueError(f"unknown dimension {dim!r}")
    groups: dict[tuple, list[ResultRow]] = {}
    for row in rows:
        key = tuple(getattr(row, dim) for dim in group_by)
        groups.setdefault(key, []).append(row)

    out = []
    for key in sorted(groups, key=lambda k: tuple(str(p) for p in k)):
        members = groups[key]
        entry: dict = dict(zip(group_by, key))
        entry["n_rows"] = len(members)
        for metric in METRIC_NAMES:
            values = [getattr(m.metrics, metric) for m in members]
            defined = [v for v in values if v is not None]
            entry[metric] = (_aggregate_values(defined, statistic)
                             if defined else None)
            entry[f"{metric}_excluded"] = len(values) - len(defined)
        out.append(entry)
    return out


# ---------------------------------------------------------------------------
# Serialization

RESULT_COLUMNS = ("variable", "feature_set", "model", "gap_size", "site",
                  "fold", "r2", "rmse", "nrmse", "mae", "n_points",
                  "runtime_ms", "seed")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return "" if math.isnan(value) else repr(value)
    return str(value)


def results_to_csv(rows: list[ResultRow], include_runtime: bool = False) -> str:
    """Results CSV with UNDEFINED serialized as the empty field.  Runtime is
    wall-clock and therefore written only on request, keeping the default
    output byte-identical across reruns."""
    lines = [",".join(RESULT_COLUMNS)]
    for row in rows:
        m = row.metrics
        lines.append(",".join([
            row.variable, row.feature_set, row.model, str(row.gap_size),
            row.site, str(row.fold), _fmt(m.r2), _fmt(m.rmse), _fmt(m.nrmse),
            _fmt(m.mae), str(row.n_points),
            _fmt(row.runtime_ms) if include_runtime else "",
            str(row.seed)]))
    return "\n".join(lines) + "\n"


def aggregate_to_csv(table: list[dict]) -> str:
    if not table:
        return "\n"
    columns = list(table[0])
    lines = [",".join(columns)]
    for entry in table:
        lines.append(",".join(_fmt(entry[c]) for c in columns))
    return "\n".join(lines) + "\n"


def aggregate_to_text(table: list[dict]) -> str:
    """Aligned-column rendering for terminals."""
    if not table:
        return "(empty)\n"
    columns = list(table[0])
    rendered = [[_fmt(e[c]) if not isinstance(e[c], float) or e[c] is None
                 else f"{e[c]:.4f}" for c in columns] for e in table]
    widths = [max(len(c), *(len(r[i]) for r in rendered))
              for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    for r in rendered:
        lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)))
    return "\n".join(lines) + "\n"
