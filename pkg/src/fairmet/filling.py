"""Gap filling with a fitted model (or a fallback chain of them).

Observed values are never altered; every filled slot carries provenance
(model kind, feature set, wall-clock fill time), and slots no model in the
chain can serve are reported rather than raised.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from .debias import DebiasTable
from .features import build_features
from .interp import LINEAR, Knots1D, interp1d
from .regressors import (BASELINE_DEBIAS, BASELINE_LINEAR_INTERP,
                         GapFillModel, predict)
from .timeseries import TimeSeries, detect_gaps


@dataclass(frozen=True)
class SlotFill:
    index: int
    value: float
    kind: str
    feature_set: str
    filled_at: datetime


@dataclass(frozen=True)
class FillContext:
    neighbors: tuple[TimeSeries, ...] = ()
    reanalysis: TimeSeries | None = None


@dataclass(frozen=True)
class FillResult:
    series: TimeSeries
    fills: tuple[SlotFill, ...]
    unfilled: tuple[int, ...]


def _linear_baseline(series: TimeSeries, missing: list[int]) -> dict[int, float]:
    """Linear interpolation across each gap's flanking observations.
    Gaps touching a series boundary have no flank and stay unfilled."""
    out: dict[int, float] = {}
    values = series.values
    n = len(series)
    for gap in detect_gaps(series):
        left = gap.start_index - 1
        right = gap.start_index + gap.length
        if left < 0 or right >= n:
            continue
        knots = Knots1D(np.array([left, right], dtype=float),
                        np.array([values[left], values[right]]))
        queries = [i for i in range(gap.start_index, right) if i in missing]
        if not queries:
            continue
        filled = interp1d(knots, LINEAR, np.array(queries, dtype=float))
        out.update(zip(queries, (float(v) for v in filled)))
    return out


def _debias_fill(series: TimeSeries, table: DebiasTable,
                 context: FillContext, missing: list[int]) -> dict[int, float]:
    rea = context.reanalysis
    if rea is None:
        return {}
    out: dict[int, float] = {}
    for i in missing:
        when = series.time_at(i)
        try:
            j = rea.index_of(when)
        except Exception:
            continue
        if j < 0 or j >= len(rea) or np.isnan(rea.values[j]):
            continue
        out[i] = float(rea.values[j] + table.lookup_at(when, series.tz))
    return out


def _model_fill(series: TimeSeries, model: GapFillModel,
                context: FillContext, missing: list[int]) -> dict[int, float]:
    matrix = build_features(series, list(context.neighbors),
                            context.reanalysis, model.feature_set,
                            missing, require_target=False)
    if matrix.n_rows == 0:
        return {}
    values = predict(model, matrix)
    return {i: float(v) for i, v in zip(matrix.indices, values)}


def fill_gaps(series: TimeSeries,
              model: GapFillModel | list[GapFillModel],
              context: FillContext = FillContext()) -> FillResult:
    """Replace missing slots with model predictions.

    ``model`` may be a single fitted model or a chain; each missing slot is
    served by the first chain entry whose requirements are satisfiable
    there.  The input series is untouched.
    """
    chain = model if isinstance(model, (list, tuple)) else [model]
    missing = [int(i) for i in np.flatnonzero(series.missing_mask)]
    values = series.values.copy()
    fills: list[SlotFill] = []
    remaining = list(missing)

    for m in chain:
        if not remaining:
            break
        if m.kind == BASELINE_LINEAR_INTERP:
            produced = _linear_baseline(series, remaining)
        elif m.kind == BASELINE_DEBIAS:
            produced = _debias_fill(series, m.payload, context, remaining)
        else:
            produced = _model_fill(series, m, context, remaining)
        now = datetime.now(timezone.utc)
        for i in sorted(produced):
            values[i] = produced[i]
            fills.append(SlotFill(index=i, value=produced[i], kind=m.kind,
                                  feature_set=m.feature_set, filled_at=now))
        remaining = [i for i in remaining if i not in produced]

    fills.sort(key=lambda f: f.index)
    return FillResult(series=series.with_values(values),
                      fills=tuple(fills), unfilled=tuple(remaining))


def provenance_manifest(result: FillResult) -> str:
    """Text manifest of per-slot fill provenance (audit metadata; the filled
    CSV itself is the deterministic primary output)."""
    lines = ["index,kind,feature_set,filled_at"]
    for f in result.fills:
        lines.append(f"{f.index},{f.kind},{f.feature_set},"
                     f"{f.filled_at.strftime('%Y-%m-%dT%H:%M:%SZ')}")
    for i in result.unfilled:
        lines.append(f"{i},UNFILLED,,")
    return "\n".join(lines) + "\n"
