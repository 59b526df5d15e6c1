"""Design-matrix construction for the gap-filling regressors.

Feature sets combine temporal encodings (sin/cos of local hour-of-day and
day-of-year), same-variable values from neighbor stations, and a reanalysis
column.  Rows with any missing feature are dropped, not imputed; the dropped
indices are reported on the matrix so callers can account for them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime
from zoneinfo import ZoneInfo

import numpy as np

from .errors import FairmetError
from .timeseries import TimeSeries

TEMPORAL = "TEMPORAL"
TEMPORAL_NEIGHBORS = "TEMPORAL_NEIGHBORS"
TEMPORAL_REANALYSIS = "TEMPORAL_REANALYSIS"
ALL = "ALL"
NONE = "NONE"   # baselines only; no design matrix

FEATURE_SETS = (TEMPORAL, TEMPORAL_NEIGHBORS, TEMPORAL_REANALYSIS, ALL)

TEMPORAL_COLUMNS = ("hour_sin", "hour_cos", "doy_sin", "doy_cos")


class MissingReanalysis(FairmetError):
    pass


class StepMismatch(FairmetError):
    pass


@dataclass(frozen=True)
class DesignMatrix:
    """Feature rows aligned with target values.

    ``indices`` are the slot positions in the target series each row came
    from; ``dropped`` the requested slots that lost their row to a missing
    feature (or missing target when targets are required).
    """

    indices: tuple[int, ...]
    timestamps: tuple[datetime, ...]
    X: np.ndarray
    target: np.ndarray
    column_names: tuple[str, ...]
    dropped: tuple[int, ...]

    def __post_init__(self):
        if self.X.shape != (len(self.indices), len(self.column_names)):
            raise ValueError("X shape does not match indices/columns")
        if self.target.shape != (len(self.indices),):
            raise ValueError("target must align with rows")

    @property
    def n_rows(self) -> int:
        return len(self.indices)


def _slot_offset(target: TimeSeries, other: TimeSeries) -> int:
    """Index shift between two series on the same grid."""
    if other.step_seconds != target.step_seconds:
        raise StepMismatch(
            f"{other.station_id} step {other.step_seconds}s differs from "
            f"target step {target.step_seconds}s")
    delta = (target.start - other.start).total_seconds()
    shift, rem = divmod(delta, target.step_seconds)
    if rem != 0:
        raise StepMismatch(
            f"{other.station_id} grid is offset from the target grid")
    return int(shift)


def _aligned_values(target: TimeSeries, other: TimeSeries,
                    indices: np.ndarray) -> np.ndarray:
    shift = _slot_offset(target, other)
    positions = indices + shift
    out = np.full(indices.shape, np.nan)
    ok = (positions >= 0) & (positions < len(other))
    out[ok] = other.values[positions[ok]]
    return out


def temporal_features(series: TimeSeries, indices: np.ndarray) -> np.ndarray:
    """Four-column cyclic encoding of local hour-of-day and day-of-year."""
    zone = ZoneInfo(series.tz)
    rows = np.empty((len(indices), 4))
    for r, i in enumerate(indices):
        local = series.time_at(int(i)).astimezone(zone)
        hour = local.hour + local.minute / 60.0 + local.second / 3600.0
        ha = 2.0 * math.pi * hour / 24.0
        da = 2.0 * math.pi * (local.timetuple().tm_yday - 1) / 365.25
        rows[r] = (math.sin(ha), math.cos(ha), math.sin(da), math.cos(da))
    return rows


def build_features(target: TimeSeries, neighbors: list[TimeSeries],
                   reanalysis: TimeSeries | None, kind: str,
                   indices, require_target: bool = True) -> DesignMatrix:
    """Assemble the design matrix for ``kind`` at the given slot indices.

    Neighbor and reanalysis series must share the target's step and grid
    phase.  With ``require_target`` rows whose target value is missing are
    dropped too (fitting); without it the target column may carry NaN
    (prediction at gap slots).
    """
    if kind not in FEATURE_SETS:
        raise ValueError(f"unknown feature set {kind!r}")
    needs_neighbors = kind in (TEMPORAL_NEIGHBORS, ALL)
    needs_reanalysis = kind in (TEMPORAL_REANALYSIS, ALL)
    if needs_reanalysis and reanalysis is None:
        raise MissingReanalysis(f"feature set {kind} requires a reanalysis series")

    idx = np.asarray(sorted(int(i) for i in indices), dtype=np.int64)
    if idx.size and (idx[0] < 0 or idx[-1] >= len(target)):
        raise IndexError("feature indices outside the target series")

    columns: list[str] = list(TEMPORAL_COLUMNS)
    blocks = [temporal_features(target, idx)]
    if needs_neighbors:
        for nb in neighbors:
            if nb.variable != target.variable:
                raise ValueError(
                    f"neighbor {nb.station_id} measures {nb.variable}, "
                    f"target is {target.variable}")
            columns.append(f"neighbor:{nb.station_id}")
            blocks.append(_aligned_values(target, nb, idx)[:, None])
    if needs_reanalysis:
        columns.append("reanalysis")
        blocks.append(_aligned_values(target, reanalysis, idx)[:, None])

    X = np.hstack(blocks) if idx.size else np.empty((0, len(columns)))
    y = target.values[idx] if idx.size else np.empty(0)

    keep = ~np.isnan(X).any(axis=1)
    if require_target:
        keep &= ~np.isnan(y)
    dropped = tuple(int(i) for i in idx[~keep])

    return DesignMatrix(
        indices=tuple(int(i) for i in idx[keep]),
        timestamps=tuple(target.time_at(int(i)) for i in idx[keep]),
        X=X[keep],
        target=y[keep],
        column_names=tuple(columns),
        dropped=dropped,
    )
