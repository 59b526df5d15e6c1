"""Reanalysis debiasing: hour-of-day x season offset tables.

The bias convention is ``bias = mean(obs - reanalysis)`` per cell, so a fill
is ``reanalysis + bias``.  Cells without enough support fall back to the
hour-only mean, then the global mean, then zero; under a constant
observation-reanalysis offset every step of the chain reproduces the offset
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from zoneinfo import ZoneInfo

import numpy as np

from .errors import FairmetError
from .features import _slot_offset
from .regressors import BASELINE_DEBIAS, GapFillModel, ModelProvenance
from .timeseries import TimeSeries

SEASONS = ("DJF", "MAM", "JJA", "SON")


class NoOverlap(FairmetError):
    pass


def season_index(month: int) -> int:
    if month in (12, 1, 2):
        return 0
    if month in (3, 4, 5):
        return 1
    if month in (6, 7, 8):
        return 2
    return 3


@dataclass(frozen=True)
class DebiasTable:
    """bias[hour][season] plus the fallback chain."""

    bias: np.ndarray            # (24, 4), NaN where unpopulated
    sample_count: np.ndarray    # (24, 4) ints
    hour_fallback: np.ndarray   # (24,), NaN where unpopulated
    global_fallback: float
    min_samples: int

    def lookup(self, hour: int, season: int) -> float:
        if self.sample_count[hour, season] >= self.min_samples:
            return float(self.bias[hour, season])
        if not np.isnan(self.hour_fallback[hour]):
            return float(self.hour_fallback[hour])
        return self.global_fallback

    def lookup_at(self, when: datetime, tz: str) -> float:
        local = when.astimezone(ZoneInfo(tz))
        return self.lookup(local.hour, season_index(local.month))


def fit_debias(obs: TimeSeries, reanalysis: TimeSeries,
               min_samples: int = 10) -> DebiasTable:
    """Hourly/seasonal mean differences over the overlapping observed slots.
    Hours and seasons follow the observation station's local calendar."""
    shift = _slot_offset(obs, reanalysis)
    zone = ZoneInfo(obs.tz)

    sums = np.zeros((24, 4))
    counts = np.zeros((24, 4), dtype=np.int64)
    for i in range(len(obs)):
        j = i + shift
        if j < 0 or j >= len(reanalysis):
            continue
        o, r = obs.values[i], reanalysis.values[j]
        if np.isnan(o) or np.isnan(r):
            continue
        local = obs.time_at(i).astimezone(zone)
        s = season_index(local.month)
        sums[local.hour, s] += o - r
        counts[local.hour, s] += 1

    total = int(counts.sum())
    if total == 0:
        raise NoOverlap("series share no observed slots")

    with np.errstate(invalid="ignore"):
        bias = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    hour_counts = counts.sum(axis=1)
    hour_fallback = np.where(hour_counts >= min_samples,
                             sums.sum(axis=1) / np.maximum(hour_counts, 1),
                             np.nan)
    global_fallback = float(sums.sum() / total)

    populated = counts < min_samples
    bias = np.where(populated, np.nan, bias)

    return DebiasTable(bias=bias, sample_count=counts,
                       hour_fallback=hour_fallback,
                       global_fallback=global_fallback,
                       min_samples=min_samples)


def debias_model(table: DebiasTable, seed: int = 0) -> GapFillModel:
    return GapFillModel(
        kind=BASELINE_DEBIAS, feature_set="NONE", seed=seed,
        column_names=None, payload=table,
        provenance=ModelProvenance(datetime.now(timezone.utc), None, None,
                                   int(table.sample_count.sum())))
