"""Seven-step quality control for station series.

Checks, in order: (1) gross plausible range, (2) climatological envelope
from the series' own per-month statistics, (3) step test between consecutive
slots, (4) persistence / flatline, (5) spike against the mean of the two
temporal neighbors, (6) spatial consistency against a robust neighbor-median
z-score, (7) time-shift detection by cross-correlation against each
neighbor.  A slot's final flag is the maximum severity over all enabled
checks; missing slots stay MISSING.  Check 7 never flags slots, it reports
the detected lag per neighbor.

``inject_faults`` plants spikes, flatlines, offsets and segment shifts with
a known ground truth, which is how the recall properties are tested.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, replace
from zoneinfo import ZoneInfo

import numpy as np

from .errors import FairmetError
from .rng import SplitMix64
from .timeseries import TimeSeries, VariableKind


class TooManyFaults(FairmetError):
    pass


class QcFlag(enum.IntEnum):
    PASS = 0
    SUSPECT = 1
    FAIL = 2
    MISSING = 3     # only ever assigned to missing slots


CHECK_RANGE = "range"
CHECK_CLIMATOLOGY = "climatology"
CHECK_STEP = "step"
CHECK_PERSISTENCE = "persistence"
CHECK_SPIKE = "spike"
CHECK_SPATIAL = "spatial"
CHECK_SHIFT = "shift"

CHECKS = (CHECK_RANGE, CHECK_CLIMATOLOGY, CHECK_STEP, CHECK_PERSISTENCE,
          CHECK_SPIKE, CHECK_SPATIAL, CHECK_SHIFT)

# check -> severity of a hit
_SEVERITY = {
    CHECK_RANGE: QcFlag.FAIL,
    CHECK_CLIMATOLOGY: QcFlag.SUSPECT,
    CHECK_STEP: QcFlag.SUSPECT,
    CHECK_PERSISTENCE: QcFlag.SUSPECT,
    CHECK_SPIKE: QcFlag.FAIL,
    CHECK_SPATIAL: QcFlag.SUSPECT,
}

_RANGE_DEFAULTS = {
    "TA": (-60.0, 60.0), "DP": (-60.0, 60.0), "RH": (0.0, 100.0),
    "LW": (0.0, 1.0), "PRECIP": (0.0, 300.0), "WIND_SPEED": (0.0, 75.0),
    "GLOBAL_RAD": (0.0, 1500.0), "SOIL_T": (-40.0, 60.0),
    "SOIL_WC": (0.0, 1.0),
}
_STEP_DEFAULTS = {
    "TA": 6.0, "DP": 6.0, "RH": 30.0, "LW": 0.8, "PRECIP": 100.0,
    "WIND_SPEED": 25.0, "GLOBAL_RAD": 800.0, "SOIL_T": 4.0, "SOIL_WC": 0.3,
}
_SPIKE_DEFAULTS = {
    "TA": 3.0, "DP": 3.0, "RH": 20.0, "LW": 0.5, "PRECIP": 50.0,
    "WIND_SPEED": 15.0, "GLOBAL_RAD": 500.0, "SOIL_T": 2.0, "SOIL_WC": 0.2,
}


@dataclass(frozen=True)
class QcConfig:
    plausible_lo: float = -60.0
    plausible_hi: float = 60.0
    max_step: float = 6.0
    persistence_k: int = 6
    spike_threshold: float = 3.0
    spatial_multiplier: float = 5.0
    shift_max_lag: int = 12
    shift_min_gain: float = 0.05
    climatology_sigma: float = 4.0
    climatology_min_days: int = 60
    enabled: tuple[str, ...] = CHECKS

    def is_enabled(self, check: str) -> bool:
        return check in self.enabled

    def without(self, *checks: str) -> "QcConfig":
        return replace(self, enabled=tuple(c for c in self.enabled
                                           if c not in checks))


def default_qc_config(variable: VariableKind) -> QcConfig:
    code = variable.code
    lo, hi = _RANGE_DEFAULTS.get(code, (-1e9, 1e9))
    return QcConfig(plausible_lo=lo, plausible_hi=hi,
                    max_step=_STEP_DEFAULTS.get(code, 6.0),
                    spike_threshold=_SPIKE_DEFAULTS.get(code, 3.0))


@dataclass(frozen=True)
class QcReport:
    counts: dict            # check -> {"SUSPECT": n, "FAIL": n}
    flagged: dict           # check -> tuple of slot indices
    shift_lags: dict        # neighbor station -> detected lag (slots)
    skipped_neighbors: tuple[tuple[str, str], ...]


def _neighbor_aligned(series: TimeSeries, nb: TimeSeries) -> np.ndarray | None:
    """Neighbor values re-indexed onto the series grid, or None if the grids
    are incompatible."""
    if nb.step_seconds != series.step_seconds:
        return None
    delta = (series.start - nb.start).total_seconds()
    shift, rem = divmod(delta, series.step_seconds)
    if rem != 0:
        return None
    shift = int(shift)
    out = np.full(len(series), np.nan)
    src_lo = max(0, -shift)
    src_hi = min(len(series), len(nb) - shift)
    if src_hi > src_lo:
        out[src_lo:src_hi] = nb.values[src_lo + shift:src_hi + shift]
    return out


def _cross_correlation_lag(a: np.ndarray, b: np.ndarray, max_lag: int,
                           min_gain: float) -> int | None:
    """Lag in [-max_lag, max_lag] maximizing the Pearson correlation of
    a[i] with b[i + lag]; None when too little overlap.  A nonzero lag is
    reported only when it beats lag 0 by min_gain."""
    def corr_at(lag: int) -> float | None:
        if lag >= 0:
            x, y = a[:len(a) - lag or None], b[lag:]
        else:
            x, y = a[-lag:], b[:lag]
        ok = ~(np.isnan(x) | np.isnan(y))
        if ok.sum() < 30:
            return None
        xv, yv = x[ok], y[ok]
        sx, sy = xv.std(), yv.std()
        if sx < 1e-12 or sy < 1e-12:
            return None
        return float(((xv - xv.mean()) * (yv - yv.mean())).mean() / (sx * sy))

    base = corr_at(0)
    best_lag, best_corr = 0, -np.inf if base is None else base
    any_defined = base is not None
    for lag in range(-max_lag, max_lag + 1):
        if lag == 0:
            continue
        c = corr_at(lag)
        if c is None:
            continue
        any_defined = True
        if c > best_corr + 1e-12:
            best_lag, best_corr = lag, c
    if not any_defined:
        return None
    if best_lag != 0 and base is not None and best_corr < base + min_gain:
        return 0
    return best_lag


def run_qc(series: TimeSeries, neighbors: list[TimeSeries],
           config: QcConfig) -> tuple[list[QcFlag], QcReport]:
    """Apply the seven checks. Returns the per-slot flags and the report."""
    n = len(series)
    v = series.values
    observed = ~series.missing_mask
    severity = np.zeros(n, dtype=np.int8)
    hits: dict[str, list[int]] = {c: [] for c in CHECKS}

    def mark(check: str, indices) -> None:
        sev = int(_SEVERITY[check])
        for i in indices:
            hits[check].append(int(i))
            if severity[i] < sev:
                severity[i] = sev

    # 1. gross range
    if config.is_enabled(CHECK_RANGE):
        bad = observed & ((v < config.plausible_lo) | (v > config.plausible_hi))
        mark(CHECK_RANGE, np.flatnonzero(bad))

    # 2. climatological envelope (per local month, from the series itself)
    if config.is_enabled(CHECK_CLIMATOLOGY):
        span_days = (n * series.step_seconds) / 86400.0
        if span_days >= config.climatology_min_days:
            zone = ZoneInfo(series.tz)
            months = np.array([series.time_at(i).astimezone(zone).month
                               for i in range(n)])
            for month in range(1, 13):
                sel = observed & (months == month)
                if sel.sum() < 2:
                    continue
                mu = v[sel].mean()
                sd = v[sel].std()
                if sd < 1e-12:
                    continue
                lo = mu - config.climatology_sigma * sd
                hi = mu + config.climatology_sigma * sd
                mark(CHECK_CLIMATOLOGY, np.flatnonzero(sel & ((v < lo) | (v > hi))))

    # 3. step test between consecutive observed slots
    if config.is_enabled(CHECK_STEP):
        both = observed[1:] & observed[:-1]
        jump = np.abs(np.diff(v)) > config.max_step
        mark(CHECK_STEP, np.flatnonzero(both & jump) + 1)

    # 4. persistence / flatline
    if config.is_enabled(CHECK_PERSISTENCE):
        i = 0
        while i < n:
            if not observed[i]:
                i += 1
                continue
            j = i
            while j + 1 < n and observed[j + 1] and v[j + 1] == v[i]:
                j += 1
            if j - i + 1 >= config.persistence_k:
                mark(CHECK_PERSISTENCE, range(i, j + 1))
            i = j + 1

    # 5. spike vs the mean of the two temporal neighbors
    if config.is_enabled(CHECK_SPIKE) and n >= 3:
        trip = observed[1:-1] & observed[:-2] & observed[2:]
        dev = np.abs(v[1:-1] - (v[:-2] + v[2:]) / 2.0)
        mark(CHECK_SPIKE, np.flatnonzero(trip & (dev > config.spike_threshold)) + 1)

    # align neighbors once for checks 6 and 7
    aligned: list[tuple[str, np.ndarray]] = []
    skipped: list[tuple[str, str]] = []
    for nb in neighbors:
        a = _neighbor_aligned(series, nb)
        if a is None:
            skipped.append((nb.station_id, "incompatible step or grid"))
        else:
            aligned.append((nb.station_id, a))

    # 6. spatial consistency (robust z against the neighbor median)
    if config.is_enabled(CHECK_SPATIAL) and len(aligned) >= 3:
        stack = np.vstack([a for _, a in aligned])
        count = (~np.isnan(stack)).sum(axis=0)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            med = np.nanmedian(stack, axis=0)
            mad = np.nanmedian(np.abs(stack - med), axis=0)
        robust_sd = np.maximum(1.4826 * mad, 0.1)
        usable = observed & (count >= 3) & ~np.isnan(med)
        with np.errstate(invalid="ignore"):
            z = np.abs(v - med) / robust_sd
        mark(CHECK_SPATIAL, np.flatnonzero(usable & (z > config.spatial_multiplier)))

    # 7. time shift per neighbor (reported, never flagged)
    shift_lags: dict[str, int] = {}
    if config.is_enabled(CHECK_SHIFT):
        for station, a in aligned:
            lag = _cross_correlation_lag(v, a, config.shift_max_lag,
                                         config.shift_min_gain)
            if lag is None:
                skipped.append((station, "insufficient overlap for shift check"))
            else:
                shift_lags[station] = lag

    flags = [QcFlag.MISSING if not observed[i] else QcFlag(int(severity[i]))
             for i in range(n)]
    flagged = {c: tuple(sorted(set(ix))) for c, ix in hits.items()}
    counts = {
        check: {
            "SUSPECT": len(flagged[check]) if _SEVERITY[check] == QcFlag.SUSPECT else 0,
            "FAIL": len(flagged[check]) if _SEVERITY[check] == QcFlag.FAIL else 0,
        }
        for check in CHECKS if check != CHECK_SHIFT
    }
    report = QcReport(counts=counts, flagged=flagged, shift_lags=shift_lags,
                      skipped_neighbors=tuple(skipped))
    return flags, report


# ---------------------------------------------------------------------------
# Fault injection

FAULT_SPIKE = "spike"
FAULT_FLATLINE = "flatline"
FAULT_OFFSET = "offset"
FAULT_SHIFT = "shift"


@dataclass(frozen=True)
class Fault:
    kind: str
    index: int
    length: int
    magnitude: float


@dataclass(frozen=True)
class FaultSpec:
    spikes: int = 0
    spike_magnitude: float = 15.0
    flatlines: int = 0
    flatline_length: int = 12
    offsets: int = 0
    offset_magnitude: float = 5.0
    offset_length: int = 24
    shifts: int = 0
    shift_lag: int = 2
    shift_length: int = 48


def inject_faults(series: TimeSeries, spec: FaultSpec, seed: int = 0
                  ) -> tuple[TimeSeries, list[Fault]]:
    """Plant synthetic faults deterministically.

    Spans never overlap and keep one untouched slot on each side, so every
    planted fault is recoverable from the corrupted-vs-original diff.
    """
    n = len(series)
    budget = (spec.spikes
              + spec.flatlines * spec.flatline_length
              + spec.offsets * spec.offset_length
              + spec.shifts * spec.shift_length)
    if budget > 0.1 * n:
        raise TooManyFaults(f"{budget} faulted slots exceeds 10% of {n}")

    rng = SplitMix64(seed)
    values = series.values.copy()
    observed = ~series.missing_mask
    taken = np.zeros(n, dtype=bool)
    faults: list[Fault] = []

    def claim(length: int, tries: int = 200) -> int | None:
        for _ in range(tries):
            start = rng.next_below(max(n - length - 1, 1)) + 1
            span = slice(start - 1, start + length + 1)   # one-slot margin
            if observed[span].all() and not taken[span].any():
                taken[start - 1:start + length + 1] = True
                return start
        return None

    wanted = ([(FAULT_SHIFT, spec.shift_length)] * spec.shifts
              + [(FAULT_OFFSET, spec.offset_length)] * spec.offsets
              + [(FAULT_FLATLINE, spec.flatline_length)] * spec.flatlines
              + [(FAULT_SPIKE, 1)] * spec.spikes)
    for kind, length in wanted:
        start = claim(length)
        if start is None:
            continue
        if kind == FAULT_SPIKE:
            values[start] += spec.spike_magnitude
            faults.append(Fault(kind, start, 1, spec.spike_magnitude))
        elif kind == FAULT_FLATLINE:
            values[start:start + length] = values[start]
            faults.append(Fault(kind, start, length, 0.0))
        elif kind == FAULT_OFFSET:
            values[start:start + length] += spec.offset_magnitude
            faults.append(Fault(kind, start, length, spec.offset_magnitude))
        else:
            lag = spec.shift_lag
            window = values[start:start + length].copy()
            values[start:start + length] = np.roll(window, lag)
            faults.append(Fault(kind, start, length, float(lag)))

    faults.sort(key=lambda f: f.index)
    return series.with_values(values), faults
