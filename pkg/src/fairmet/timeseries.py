"""Station time series: data model, CSV ingestion, gap detection and profiling,
and the dew-point / relative-humidity conversion.

A series is one (station, variable) sequence on a fixed step.  Missing slots
are stored as NaN in the value array; NaN is never a valid observation for
any supported variable, and the file encoding of a missing slot is an empty
field or the literal ``NA``.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from zoneinfo import ZoneInfo

import numpy as np

from .errors import FairmetError


class MalformedTimestamp(FairmetError):
    pass


class MalformedValue(FairmetError):
    pass


class DuplicateSlot(FairmetError):
    pass


class NonPositiveStep(FairmetError):
    pass


class UnknownVariableCode(FairmetError):
    pass


class OutOfPhysicalRange(FairmetError):
    pass


# ---------------------------------------------------------------------------
# Variables

_KNOWN_VARIABLES = {
    # code -> units
    "TA": "degC",
    "DP": "degC",
    "RH": "%",
    "LW": "1",          # dimensionless wetness fraction in [0, 1]
    "PRECIP": "mm",
    "WIND_SPEED": "m/s",
    "GLOBAL_RAD": "W/m2",
    "SOIL_T": "degC",
    "SOIL_WC": "m3/m3",
}


@dataclass(frozen=True)
class VariableKind:
    """Measured variable. ``code`` is one of the controlled codes, or
    ``OTHER`` with a free-text label."""

    code: str
    label: str = ""

    def __post_init__(self):
        if self.code != "OTHER" and self.code not in _KNOWN_VARIABLES:
            raise UnknownVariableCode(f"unknown variable code {self.code!r}")
        if self.code != "OTHER" and self.label:
            raise UnknownVariableCode("label is only allowed with code OTHER")

    @property
    def units(self) -> str:
        return _KNOWN_VARIABLES.get(self.code, "")

    def __str__(self) -> str:
        return f"OTHER:{self.label}" if self.code == "OTHER" else self.code

    @staticmethod
    def parse(text: str) -> "VariableKind":
        text = text.strip()
        if text.startswith("OTHER:"):
            return VariableKind("OTHER", text[6:])
        if text == "OTHER":
            return VariableKind("OTHER", "")
        if text not in _KNOWN_VARIABLES:
            raise UnknownVariableCode(f"unknown variable code {text!r}")
        return VariableKind(text)


TA = VariableKind("TA")
DP = VariableKind("DP")
RH = VariableKind("RH")
LW = VariableKind("LW")

VARIABLE_CODES = tuple(_KNOWN_VARIABLES)


# ---------------------------------------------------------------------------
# Time series

@dataclass(frozen=True)
class TimeSeries:
    """One station-variable series on a regular step.

    ``start`` is a timezone-aware UTC timestamp of slot 0; slot i sits at
    ``start + i * step_seconds``.  ``values`` is float64 with NaN marking
    missing slots.  ``tz`` is the station's IANA timezone, used only for
    local-time bookkeeping (gap timing, seasons, temporal features).
    """

    station_id: str
    variable: VariableKind
    start: datetime
    step_seconds: int
    values: np.ndarray
    tz: str = "UTC"

    def __post_init__(self):
        if self.step_seconds <= 0:
            raise NonPositiveStep(f"step must be positive, got {self.step_seconds}")
        if self.start.tzinfo is None:
            raise MalformedTimestamp("series start must be timezone-aware")
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 1 or vals.size < 1:
            raise ValueError("values must be a non-empty 1-D sequence")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "start", self.start.astimezone(timezone.utc))
        ZoneInfo(self.tz)  # fail early on bad identifiers

    def __len__(self) -> int:
        return int(self.values.size)

    def time_at(self, index: int) -> datetime:
        return self.start + timedelta(seconds=index * self.step_seconds)

    def index_of(self, when: datetime) -> int:
        """Slot index of an exact timestamp; raises if off-grid."""
        delta = (when.astimezone(timezone.utc) - self.start).total_seconds()
        slot, rem = divmod(delta, self.step_seconds)
        if rem != 0:
            raise MalformedTimestamp(f"{when.isoformat()} is not on the series grid")
        return int(slot)

    @property
    def missing_mask(self) -> np.ndarray:
        return np.isnan(self.values)

    @property
    def n_missing(self) -> int:
        return int(np.isnan(self.values).sum())

    def local_time_at(self, index: int) -> datetime:
        return self.time_at(index).astimezone(ZoneInfo(self.tz))

    def with_values(self, values: np.ndarray) -> "TimeSeries":
        return TimeSeries(self.station_id, self.variable, self.start,
                          self.step_seconds, values, self.tz)


# ---------------------------------------------------------------------------
# Ingestion

CSV_HEADER = ("timestamp", "station_id", "variable", "value")
MISSING_TOKENS = ("", "NA")


@dataclass(frozen=True)
class ObservationFormat:
    """Long-format observation CSV: one declared step per file, timestamps
    ISO 8601 with an explicit offset or trailing Z."""

    step_seconds: int = 3600
    tz: str = "UTC"


def _parse_timestamp(text: str) -> datetime:
    raw = text.strip()
    iso = raw[:-1] + "+00:00" if raw.endswith(("Z", "z")) else raw
    try:
        ts = datetime.fromisoformat(iso)
    except ValueError:
        raise MalformedTimestamp(f"cannot parse timestamp {raw!r}") from None
    if ts.tzinfo is None:
        raise MalformedTimestamp(f"timestamp {raw!r} has no UTC offset")
    return ts.astimezone(timezone.utc)


def _snap_slot(ts: datetime, step: int) -> int:
    """Nearest multiple of ``step`` since the epoch.  A timestamp exactly
    half a step from both neighbours is ambiguous and rejected."""
    seconds = ts.timestamp()
    slot = math.floor(seconds / step + 0.5)
    offset = abs(seconds - slot * step)
    if abs(offset - step / 2) < 1e-9:
        raise MalformedTimestamp(
            f"{ts.isoformat()} sits exactly between two {step}s slots")
    return slot


def parse_observations(data: bytes | str, fmt: ObservationFormat) -> list[TimeSeries]:
    """Parse long-format CSV into one TimeSeries per (station, variable).

    Irregular timestamps are snapped to the declared step grid; slots between
    the first and last observation of each series that never appear in the
    file become missing.  Series are returned sorted by (station, variable).
    """
    if fmt.step_seconds <= 0:
        raise NonPositiveStep(f"step must be positive, got {fmt.step_seconds}")
    if isinstance(data, bytes):
        data = data.decode("utf-8")

    reader = csv.reader(io.StringIO(data))
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != CSV_HEADER:
        raise MalformedValue(
            f"expected header {','.join(CSV_HEADER)!r}, got {header!r}")

    step = fmt.step_seconds
    groups: dict[tuple[str, str], dict[int, float]] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 4:
            raise MalformedValue(f"line {lineno}: expected 4 fields, got {len(row)}")
        ts_text, station, var_text, value_text = (f.strip() for f in row)
        slot = _snap_slot(_parse_timestamp(ts_text), step)
        variable = VariableKind.parse(var_text)
        if value_text in MISSING_TOKENS:
            value = math.nan
        else:
            try:
                value = float(value_text)
            except ValueError:
                raise MalformedValue(
                    f"line {lineno}: cannot parse value {value_text!r}") from None
            if math.isnan(value):
                raise MalformedValue(f"line {lineno}: literal NaN is not a value")
        key = (station, str(variable))
        slots = groups.setdefault(key, {})
        if slot in slots:
            when = datetime.fromtimestamp(slot * step, tz=timezone.utc)
            raise DuplicateSlot(
                f"line {lineno}: duplicate slot {when.isoformat()} "
                f"for station {station!r} variable {variable}")
        slots[slot] = value

    result = []
    for (station, var_text), slots in sorted(groups.items()):
        first, last = min(slots), max(slots)
        values = np.full(last - first + 1, np.nan)
        for slot, value in slots.items():
            values[slot - first] = value
        start = datetime.fromtimestamp(first * step, tz=timezone.utc)
        result.append(TimeSeries(station, VariableKind.parse(var_text),
                                 start, step, values, fmt.tz))
    return result


def _format_value(v: float) -> str:
    if math.isnan(v):
        return ""
    v = float(v)
    return repr(v) if v != int(v) else str(int(v)) + ".0"


def serialize_observations(series: list[TimeSeries]) -> str:
    """Canonical long-format CSV for one or more series (UTC, Z suffix)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for s in sorted(series, key=lambda s: (s.station_id, str(s.variable))):
        for i, v in enumerate(s.values):
            ts = s.time_at(i).strftime("%Y-%m-%dT%H:%M:%SZ")
            writer.writerow([ts, s.station_id, str(s.variable), _format_value(v)])
    return out.getvalue()


# ---------------------------------------------------------------------------
# Gap detection and profiling

@dataclass(frozen=True)
class GapRecord:
    """Maximal run of missing slots. ``end_time`` is the timestamp of the
    last missing slot (inclusive)."""

    start_index: int
    length: int
    start_time: datetime
    end_time: datetime
    variable: VariableKind


DURATION_CLASSES = ("1", "2-3", "4-6", "7-12", "13-24", "25-48", ">48")


def duration_class(length: int) -> str:
    for label, hi in zip(DURATION_CLASSES, (1, 3, 6, 12, 24, 48)):
        if length <= hi:
            return label
    return ">48"


@dataclass(frozen=True)
class GapProfile:
    duration_histogram: dict[str, int]
    timing_by_hour: tuple[int, ...]      # local start hour, 24 counts
    timing_by_month: tuple[int, ...]     # local start month, 12 counts
    recurrence_score: float
    total_missing_fraction: float


def detect_gaps(series: TimeSeries) -> list[GapRecord]:
    """Maximal missing runs, ordered by start index."""
    mask = series.missing_mask
    gaps = []
    i, n = 0, len(mask)
    while i < n:
        if mask[i]:
            j = i
            while j + 1 < n and mask[j + 1]:
                j += 1
            gaps.append(GapRecord(
                start_index=i,
                length=j - i + 1,
                start_time=series.time_at(i),
                end_time=series.time_at(j),
                variable=series.variable,
            ))
            i = j + 1
        else:
            i += 1
    return gaps


def profile_gaps(series: TimeSeries) -> GapProfile:
    """Duration histogram, local start-time distributions, and a recurrence
    score: the fraction of gaps starting at the modal start hour (ties go to
    the smallest hour). Zero when the series has no gaps."""
    gaps = detect_gaps(series)
    histogram = {label: 0 for label in DURATION_CLASSES}
    by_hour = [0] * 24
    by_month = [0] * 12
    zone = ZoneInfo(series.tz)
    for gap in gaps:
        histogram[duration_class(gap.length)] += 1
        local = gap.start_time.astimezone(zone)
        by_hour[local.hour] += 1
        by_month[local.month - 1] += 1

    if gaps:
        counts = Counter()
        for hour, c in enumerate(by_hour):
            if c:
                counts[hour] = c
        modal_hour = max(counts, key=lambda h: (counts[h], -h))
        recurrence = counts[modal_hour] / len(gaps)
    else:
        recurrence = 0.0

    return GapProfile(
        duration_histogram=histogram,
        timing_by_hour=tuple(by_hour),
        timing_by_month=tuple(by_month),
        recurrence_score=recurrence,
        total_missing_fraction=series.n_missing / len(series),
    )


# ---------------------------------------------------------------------------
# Dew point / relative humidity conversion

# Magnus fit: saturation vapor pressure ~ exp(a*T / (b + T)).
MAGNUS_A = 17.625
MAGNUS_B = 243.04

DP_TO_RH = "DP_TO_RH"
RH_TO_DP = "RH_TO_DP"


def _check_temperature(name: str, t: float) -> None:
    if not (-60.0 <= t <= 60.0):
        raise OutOfPhysicalRange(f"{name}={t} degC outside [-60, 60]")


def convert_dp_rh(ta: float, x: float, direction: str) -> float:
    """Convert dew point to relative humidity or back at air temperature
    ``ta``.  DP_TO_RH takes a dew point in degC and returns RH in percent;
    RH_TO_DP takes RH in (0, 100] percent and returns the dew point.

    Uses the Magnus form with a=17.625, b=243.04 degC; saturation (DP == TA)
    maps to RH == 100 exactly and the round trip closes within 0.01 degC.
    """
    _check_temperature("TA", ta)
    a, b = MAGNUS_A, MAGNUS_B
    if direction == DP_TO_RH:
        _check_temperature("DP", x)
        return 100.0 * math.exp(a * x / (b + x) - a * ta / (b + ta))
    if direction == RH_TO_DP:
        if not (0.0 < x <= 100.0):
            raise OutOfPhysicalRange(f"RH={x}% outside (0, 100]")
        gamma = math.log(x / 100.0) + a * ta / (b + ta)
        return b * gamma / (a - gamma)
    raise ValueError(f"unknown direction {direction!r}")
