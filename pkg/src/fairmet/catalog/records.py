"""Three-level catalog records: network, site, sensor.

Environment and seasonality use closed vocabularies; unknown values are
rejected rather than coerced.  Records serialize to plain dicts for both the
persistence log and the REST payloads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import date
from zoneinfo import ZoneInfo

from ..errors import FairmetError
from ..timeseries import UnknownVariableCode, VariableKind


class VocabularyViolation(FairmetError):
    pass


class CoordinateOutOfRange(FairmetError):
    pass


class UnknownParent(FairmetError):
    pass


class NotFound(FairmetError):
    pass


class InvalidDateRange(FairmetError):
    pass


LOCAL_ENVIRONMENTS = ("URBAN", "RURAL", "URBAN_AND_RURAL")
SEASONALITIES = ("YEAR_ROUND", "SUMMER")

# display forms as printed in the portal tables
ENVIRONMENT_LABELS = {"URBAN": "URBAN", "RURAL": "RURAL",
                      "URBAN_AND_RURAL": "URBAN & RURAL"}
SEASONALITY_LABELS = {"YEAR_ROUND": "YEAR ROUND", "SUMMER": "SUMMER"}


def normalize_environment(text: str) -> str:
    value = re.sub(r"\s*&\s*", "_AND_", text.strip().upper()).replace(" ", "_")
    if value not in LOCAL_ENVIRONMENTS:
        raise VocabularyViolation(
            f"local environment {text!r} not in {LOCAL_ENVIRONMENTS}")
    return value


def normalize_seasonality(text: str) -> str:
    value = text.strip().upper().replace(" ", "_").replace("-", "_")
    if value not in SEASONALITIES:
        raise VocabularyViolation(
            f"seasonality {text!r} not in {SEASONALITIES}")
    return value


def slugify(name: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", name.lower()).strip("-")
    if not slug:
        raise ValueError(f"cannot derive an id from {name!r}")
    return slug


def _parse_date(text: str | None) -> date | None:
    if text in (None, ""):
        return None
    return date.fromisoformat(text)


@dataclass(frozen=True)
class NetworkRecord:
    id: str
    name: str
    country: str
    city_or_region: str
    local_environment: str
    seasonality: str
    dataset_link: str = ""
    station_count: int = 0
    measured_variables: tuple[str, ...] = ()
    measurement_frequency_seconds: int = 3600
    active_from: date | None = None
    active_to: date | None = None
    contact: str = ""
    license: str = ""

    def __post_init__(self):
        object.__setattr__(self, "local_environment",
                           normalize_environment(self.local_environment))
        object.__setattr__(self, "seasonality",
                           normalize_seasonality(self.seasonality))
        if self.station_count < 0:
            raise ValueError("station_count must be >= 0")
        if self.measurement_frequency_seconds <= 0:
            raise ValueError("measurement_frequency_seconds must be positive")
        for code in self.measured_variables:
            VariableKind.parse(code)   # raises UnknownVariableCode
        if (self.active_from and self.active_to
                and self.active_from > self.active_to):
            raise InvalidDateRange(
                f"active_from {self.active_from} after active_to {self.active_to}")

    def to_dict(self) -> dict:
        return {
            "id": self.id, "name": self.name, "country": self.country,
            "city_or_region": self.city_or_region,
            "local_environment": self.local_environment,
            "seasonality": self.seasonality,
            "dataset_link": self.dataset_link,
            "station_count": self.station_count,
            "measured_variables": list(self.measured_variables),
            "measurement_frequency_seconds": self.measurement_frequency_seconds,
            "active_from": self.active_from.isoformat() if self.active_from else "",
            "active_to": self.active_to.isoformat() if self.active_to else "",
            "contact": self.contact, "license": self.license,
        }

    @staticmethod
    def from_dict(d: dict) -> "NetworkRecord":
        return NetworkRecord(
            id=d["id"], name=d["name"], country=d["country"],
            city_or_region=d.get("city_or_region", ""),
            local_environment=d["local_environment"],
            seasonality=d["seasonality"],
            dataset_link=d.get("dataset_link", ""),
            station_count=int(d.get("station_count", 0)),
            measured_variables=tuple(d.get("measured_variables", ())),
            measurement_frequency_seconds=int(
                d.get("measurement_frequency_seconds", 3600)),
            active_from=_parse_date(d.get("active_from")),
            active_to=_parse_date(d.get("active_to")),
            contact=d.get("contact", ""), license=d.get("license", ""))


@dataclass(frozen=True)
class SiteRecord:
    id: str
    network_id: str
    name: str
    latitude: float
    longitude: float
    altitude_m: float = 0.0
    timezone: str = "UTC"
    macroscale_environment: str = ""

    def __post_init__(self):
        if not (-90.0 <= self.latitude <= 90.0):
            raise CoordinateOutOfRange(f"latitude {self.latitude} outside [-90, 90]")
        if not (-180.0 <= self.longitude <= 180.0):
            raise CoordinateOutOfRange(f"longitude {self.longitude} outside [-180, 180]")
        ZoneInfo(self.timezone)

    def to_dict(self) -> dict:
        return {
            "id": self.id, "network_id": self.network_id, "name": self.name,
            "latitude": self.latitude, "longitude": self.longitude,
            "altitude_m": self.altitude_m, "timezone": self.timezone,
            "macroscale_environment": self.macroscale_environment,
        }

    @staticmethod
    def from_dict(d: dict) -> "SiteRecord":
        return SiteRecord(
            id=d["id"], network_id=d["network_id"], name=d["name"],
            latitude=float(d["latitude"]), longitude=float(d["longitude"]),
            altitude_m=float(d.get("altitude_m", 0.0)),
            timezone=d.get("timezone", "UTC"),
            macroscale_environment=d.get("macroscale_environment", ""))


@dataclass(frozen=True)
class SensorRecord:
    id: str
    site_id: str
    variable: str
    units: str = ""
    mounting_height_or_depth_m: float = 2.0   # negative = below surface
    instrument_model: str = ""
    stated_accuracy: str = ""
    sampling_interval_seconds: int = 3600
    wmo_attribute_map: dict = field(default_factory=dict)

    def __post_init__(self):
        VariableKind.parse(self.variable)
        if self.sampling_interval_seconds <= 0:
            raise ValueError("sampling_interval_seconds must be positive")

    def to_dict(self) -> dict:
        return {
            "id": self.id, "site_id": self.site_id, "variable": self.variable,
            "units": self.units,
            "mounting_height_or_depth_m": self.mounting_height_or_depth_m,
            "instrument_model": self.instrument_model,
            "stated_accuracy": self.stated_accuracy,
            "sampling_interval_seconds": self.sampling_interval_seconds,
            "wmo_attribute_map": dict(self.wmo_attribute_map),
        }

    @staticmethod
    def from_dict(d: dict) -> "SensorRecord":
        return SensorRecord(
            id=d["id"], site_id=d["site_id"], variable=d["variable"],
            units=d.get("units", ""),
            mounting_height_or_depth_m=float(
                d.get("mounting_height_or_depth_m", 2.0)),
            instrument_model=d.get("instrument_model", ""),
            stated_accuracy=d.get("stated_accuracy", ""),
            sampling_interval_seconds=int(
                d.get("sampling_interval_seconds", 3600)),
            wmo_attribute_map=dict(d.get("wmo_attribute_map", {})))


@dataclass(frozen=True)
class SearchQuery:
    country: str | None = None
    city: str | None = None
    local_environment: str | None = None
    seasonality: str | None = None
    date_from: date | None = None
    date_to: date | None = None

    def __post_init__(self):
        if self.date_from and self.date_to and self.date_from > self.date_to:
            raise InvalidDateRange(
                f"date range {self.date_from}..{self.date_to} is inverted")
        if self.local_environment is not None:
            object.__setattr__(self, "local_environment",
                               normalize_environment(self.local_environment))
        if self.seasonality is not None:
            object.__setattr__(self, "seasonality",
                               normalize_seasonality(self.seasonality))


@dataclass(frozen=True)
class FairChecklist:
    """FAIR self-check computed from stored metadata only.

    findable: a persistent identifier plus the core discovery fields;
    accessible: the link uses a standard web scheme and a license is stated;
    interoperable: every sensor uses a controlled variable code and carries
    WMO-aligned attribute keys (vacuously true with no sensors);
    reusable: license, contact and a known start of the active period.
    """

    findable: bool
    accessible: bool
    interoperable: bool
    reusable: bool

    @property
    def score(self) -> int:
        return sum((self.findable, self.accessible, self.interoperable,
                    self.reusable))

    def to_dict(self) -> dict:
        return {"findable": self.findable, "accessible": self.accessible,
                "interoperable": self.interoperable, "reusable": self.reusable,
                "score": self.score}
