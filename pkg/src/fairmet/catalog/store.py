"""Durable catalog store: an append-only newline-delimited JSON log with
full in-memory indexes rebuilt at startup.

Every upsert is flushed and fsynced before it returns, so a kill-and-reload
reproduces the store exactly.  Writes are serialized through one lock;
reads work on plain dict snapshots and take no locks.  ``compact`` rewrites
the log to one line per live record via write-temp-then-rename.
"""

from __future__ import annotations

import csv
import io
import json
import os
import threading
from pathlib import Path

from ..errors import FairmetError
from .records import (FairChecklist, InvalidDateRange, NetworkRecord,
                      NotFound, SearchQuery, SensorRecord, SiteRecord,
                      UnknownParent, slugify)

LOG_NAME = "catalog.jsonl"

INVENTORY_HEADER = (
    "network_name", "country", "city", "n_stations", "environment",
    "seasonality", "variables", "frequency_seconds", "active_from",
    "active_to", "data_format", "contact", "license", "dataset_link")


class MalformedHeader(FairmetError):
    pass


_RECORD_TYPES = {"network": NetworkRecord, "site": SiteRecord,
                 "sensor": SensorRecord}


class CatalogStore:
    def __init__(self, data_dir: str | Path):
        self._dir = Path(data_dir)
        self._dir.mkdir(parents=True, exist_ok=True)
        self._path = self._dir / LOG_NAME
        self._lock = threading.Lock()
        self.networks: dict[str, NetworkRecord] = {}
        self.sites: dict[str, SiteRecord] = {}
        self.sensors: dict[str, SensorRecord] = {}
        self._replay()

    @property
    def log_path(self) -> Path:
        return self._path

    def _replay(self) -> None:
        if not self._path.exists():
            return
        with open(self._path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                entry = json.loads(line)
                record = _RECORD_TYPES[entry["kind"]].from_dict(entry["record"])
                self._apply(entry["kind"], record)

    def _apply(self, kind: str, record) -> None:
        {"network": self.networks, "site": self.sites,
         "sensor": self.sensors}[kind][record.id] = record

    def _append(self, kind: str, record) -> None:
        line = json.dumps({"kind": kind, "record": record.to_dict()},
                          sort_keys=True)
        with open(self._path, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    # -- writes ------------------------------------------------------------

    def upsert(self, record) -> str:
        """Insert or replace by id; the write is durable on return."""
        if isinstance(record, NetworkRecord):
            kind = "network"
        elif isinstance(record, SiteRecord):
            kind = "site"
            if record.network_id not in self.networks:
                raise UnknownParent(f"network {record.network_id!r} does not exist")
        elif isinstance(record, SensorRecord):
            kind = "sensor"
            if record.site_id not in self.sites:
                raise UnknownParent(f"site {record.site_id!r} does not exist")
        else:
            raise TypeError(f"cannot store {type(record).__name__}")
        with self._lock:
            self._append(kind, record)
            self._apply(kind, record)
        return record.id

    def compact(self) -> None:
        """Rewrite the log with one line per live record (atomic replace)."""
        with self._lock:
            tmp = self._path.with_suffix(".tmp")
            with open(tmp, "w", encoding="utf-8") as fh:
                for kind, table in (("network", self.networks),
                                    ("site", self.sites),
                                    ("sensor", self.sensors)):
                    for record_id in sorted(table):
                        fh.write(json.dumps(
                            {"kind": kind, "record": table[record_id].to_dict()},
                            sort_keys=True) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, self._path)

    # -- reads -------------------------------------------------------------

    def search_networks(self, query: SearchQuery) -> list[NetworkRecord]:
        """Conjunctive faceted search; string facets match case-insensitively
        and exactly, the date range matches any overlap with the network's
        active period.  Results ordered by (country, name)."""
        out = []
        for net in self.networks.values():
            if query.country and net.country.lower() != query.country.lower():
                continue
            if query.city and net.city_or_region.lower() != query.city.lower():
                continue
            if query.local_environment and net.local_environment != query.local_environment:
                continue
            if query.seasonality and net.seasonality != query.seasonality:
                continue
            if query.date_from or query.date_to:
                # an empty active_to means the network is still running
                if query.date_to and net.active_from and net.active_from > query.date_to:
                    continue
                if query.date_from and net.active_to and net.active_to < query.date_from:
                    continue
            out.append(net)
        return sorted(out, key=lambda n: (n.country, n.name))

    def stats(self, group_by: str) -> dict[str, int]:
        field = {"COUNTRY": "country",
                 "LOCAL_ENVIRONMENT": "local_environment",
                 "SEASONALITY": "seasonality"}.get(group_by.upper())
        if field is None:
            raise ValueError(f"cannot group by {group_by!r}")
        counts: dict[str, int] = {}
        for net in self.networks.values():
            key = getattr(net, field)
            counts[key] = counts.get(key, 0) + 1
        return dict(sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])))

    def sites_of(self, network_id: str) -> list[SiteRecord]:
        if network_id not in self.networks:
            raise NotFound(f"network {network_id!r} does not exist")
        sites = [s for s in self.sites.values() if s.network_id == network_id]
        return sorted(sites, key=lambda s: s.name)

    def sensors_of(self, site_id: str) -> list[SensorRecord]:
        if site_id not in self.sites:
            raise NotFound(f"site {site_id!r} does not exist")
        sensors = [s for s in self.sensors.values() if s.site_id == site_id]
        return sorted(sensors, key=lambda s: s.id)

    def get_network(self, network_id: str) -> NetworkRecord:
        try:
            return self.networks[network_id]
        except KeyError:
            raise NotFound(f"network {network_id!r} does not exist") from None

    def get_site(self, site_id: str) -> SiteRecord:
        try:
            return self.sites[site_id]
        except KeyError:
            raise NotFound(f"site {site_id!r} does not exist") from None

    def get_network_detail(self, network_id: str
                           ) -> tuple[NetworkRecord, list[tuple[SiteRecord, list[SensorRecord]]]]:
        net = self.get_network(network_id)
        detail = [(site, self.sensors_of(site.id))
                  for site in self.sites_of(network_id)]
        return net, detail

    def fair_checklist(self, network_id: str) -> FairChecklist:
        net = self.get_network(network_id)
        findable = bool(net.dataset_link and net.name and net.country
                        and net.local_environment)
        accessible = bool(
            net.dataset_link.startswith(("http://", "https://")) and net.license)
        sensors = [sensor for site in self.sites.values()
                   if site.network_id == network_id
                   for sensor in self.sensors.values()
                   if sensor.site_id == site.id]
        interoperable = all(s.variable != "OTHER" and s.wmo_attribute_map
                            for s in sensors)
        reusable = bool(net.license and net.contact and net.active_from)
        return FairChecklist(findable=findable, accessible=accessible,
                             interoperable=interoperable, reusable=reusable)

    # -- inventory import ----------------------------------------------------

    def import_inventory(self, data: bytes | str) -> tuple[int, list[tuple[int, str]]]:
        """One NetworkRecord per valid row; each valid row is persisted on
        its own, so a bad row never rolls back its predecessors.  Extra
        columns beyond the documented header are ignored."""
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        reader = csv.reader(io.StringIO(data))
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header[:len(INVENTORY_HEADER)]) \
                != INVENTORY_HEADER:
            raise MalformedHeader(
                f"inventory header must start with {','.join(INVENTORY_HEADER)}")
        imported = 0
        errors: list[tuple[int, str]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            try:
                record = self._inventory_row(row)
                self.upsert(record)
                imported += 1
            except (FairmetError, ValueError) as exc:
                errors.append((lineno, str(exc)))
        return imported, errors

    @staticmethod
    def _inventory_row(row: list[str]) -> NetworkRecord:
        if len(row) < len(INVENTORY_HEADER):
            raise ValueError(f"expected {len(INVENTORY_HEADER)} fields, got {len(row)}")
        (name, country, city, n_stations, environment, seasonality,
         variables, frequency, active_from, active_to,
         _data_format, contact, license_, link) = (f.strip() for f in
                                                   row[:len(INVENTORY_HEADER)])
        from datetime import date
        return NetworkRecord(
            id=slugify(name), name=name, country=country, city_or_region=city,
            local_environment=environment, seasonality=seasonality,
            dataset_link=link, station_count=int(n_stations or 0),
            measured_variables=tuple(v for v in variables.split(";") if v),
            measurement_frequency_seconds=int(frequency or 3600),
            active_from=date.fromisoformat(active_from) if active_from else None,
            active_to=date.fromisoformat(active_to) if active_to else None,
            contact=contact, license=license_)
