"""REST interface over the catalog store.

Read endpoints are open; the POST endpoints require a bearer token matching
the FAIRMET_ADMIN_TOKEN environment variable.  Error bodies always take the
shape {"error": {"code": ..., "message": ...}}.
"""

from __future__ import annotations

import os
from datetime import date

from fastapi import FastAPI, Header, Query, Request
from fastapi.responses import JSONResponse

from ..errors import FairmetError
from .records import (CoordinateOutOfRange, InvalidDateRange, NetworkRecord,
                      NotFound, SearchQuery, SensorRecord, SiteRecord,
                      UnknownParent, VocabularyViolation)
from .store import CatalogStore

ADMIN_TOKEN_ENV = "FAIRMET_ADMIN_TOKEN"


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"error": {"code": code, "message": message}})


def _parse_date(text: str | None, name: str) -> date | None:
    if not text:
        return None
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise InvalidDateRange(f"{name}={text!r} is not YYYY-MM-DD") from None


def _network_payload(store: CatalogStore, net: NetworkRecord) -> dict:
    payload = net.to_dict()
    payload["fair_score"] = store.fair_checklist(net.id).score
    return payload


def create_app(store: CatalogStore) -> FastAPI:
    app = FastAPI(title="fairmet catalog", docs_url=None, redoc_url=None)

    def authorize(header_value: str | None) -> JSONResponse | None:
        expected = os.environ.get(ADMIN_TOKEN_ENV, "")
        if not expected:
            return _error(401, "unauthorized", "no admin token configured")
        if header_value != f"Bearer {expected}":
            return _error(401, "unauthorized", "missing or wrong bearer token")
        return None

    @app.exception_handler(FairmetError)
    async def on_fairmet_error(request: Request, exc: FairmetError):
        if isinstance(exc, NotFound):
            return _error(404, "not_found", str(exc))
        if isinstance(exc, (VocabularyViolation, UnknownParent,
                            CoordinateOutOfRange)):
            return _error(409, "integrity", str(exc))
        return _error(400, "invalid_request", str(exc))

    @app.exception_handler(ValueError)
    async def on_value_error(request: Request, exc: ValueError):
        return _error(400, "invalid_request", str(exc))

    @app.exception_handler(KeyError)
    async def on_key_error(request: Request, exc: KeyError):
        return _error(400, "invalid_request", f"missing field {exc}")

    @app.get("/api/networks")
    async def list_networks(country: str = "", city: str = "",
                            environment: str = "", seasonality: str = "",
                            date_from: str = Query("", alias="from"),
                            date_to: str = Query("", alias="to")):
        query = SearchQuery(
            country=country or None, city=city or None,
            local_environment=environment or None,
            seasonality=seasonality or None,
            date_from=_parse_date(date_from, "from"),
            date_to=_parse_date(date_to, "to"))
        nets = store.search_networks(query)
        return {"networks": [_network_payload(store, n) for n in nets],
                "count": len(nets)}

    @app.get("/api/networks/{network_id}")
    async def network_detail(network_id: str):
        net, detail = store.get_network_detail(network_id)
        return {
            "network": _network_payload(store, net),
            "fair": store.fair_checklist(network_id).to_dict(),
            "sites": [dict(site.to_dict(),
                           sensors=[sensor.to_dict() for sensor in sensors])
                      for site, sensors in detail],
        }

    @app.get("/api/networks/{network_id}/sites")
    async def network_sites(network_id: str):
        sites = store.sites_of(network_id)
        return {"sites": [s.to_dict() for s in sites], "count": len(sites)}

    @app.get("/api/sites/{site_id}/sensors")
    async def site_sensors(site_id: str):
        sensors = store.sensors_of(site_id)
        return {"sensors": [s.to_dict() for s in sensors],
                "count": len(sensors)}

    @app.get("/api/stats")
    async def stats(group_by: str = "country"):
        field = {"country": "COUNTRY", "environment": "LOCAL_ENVIRONMENT",
                 "seasonality": "SEASONALITY"}.get(group_by.lower())
        if field is None:
            return _error(400, "invalid_request",
                          f"group_by must be country, environment or "
                          f"seasonality, got {group_by!r}")
        return {"group_by": group_by.lower(), "counts": store.stats(field)}

    @app.get("/api/networks/{network_id}/fair")
    async def fair(network_id: str):
        return store.fair_checklist(network_id).to_dict()

    @app.post("/api/networks")
    async def post_network(request: Request,
                           authorization: str | None = Header(default=None)):
        denied = authorize(authorization)
        if denied:
            return denied
        record = NetworkRecord.from_dict(await request.json())
        return {"id": store.upsert(record)}

    @app.post("/api/sites")
    async def post_site(request: Request,
                        authorization: str | None = Header(default=None)):
        denied = authorize(authorization)
        if denied:
            return denied
        record = SiteRecord.from_dict(await request.json())
        return {"id": store.upsert(record)}

    @app.post("/api/sensors")
    async def post_sensor(request: Request,
                          authorization: str | None = Header(default=None)):
        denied = authorize(authorization)
        if denied:
            return denied
        record = SensorRecord.from_dict(await request.json())
        return {"id": store.upsert(record)}

    return app
