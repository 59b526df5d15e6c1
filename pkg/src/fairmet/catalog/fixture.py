"""Demo catalog: 23 networks from 16 countries with the reference facet
distribution (country: Serbia 5, Estonia 3, Portugal 2, thirteen singletons;
environment: 12 urban, 7 rural, 4 mixed; seasonality: 17 year-round, 6
summer).  NSUNET carries 12 sites, PIS and WEGENER-NET 4 each, everything
else a single site.  Names and coordinates are plausible inventions.
"""

from __future__ import annotations

import csv
import io

from .records import NetworkRecord, SensorRecord, SiteRecord, slugify
from .store import INVENTORY_HEADER, CatalogStore

_ZEN = "https://zenodo.org/records"

# name, country, city/region, stations, environment, seasonality,
# variables, freq_s, from, to, contact, license, link
_NETWORKS = [
    ("NSUNET", "Serbia", "Novi Sad", 16, "URBAN", "YEAR_ROUND",
     "TA;RH", 600, "2019-03-01", "", "nsulab@example.org", "CC-BY-4.0",
     f"{_ZEN}/7412001"),
    ("PIS", "Serbia", "Vojvodina", 220, "RURAL", "YEAR_ROUND",
     "TA;RH;LW;PRECIP", 3600, "2008-01-01", "", "pis@example.org", "CC-BY-4.0",
     f"{_ZEN}/7412002"),
    ("Belgrade UHI", "Serbia", "Belgrade", 9, "URBAN", "SUMMER",
     "TA;RH", 600, "2021-06-01", "2023-09-30", "uhi-bg@example.org",
     "CC-BY-4.0", f"{_ZEN}/7412003"),
    ("Fruska Gora Agro", "Serbia", "Fruska Gora", 14, "RURAL", "SUMMER",
     "TA;RH;LW;SOIL_T", 1800, "2017-04-01", "", "fg-agro@example.org",
     "CC-BY-4.0", f"{_ZEN}/7412004"),
    ("Vojvodina Mixed Net", "Serbia", "Vojvodina", 31, "URBAN_AND_RURAL",
     "YEAR_ROUND", "TA;RH;WIND_SPEED", 3600, "2015-01-01", "",
     "vmn@example.org", "CC-BY-4.0", f"{_ZEN}/7412005"),
    ("Parnu Sensor Net", "Estonia", "Parnu", 22, "URBAN", "YEAR_ROUND",
     "TA;RH", 600, "2018-05-01", "", "parnu@example.org", "CC-BY-4.0",
     f"{_ZEN}/7412006"),
    ("Tartu Campus AWS", "Estonia", "Tartu", 3, "URBAN", "SUMMER",
     "TA;RH;GLOBAL_RAD", 600, "2020-06-01", "", "tartu@example.org",
     "CC-BY-4.0", f"{_ZEN}/7412007"),
    ("Saaremaa Farm Net", "Estonia", "Saaremaa", 7, "RURAL", "YEAR_ROUND",
     "TA;RH;PRECIP;SOIL_WC", 3600, "2016-10-01", "", "saaremaa@example.org",
     "CC-BY-4.0", f"{_ZEN}/7412008"),
    ("Lisbon Rooftop AWS", "Portugal", "Lisbon", 1, "URBAN", "YEAR_ROUND",
     "TA;RH;WIND_SPEED", 600, "2019-01-01", "", "lisboa@example.org",
     "CC-BY-4.0", f"{_ZEN}/7412009"),
    ("Alentejo Vineyard Net", "Portugal", "Alentejo", 18, "RURAL", "SUMMER",
     "TA;RH;LW", 1800, "2018-03-01", "2024-11-30", "alentejo@example.org",
     "CC-BY-4.0", f"{_ZEN}/7412010"),
    ("WEGENER-NET", "Austria", "Styria", 150, "URBAN_AND_RURAL", "YEAR_ROUND",
     "TA;RH;PRECIP", 300, "2007-01-01", "", "wegener@example.org",
     "CC-BY-4.0", f"{_ZEN}/7412011"),
    ("BeRTISS BG", "Bulgaria", "Plovdiv region", 40, "RURAL", "YEAR_ROUND",
     "TA;RH;PRECIP", 3600, "2012-01-01", "", "bertiss@example.org",
     "CC-BY-4.0", f"{_ZEN}/7412012"),
    ("Brno Climate Net", "Czech Republic", "Brno", 11, "URBAN", "YEAR_ROUND",
     "TA;RH", 600, "2017-07-01", "", "brno@example.org", "CC-BY-4.0",
     f"{_ZEN}/7412013"),
    ("TURKU-NET", "Finland", "Turku", 36, "URBAN", "YEAR_ROUND",
     "TA", 3600, "2014-01-01", "", "turku@example.org", "CC-BY-4.0",
     f"{_ZEN}/7412014"),
    ("Rennes Urban Net", "France", "Rennes", 93, "URBAN", "YEAR_ROUND",
     "TA;RH", 900, "2020-01-01", "", "rennes@example.org", "CC-BY-4.0",
     f"{_ZEN}/7412015"),
    ("Augsburg City-Land Net", "Germany", "Augsburg", 48, "URBAN_AND_RURAL",
     "YEAR_ROUND", "TA;RH", 600, "2013-01-01", "", "augsburg@example.org",
     "CC-BY-4.0", f"{_ZEN}/7412016"),
    ("Thessaly Agro Stations", "Greece", "Thessaly", 25, "RURAL", "SUMMER",
     "TA;RH;LW;PRECIP", 1800, "2019-05-01", "", "thessaly@example.org",
     "CC-BY-4.0", f"{_ZEN}/7412017"),
    ("Dublin Bay Network", "Ireland", "Dublin", 8, "URBAN", "YEAR_ROUND",
     "TA;RH;WIND_SPEED", 600, "2021-02-01", "", "dublin@example.org", "",
     f"{_ZEN}/7412018"),
    ("Negev Agri Net", "Israel", "Negev", 12, "RURAL", "YEAR_ROUND",
     "TA;RH;SOIL_WC", 3600, "2015-09-01", "", "negev@example.org",
     "CC-BY-4.0", f"{_ZEN}/7412019"),
    ("Bratislava UHI Net", "Slovakia", "Bratislava", 15, "URBAN",
     "YEAR_ROUND", "TA;RH", 600, "2018-06-01", "", "bratislava@example.org",
     "CC-BY-4.0", f"{_ZEN}/7412020"),
    ("Zurich UHI Net", "Switzerland", "Zurich", 120, "URBAN", "YEAR_ROUND",
     "TA", 600, "2019-04-01", "", "zurich@example.org", "CC-BY-4.0",
     f"{_ZEN}/7412021"),
    ("Izmir Coast Net", "Turkey", "Izmir", 19, "URBAN_AND_RURAL", "SUMMER",
     "TA;RH;WIND_SPEED", 1800, "2022-05-01", "2024-09-30",
     "izmir@example.org", "CC-BY-4.0", ""),
    ("Birmingham Urban Observatory", "United Kingdom", "Birmingham", 110,
     "URBAN", "YEAR_ROUND", "TA;RH;PRECIP;GLOBAL_RAD", 300, "2012-06-01", "",
     "bham@example.org", "CC-BY-4.0", f"{_ZEN}/7412022"),
]

# NSUNET: 12 urban sites around Novi Sad
_NSUNET_SITES = [
    ("Liman Park", 45.2428, 19.8391, 78.0, "Urban park"),
    ("City Centre", 45.2551, 19.8452, 82.0, "Dense built-up"),
    ("Detelinara", 45.2672, 19.8211, 84.0, "Residential blocks"),
    ("Klisa", 45.2930, 19.8415, 80.0, "Industrial fringe"),
    ("Petrovaradin", 45.2465, 19.8733, 125.0, "Historic town"),
    ("Telep", 45.2333, 19.8164, 77.0, "Low-rise residential"),
    ("Podbara", 45.2629, 19.8566, 79.0, "Mixed commercial"),
    ("Novo Naselje", 45.2534, 19.8015, 83.0, "High-rise residential"),
    ("Salajka", 45.2690, 19.8509, 81.0, "Low-rise residential"),
    ("Adice", 45.2394, 19.7859, 76.0, "Suburban"),
    ("Sajmiste", 45.2502, 19.8280, 80.0, "Fairground"),
    ("Kamenica Park", 45.2230, 19.8543, 98.0, "Peri-urban park"),
]

# PIS and WEGENER-NET: 4 sites each
_PIS_SITES = [
    ("Rivica", 45.2142, 19.8556, 151.0, "Orchard"),
    ("Sremski Karlovci", 45.1909, 19.9337, 125.0, "Vinyard"),
    ("Irig", 45.0989, 19.8586, 185.0, "Orchard"),
    ("Banstol", 45.1703, 19.9455, 240.0, "Vinyard"),
]
_WEGENER_SITES = [
    ("Feldbach Centre", 46.9530, 15.8882, 282.0, "Small town"),
    ("Raabau Fields", 46.9644, 15.9241, 300.0, "Cropland"),
    ("Gniebing Meadow", 46.9450, 15.8610, 290.0, "Grassland"),
    ("Paldau Hill", 46.9200, 15.8020, 340.0, "Orchard"),
]

_SITE_TZ = {"NSUNET": "Europe/Belgrade", "PIS": "Europe/Belgrade",
            "WEGENER-NET": "Europe/Vienna"}

# single-site fallback coordinates per network id
_SINGLE_SITE = {
    "belgrade-uhi": (44.8176, 20.4569, 117.0, "Europe/Belgrade", "Dense built-up"),
    "fruska-gora-agro": (45.1531, 19.7103, 310.0, "Europe/Belgrade", "Orchard"),
    "vojvodina-mixed-net": (45.3820, 19.9970, 84.0, "Europe/Belgrade", "Cropland"),
    "parnu-sensor-net": (58.3859, 24.4971, 12.0, "Europe/Tallinn", "Coastal town"),
    "tartu-campus-aws": (58.3780, 26.7290, 57.0, "Europe/Tallinn", "Campus"),
    "saaremaa-farm-net": (58.2528, 22.4869, 15.0, "Europe/Tallinn", "Pasture"),
    "lisbon-rooftop-aws": (38.7223, -9.1393, 95.0, "Europe/Lisbon", "Rooftop"),
    "alentejo-vineyard-net": (38.5667, -7.9000, 240.0, "Europe/Lisbon", "Vinyard"),
    "bertiss-bg": (42.1354, 24.7453, 164.0, "Europe/Sofia", "Cropland"),
    "brno-climate-net": (49.1951, 16.6068, 237.0, "Europe/Prague", "Dense built-up"),
    "turku-net": (60.4518, 22.2666, 20.0, "Europe/Helsinki", "Coastal town"),
    "rennes-urban-net": (48.1173, -1.6778, 45.0, "Europe/Paris", "Dense built-up"),
    "augsburg-city-land-net": (48.3705, 10.8978, 494.0, "Europe/Berlin", "Mixed"),
    "thessaly-agro-stations": (39.3620, 22.9420, 73.0, "Europe/Athens", "Cropland"),
    "dublin-bay-network": (53.3498, -6.2603, 20.0, "Europe/Dublin", "Harbour"),
    "negev-agri-net": (31.2518, 34.7913, 280.0, "Asia/Jerusalem", "Irrigated field"),
    "bratislava-uhi-net": (48.1486, 17.1077, 152.0, "Europe/Bratislava", "Dense built-up"),
    "zurich-uhi-net": (47.3769, 8.5417, 408.0, "Europe/Zurich", "Dense built-up"),
    "izmir-coast-net": (38.4237, 27.1428, 25.0, "Europe/Istanbul", "Coastal town"),
    "birmingham-urban-observatory": (52.4862, -1.8904, 140.0, "Europe/London",
                                     "Dense built-up"),
}

_WMO_TA = {"wmo:observed_variable": "air_temperature",
           "wmo:measurement_unit": "degC",
           "wmo:siting_classification": "class_2",
           "wmo:measurement_quality_classification": "class_B"}
_WMO_RH = {"wmo:observed_variable": "relative_humidity",
           "wmo:measurement_unit": "percent",
           "wmo:siting_classification": "class_2",
           "wmo:measurement_quality_classification": "class_B"}
_WMO_LW = {"wmo:observed_variable": "leaf_wetness",
           "wmo:measurement_unit": "dimensionless",
           "wmo:siting_classification": "class_3",
           "wmo:measurement_quality_classification": "class_C"}


def networks() -> list[NetworkRecord]:
    out = []
    for (name, country, city, stations, env, season, variables, freq,
         a_from, a_to, contact, license_, link) in _NETWORKS:
        from datetime import date
        out.append(NetworkRecord(
            id=slugify(name), name=name, country=country,
            city_or_region=city, local_environment=env, seasonality=season,
            dataset_link=link, station_count=stations,
            measured_variables=tuple(variables.split(";")),
            measurement_frequency_seconds=freq,
            active_from=date.fromisoformat(a_from) if a_from else None,
            active_to=date.fromisoformat(a_to) if a_to else None,
            contact=contact, license=license_))
    return out


def sites() -> list[SiteRecord]:
    out = []
    for net_name, rows in (("NSUNET", _NSUNET_SITES), ("PIS", _PIS_SITES),
                           ("WEGENER-NET", _WEGENER_SITES)):
        net_id = slugify(net_name)
        tz = _SITE_TZ[net_name]
        for name, lat, lon, alt, macro in rows:
            out.append(SiteRecord(
                id=f"{net_id}-{slugify(name)}", network_id=net_id, name=name,
                latitude=lat, longitude=lon, altitude_m=alt, timezone=tz,
                macroscale_environment=macro))
    for net_id, (lat, lon, alt, tz, macro) in _SINGLE_SITE.items():
        out.append(SiteRecord(
            id=f"{net_id}-main", network_id=net_id, name="Main site",
            latitude=lat, longitude=lon, altitude_m=alt, timezone=tz,
            macroscale_environment=macro))
    return out


def sensors() -> list[SensorRecord]:
    out = []
    for site in sites():
        out.append(SensorRecord(
            id=f"{site.id}-ta", site_id=site.id, variable="TA", units="degC",
            mounting_height_or_depth_m=2.0,
            instrument_model="Vaisala HMP155", stated_accuracy="+/-0.2 degC",
            sampling_interval_seconds=600, wmo_attribute_map=dict(_WMO_TA)))
        out.append(SensorRecord(
            id=f"{site.id}-rh", site_id=site.id, variable="RH", units="%",
            mounting_height_or_depth_m=2.0,
            instrument_model="Vaisala HMP155", stated_accuracy="+/-1.5 %",
            sampling_interval_seconds=600, wmo_attribute_map=dict(_WMO_RH)))
        if site.network_id == "pis":
            out.append(SensorRecord(
                id=f"{site.id}-lw", site_id=site.id, variable="LW", units="1",
                mounting_height_or_depth_m=1.5,
                instrument_model="Decagon LWS",
                stated_accuracy="wet/dry threshold",
                sampling_interval_seconds=600,
                wmo_attribute_map=dict(_WMO_LW)))
    return out


def inventory_csv() -> str:
    """The 23 networks in the inventory import format."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(INVENTORY_HEADER)
    for (name, country, city, stations, env, season, variables, freq,
         a_from, a_to, contact, license_, link) in _NETWORKS:
        writer.writerow([name, country, city, stations, env, season,
                         variables, freq, a_from, a_to, "csv", contact,
                         license_, link])
    return out.getvalue()


def load_fixture(store: CatalogStore) -> None:
    """Import the networks through the inventory path, then add sites and
    sensors."""
    imported, errors = store.import_inventory(inventory_csv())
    if errors:
        raise RuntimeError(f"fixture import produced errors: {errors}")
    assert imported == len(_NETWORKS)
    for site in sites():
        store.upsert(site)
    for sensor in sensors():
        store.upsert(sensor)
