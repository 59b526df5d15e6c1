"""The metadata catalog: import the demo inventory, search it, and read the
distribution statistics and FAIR checklists.

To browse the same store over HTTP (and from the web portal under
frontend/), run:

    fairmet serve --data-dir /tmp/fairmet-demo --fixture --port 8080
"""

import tempfile

from fairmet.catalog import fixture
from fairmet.catalog.records import SearchQuery
from fairmet.catalog.store import CatalogStore

store = CatalogStore(tempfile.mkdtemp(prefix="fairmet-demo-"))
fixture.load_fixture(store)

print(f"networks: {len(store.networks)}, sites: {len(store.sites)}, "
      f"sensors: {len(store.sensors)}\n")

print("distribution by local environment:")
for key, count in store.stats("LOCAL_ENVIRONMENT").items():
    print(f"  {key:<16} {count}")

print("\nurban, year-round networks:")
hits = store.search_networks(SearchQuery(local_environment="URBAN",
                                         seasonality="YEAR_ROUND"))
for net in hits:
    print(f"  {net.country:<15} {net.name}")

print("\nNSUNET drill-down:")
net, detail = store.get_network_detail("nsunet")
checklist = store.fair_checklist("nsunet")
print(f"  {net.name}: {net.station_count} stations, {len(detail)} sites, "
      f"FAIR score {checklist.score}/4")
for site, sensors in detail[:3]:
    print(f"    {site.name:<14} ({site.latitude:.4f}, {site.longitude:.4f}) "
          f"{len(sensors)} sensors")
print("    ...")
print(f"\nstore log: {store.log_path}")
