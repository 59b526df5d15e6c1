import { readFileSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import {
  escapeHtml,
  renderErrorBanner,
  renderNetworkDetail,
  renderSearchResults,
  renderSiteDetail,
  renderSitesTable,
  renderStatsPanel,
  sortSites,
} from "../src/render.js";
import type {
  NetworkDetailResponse,
  NetworkListResponse,
  StatsResponse,
} from "../src/types.js";

function fixture<T>(name: string): T {
  const path = join(__dirname, "fixtures", name);
  return JSON.parse(readFileSync(path, "utf-8")) as T;
}

const countRows = (html: string) => (html.match(/<tr data-network=/g) ?? []).length;

describe("search results table", () => {
  it("renders 23 rows for the unfiltered fixture", () => {
    const body = fixture<NetworkListResponse>("networks_all.json");
    expect(body.count).toBe(23);
    const html = renderSearchResults(body.networks);
    expect(countRows(html)).toBe(23);
  });

  it("renders 12 rows for URBAN", () => {
    const body = fixture<NetworkListResponse>("networks_urban.json");
    const html = renderSearchResults(body.networks);
    expect(countRows(html)).toBe(12);
    expect(html).not.toContain("RURAL</td>");
  });

  it("renders 17 rows for YEAR_ROUND", () => {
    const body = fixture<NetworkListResponse>("networks_year_round.json");
    expect(countRows(renderSearchResults(body.networks))).toBe(17);
  });

  it("carries name, country, badge and a View link per row", () => {
    const body = fixture<NetworkListResponse>("networks_all.json");
    const html = renderSearchResults(body.networks);
    expect(html).toContain("NSUNET");
    expect(html).toContain("Serbia");
    expect(html).toContain('class="fair-badge');
    expect(html).toContain('href="#/networks/nsunet"');
    expect(html).toContain("URBAN &amp; RURAL");   // display vocabulary
  });

  it("shows an explicit empty state", () => {
    expect(renderSearchResults([])).toContain("No networks match");
  });
});

describe("network detail", () => {
  const detail = fixture<NetworkDetailResponse>("network_nsunet.json");

  it("lists the 12 NSUNET sites", () => {
    const html = renderNetworkDetail(detail);
    expect((html.match(/<details class="site"/g) ?? []).length).toBe(12);
    expect(html).toContain("Sites (12)");
  });

  it("renders the dataset link as an outbound anchor", () => {
    const html = renderNetworkDetail(detail);
    expect(html).toContain(`href="${detail.network.dataset_link}"`);
    expect(html).toContain('target="_blank"');
  });

  it("renders per-letter FAIR pass/fail", () => {
    const html = renderNetworkDetail(detail);
    expect(html).toContain("Findable");
    expect(html).toContain("Reusable");
    expect((html.match(/class="pass"/g) ?? []).length).toBe(4);
  });

  it("shows WMO attribute keys verbatim", () => {
    const html = renderNetworkDetail(detail);
    expect(html).toContain("wmo:observed_variable");
    expect(html).toContain("wmo:siting_classification");
  });

  it("flags a missing persistent identifier", () => {
    const stripped = {
      ...detail,
      network: { ...detail.network, dataset_link: "" },
      fair: { ...detail.fair, findable: false, score: 3 },
    };
    const html = renderNetworkDetail(stripped);
    expect(html).toContain("no persistent identifier");
    expect(html).toContain('class="fail"');
  });

  it("site detail shows every site field", () => {
    const site = detail.sites[0];
    const html = renderSiteDetail(detail, site.id);
    for (const text of [site.name, site.timezone,
                        site.macroscale_environment]) {
      expect(html).toContain(escapeHtml(text));
    }
    expect(html).toContain(String(site.latitude));
    expect(html).toContain(`Sensors (${site.sensors.length})`);
  });
});

describe("stats panels", () => {
  it("country panel matches the reference distribution", () => {
    const stats = fixture<StatsResponse>("stats_country.json");
    const html = renderStatsPanel(stats, "country");
    expect(html).toContain("Serbia");
    const serbia = html.match(
      /data-facet="Serbia"[\s\S]*?bar-count">(\d+)</);
    expect(serbia?.[1]).toBe("5");
    expect((html.match(/<li>/g) ?? []).length).toBe(16);  // 16 countries
  });

  it("environment bars carry the table counts and link to search", () => {
    const stats = fixture<StatsResponse>("stats_environment.json");
    expect(stats.counts).toEqual({ URBAN: 12, RURAL: 7, URBAN_AND_RURAL: 4 });
    const html = renderStatsPanel(stats, "environment");
    expect(html).toContain('href="#/search?environment=URBAN"');
    expect(html).toContain("URBAN &amp; RURAL");
  });

  it("seasonality bars sort by count", () => {
    const stats = fixture<StatsResponse>("stats_seasonality.json");
    const html = renderStatsPanel(stats, "seasonality");
    expect(html.indexOf("YEAR ROUND")).toBeLessThan(html.indexOf("SUMMER"));
  });

  it("renders an empty state without networks", () => {
    const html = renderStatsPanel({ group_by: "country", counts: {} }, "country");
    expect(html).toContain("No networks");
  });
});

describe("error banner", () => {
  it("shows the code, the message and a retry control", () => {
    const html = renderErrorBanner(503, "service unavailable");
    expect(html).toContain("503");
    expect(html).toContain("service unavailable");
    expect(html).toContain('id="retry-button"');
  });

  it("escapes hostile content", () => {
    const html = renderErrorBanner("x", "<script>alert(1)</script>");
    expect(html).not.toContain("<script>");
  });
});

describe("sortable sites table", () => {
  const detail = fixture<NetworkDetailResponse>("network_nsunet.json");

  it("sorts by name ascending by default", () => {
    const names = sortSites(detail.sites, "name", true).map((s) => s.name);
    expect(names).toEqual([...names].sort((a, b) => a.localeCompare(b)));
  });

  it("sorts numerically by latitude in both directions", () => {
    const asc = sortSites(detail.sites, "latitude", true)
      .map((s) => s.latitude);
    for (let i = 1; i < asc.length; i++) expect(asc[i]).toBeGreaterThanOrEqual(asc[i - 1]);
    const desc = sortSites(detail.sites, "latitude", false)
      .map((s) => s.latitude);
    expect(desc).toEqual([...asc].reverse());
  });

  it("renders sortable headers and keeps one row per site", () => {
    const html = renderSitesTable(detail.sites, "nsunet", "altitude_m", false);
    expect((html.match(/<tr data-site=/g) ?? []).length).toBe(12);
    expect(html).toContain('data-sort="latitude"');
    expect(html).toContain('data-sort-key="altitude_m"');
  });
});
