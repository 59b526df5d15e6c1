// Pure view renderers: data in, HTML string out.  Keeping these free of
// DOM access makes the row counts and badges directly testable; app.ts
// only injects the strings and wires events.

import { formatRoute } from "./routes.js";
import type {
  FairChecklist,
  NetworkDetailResponse,
  NetworkSummary,
  SearchFormState,
  SiteWithSensors,
  StatsResponse,
} from "./types.js";
import { ENVIRONMENTS, SEASONALITIES, displayLabel } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fairBadge(score: number): string {
  return `<span class="fair-badge fair-${score}" title="FAIR score">` +
    `${score}/4</span>`;
}

// -- search ----------------------------------------------------------------

export function renderSearchForm(form: SearchFormState): string {
  const option = (value: string, selected: string) =>
    `<option value="${value}"${value === selected ? " selected" : ""}>` +
    `${value ? escapeHtml(displayLabel(value)) : "any"}</option>`;
  return `
<form id="search-form" class="search-form">
  <label>Country <input name="country" value="${escapeHtml(form.country)}"></label>
  <label>City <input name="city" value="${escapeHtml(form.city)}"></label>
  <label>Local environment <select name="environment">
    ${["", ...ENVIRONMENTS].map((v) => option(v, form.environment)).join("")}
  </select></label>
  <label>Seasonality <select name="seasonality">
    ${["", ...SEASONALITIES].map((v) => option(v, form.seasonality)).join("")}
  </select></label>
  <label>Active from <input type="date" name="from" value="${escapeHtml(form.from)}"></label>
  <label>Active to <input type="date" name="to" value="${escapeHtml(form.to)}"></label>
  <button type="submit">Search</button>
</form>`;
}

export function renderSearchResults(networks: NetworkSummary[]): string {
  if (networks.length === 0) {
    return `<p class="empty-state">No networks match the current filters.</p>`;
  }
  const rows = networks.map((net) => `
  <tr data-network="${escapeHtml(net.id)}">
    <td>${escapeHtml(net.name)}</td>
    <td>${escapeHtml(net.country)}</td>
    <td>${escapeHtml(displayLabel(net.local_environment))}</td>
    <td>${escapeHtml(displayLabel(net.seasonality))}</td>
    <td class="num">${net.station_count}</td>
    <td>${fairBadge(net.fair_score)}</td>
    <td><a class="view-link" href="${formatRoute({ kind: "NETWORK_DETAIL", id: net.id })}">View</a></td>
  </tr>`).join("");
  return `
<table class="results" id="search-results">
  <thead><tr>
    <th>Name</th><th>Country</th><th>Environment</th><th>Seasonality</th>
    <th>Stations</th><th>FAIR</th><th></th>
  </tr></thead>
  <tbody>${rows}</tbody>
</table>`;
}

// -- network detail ----------------------------------------------------------

function renderChecklist(fair: FairChecklist): string {
  const letter = (name: string, label: string, ok: boolean) => `
    <li class="${ok ? "pass" : "fail"}">
      <strong>${name}</strong> ${label}: ${ok ? "pass" : "fail"}</li>`;
  return `
<ul class="fair-checklist">
  ${letter("F", "Findable", fair.findable)}
  ${letter("A", "Accessible", fair.accessible)}
  ${letter("I", "Interoperable", fair.interoperable)}
  ${letter("R", "Reusable", fair.reusable)}
</ul>
<p>FAIR score: ${fairBadge(fair.score)}</p>`;
}

function renderSensorTable(site: SiteWithSensors): string {
  if (site.sensors.length === 0) {
    return `<p class="empty-state">No sensors recorded for this site.</p>`;
  }
  const rows = site.sensors.map((sensor) => {
    const wmo = Object.entries(sensor.wmo_attribute_map)
      .map(([k, v]) => `<div class="wmo-attr"><code>${escapeHtml(k)}</code>` +
        ` = ${escapeHtml(v)}</div>`)
      .join("");
    return `
    <tr>
      <td>${escapeHtml(sensor.variable)}</td>
      <td>${escapeHtml(sensor.instrument_model)}</td>
      <td class="num">${sensor.mounting_height_or_depth_m}</td>
      <td>${escapeHtml(sensor.stated_accuracy)}</td>
      <td class="num">${sensor.sampling_interval_seconds}s</td>
      <td>${wmo}</td>
    </tr>`;
  }).join("");
  return `
<table class="sensors">
  <thead><tr><th>Variable</th><th>Instrument</th><th>Height (m)</th>
  <th>Accuracy</th><th>Sampling</th><th>WMO attributes</th></tr></thead>
  <tbody>${rows}</tbody>
</table>`;
}

export type SiteSortKey = "name" | "latitude" | "longitude" | "altitude_m"
  | "timezone" | "macroscale_environment";

export function sortSites(sites: SiteWithSensors[], key: SiteSortKey,
                          ascending: boolean): SiteWithSensors[] {
  const sorted = [...sites].sort((a, b) => {
    const [va, vb] = [a[key], b[key]];
    const cmp = typeof va === "number" && typeof vb === "number"
      ? va - vb
      : String(va).localeCompare(String(vb));
    return ascending ? cmp : -cmp;
  });
  return sorted;
}

export function renderSitesTable(sites: SiteWithSensors[], networkId: string,
                                 sortKey: SiteSortKey = "name",
                                 ascending = true): string {
  if (sites.length === 0) {
    return `<p class="empty-state">No sites recorded.</p>`;
  }
  const header = (key: SiteSortKey, label: string) => {
    const marker = key === sortKey ? (ascending ? " ▴" : " ▾") : "";
    return `<th><button class="sort-header" data-sort="${key}">` +
      `${label}${marker}</button></th>`;
  };
  const rows = sortSites(sites, sortKey, ascending).map((site) => `
  <tr data-site="${escapeHtml(site.id)}">
    <td>${escapeHtml(site.name)}</td>
    <td class="num">${site.latitude.toFixed(4)}</td>
    <td class="num">${site.longitude.toFixed(4)}</td>
    <td class="num">${site.altitude_m}</td>
    <td>${escapeHtml(site.timezone)}</td>
    <td>${escapeHtml(site.macroscale_environment)}</td>
    <td><details class="site">
      <summary>${site.sensors.length} sensor${site.sensors.length === 1 ? "" : "s"}</summary>
      ${renderSensorTable(site)}
    </details></td>
    <td><a class="view-link" href="${formatRoute({
      kind: "SITE_DETAIL", networkId, siteId: site.id })}">View</a></td>
  </tr>`).join("");
  return `
<table class="results sites-table" id="sites-table"
       data-sort-key="${sortKey}" data-sort-asc="${ascending}">
  <thead><tr>
    ${header("name", "Name")}
    ${header("latitude", "Latitude")}
    ${header("longitude", "Longitude")}
    ${header("altitude_m", "Altitude (m)")}
    ${header("timezone", "Time zone")}
    ${header("macroscale_environment", "Macroscale env.")}
    <th>Sensors</th><th></th>
  </tr></thead>
  <tbody>${rows}</tbody>
</table>`;
}

export function renderNetworkDetail(detail: NetworkDetailResponse,
                                    sortKey: SiteSortKey = "name",
                                    ascending = true): string {
  const net = detail.network;
  const link = net.dataset_link
    ? `<a href="${escapeHtml(net.dataset_link)}" target="_blank" rel="noopener">
        ${escapeHtml(net.dataset_link)}</a>`
    : `<em class="no-pid">no persistent identifier</em>`;
  const siteRows = renderSitesTable(detail.sites, net.id, sortKey, ascending);

  return `
<article class="network-detail">
  <h2>${escapeHtml(net.name)}</h2>
  <dl class="metadata">
    <dt>Country</dt><dd>${escapeHtml(net.country)}</dd>
    <dt>City / region</dt><dd>${escapeHtml(net.city_or_region)}</dd>
    <dt>Local environment</dt><dd>${escapeHtml(displayLabel(net.local_environment))}</dd>
    <dt>Seasonality</dt><dd>${escapeHtml(displayLabel(net.seasonality))}</dd>
    <dt>Stations</dt><dd>${net.station_count}</dd>
    <dt>Variables</dt><dd>${net.measured_variables.map(escapeHtml).join(", ")}</dd>
    <dt>Frequency</dt><dd>every ${net.measurement_frequency_seconds}s</dd>
    <dt>Active</dt><dd>${escapeHtml(net.active_from || "?")} to ${escapeHtml(net.active_to || "ongoing")}</dd>
    <dt>Contact</dt><dd>${escapeHtml(net.contact)}</dd>
    <dt>License</dt><dd>${escapeHtml(net.license || "-")}</dd>
    <dt>Dataset</dt><dd>${link}</dd>
  </dl>
  <h3>FAIR checklist</h3>
  ${renderChecklist(detail.fair)}
  <h3>Sites (${detail.sites.length})</h3>
  <div id="site-list">${siteRows}</div>
</article>`;
}

export function renderSiteDetail(detail: NetworkDetailResponse,
                                 siteId: string): string {
  const site = detail.sites.find((s) => s.id === siteId);
  if (!site) {
    return `<p class="error-banner">Site ${escapeHtml(siteId)} not found in ` +
      `network ${escapeHtml(detail.network.id)}.</p>`;
  }
  return `
<article class="site-detail">
  <h2>${escapeHtml(site.name)}</h2>
  <p><a href="${formatRoute({ kind: "NETWORK_DETAIL", id: detail.network.id })}">
    back to ${escapeHtml(detail.network.name)}</a></p>
  <dl class="metadata">
    <dt>Latitude</dt><dd>${site.latitude}</dd>
    <dt>Longitude</dt><dd>${site.longitude}</dd>
    <dt>Altitude</dt><dd>${site.altitude_m} m</dd>
    <dt>Time zone</dt><dd>${escapeHtml(site.timezone)}</dd>
    <dt>Macroscale environment</dt><dd>${escapeHtml(site.macroscale_environment)}</dd>
  </dl>
  <h3>Sensors (${site.sensors.length})</h3>
  ${renderSensorTable(site)}
</article>`;
}

// -- stats -------------------------------------------------------------------

export function renderStatsPanel(stats: StatsResponse,
                                 facetParam: string): string {
  const entries = Object.entries(stats.counts).sort((a, b) =>
    b[1] - a[1] || a[0].localeCompare(b[0]));
  const max = entries.length ? entries[0][1] : 1;
  if (entries.length === 0) {
    return `<p class="empty-state">No networks in the catalog yet.</p>`;
  }
  const bars = entries.map(([key, count]) => {
    const width = Math.max(4, Math.round((count / max) * 100));
    const target = facetParam
      ? `#/search?${facetParam}=${encodeURIComponent(key)}`
      : "#/search";
    return `
  <li>
    <a class="bar-link" data-facet="${escapeHtml(key)}" href="${target}">
      <span class="bar-label">${escapeHtml(displayLabel(key))}</span>
      <span class="bar" style="width:${width}%"></span>
      <span class="bar-count">${count}</span>
    </a>
  </li>`;
  }).join("");
  return `<ul class="stat-bars">${bars}</ul>`;
}

// -- errors ------------------------------------------------------------------

export function renderErrorBanner(code: string | number,
                                  message: string): string {
  return `
<div class="error-banner" role="alert">
  <strong>Catalog API error (${escapeHtml(String(code))})</strong>
  <span>${escapeHtml(message)}</span>
  <button id="retry-button" type="button">Retry</button>
</div>`;
}
