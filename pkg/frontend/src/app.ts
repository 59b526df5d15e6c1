// DOM glue: routes the hash to a view, queries the API, injects the
// rendered HTML and wires events.  Read-only: the portal issues GETs only.

import { ApiError, CatalogApi } from "./api.js";
import { LatestGate } from "./gate.js";
import { formatRoute, parseRoute, type Route } from "./routes.js";
import {
  renderErrorBanner,
  renderNetworkDetail,
  renderSearchForm,
  renderSearchResults,
  renderSiteDetail,
  renderSitesTable,
  renderStatsPanel,
  type SiteSortKey,
} from "./render.js";
import type { NetworkDetailResponse, SearchFormState } from "./types.js";
import { EMPTY_FORM } from "./types.js";

const apiBase = document
  .querySelector('meta[name="fairmet-api-base"]')
  ?.getAttribute("content") ?? "";
const api = new CatalogApi(apiBase);
const gate = new LatestGate();

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function showError(err: unknown, retry: () => void): void {
  const code = err instanceof ApiError ? err.status || err.code : "client";
  const message = err instanceof Error ? err.message : String(err);
  el("banner").innerHTML = renderErrorBanner(code, message);
  document.getElementById("retry-button")
    ?.addEventListener("click", retry, { once: true });
}

function clearError(): void {
  el("banner").innerHTML = "";
}

function readForm(): SearchFormState {
  const form = document.getElementById("search-form") as HTMLFormElement | null;
  if (!form) return { ...EMPTY_FORM };
  const data = new FormData(form);
  const get = (name: string) => (data.get(name) as string | null) ?? "";
  return {
    country: get("country"), city: get("city"),
    environment: get("environment"), seasonality: get("seasonality"),
    from: get("from"), to: get("to"),
  };
}

async function showSearch(form: SearchFormState): Promise<void> {
  const main = el("main");
  if (!document.getElementById("search-form")) {
    main.innerHTML = `${renderSearchForm(form)}
      <p id="result-count"></p><div id="results"></div>`;
  } else {
    main.querySelector(".search-form")!.outerHTML = renderSearchForm(form);
  }
  wireSearchForm();

  const ticket = gate.issue();
  try {
    const body = await api.searchNetworks(form);
    if (!gate.accept(ticket)) return;   // a newer query already rendered
    clearError();
    el("result-count").textContent =
      `${body.count} network${body.count === 1 ? "" : "s"}`;
    el("results").innerHTML = renderSearchResults(body.networks);
  } catch (err) {
    if (!gate.accept(ticket)) return;
    showError(err, () => void showSearch(readForm()));
  }
}

function wireSearchForm(): void {
  const form = document.getElementById("search-form") as HTMLFormElement;
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    // re-query without a page reload; the hash keeps the state deep-linkable
    const state = readForm();
    const target = formatRoute({ kind: "SEARCH", form: state });
    if (location.hash === target) {
      void showSearch(state);
    } else {
      location.hash = target;
    }
  });
}

function wireSiteSorting(detail: NetworkDetailResponse): void {
  document.querySelectorAll<HTMLButtonElement>("#sites-table .sort-header")
    .forEach((button) => {
      button.addEventListener("click", () => {
        const table = el("sites-table");
        const key = button.dataset.sort as SiteSortKey;
        const ascending = table.dataset.sortKey === key
          ? table.dataset.sortAsc !== "true"
          : true;
        el("site-list").innerHTML =
          renderSitesTable(detail.sites, detail.network.id, key, ascending);
        wireSiteSorting(detail);
      });
    });
}

async function showNetwork(id: string): Promise<void> {
  const ticket = gate.issue();
  try {
    const detail = await api.networkDetail(id);
    if (!gate.accept(ticket)) return;
    clearError();
    el("main").innerHTML = renderNetworkDetail(detail);
    wireSiteSorting(detail);
  } catch (err) {
    if (!gate.accept(ticket)) return;
    if (err instanceof ApiError && err.status === 404) {
      el("main").innerHTML =
        `<p class="empty-state">Network "${id}" not found.</p>`;
      clearError();
      return;
    }
    showError(err, () => void showNetwork(id));
  }
}

async function showSite(networkId: string, siteId: string): Promise<void> {
  const ticket = gate.issue();
  try {
    const detail = await api.networkDetail(networkId);
    if (!gate.accept(ticket)) return;
    clearError();
    el("main").innerHTML = renderSiteDetail(detail, siteId);
  } catch (err) {
    if (!gate.accept(ticket)) return;
    showError(err, () => void showSite(networkId, siteId));
  }
}

async function showStats(): Promise<void> {
  const ticket = gate.issue();
  el("main").innerHTML = `
    <h2>Network distributions</h2>
    <section><h3>By country</h3><div id="stats-country"></div></section>
    <section><h3>By local environment</h3><div id="stats-environment"></div></section>
    <section><h3>By seasonality</h3><div id="stats-seasonality"></div></section>`;
  try {
    const [country, environment, seasonality] = await Promise.all([
      api.stats("country"), api.stats("environment"), api.stats("seasonality"),
    ]);
    if (!gate.accept(ticket)) return;
    clearError();
    el("stats-country").innerHTML = renderStatsPanel(country, "country");
    el("stats-environment").innerHTML =
      renderStatsPanel(environment, "environment");
    el("stats-seasonality").innerHTML =
      renderStatsPanel(seasonality, "seasonality");
  } catch (err) {
    if (!gate.accept(ticket)) return;
    showError(err, () => void showStats());
  }
}

function dispatch(route: Route): void {
  for (const link of document.querySelectorAll("nav a")) {
    link.classList.toggle("active",
      link.getAttribute("href") === formatRoute(route).split("?")[0]);
  }
  switch (route.kind) {
    case "SEARCH":
      void showSearch(route.form);
      break;
    case "NETWORK_DETAIL":
      void showNetwork(route.id);
      break;
    case "SITE_DETAIL":
      void showSite(route.networkId, route.siteId);
      break;
    case "STATS":
      void showStats();
      break;
  }
}

export function start(): void {
  const onHashChange = () => dispatch(parseRoute(location.hash));
  window.addEventListener("hashchange", onHashChange);
  onHashChange();
}

start();
