// Hash-based routes so every view is deep-linkable and a reload reproduces
// it:  #/search?country=...  #/networks/<id>  #/networks/<id>/sites/<id>
// #/stats

import type { SearchFormState } from "./types.js";
import { EMPTY_FORM } from "./types.js";

export type Route =
  | { kind: "SEARCH"; form: SearchFormState }
  | { kind: "NETWORK_DETAIL"; id: string }
  | { kind: "SITE_DETAIL"; networkId: string; siteId: string }
  | { kind: "STATS" };

export function parseRoute(hash: string): Route {
  const trimmed = hash.replace(/^#\/?/, "");
  const [path, query = ""] = trimmed.split("?", 2);
  const parts = path.split("/").filter((p) => p.length > 0);

  if (parts[0] === "networks" && parts.length === 2) {
    return { kind: "NETWORK_DETAIL", id: decodeURIComponent(parts[1]) };
  }
  if (parts[0] === "networks" && parts[2] === "sites" && parts.length === 4) {
    return {
      kind: "SITE_DETAIL",
      networkId: decodeURIComponent(parts[1]),
      siteId: decodeURIComponent(parts[3]),
    };
  }
  if (parts[0] === "stats") {
    return { kind: "STATS" };
  }
  const params = new URLSearchParams(query);
  const form: SearchFormState = {
    ...EMPTY_FORM,
    country: params.get("country") ?? "",
    city: params.get("city") ?? "",
    environment: params.get("environment") ?? "",
    seasonality: params.get("seasonality") ?? "",
    from: params.get("from") ?? "",
    to: params.get("to") ?? "",
  };
  return { kind: "SEARCH", form };
}

export function formatRoute(route: Route): string {
  switch (route.kind) {
    case "SEARCH": {
      const params = new URLSearchParams();
      for (const [key, value] of Object.entries(route.form)) {
        if (value) params.set(key, value);
      }
      const text = params.toString();
      return text ? `#/search?${text}` : "#/search";
    }
    case "NETWORK_DETAIL":
      return `#/networks/${encodeURIComponent(route.id)}`;
    case "SITE_DETAIL":
      return `#/networks/${encodeURIComponent(route.networkId)}` +
        `/sites/${encodeURIComponent(route.siteId)}`;
    case "STATS":
      return "#/stats";
  }
}
