// Thin client for the documented GET endpoints.  URL building is separate
// from fetching so the query-parameter mapping is testable on its own.

import type {
  NetworkDetailResponse,
  NetworkListResponse,
  SearchFormState,
  StatsResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, readonly code: string, message: string) {
    super(message);
  }
}

export function networksQuery(form: SearchFormState): string {
  const params = new URLSearchParams();
  if (form.country) params.set("country", form.country);
  if (form.city) params.set("city", form.city);
  if (form.environment) params.set("environment", form.environment);
  if (form.seasonality) params.set("seasonality", form.seasonality);
  if (form.from) params.set("from", form.from);
  if (form.to) params.set("to", form.to);
  const text = params.toString();
  return text ? `?${text}` : "";
}

async function getJson<T>(url: string): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url);
  } catch (err) {
    throw new ApiError(0, "network", `cannot reach the catalog API (${err})`);
  }
  let body: unknown = null;
  try {
    body = await response.json();
  } catch {
    // non-JSON error body; fall through to the status check
  }
  if (!response.ok) {
    const error = (body as { error?: { code?: string; message?: string } })?.error;
    throw new ApiError(response.status, error?.code ?? "http",
      error?.message ?? `HTTP ${response.status}`);
  }
  return body as T;
}

export class CatalogApi {
  constructor(readonly baseUrl: string = "") {}

  searchNetworks(form: SearchFormState): Promise<NetworkListResponse> {
    return getJson(`${this.baseUrl}/api/networks${networksQuery(form)}`);
  }

  networkDetail(id: string): Promise<NetworkDetailResponse> {
    return getJson(`${this.baseUrl}/api/networks/${encodeURIComponent(id)}`);
  }

  stats(groupBy: "country" | "environment" | "seasonality"): Promise<StatsResponse> {
    return getJson(`${this.baseUrl}/api/stats?group_by=${groupBy}`);
  }
}
