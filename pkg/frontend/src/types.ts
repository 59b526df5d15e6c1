// Payload shapes of the catalog REST API (GET endpoints only; the portal
// never writes).

export interface NetworkSummary {
  id: string;
  name: string;
  country: string;
  city_or_region: string;
  local_environment: string;
  seasonality: string;
  dataset_link: string;
  station_count: number;
  measured_variables: string[];
  measurement_frequency_seconds: number;
  active_from: string;
  active_to: string;
  contact: string;
  license: string;
  fair_score: number;
}

export interface NetworkListResponse {
  networks: NetworkSummary[];
  count: number;
}

export interface SensorRecord {
  id: string;
  site_id: string;
  variable: string;
  units: string;
  mounting_height_or_depth_m: number;
  instrument_model: string;
  stated_accuracy: string;
  sampling_interval_seconds: number;
  wmo_attribute_map: Record<string, string>;
}

export interface SiteWithSensors {
  id: string;
  network_id: string;
  name: string;
  latitude: number;
  longitude: number;
  altitude_m: number;
  timezone: string;
  macroscale_environment: string;
  sensors: SensorRecord[];
}

export interface FairChecklist {
  findable: boolean;
  accessible: boolean;
  interoperable: boolean;
  reusable: boolean;
  score: number;
}

export interface NetworkDetailResponse {
  network: NetworkSummary;
  fair: FairChecklist;
  sites: SiteWithSensors[];
}

export interface StatsResponse {
  group_by: string;
  counts: Record<string, number>;
}

// The search form; submitted state maps one-to-one onto the
// GET /api/networks query parameters.
export interface SearchFormState {
  country: string;
  city: string;
  environment: string;   // closed vocabulary value or "" for any
  seasonality: string;   // closed vocabulary value or "" for any
  from: string;          // YYYY-MM-DD or ""
  to: string;
}

export const EMPTY_FORM: SearchFormState = {
  country: "", city: "", environment: "", seasonality: "", from: "", to: "",
};

export const ENVIRONMENTS = ["URBAN", "RURAL", "URBAN_AND_RURAL"] as const;
export const SEASONALITIES = ["YEAR_ROUND", "SUMMER"] as const;

export const DISPLAY_LABELS: Record<string, string> = {
  URBAN: "URBAN",
  RURAL: "RURAL",
  URBAN_AND_RURAL: "URBAN & RURAL",
  YEAR_ROUND: "YEAR ROUND",
  SUMMER: "SUMMER",
};

export function displayLabel(value: string): string {
  return DISPLAY_LABELS[value] ?? value;
}
