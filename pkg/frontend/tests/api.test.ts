import { describe, expect, it } from "vitest";

import { networksQuery } from "../src/api.js";
import { EMPTY_FORM } from "../src/types.js";

describe("search form to query mapping", () => {
  it("empty form issues no parameters", () => {
    expect(networksQuery(EMPTY_FORM)).toBe("");
  });

  it("maps every field one-to-one onto documented parameters", () => {
    const query = networksQuery({
      country: "Serbia", city: "Novi Sad", environment: "URBAN",
      seasonality: "YEAR_ROUND", from: "2020-01-01", to: "2024-12-31",
    });
    const params = new URLSearchParams(query.slice(1));
    expect(Object.fromEntries(params)).toEqual({
      country: "Serbia", city: "Novi Sad", environment: "URBAN",
      seasonality: "YEAR_ROUND", from: "2020-01-01", to: "2024-12-31",
    });
  });

  it("omits blank fields", () => {
    const query = networksQuery({ ...EMPTY_FORM, seasonality: "SUMMER" });
    expect(query).toBe("?seasonality=SUMMER");
  });

  it("escapes user text", () => {
    const query = networksQuery({ ...EMPTY_FORM, city: "Novi Sad" });
    expect(query).toBe("?city=Novi+Sad");
  });
});
