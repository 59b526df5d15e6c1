import { describe, expect, it } from "vitest";

import { formatRoute, parseRoute } from "../src/routes.js";
import { EMPTY_FORM } from "../src/types.js";

describe("route parsing", () => {
  it("defaults to an empty search", () => {
    expect(parseRoute("")).toEqual({ kind: "SEARCH", form: EMPTY_FORM });
    expect(parseRoute("#/search")).toEqual({ kind: "SEARCH", form: EMPTY_FORM });
  });

  it("round-trips a filtered search", () => {
    const route = {
      kind: "SEARCH" as const,
      form: { ...EMPTY_FORM, country: "Serbia", environment: "URBAN",
              from: "2022-01-01" },
    };
    const hash = formatRoute(route);
    expect(hash).toContain("country=Serbia");
    expect(parseRoute(hash)).toEqual(route);
  });

  it("deep-links network and site detail", () => {
    expect(parseRoute("#/networks/nsunet"))
      .toEqual({ kind: "NETWORK_DETAIL", id: "nsunet" });
    const site = { kind: "SITE_DETAIL" as const, networkId: "nsunet",
                   siteId: "nsunet-liman-park" };
    expect(parseRoute(formatRoute(site))).toEqual(site);
  });

  it("parses the stats route", () => {
    expect(parseRoute("#/stats")).toEqual({ kind: "STATS" });
    expect(formatRoute({ kind: "STATS" })).toBe("#/stats");
  });

  it("reload reproduces the view: format(parse(h)) is stable", () => {
    for (const hash of ["#/search?seasonality=SUMMER", "#/networks/pis",
                        "#/networks/pis/sites/pis-rivica", "#/stats"]) {
      expect(formatRoute(parseRoute(hash))).toBe(hash);
    }
  });
});
