import { describe, expect, it } from "vitest";

import { LatestGate } from "../src/gate.js";

describe("last-write-wins gate", () => {
  it("accepts responses in order", () => {
    const gate = new LatestGate();
    const a = gate.issue();
    const b = gate.issue();
    expect(gate.accept(a)).toBe(true);
    expect(gate.accept(b)).toBe(true);
  });

  it("discards a stale response arriving after a newer one rendered", () => {
    const gate = new LatestGate();
    const first = gate.issue();
    const second = gate.issue();
    expect(gate.accept(second)).toBe(true);   // newer response lands first
    expect(gate.accept(first)).toBe(false);   // stale response is dropped
  });

  it("never re-renders the same ticket twice", () => {
    const gate = new LatestGate();
    const ticket = gate.issue();
    expect(gate.accept(ticket)).toBe(true);
    expect(gate.accept(ticket)).toBe(false);
  });
});
