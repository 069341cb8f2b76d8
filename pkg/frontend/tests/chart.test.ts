import { describe, expect, it } from "vitest";

import type { ProfileDoc, WhatIfResponse } from "../src/api.js";
import { buildProfileChart } from "../src/chart.js";

const HUMP: ProfileDoc = {
  crossing_id: "XING-HUMP",
  stations_m: [0, 3, 9, 15, 18],
  elevations_m: [0, 0, 0.3, 0, 0],
};

function response(overrides: Partial<WhatIfResponse> = {}): WhatIfResponse {
  return {
    delta_min_m: -0.11725,
    level: 4,
    worst_rear_axle_station_m: 3.06,
    worst_interference_station_m: 9.0,
    clearance_curve: [],
    vehicle: { label: "Low Boy (worst)", wheelbase_m: 11.89, clearance_wheelbase_m: 0.18 },
    ...overrides,
  };
}

describe("profile chart", () => {
  it("traces one point per profile sample", () => {
    const chart = buildProfileChart(HUMP, null);
    expect(chart.tracePoints.split(" ")).toHaveLength(HUMP.stations_m.length);
    expect(chart.chord).toBeNull();
    expect(chart.interference).toBeNull();
  });

  it("lays the chord across the reported worst placement", () => {
    const chart = buildProfileChart(HUMP, response());
    expect(chart.chord).not.toBeNull();
    expect(chart.chord?.rearStation).toBe(3.06);
    expect(chart.chord?.frontStation).toBeCloseTo(3.06 + 11.89, 12);
    // left to right on the canvas
    expect(chart.chord!.x2).toBeGreaterThan(chart.chord!.x1);
  });

  it("marks the interference station only at level 4", () => {
    const hangup = buildProfileChart(HUMP, response());
    expect(hangup.interference).not.toBeNull();
    expect(hangup.interference?.station).toBe(9.0);
    expect(hangup.interference?.color).toBe("#ff4136");

    const marginal = buildProfileChart(HUMP, response({ level: 2, delta_min_m: 0.08 }));
    expect(marginal.interference).toBeNull();
    expect(marginal.chord).not.toBeNull();
  });

  it("keeps the interference mark between the axles on the canvas", () => {
    const chart = buildProfileChart(HUMP, response());
    expect(chart.interference!.x).toBeGreaterThan(chart.chord!.x1);
    expect(chart.interference!.x).toBeLessThan(chart.chord!.x2);
  });

  it("survives a flat two-point profile", () => {
    const flat: ProfileDoc = {
      crossing_id: "XING-FLAT",
      stations_m: [0, 18],
      elevations_m: [0, 0],
    };
    const chart = buildProfileChart(flat, response({
      level: 1, delta_min_m: 0.18, worst_rear_axle_station_m: 0,
      vehicle: { label: "Low Boy (worst)", wheelbase_m: 11.89, clearance_wheelbase_m: 0.18 },
    }));
    expect(chart.tracePoints.split(" ")).toHaveLength(2);
    expect(chart.chord?.y1).toBeCloseTo(chart.chord!.y2, 6);
    expect(chart.interference).toBeNull();
  });
});
