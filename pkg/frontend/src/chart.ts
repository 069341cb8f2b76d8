/** Profile chart view-model: elevation trace, the vehicle underside
 * chord at the reported worst placement, and the interference marker.
 *
 * Everything here is plotting geometry. Clearance numbers are taken
 * from the service response as-is; nothing below recomputes them.
 */

import type { ProfileDoc, WhatIfResponse } from "./api.js";
import { colorForLevel } from "./levels.js";

export interface ChordOverlay {
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  rearStation: number;
  frontStation: number;
}

export interface InterferenceMark {
  x: number;
  station: number;
  color: string;
}

export interface ProfileChart {
  width: number;
  height: number;
  tracePoints: string;
  baselineY: number;
  chord: ChordOverlay | null;
  /** only set when the response says level 4: the hang-up location */
  interference: InterferenceMark | null;
}

const PAD = 24;

function interpolate(stations: number[], elevations: number[], at: number): number {
  if (stations.length === 0) return 0;
  const first = stations[0]!;
  const last = stations[stations.length - 1]!;
  if (at <= first) return elevations[0]!;
  if (at >= last) return elevations[elevations.length - 1]!;
  for (let i = 1; i < stations.length; i++) {
    const s1 = stations[i]!;
    if (at <= s1) {
      const s0 = stations[i - 1]!;
      const t = (at - s0) / (s1 - s0);
      return elevations[i - 1]! + t * (elevations[i]! - elevations[i - 1]!);
    }
  }
  return elevations[elevations.length - 1]!;
}

export function buildProfileChart(
  profile: ProfileDoc,
  response: WhatIfResponse | null,
  width = 640,
  height = 240,
): ProfileChart {
  const stations = profile.stations_m;
  const elevations = profile.elevations_m;
  const s0 = stations[0] ?? 0;
  const span = Math.max((stations[stations.length - 1] ?? 0) - s0, 1e-6);

  // leave headroom above the trace so the chord overlay stays on-canvas
  const zMin = Math.min(...elevations);
  const zMax = Math.max(...elevations) + 0.5;
  const zSpan = Math.max(zMax - zMin, 1e-6);

  const toX = (station: number) => PAD + ((station - s0) / span) * (width - 2 * PAD);
  const toY = (z: number) => height - PAD - ((z - zMin) / zSpan) * (height - 2 * PAD);

  const tracePoints = stations
    .map((s, i) => `${toX(s).toFixed(1)},${toY(elevations[i] ?? 0).toFixed(1)}`)
    .join(" ");

  let chord: ChordOverlay | null = null;
  let interference: InterferenceMark | null = null;
  if (response) {
    const rear = response.worst_rear_axle_station_m;
    const front = rear + response.vehicle.wheelbase_m;
    const clearance = response.vehicle.clearance_wheelbase_m;
    chord = {
      x1: toX(rear),
      y1: toY(interpolate(stations, elevations, rear) + clearance),
      x2: toX(front),
      y2: toY(interpolate(stations, elevations, front) + clearance),
      rearStation: rear,
      frontStation: front,
    };
    if (response.level === 4) {
      interference = {
        x: toX(response.worst_interference_station_m),
        station: response.worst_interference_station_m,
        color: colorForLevel(4),
      };
    }
  }

  return { width, height, tracePoints, baselineY: toY(0), chord, interference };
}
