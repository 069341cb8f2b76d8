/** Crossing list to map markers: a plain linear projection is plenty for
 * a county-sized extent, and keeping it pure keeps it testable. */

import type { CrossingItem } from "./api.js";
import { colorForLevel } from "./levels.js";

export interface Marker {
  crossingId: string;
  x: number;
  y: number;
  color: string;
  level: number | null;
  title: string;
}

export interface MarkerLayout {
  width: number;
  height: number;
  markers: Marker[];
}

const UNRATED_COLOR = "#aaaaaa";
const MARGIN = 0.08;

export function buildMarkers(
  items: CrossingItem[],
  width = 640,
  height = 400,
): MarkerLayout {
  const lons = items.map((c) => c.longitude);
  const lats = items.map((c) => c.latitude);
  const lonSpan = Math.max(Math.max(...lons) - Math.min(...lons), 1e-6);
  const latSpan = Math.max(Math.max(...lats) - Math.min(...lats), 1e-6);
  const lon0 = Math.min(...lons);
  const lat0 = Math.min(...lats);

  const innerW = width * (1 - 2 * MARGIN);
  const innerH = height * (1 - 2 * MARGIN);

  const markers = items.map((c) => {
    const level = c.worst_level;
    const place = [c.street, c.county].filter(Boolean).join(", ");
    return {
      crossingId: c.crossing_id,
      x: width * MARGIN + ((c.longitude - lon0) / lonSpan) * innerW,
      // north up: higher latitude plots nearer the top
      y: height * MARGIN + (1 - (c.latitude - lat0) / latSpan) * innerH,
      color: level === null ? UNRATED_COLOR : colorForLevel(level),
      level,
      title: place ? `${c.crossing_id} (${place})` : c.crossing_id,
    };
  });
  return { width, height, markers };
}
