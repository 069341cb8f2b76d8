/** Starting values for the custom-geometry sliders.
 *
 * The panel opens on the school bus median dimensions, the vehicle a
 * county engineer reaches for first; any absent statistic falls back
 * to a mid-range value so the sliders always start somewhere legal.
 */

import type { VehiclesDoc } from "./api.js";

export interface SliderPrefill {
  wheelbase: string;
  clearance: string;
}

export const PREFILL_SLUG = "school_bus";

export function sliderPrefill(doc: VehiclesDoc): SliderPrefill {
  const bus = doc.vehicle_types.find((vt) => vt.slug === PREFILL_SLUG);
  if (!bus) return { wheelbase: "8", clearance: "0.3" };
  return {
    wheelbase: String(bus.wheelbase_m.p50),
    clearance: String(bus.clearance_m.p50),
  };
}
