/** Wires the map, the profile chart, and the what-if panel together.
 *
 * All numbers on screen are service responses; this file only moves
 * them into elements. The API base URL comes from the page's
 * crossclear-api-base meta tag (empty means same origin).
 */

import { ApiClient, type CrossingItem, type WhatIfRequest } from "./api.js";
import { buildProfileChart, type ProfileChart } from "./chart.js";
import { colorForLevel, LEVEL_NAMES } from "./levels.js";
import { buildMarkers } from "./markers.js";
import { PREFILL_SLUG, sliderPrefill } from "./prefill.js";
import { WhatIfController } from "./whatif.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function el<K extends keyof HTMLElementTagNameMap>(id: string): HTMLElementTagNameMap[K] {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as HTMLElementTagNameMap[K];
}

function svgEl(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

function apiBase(): string {
  const meta = document.querySelector('meta[name="crossclear-api-base"]');
  return meta?.getAttribute("content") ?? "";
}

function renderMap(
  svg: SVGSVGElement,
  items: CrossingItem[],
  selected: string | null,
  onSelect: (id: string) => void,
): void {
  const layout = buildMarkers(items);
  svg.setAttribute("viewBox", `0 0 ${layout.width} ${layout.height}`);
  svg.replaceChildren();
  for (const marker of layout.markers) {
    const dot = svgEl("circle", {
      cx: marker.x.toFixed(1),
      cy: marker.y.toFixed(1),
      r: marker.crossingId === selected ? "10" : "7",
      fill: marker.color,
      stroke: "#222",
      "stroke-width": marker.crossingId === selected ? "3" : "1",
      "data-crossing": marker.crossingId,
      "data-level": marker.level === null ? "" : String(marker.level),
    });
    dot.style.cursor = "pointer";
    dot.addEventListener("click", () => onSelect(marker.crossingId));
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = marker.title;
    dot.appendChild(title);
    svg.appendChild(dot);
  }
}

function renderChart(svg: SVGSVGElement, chart: ProfileChart): void {
  svg.setAttribute("viewBox", `0 0 ${chart.width} ${chart.height}`);
  svg.replaceChildren();
  svg.appendChild(svgEl("polyline", {
    points: chart.tracePoints,
    fill: "none",
    stroke: "#4477aa",
    "stroke-width": "2",
  }));
  if (chart.chord) {
    svg.appendChild(svgEl("line", {
      x1: chart.chord.x1.toFixed(1),
      y1: chart.chord.y1.toFixed(1),
      x2: chart.chord.x2.toFixed(1),
      y2: chart.chord.y2.toFixed(1),
      stroke: "#222222",
      "stroke-width": "2",
      "stroke-dasharray": "6 3",
    }));
  }
  if (chart.interference) {
    svg.appendChild(svgEl("line", {
      x1: chart.interference.x.toFixed(1),
      y1: "0",
      x2: chart.interference.x.toFixed(1),
      y2: String(chart.height),
      stroke: chart.interference.color,
      "stroke-width": "2",
    }));
  }
}

async function boot(): Promise<void> {
  const client = new ApiClient(apiBase());
  const mapSvg = el<"div">("map") as unknown as SVGSVGElement;
  const chartSvg = el<"div">("chart") as unknown as SVGSVGElement;
  const scenarioSel = el<"select">("scenario");
  const typeSel = el<"select">("vehicle-type");
  const wheelbase = el<"input">("wheelbase");
  const wheelbaseOut = el<"output">("wheelbase-value");
  const clearance = el<"input">("clearance");
  const clearanceOut = el<"output">("clearance-value");
  const useCustom = el<"input">("use-custom");
  const deltaOut = el<"output">("delta");
  const levelOut = el<"output">("level");
  const statusOut = el<"output">("status");

  let crossings: CrossingItem[] = [];
  let selected: string | null = null;
  let profile: Awaited<ReturnType<ApiClient["profile"]>> | null = null;

  const controller = new WhatIfController(
    client,
    (view) => {
      deltaOut.value = view.deltaText;
      levelOut.value = view.levelText;
      levelOut.style.color = colorForLevel(view.response.level);
      statusOut.value = LEVEL_NAMES[view.response.level] ?? "";
      if (profile) renderChart(chartSvg, buildProfileChart(profile, view.response));
    },
    (message) => {
      statusOut.value = message;
    },
  );

  function currentRequest(): WhatIfRequest | null {
    if (!selected) return null;
    if (useCustom.checked) {
      return {
        crossing_id: selected,
        vehicle: {
          wheelbase_m: Number(wheelbase.value),
          clearance_wheelbase_m: Number(clearance.value),
        },
      };
    }
    return {
      crossing_id: selected,
      vehicle_type: typeSel.value,
      scenario: scenarioSel.value,
    };
  }

  function poke(): void {
    const request = currentRequest();
    if (request) controller.schedule(request);
  }

  async function select(id: string): Promise<void> {
    selected = id;
    renderMap(mapSvg, crossings, selected, (next) => void select(next));
    profile = await client.profile(id);
    renderChart(chartSvg, buildProfileChart(profile, null));
    poke();
  }

  const vehicles = await client.vehicles();
  for (const vt of vehicles.vehicle_types) {
    const option = document.createElement("option");
    option.value = vt.slug;
    option.textContent = vt.label;
    typeSel.appendChild(option);
  }
  typeSel.value = PREFILL_SLUG;
  for (const s of vehicles.scenarios) {
    const option = document.createElement("option");
    option.value = s;
    option.textContent = s;
    scenarioSel.appendChild(option);
  }
  scenarioSel.value = "worst";

  const prefill = sliderPrefill(vehicles);
  wheelbase.value = prefill.wheelbase;
  clearance.value = prefill.clearance;
  wheelbaseOut.value = wheelbase.value;
  clearanceOut.value = clearance.value;

  for (const input of [wheelbase, clearance]) {
    input.addEventListener("input", () => {
      wheelbaseOut.value = wheelbase.value;
      clearanceOut.value = clearance.value;
      if (useCustom.checked) poke();
    });
  }
  for (const input of [scenarioSel, typeSel, useCustom]) {
    input.addEventListener("change", () => {
      if (input === scenarioSel) {
        void client.crossings(scenarioSel.value).then((doc) => {
          crossings = doc.items;
          renderMap(mapSvg, crossings, selected, (next) => void select(next));
        });
      }
      poke();
    });
  }

  const doc = await client.crossings(scenarioSel.value);
  crossings = doc.items;
  renderMap(mapSvg, crossings, selected, (next) => void select(next));
  const first = crossings.find((c) => c.has_profile);
  if (first) await select(first.crossing_id);
}

void boot();
