// Deterministic view snapshots: the rendered SVG panels plus the canonical
// JSON of the view model.  Hashing lives with the tests; this module stays
// runnable in the browser.

import { renderArmsSvg, renderChartSvg, renderGraphSvg } from "./render.js";
import type { ViewModel } from "./types.js";

function canonical(value: unknown): string {
  if (value === null || typeof value !== "object") {
    return JSON.stringify(value ?? null);
  }
  if (Array.isArray(value)) {
    return `[${value.map(canonical).join(",")}]`;
  }
  const entries = Object.entries(value as Record<string, unknown>)
    .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
    .map(([k, v]) => `${JSON.stringify(k)}:${canonical(v)}`);
  return `{${entries.join(",")}}`;
}

export function snapshotString(vm: ViewModel): string {
  return canonical({
    view: vm,
    svg: {
      graph: renderGraphSvg(vm),
      chart: renderChartSvg(vm),
      arms: renderArmsSvg(vm),
    },
  });
}
