// DOM and SVG rendering: a pure function of the view model.  Numbers are
// written with fixed precision so the markup, and therefore the snapshot
// hash, is stable across runs.

import { layoutGraph } from "./layout.js";
import { arcsOfPath, liveMetrics } from "./state.js";
import type { ViewModel } from "./types.js";

const fx = (value: number, digits = 2): string => value.toFixed(digits);

export function renderGraphSvg(vm: ViewModel): string {
  if (!vm.graph) return "<svg data-testid='graph-svg'></svg>";
  const layout = layoutGraph(vm.graph);
  const highlight = arcsOfPath(vm, vm.currentPath);
  const parts: string[] = [];
  parts.push(
    `<svg data-testid="graph-svg" viewBox="0 0 ${fx(layout.width, 0)} ${fx(layout.height, 0)}" xmlns="http://www.w3.org/2000/svg">`,
  );
  for (const arc of vm.graph.arcs) {
    const joint = layout.arcJoints[arc.id];
    const parent = layout.nodes[arc.parent];
    if (!joint || !parent) continue;
    const state = arc.pruned
      ? "pruned"
      : arc.done
        ? "done"
        : arc.active
          ? "active"
          : "idle";
    const cls = highlight.has(arc.id) ? `arc ${state} current` : `arc ${state}`;
    parts.push(`<g class="${cls}" data-arc="${arc.id}">`);
    parts.push(
      `<line x1="${fx(parent.x)}" y1="${fx(parent.y)}" x2="${fx(joint.x)}" y2="${fx(joint.y)}"/>`,
    );
    for (const child of arc.children) {
      const pos = layout.nodes[child];
      if (!pos) continue;
      parts.push(
        `<line x1="${fx(joint.x)}" y1="${fx(joint.y)}" x2="${fx(pos.x)}" y2="${fx(pos.y)}"/>`,
      );
    }
    parts.push(`<circle cx="${fx(joint.x)}" cy="${fx(joint.y)}" r="5"/>`);
    parts.push("</g>");
  }
  for (const node of vm.graph.nodes) {
    const pos = layout.nodes[node.id];
    if (!pos) continue;
    const state = node.solved ? "solved" : node.feasible ? "feasible" : "pending";
    const suggested = vm.suggestion?.node === node.id ? " suggested" : "";
    parts.push(`<g class="node ${state}${suggested}" data-node="${node.id}">`);
    parts.push(`<circle cx="${fx(pos.x)}" cy="${fx(pos.y)}" r="14"/>`);
    parts.push(
      `<text x="${fx(pos.x)}" y="${fx(pos.y - 20)}" text-anchor="middle">${node.id}</text>`,
    );
    parts.push("</g>");
  }
  parts.push("</svg>");
  return parts.join("");
}

export function renderChartSvg(vm: ViewModel): string {
  const width = 720;
  const height = 180;
  const names = Object.keys(vm.chartSeries).sort();
  const times = vm.chartTimes;
  const parts = [
    `<svg data-testid="chart-svg" viewBox="0 0 ${width} ${height}" xmlns="http://www.w3.org/2000/svg">`,
  ];
  if (times.length > 1) {
    const t0 = times[0];
    const t1 = times[times.length - 1];
    const sx = (t: number) => ((t - t0) / Math.max(1e-9, t1 - t0)) * (width - 20) + 10;
    const sy = (p: number) => height - 12 - p * (height - 30);
    names.forEach((name, idx) => {
      const series = vm.chartSeries[name];
      const points = series
        .map((p, i) => `${fx(sx(times[i]), 1)},${fx(sy(p), 1)}`)
        .join(" ");
      parts.push(
        `<polyline class="trace trace-${idx}" data-model="${name}" fill="none" points="${points}"/>`,
      );
    });
    for (const det of vm.detections) {
      parts.push(
        `<circle class="detection" data-name="${det.name}" cx="${fx(sx(det.t), 1)}" cy="${fx(
          sy(det.peak ?? 1) ,
          1,
        )}" r="4"/>`,
      );
      if (det.peak != null) {
        const y = sy(0.9 * det.peak);
        parts.push(
          `<line class="threshold" x1="${fx(sx(det.t) - 14, 1)}" y1="${fx(y, 1)}" x2="${fx(
            sx(det.t) + 14,
            1,
          )}" y2="${fx(y, 1)}"/>`,
        );
      }
    }
    for (const mark of vm.activationMarks) {
      parts.push(
        `<rect class="activation" data-key="${mark.key}" x="${fx(sx(mark.t) - 1, 1)}" y="${fx(
          height - 10 - mark.value * 24,
          1,
        )}" width="2" height="${fx(mark.value * 24, 1)}"/>`,
      );
    }
  }
  parts.push("</svg>");
  return parts.join("");
}

export function renderArmsSvg(vm: ViewModel): string {
  const width = 430;
  const height = 300;
  const parts = [
    `<svg data-testid="arms-svg" viewBox="0 0 ${width} ${height}" xmlns="http://www.w3.org/2000/svg">`,
  ];
  const frame = vm.armFrame;
  if (frame) {
    const sx = (x: number) => width / 2 + x * 180;
    const sy = (y: number) => height - 30 - y * 180;
    for (const [name, arm] of Object.entries(frame.arms).sort()) {
      parts.push(
        `<circle class="ee" data-arm="${name}" cx="${fx(sx(arm.ee[0]), 1)}" cy="${fx(
          sy(arm.ee[1]),
          1,
        )}" r="5"/>`,
      );
    }
    for (const [name, obj] of Object.entries(frame.objects).sort()) {
      parts.push(
        `<rect class="object${obj.attached_to ? " grasped" : ""}" data-object="${name}" x="${fx(
          sx(obj.position[0]) - 6,
          1,
        )}" y="${fx(sy(obj.position[1]) - 6, 1)}" width="12" height="12"/>`,
      );
    }
    if (frame.minClearance != null) {
      parts.push(
        `<text class="clearance" x="8" y="16">clearance ${fx(frame.minClearance, 3)} m</text>`,
      );
    }
  }
  parts.push("</svg>");
  return parts.join("");
}

export interface RenderHandlers {
  onAction: (actionName: string) => void;
}

export function renderApp(root: Element, vm: ViewModel, handlers: RenderHandlers): void {
  const doc = root.ownerDocument;
  root.innerHTML = "";

  const banner = doc.createElement("div");
  banner.setAttribute("data-testid", "banner");
  if (vm.suggestion) {
    banner.textContent =
      `${vm.suggestion.agent === "robot" ? "robot will perform" : "expecting human"}: ` +
      `${vm.suggestion.actionName} (node ${vm.suggestion.node}, path ${vm.suggestion.pathTag ?? vm.suggestion.path}, ` +
      `cost ${fx(vm.suggestion.cost)})`;
  } else {
    banner.textContent = "waiting for the first suggestion";
  }
  root.appendChild(banner);

  const status = doc.createElement("div");
  status.setAttribute("data-testid", "status");
  status.textContent = `mode ${vm.mode} | t ${fx(vm.t)} s | v${vm.version}`;
  root.appendChild(status);

  const switches = doc.createElement("div");
  switches.setAttribute("data-testid", "switches");
  switches.textContent = vm.switches
    .map((s) => `#${s.k} ${s.fromTag ?? "?"}->${s.toTag ?? "?"} on "${s.action}"`)
    .join("; ");
  root.appendChild(switches);

  const palette = doc.createElement("div");
  palette.setAttribute("data-testid", "palette");
  const terminal = vm.mode === "solved" || vm.mode === "failed";
  for (const entry of vm.palette) {
    const button = doc.createElement("button");
    button.setAttribute("data-action-name", entry.name);
    button.setAttribute("data-action-id", entry.action);
    button.textContent = entry.name;
    if (terminal) {
      button.setAttribute("disabled", "disabled");
    } else {
      button.addEventListener("click", () => handlers.onAction(entry.name));
    }
    palette.appendChild(button);
  }
  root.appendChild(palette);

  if (vm.notice) {
    const notice = doc.createElement("div");
    notice.setAttribute("data-testid", "notice");
    notice.textContent = vm.notice;
    root.appendChild(notice);
  }

  const metrics = doc.createElement("div");
  metrics.setAttribute("data-testid", "metrics");
  const live = liveMetrics(vm);
  if (vm.metrics) {
    metrics.textContent =
      `reasoning ${fx(vm.metrics.pct_ao, 3)}% | human ${fx(vm.metrics.pct_h)}% | ` +
      `robot ${fx(vm.metrics.pct_r)}% | switches ${vm.metrics.k_switches}`;
  } else if (live) {
    metrics.textContent = `actions ${live.n_actions} | switches ${live.k_switches}`;
  }
  root.appendChild(metrics);

  for (const [testid, svg] of [
    ["graph", renderGraphSvg(vm)],
    ["chart", renderChartSvg(vm)],
    ["arms", renderArmsSvg(vm)],
  ] as const) {
    const host = doc.createElement("div");
    host.setAttribute("data-testid", `${testid}-panel`);
    host.innerHTML = svg;
    root.appendChild(host);
  }
}
