// Event-sourced view state: a pure fold over the session's event records.
// Stale versions never overwrite newer state, so replaying a stored trace
// and consuming the live stream land on identical view models.

import type {
  ActivationMark,
  ArmFrame,
  EventRecord,
  GraphArc,
  GraphSnapshot,
  PaletteEntry,
  PathInfo,
  ViewModel,
} from "./types.js";

const CHART_CAP = 8000;

export function initialViewModel(): ViewModel {
  return {
    scenario: null,
    seed: null,
    version: 0,
    t: 0,
    mode: "normal",
    graph: null,
    paths: [],
    currentPath: null,
    suggestion: null,
    palette: [],
    chartTimes: [],
    chartSeries: {},
    detections: [],
    activationMarks: [],
    switches: [],
    armFrame: null,
    frameCount: 0,
    registered: [],
    metrics: null,
    aggregates: null,
    notice: null,
  };
}

export class SessionStore {
  vm: ViewModel = initialViewModel();
  private listeners: ((vm: ViewModel) => void)[] = [];

  onChange(listener: (vm: ViewModel) => void): void {
    this.listeners.push(listener);
  }

  apply(record: EventRecord): boolean {
    if (record.v <= this.vm.version) {
      return false; // stale or duplicate event
    }
    this.vm.version = record.v;
    this.vm.t = record.t;
    this.reduce(record);
    for (const listener of this.listeners) {
      listener(this.vm);
    }
    return true;
  }

  applyAll(records: EventRecord[]): void {
    for (const record of records) {
      this.apply(record);
    }
  }

  private reduce(record: EventRecord): void {
    const vm = this.vm;
    switch (record.type) {
      case "meta":
        vm.scenario = record.scenario as string;
        vm.seed = record.seed as number;
        break;
      case "graph":
        vm.graph = record.graph as GraphSnapshot;
        vm.palette = paletteFrom(vm.graph);
        break;
      case "paths":
        vm.paths = record.paths as PathInfo[];
        break;
      case "suggestion":
        vm.suggestion = {
          node: record.node as string,
          path: record.path as number,
          pathTag: (record.path_tag as string | null) ?? null,
          cost: record.cost as number,
          action: record.action as string,
          actionName: record.action_name as string,
          agent: record.agent as string,
          t: record.t,
        };
        vm.currentPath = record.path as number;
        break;
      case "possibility": {
        const values = record.values as Record<string, number>;
        vm.chartTimes.push(record.t);
        for (const name of Object.keys(values).sort()) {
          (vm.chartSeries[name] ??= []).push(values[name]);
        }
        if (vm.chartTimes.length > CHART_CAP) {
          vm.chartTimes.shift();
          for (const series of Object.values(vm.chartSeries)) {
            series.shift();
          }
        }
        break;
      }
      case "gesture":
        if (record.source === "recognizer") {
          vm.detections.push({
            name: record.name as string,
            t: record.t,
            peak: (record.peak as number | null) ?? null,
          });
        }
        break;
      case "robot_state": {
        vm.frameCount += 1;
        vm.armFrame = {
          t: record.t,
          arms: record.arms as ArmFrame["arms"],
          objects: record.objects as ArmFrame["objects"],
          minClearance: (record.min_clearance as number | null) ?? null,
        };
        const activations = (record.activations ?? {}) as Record<string, number>;
        for (const key of Object.keys(activations).sort()) {
          if (key.includes(":obstacle:") && activations[key] > 0) {
            vm.activationMarks.push({ t: record.t, key, value: activations[key] });
          }
        }
        break;
      }
      case "switch":
        vm.switches.push({
          k: record.k as number,
          t: record.t,
          action: record.action as string,
          fromTag: (record.from_tag as string | null) ?? null,
          toTag: (record.to_tag as string | null) ?? null,
        });
        break;
      case "registered":
        vm.registered.push({
          t: record.t,
          name: record.name as string,
          agent: record.agent as string,
        });
        break;
      case "mode":
        vm.mode = record.mode as string;
        if (vm.mode === "failed") {
          vm.notice = `session failed: ${record.reason as string}`;
        } else if (vm.mode === "solved") {
          vm.notice = "cooperation goal reached";
        }
        break;
      case "session_end":
        vm.metrics = record.metrics as Record<string, number>;
        vm.aggregates = record.aggregates as Record<string, number | null>;
        vm.mode = record.mode as string;
        break;
      default:
        break;
    }
  }
}

// Every human action currently offered by an active hyper-arc: the next one
// for ordered arcs, every unended one for unordered arcs.  This is the whole
// choice surface, not just the single suggestion.
export function paletteFrom(graph: GraphSnapshot): PaletteEntry[] {
  const entries: PaletteEntry[] = [];
  for (const arc of graph.arcs) {
    if (!arc.active || arc.done || arc.pruned) continue;
    if (arc.ordered) {
      const first = arc.actions.find((a) => !a.ended);
      if (first && first.agent === "human") {
        entries.push({ action: first.id, name: first.name, arc: arc.id });
      }
    } else {
      for (const action of arc.actions) {
        if (!action.ended && action.agent === "human") {
          entries.push({ action: action.id, name: action.name, arc: arc.id });
        }
      }
    }
  }
  return entries.sort((a, b) => a.action.localeCompare(b.action));
}

export function arcsOfPath(vm: ViewModel, pathId: number | null): Set<string> {
  if (pathId == null) return new Set();
  const path = vm.paths.find((p) => p.id === pathId);
  return new Set(path ? path.arcs : []);
}

export function liveMetrics(vm: ViewModel): Record<string, number> | null {
  if (vm.metrics) return vm.metrics;
  if (vm.t <= 0) return null;
  // Rough live estimate from what the log already shows; the exact split
  // arrives with the final record.
  let robot = 0;
  for (const a of vm.registered) {
    if (a.agent === "robot") robot += 1;
  }
  return {
    n_actions: vm.registered.length,
    k_switches: vm.switches.length,
    robot_actions: robot,
  };
}
