// Event records pushed by the cooperation service, one JSON frame per event.

export interface EventRecord {
  seq: number;
  v: number;
  t: number;
  type: string;
  [key: string]: unknown;
}

export interface GraphNode {
  id: string;
  name: string;
  weight: number;
  solved: boolean;
  feasible: boolean;
}

export interface GraphAction {
  id: string;
  name: string;
  agent: "human" | "robot";
  ended: boolean;
}

export interface GraphArc {
  id: string;
  parent: string;
  children: string[];
  weight: number;
  ordered: boolean;
  active: boolean;
  done: boolean;
  pruned: boolean;
  repetition_count: number;
  actions: GraphAction[];
}

export interface GraphSnapshot {
  root: string;
  solved: boolean;
  nodes: GraphNode[];
  arcs: GraphArc[];
}

export interface PathInfo {
  id: number;
  color_tag: string | null;
  nodes: string[];
  arcs: string[];
  cost: number;
}

export interface SuggestionView {
  node: string;
  path: number;
  pathTag: string | null;
  cost: number;
  action: string;
  actionName: string;
  agent: string;
  t: number;
}

export interface PaletteEntry {
  action: string;
  name: string;
  arc: string;
}

export interface DetectionMark {
  name: string;
  t: number;
  peak: number | null;
}

export interface ActivationMark {
  t: number;
  key: string;
  value: number;
}

export interface SwitchView {
  k: number;
  t: number;
  action: string;
  fromTag: string | null;
  toTag: string | null;
}

export interface ArmFrame {
  t: number;
  arms: Record<string, { joints: number[]; ee: number[] }>;
  objects: Record<string, { position: number[]; attached_to: string | null }>;
  minClearance: number | null;
}

export interface ViewModel {
  scenario: string | null;
  seed: number | null;
  version: number;
  t: number;
  mode: string;
  graph: GraphSnapshot | null;
  paths: PathInfo[];
  currentPath: number | null;
  suggestion: SuggestionView | null;
  palette: PaletteEntry[];
  chartTimes: number[];
  chartSeries: Record<string, number[]>;
  detections: DetectionMark[];
  activationMarks: ActivationMark[];
  switches: SwitchView[];
  armFrame: ArmFrame | null;
  frameCount: number;
  registered: { t: number; name: string; agent: string }[];
  metrics: Record<string, number> | null;
  aggregates: Record<string, number | null> | null;
  notice: string | null;
}
