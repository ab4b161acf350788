// Layered layout for the AND/OR graph: root on top, children below their
// parents, hyper-arcs drawn as junction glyphs joining the child edges.

import type { GraphSnapshot } from "./types.js";

export interface NodePos {
  x: number;
  y: number;
}

export interface GraphLayout {
  width: number;
  height: number;
  nodes: Record<string, NodePos>;
  arcJoints: Record<string, NodePos>;
}

const LAYER_H = 86;
const MARGIN = 60;
const SPACING = 128;

export function layoutGraph(graph: GraphSnapshot): GraphLayout {
  const depth: Record<string, number> = { [graph.root]: 0 };
  const byParent: Record<string, string[][]> = {};
  for (const arc of graph.arcs) {
    (byParent[arc.parent] ??= []).push(arc.children);
  }
  // Longest-path layering keeps every child strictly below its parents.
  let changed = true;
  let guard = 0;
  while (changed && guard < graph.nodes.length + 2) {
    changed = false;
    guard += 1;
    for (const arc of graph.arcs) {
      const parentDepth = depth[arc.parent];
      if (parentDepth === undefined) continue;
      for (const child of arc.children) {
        const next = parentDepth + 1;
        if ((depth[child] ?? -1) < next) {
          depth[child] = next;
          changed = true;
        }
      }
    }
  }
  const layers: string[][] = [];
  for (const node of graph.nodes) {
    const d = depth[node.id] ?? 0;
    (layers[d] ??= []).push(node.id);
  }
  const widest = Math.max(...layers.map((l) => (l ? l.length : 0)));
  const width = Math.max(760, widest * SPACING + 2 * MARGIN);
  const nodes: Record<string, NodePos> = {};
  layers.forEach((layer, d) => {
    if (!layer) return;
    layer.sort();
    const step = (width - 2 * MARGIN) / Math.max(1, layer.length - 1);
    layer.forEach((id, i) => {
      nodes[id] = {
        x: layer.length === 1 ? width / 2 : MARGIN + i * step,
        y: MARGIN + d * LAYER_H,
      };
    });
  });
  const arcJoints: Record<string, NodePos> = {};
  for (const arc of graph.arcs) {
    const parent = nodes[arc.parent];
    const kids = arc.children.map((c) => nodes[c]).filter(Boolean);
    if (!parent || kids.length === 0) continue;
    const cx = kids.reduce((s, p) => s + p.x, 0) / kids.length;
    const cy = kids.reduce((s, p) => s + p.y, 0) / kids.length;
    // Junction glyph sits between the parent and the child centroid, nudged
    // sideways so alternative arcs of one parent stay distinguishable.
    const siblings = graph.arcs.filter((a) => a.parent === arc.parent);
    const index = siblings.findIndex((a) => a.id === arc.id);
    const offset = (index - (siblings.length - 1) / 2) * 26;
    arcJoints[arc.id] = {
      x: (parent.x + cx) / 2 + offset,
      y: (parent.y + cy) / 2,
    };
  }
  const height = MARGIN + layers.length * LAYER_H;
  return { width, height, nodes, arcJoints };
}
