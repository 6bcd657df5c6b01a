/** Client-side layout for the bipartite component-net graph. Layout is
 * cosmetic only and carries no contract: components sit in the left
 * column, nets in the right, edges join them. */

import type { GraphPayload } from "./api.js";

export interface PlacedNode {
  kind: "component" | "net";
  label: string;
  x: number;
  y: number;
}

export interface PlacedEdge {
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  terminal: number;
}

export interface GraphLayout {
  width: number;
  height: number;
  nodes: PlacedNode[];
  edges: PlacedEdge[];
  annotations: string[];
}

const COLUMN_GAP = 260;
const ROW_GAP = 44;
const MARGIN = 40;

export function layoutGraph(graph: GraphPayload): GraphLayout {
  const components = graph.nodes.filter((n) => n.kind === "component");
  const nets = graph.nodes.filter((n) => n.kind === "net");
  const place = (labels: { label: string; kind: "component" | "net" }[], x: number) =>
    labels.map((n, i) => ({ kind: n.kind, label: n.label, x, y: MARGIN + i * ROW_GAP }));
  const placed = [...place(components, MARGIN), ...place(nets, MARGIN + COLUMN_GAP)];
  const index = new Map(placed.map((n) => [`${n.kind}:${n.label}`, n]));

  const edges: PlacedEdge[] = [];
  for (const edge of graph.edges) {
    const from = index.get(`component:${edge.component}`);
    const to = index.get(`net:${edge.net}`);
    if (from && to) {
      edges.push({ x1: from.x, y1: from.y, x2: to.x, y2: to.y, terminal: edge.terminal });
    }
  }
  const rows = Math.max(components.length, nets.length, 1);
  return {
    width: 2 * MARGIN + COLUMN_GAP + 120,
    height: 2 * MARGIN + (rows - 1) * ROW_GAP,
    nodes: placed,
    edges,
    annotations: graph.annotations,
  };
}
