// Visual encoding: kind colors, identity-size radius, sqrt-weight strokes.

import type { GraphEdgePayload, GraphNodePayload, NodeKind } from "./types";

export const KIND_COLORS: Record<NodeKind, string> = {
  theme: "#d62728", // red
  identity: "#2ca02c", // green
  sentiment: "#e6b800", // yellow
  location: "#9467bd", // purple
};

export const KIND_ORDER: NodeKind[] = ["theme", "identity", "sentiment", "location"];

// Identity radius spans [R_MIN, R_MAX] linearly in node size; other kinds
// use the constant radius.
export const R_MIN = 4;
export const R_MAX = 16;
export const R_CONST = 7;

export const STROKE_SCALE = 1.5;

export function nodeRadius(node: Pick<GraphNodePayload, "kind" | "size">): number {
  if (node.kind !== "identity") return R_CONST;
  return R_MIN + (R_MAX - R_MIN) * Math.max(0, Math.min(1, node.size));
}

export function strokeWidth(edge: Pick<GraphEdgePayload, "thickness">): number {
  return STROKE_SCALE * edge.thickness;
}

export function nodeColor(node: Pick<GraphNodePayload, "kind">): string {
  return KIND_COLORS[node.kind];
}
