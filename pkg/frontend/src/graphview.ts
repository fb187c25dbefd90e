// Force-directed SVG rendering with a deterministic, seeded layout.

import * as d3 from "d3";

import { KIND_COLORS, KIND_ORDER, nodeColor, nodeRadius, strokeWidth } from "./mapping";
import type { GraphNodePayload, GraphPayload } from "./types";

export interface GraphViewOptions {
  width?: number;
  height?: number;
  seed?: number;
  onNodeClick?: (nodeId: string) => void;
  flagged?: Set<string>;
  selected?: string | null;
}

interface SimNode extends d3.SimulationNodeDatum {
  payload: GraphNodePayload;
}

const LAYOUT_TICKS = 150;

// Park-Miller LCG so layouts reproduce exactly for a fixed seed.
function seededRandom(seed: number): () => number {
  let state = seed % 2147483647;
  if (state <= 0) state += 2147483646;
  return () => {
    state = (state * 16807) % 2147483647;
    return (state - 1) / 2147483646;
  };
}

export function renderGraph(container: HTMLElement, graph: GraphPayload, options: GraphViewOptions = {}): void {
  const width = options.width ?? 640;
  const height = options.height ?? 480;
  container.replaceChildren();

  const svg = d3
    .select(container)
    .append("svg")
    .attr("class", "graph-view")
    .attr("viewBox", `0 0 ${width} ${height}`)
    .attr("width", "100%");

  drawLegend(svg);

  if (graph.nodes.length === 0) {
    svg
      .append("text")
      .attr("class", "empty-state")
      .attr("x", width / 2)
      .attr("y", height / 2)
      .attr("text-anchor", "middle")
      .text("No nodes match this scope.");
    return;
  }

  const nodes: SimNode[] = graph.nodes.map((payload, i) => {
    // Deterministic initial ring placement, independent of d3 internals.
    const angle = (2 * Math.PI * i) / graph.nodes.length;
    const ring = Math.min(width, height) / 3;
    return { payload, x: width / 2 + ring * Math.cos(angle), y: height / 2 + ring * Math.sin(angle) };
  });
  const index = new Map(nodes.map((n) => [n.payload.id, n]));
  const links = graph.edges.map((edge) => ({
    source: index.get(edge.a)!,
    target: index.get(edge.b)!,
    edge,
  }));

  const simulation = d3
    .forceSimulation(nodes)
    .randomSource(seededRandom(options.seed ?? 42))
    .force("charge", d3.forceManyBody().strength(-120))
    .force("link", d3.forceLink(links).distance(60).strength(0.6))
    .force("center", d3.forceCenter(width / 2, height / 2))
    .force("collide", d3.forceCollide().radius((d) => nodeRadius((d as SimNode).payload) + 2))
    .stop();
  for (let i = 0; i < LAYOUT_TICKS; i++) simulation.tick();

  svg
    .append("g")
    .attr("class", "edges")
    .selectAll("line")
    .data(links)
    .join("line")
    .attr("stroke", "#999")
    .attr("stroke-opacity", 0.6)
    .attr("stroke-width", (d) => strokeWidth(d.edge))
    .attr("x1", (d) => (d.source as SimNode).x!)
    .attr("y1", (d) => (d.source as SimNode).y!)
    .attr("x2", (d) => (d.target as SimNode).x!)
    .attr("y2", (d) => (d.target as SimNode).y!)
    .append("title")
    .text((d) => `${d.edge.a} — ${d.edge.b}: ${d.edge.weight}`);

  const nodeGroup = svg
    .append("g")
    .attr("class", "nodes")
    .selectAll("g")
    .data(nodes)
    .join("g")
    .attr("class", "node")
    .attr("data-node-id", (d) => d.payload.id)
    .attr("transform", (d) => `translate(${d.x},${d.y})`);

  nodeGroup
    .append("circle")
    .attr("r", (d) => nodeRadius(d.payload))
    .attr("fill", (d) => nodeColor(d.payload))
    .attr("stroke", (d) => (options.selected === d.payload.id ? "#000" : "#fff"))
    .attr("stroke-width", (d) => (options.selected === d.payload.id ? 2.5 : 1))
    .attr("stroke-dasharray", (d) => (options.flagged?.has(d.payload.id) ? "4 2" : null))
    .attr("class", (d) => (options.flagged?.has(d.payload.id) ? "node-exclusive" : null))
    .style("cursor", options.onNodeClick ? "pointer" : "default")
    .on("click", (_event, d) => options.onNodeClick?.(d.payload.id));

  nodeGroup
    .append("text")
    .attr("class", "node-label")
    .attr("dx", (d) => nodeRadius(d.payload) + 3)
    .attr("dy", 4)
    .text((d) => d.payload.label);

  nodeGroup.append("title").text((d) => tooltip(d.payload));
}

function tooltip(node: GraphNodePayload): string {
  if (node.kind === "identity" && node.counts) {
    const { pos, neg, neu } = node.counts;
    return `${node.id}\n+${pos} −${neg} 0:${neu}\nnon-neutral share ${node.size.toFixed(3)}`;
  }
  return node.id;
}

function drawLegend(svg: d3.Selection<SVGSVGElement, unknown, null, undefined>): void {
  const legend = svg.append("g").attr("class", "legend").attr("transform", "translate(10,14)");
  KIND_ORDER.forEach((kind, i) => {
    const row = legend
      .append("g")
      .attr("class", "legend-item")
      .attr("data-kind", kind)
      .attr("transform", `translate(0,${i * 16})`);
    row.append("circle").attr("r", 5).attr("fill", KIND_COLORS[kind]);
    row.append("text").attr("x", 10).attr("dy", 4).text(kind);
  });
}
