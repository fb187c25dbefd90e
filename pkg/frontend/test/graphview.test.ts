import { beforeEach, describe, expect, it, vi } from "vitest";

import { renderGraph } from "../src/graphview";
import { nodeRadius, strokeWidth } from "../src/mapping";
import type { GraphPayload } from "../src/types";

import graphAll from "./fixtures/graph_all.json";

const graph = graphAll as GraphPayload;

function render(target: HTMLElement, flagged?: Set<string>, onNodeClick?: (id: string) => void) {
  renderGraph(target, graph, { width: 600, height: 400, seed: 42, flagged, onNodeClick });
}

describe("graph rendering", () => {
  let host: HTMLElement;

  beforeEach(() => {
    host = document.createElement("div");
    document.body.replaceChildren(host);
  });

  it("renders every node and edge with the documented mappings", () => {
    render(host);
    const circles = host.querySelectorAll(".nodes circle");
    const lines = host.querySelectorAll(".edges line");
    expect(circles.length).toBe(graph.nodes.length);
    expect(lines.length).toBe(graph.edges.length);

    const byId = new Map(graph.nodes.map((n) => [n.id, n]));
    host.querySelectorAll<SVGGElement>(".nodes g.node").forEach((g) => {
      const node = byId.get(g.dataset.nodeId!)!;
      const circle = g.querySelector("circle")!;
      expect(Number(circle.getAttribute("r"))).toBeCloseTo(nodeRadius(node), 9);
    });

    const widths = [...lines].map((l) => Number(l.getAttribute("stroke-width"))).sort((a, b) => a - b);
    const expected = graph.edges.map((e) => strokeWidth(e)).sort((a, b) => a - b);
    widths.forEach((w, i) => expect(w).toBeCloseTo(expected[i], 9));
  });

  it("matches the structural snapshot (legend, radii, colors, strokes)", () => {
    render(host);
    const legend = [...host.querySelectorAll(".legend-item")].map((item) => ({
      kind: (item as SVGGElement).dataset.kind,
      color: item.querySelector("circle")?.getAttribute("fill"),
      label: item.querySelector("text")?.textContent,
    }));
    const nodes = [...host.querySelectorAll<SVGGElement>(".nodes g.node")]
      .map((g) => ({
        id: g.dataset.nodeId,
        r: Number(g.querySelector("circle")!.getAttribute("r")).toFixed(4),
        fill: g.querySelector("circle")!.getAttribute("fill"),
      }))
      .sort((a, b) => (a.id! < b.id! ? -1 : 1));
    const edges = [...host.querySelectorAll(".edges line")]
      .map((l) => Number(l.getAttribute("stroke-width")).toFixed(4))
      .sort();
    expect({ legend, nodes, edges }).toMatchSnapshot();
  });

  it("renders deterministically for a fixed seed", () => {
    render(host);
    const first = host.innerHTML;
    render(host);
    expect(host.innerHTML).toBe(first);
  });

  it("shows the legend even for an empty graph, plus an empty-state message", () => {
    renderGraph(host, { nodes: [], edges: [] }, { width: 300, height: 200 });
    expect(host.querySelectorAll(".legend-item").length).toBe(4);
    expect(host.querySelector(".empty-state")?.textContent).toMatch(/no nodes/i);
  });

  it("flags exclusive nodes with a dashed outline", () => {
    render(host, new Set(["identity:Nemci"]));
    const flagged = host.querySelector('[data-node-id="identity:Nemci"] circle')!;
    expect(flagged.getAttribute("stroke-dasharray")).toBe("4 2");
    expect(flagged.classList.contains("node-exclusive")).toBe(true);
    const other = host.querySelector('[data-node-id="sentiment:+"] circle')!;
    expect(other.getAttribute("stroke-dasharray")).toBeNull();
  });

  it("invokes the click handler with the node id", () => {
    const clicks = vi.fn();
    render(host, undefined, clicks);
    const circle = host.querySelector('[data-node-id="identity:Nemci"] circle')!;
    circle.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    expect(clicks).toHaveBeenCalledWith("identity:Nemci");
  });
});
