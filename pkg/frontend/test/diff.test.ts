import { describe, expect, it } from "vitest";

import { diffGraphs } from "../src/diff";
import type { GraphPayload } from "../src/types";

import cliDiff from "./fixtures/diff_jutranjik_vecernik.json";
import graphJutranjik from "./fixtures/graph_jutranjik.json";
import graphVecernik from "./fixtures/graph_vecernik.json";

describe("client-side scope diff", () => {
  it("matches the pipeline's diff output on the demo graphs", () => {
    const diff = diffGraphs(graphJutranjik as GraphPayload, graphVecernik as GraphPayload);
    expect(diff.aOnlyNodes).toEqual(cliDiff.a_only_nodes);
    expect(diff.bOnlyNodes).toEqual(cliDiff.b_only_nodes);
    expect(diff.sharedNodes).toEqual(cliDiff.shared_nodes);
    expect(
      diff.sharedEdges.map((e) => ({ a: e.a, b: e.b, weight_a: e.weightA, weight_b: e.weightB })),
    ).toEqual(cliDiff.shared_edges);
  });

  it("reports no exclusives for identical graphs", () => {
    const graph = graphJutranjik as GraphPayload;
    const diff = diffGraphs(graph, graph);
    expect(diff.aOnlyNodes).toEqual([]);
    expect(diff.bOnlyNodes).toEqual([]);
    expect(diff.sharedNodes.length).toBe(graph.nodes.length);
  });

  it("lists a node present on one side only", () => {
    const a: GraphPayload = {
      nodes: [
        { id: "theme:T", kind: "theme", label: "T", size: 1 },
        { id: "identity:I", kind: "identity", label: "I", size: 0.5 },
      ],
      edges: [{ a: "identity:I", b: "theme:T", weight: 2, thickness: Math.sqrt(2) }],
    };
    const b: GraphPayload = {
      nodes: [{ id: "theme:T", kind: "theme", label: "T", size: 1 }],
      edges: [],
    };
    const diff = diffGraphs(a, b);
    expect(diff.aOnlyNodes).toEqual(["identity:I"]);
    expect(diff.bOnlyNodes).toEqual([]);
    expect(diff.sharedNodes).toEqual(["theme:T"]);
    expect(diff.sharedEdges).toEqual([]);
  });
});
