import { describe, expect, it } from "vitest";

import { KIND_COLORS, R_CONST, R_MAX, R_MIN, nodeRadius, strokeWidth } from "../src/mapping";

describe("visual mappings", () => {
  it("maps identity size endpoints to the radius range", () => {
    expect(nodeRadius({ kind: "identity", size: 0 })).toBe(R_MIN);
    expect(nodeRadius({ kind: "identity", size: 1 })).toBe(R_MAX);
    expect(nodeRadius({ kind: "identity", size: 0.5 })).toBe((R_MIN + R_MAX) / 2);
  });

  it("uses a constant radius for non-identity kinds", () => {
    for (const kind of ["theme", "location", "sentiment"] as const) {
      expect(nodeRadius({ kind, size: 0 })).toBe(R_CONST);
      expect(nodeRadius({ kind, size: 1 })).toBe(R_CONST);
    }
  });

  it("clamps identity size outside [0, 1]", () => {
    expect(nodeRadius({ kind: "identity", size: -1 })).toBe(R_MIN);
    expect(nodeRadius({ kind: "identity", size: 2 })).toBe(R_MAX);
  });

  it("scales stroke width by the square root of weight", () => {
    // weights 1 and 9 carry thickness 1 and 3: stroke widths in ratio 1:3.
    const w1 = strokeWidth({ thickness: 1 });
    const w9 = strokeWidth({ thickness: 3 });
    expect(w9 / w1).toBeCloseTo(3, 12);
  });

  it("defines a distinct color for each kind", () => {
    const colors = Object.values(KIND_COLORS);
    expect(new Set(colors).size).toBe(4);
  });
});
