import { describe, expect, it } from "vitest";

import {
  angularLayout,
  arcPath,
  dataBounds,
  polar,
  polygonPath,
  Viewport,
} from "../src/geometry.js";

describe("polar", () => {
  it("puts angle zero at twelve o'clock", () => {
    const [x, y] = polar(100, 100, 50, 0);
    expect(x).toBeCloseTo(100);
    expect(y).toBeCloseTo(50);
  });

  it("rotates clockwise", () => {
    const [x, y] = polar(0, 0, 1, Math.PI / 2);
    expect(x).toBeCloseTo(1);
    expect(y).toBeCloseTo(0);
  });
});

describe("arcPath", () => {
  it("builds a closed annular sector", () => {
    const d = arcPath(0, 0, 10, 20, 0, Math.PI / 2);
    expect(d.startsWith("M ")).toBe(true);
    expect(d.endsWith("Z")).toBe(true);
    expect(d.match(/A /g)).toHaveLength(2);
  });

  it("clamps a full turn so the path stays drawable", () => {
    const d = arcPath(0, 0, 10, 20, 0, 10 * Math.PI);
    expect(d).not.toContain("NaN");
  });
});

describe("polygonPath", () => {
  it("closes the loop", () => {
    expect(polygonPath([[0, 0], [1, 0], [1, 1]])).toBe("M 0 0 L 1 0 L 1 1 Z");
  });

  it("is empty for no points", () => {
    expect(polygonPath([])).toBe("");
  });
});

describe("dataBounds", () => {
  it("spans the extremes", () => {
    const b = dataBounds([{ x: -2, y: 5 }, { x: 3, y: -1 }]);
    expect(b).toEqual({ minX: -2, maxX: 3, minY: -1, maxY: 5 });
  });

  it("widens degenerate spans", () => {
    const b = dataBounds([{ x: 1, y: 1 }]);
    expect(b.maxX).toBeGreaterThan(b.minX);
    expect(b.maxY).toBeGreaterThan(b.minY);
  });

  it("defaults the empty set to the unit square", () => {
    expect(dataBounds([])).toEqual({ minX: 0, maxX: 1, minY: 0, maxY: 1 });
  });
});

describe("Viewport", () => {
  it("round-trips pixel and data coordinates", () => {
    const vp = new Viewport({ minX: -5, maxX: 5, minY: 0, maxY: 10 }, 520, 420);
    for (const [x, y] of [[-5, 0], [5, 10], [0, 5], [-1.25, 7.5]] as const) {
      const [px, py] = vp.toPixel(x, y);
      const [bx, by] = vp.toData(px, py);
      expect(bx).toBeCloseTo(x, 10);
      expect(by).toBeCloseTo(y, 10);
    }
  });

  it("keeps data inside the padded frame", () => {
    const vp = new Viewport({ minX: 0, maxX: 1, minY: 0, maxY: 1 }, 100, 100, 10);
    expect(vp.toPixel(0, 0)).toEqual([10, 10]);
    expect(vp.toPixel(1, 1)).toEqual([90, 90]);
  });
});

describe("angularLayout", () => {
  it("sizes arcs proportionally and in order", () => {
    const arcs = angularLayout([1, 3], 0);
    expect(arcs[0].startAngle).toBe(0);
    const span0 = arcs[0].endAngle - arcs[0].startAngle;
    const span1 = arcs[1].endAngle - arcs[1].startAngle;
    expect(span1 / span0).toBeCloseTo(3);
    expect(arcs[1].endAngle).toBeCloseTo(Math.PI * 2);
  });

  it("gives zero weight a zero span", () => {
    const arcs = angularLayout([0, 1], 0.02);
    expect(arcs[0].endAngle).toBe(arcs[0].startAngle);
  });
});
