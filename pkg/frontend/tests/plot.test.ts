import { describe, expect, it } from "vitest";

import { seriesScale, ticks, toPixel } from "../src/plot.js";

describe("plot scales", () => {
  it("pads the y range and covers all series", () => {
    const sc = seriesScale([
      { label: "a", x: [0, 1, 2], y: [0, 1, 0.5] },
      { label: "b", x: [0, 3], y: [-0.2, 0.2] },
    ]);
    expect(sc.xMin).toBe(0);
    expect(sc.xMax).toBe(3);
    expect(sc.yMin).toBeLessThan(-0.2);
    expect(sc.yMax).toBeGreaterThan(1);
  });

  it("degenerate ranges stay finite", () => {
    const sc = seriesScale([{ label: "a", x: [2, 2], y: [5, 5] }]);
    expect(sc.xMax).toBeGreaterThan(sc.xMin);
    expect(sc.yMax).toBeGreaterThan(sc.yMin);
  });

  it("ticks land on round steps and stay inside the range", () => {
    const t = ticks(-20, 20, 6);
    expect(t).toContain(0);
    expect(t[0]).toBeGreaterThanOrEqual(-20);
    expect(t[t.length - 1]).toBeLessThanOrEqual(20 + 1e-9);
    const steps = new Set(t.slice(1).map((v, k) => +(v - t[k]).toPrecision(6)));
    expect(steps.size).toBe(1);
  });

  it("maps values to pixels linearly", () => {
    expect(toPixel(0.5, 0, 1, 100, 200)).toBe(150);
    expect(toPixel(0, 0, 1, 100, 200)).toBe(100);
  });
});
