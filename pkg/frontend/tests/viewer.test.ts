import { describe, expect, it } from "vitest";

import { cssTransform, initialViewport, panBy, zoomAt } from "../src/viewer.js";

describe("viewport", () => {
  it("zoom keeps the anchor point fixed", () => {
    const vp = initialViewport();
    const zoomed = zoomAt(vp, 2, 100, 50);
    // content point under (100, 50): (100 - x)/scale must be unchanged
    expect((100 - zoomed.x) / zoomed.scale).toBeCloseTo(100);
    expect((50 - zoomed.y) / zoomed.scale).toBeCloseTo(50);
    expect(zoomed.scale).toBe(2);
  });

  it("zoom clamps to sane bounds", () => {
    let vp = initialViewport();
    for (let i = 0; i < 40; i++) vp = zoomAt(vp, 2, 0, 0);
    expect(vp.scale).toBeLessThanOrEqual(32);
    for (let i = 0; i < 80; i++) vp = zoomAt(vp, 0.5, 0, 0);
    expect(vp.scale).toBeGreaterThanOrEqual(0.25);
  });

  it("pan is additive and shared state is a plain value", () => {
    const vp = panBy(panBy(initialViewport(), 10, -5), -4, 5);
    expect(vp).toEqual({ scale: 1, x: 6, y: 0 });
    expect(cssTransform(vp)).toBe("translate(6px, 0px) scale(1)");
  });

  it("a run pinned beside the active run shares the same transform", () => {
    // the compare view applies one viewport to both panes; identity of the
    // transform string is what keeps zoom/pan synchronized
    const vp = zoomAt(panBy(initialViewport(), 12, 8), 1.5, 40, 30);
    expect(cssTransform(vp)).toBe(cssTransform({ ...vp }));
  });
});
