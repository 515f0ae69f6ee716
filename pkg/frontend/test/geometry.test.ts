import { describe, expect, it } from "vitest";

import type { Layout } from "../src/api.js";
import { Camera, displayPositions, nearestNode, nearestUncutEdge, pointSegmentDistance } from "../src/geometry.js";

function makeLayout(partial: Partial<Layout>): Layout {
  return {
    id: "s0",
    dataset: "d0",
    kind: "root",
    n: 0,
    dim: 1,
    sigma: 1,
    metric: "euclidean",
    method: "classical",
    root: 0,
    node_ids: [],
    edges: [],
    cuts: [],
    coords: [],
    potential_axis: [],
    stress: 0,
    offsets: [],
    components: { assignment: [], k: 0 },
    children: [],
    constraints: { must_link: [], cannot_link: [], labels: [] },
    ...partial,
  };
}

describe("pointSegmentDistance", () => {
  it("is zero on the segment", () => {
    expect(pointSegmentDistance([0.5, 0], [0, 0], [1, 0])).toBeCloseTo(0, 12);
  });

  it("clamps to endpoints", () => {
    expect(pointSegmentDistance([2, 0], [0, 0], [1, 0])).toBeCloseTo(1, 12);
    expect(pointSegmentDistance([-3, 4], [0, 0], [1, 0])).toBeCloseTo(5, 12);
  });

  it("handles degenerate segments", () => {
    expect(pointSegmentDistance([3, 4], [0, 0], [0, 0])).toBeCloseTo(5, 12);
  });

  it("matches a sampled brute force", () => {
    const a: [number, number] = [-1, 2];
    const b: [number, number] = [3, -0.5];
    for (let trial = 0; trial < 50; trial++) {
      const p: [number, number] = [Math.sin(trial * 1.7) * 4, Math.cos(trial * 2.3) * 4];
      let best = Infinity;
      for (let i = 0; i <= 1000; i++) {
        const t = i / 1000;
        best = Math.min(best, Math.hypot(a[0] + t * (b[0] - a[0]) - p[0], a[1] + t * (b[1] - a[1]) - p[1]));
      }
      expect(pointSegmentDistance(p, a, b)).toBeLessThanOrEqual(best + 1e-9);
      expect(pointSegmentDistance(p, a, b)).toBeGreaterThanOrEqual(best - 1e-3);
    }
  });
});

describe("displayPositions", () => {
  it("applies component offsets on x only", () => {
    const layout = makeLayout({
      n: 3,
      coords: [[0], [1], [5]],
      potential_axis: [0, 1, 0.5],
      edges: [[1, 0, 1], [2, 1, 4]],
      cuts: [2],
      components: { assignment: [0, 0, 1], k: 2 },
      offsets: [[2, [10]]], // component with representative node 2
    });
    expect(displayPositions(layout)).toEqual([
      [0, 0],
      [1, 1],
      [15, 0.5],
    ]);
  });
});

describe("nearestUncutEdge", () => {
  const layout = makeLayout({
    n: 3,
    coords: [[0], [1], [2]],
    potential_axis: [0, 0, 0],
    edges: [[1, 0, 1], [2, 1, 1]],
    components: { assignment: [0, 0, 0], k: 1 },
  });

  it("resolves the closest segment", () => {
    const pos = displayPositions(layout);
    expect(nearestUncutEdge(layout, pos, [0.2, 0.3])).toBe(1);
    expect(nearestUncutEdge(layout, pos, [1.9, -0.1])).toBe(2);
  });

  it("skips cut edges and returns null when none remain", () => {
    const cutOne = makeLayout({ ...layout, cuts: [1] });
    const pos = displayPositions(cutOne);
    expect(nearestUncutEdge(cutOne, pos, [0.2, 0.3])).toBe(2);
    const allCut = makeLayout({ ...layout, cuts: [1, 2] });
    expect(nearestUncutEdge(allCut, displayPositions(allCut), [0, 0])).toBeNull();
  });

  it("breaks ties toward the smaller edge id", () => {
    // two identical stacked segments
    const tied = makeLayout({
      n: 4,
      coords: [[0], [1], [0], [1]],
      potential_axis: [0, 0, 0, 0],
      edges: [[1, 0, 1], [3, 2, 1]],
      components: { assignment: [0, 0, 0, 0], k: 1 },
    });
    expect(nearestUncutEdge(tied, displayPositions(tied), [0.5, 0.5])).toBe(1);
  });
});

describe("nearestNode", () => {
  it("finds the closest node within range", () => {
    expect(nearestNode([[0, 0], [5, 5]], [4.6, 4.9])).toBe(1);
    expect(nearestNode([[0, 0], [5, 5]], [100, 100], 2)).toBeNull();
  });
});

describe("Camera", () => {
  it("round-trips world and screen", () => {
    const cam = new Camera();
    cam.fit([[0, 0], [10, 1]], 800, 600);
    const world: [number, number] = [3.3, 0.4];
    const back = cam.toWorld(cam.toScreen(world));
    expect(back[0]).toBeCloseTo(world[0], 9);
    expect(back[1]).toBeCloseTo(world[1], 9);
  });

  it("fits the bounds inside the margin", () => {
    const cam = new Camera();
    cam.fit([[0, 0], [10, 1]], 800, 600, 40);
    for (const p of [[0, 0], [10, 1]] as [number, number][]) {
      const [sx, sy] = cam.toScreen(p);
      expect(sx).toBeGreaterThanOrEqual(39);
      expect(sx).toBeLessThanOrEqual(761);
      expect(sy).toBeGreaterThanOrEqual(39);
      expect(sy).toBeLessThanOrEqual(561);
    }
  });

  it("keeps the zoom anchor fixed", () => {
    const cam = new Camera();
    cam.fit([[0, 0], [10, 1]], 800, 600);
    const anchor: [number, number] = [200, 300];
    const before = cam.toWorld(anchor);
    cam.zoomAt(anchor, 1.5);
    const after = cam.toWorld(anchor);
    expect(after[0]).toBeCloseTo(before[0], 9);
    expect(after[1]).toBeCloseTo(before[1], 9);
  });

  it("flips y so larger potential renders higher", () => {
    const cam = new Camera();
    cam.fit([[0, 0], [1, 1]], 800, 600);
    expect(cam.toScreen([0, 1])[1]).toBeLessThan(cam.toScreen([0, 0])[1]);
  });
});
