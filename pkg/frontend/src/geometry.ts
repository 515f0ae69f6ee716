/**
 * Display-space geometry: node positions, hover-preview edge resolution, and
 * the camera transform between world (embedding) and screen pixels.
 *
 * The preview mirrors the server rule (nearest point-to-segment distance over
 * uncut edges, smaller edge id on ties) so the hover highlight always matches
 * what a committed cross resolves to; the committed cut still comes from the
 * server response.
 */

import type { Layout } from "./api.js";

export type Point = [number, number];

/** World position of every node: first embedding coord + its component's
 * offset on x, normalized potential on y. */
export function displayPositions(layout: Layout): Point[] {
  const offsetByRep = new Map<number, number>();
  for (const [rep, delta] of layout.offsets) offsetByRep.set(rep, delta[0] ?? 0);
  // component representative = smallest node id in the component
  const rep: number[] = new Array(layout.components.k).fill(-1);
  layout.components.assignment.forEach((comp, node) => {
    if (rep[comp] < 0) rep[comp] = node;
  });
  return layout.coords.map((row, node) => {
    const comp = layout.components.assignment[node];
    const dx = offsetByRep.get(rep[comp]) ?? 0;
    return [row[0] + dx, layout.potential_axis[node]];
  });
}

export function pointSegmentDistance(p: Point, a: Point, b: Point): number {
  const abx = b[0] - a[0];
  const aby = b[1] - a[1];
  const denom = abx * abx + aby * aby;
  let t = 0;
  if (denom > 0) {
    t = ((p[0] - a[0]) * abx + (p[1] - a[1]) * aby) / denom;
    t = Math.max(0, Math.min(1, t));
  }
  const qx = a[0] + t * abx - p[0];
  const qy = a[1] + t * aby - p[1];
  return Math.hypot(qx, qy);
}

/** Uncut edge nearest to a world-space point; null when every edge is cut. */
export function nearestUncutEdge(layout: Layout, positions: Point[], point: Point): number | null {
  const cut = new Set(layout.cuts);
  let best: number | null = null;
  let bestDist = Infinity;
  for (const [child, parent] of layout.edges) {
    if (cut.has(child)) continue;
    const d = pointSegmentDistance(point, positions[child], positions[parent]);
    if (d < bestDist) {
      best = child;
      bestDist = d;
    }
  }
  return best;
}

/** Node nearest to a world point, or null beyond `maxDist`. */
export function nearestNode(positions: Point[], point: Point, maxDist = Infinity): number | null {
  let best: number | null = null;
  let bestDist = maxDist;
  positions.forEach((pos, node) => {
    const d = Math.hypot(pos[0] - point[0], pos[1] - point[1]);
    if (d < bestDist) {
      best = node;
      bestDist = d;
    }
  });
  return best;
}

/** Pan/zoom between world coordinates and canvas pixels (y flipped). */
export class Camera {
  scale = 1;
  tx = 0;
  ty = 0;

  fit(positions: Point[], width: number, height: number, margin = 40): void {
    if (positions.length === 0) return;
    let x0 = Infinity, x1 = -Infinity, y0 = Infinity, y1 = -Infinity;
    for (const [x, y] of positions) {
      x0 = Math.min(x0, x); x1 = Math.max(x1, x);
      y0 = Math.min(y0, y); y1 = Math.max(y1, y);
    }
    const spanX = x1 - x0 || 1;
    const spanY = y1 - y0 || 1;
    this.scale = Math.min((width - 2 * margin) / spanX, (height - 2 * margin) / spanY);
    this.tx = margin - x0 * this.scale + (width - 2 * margin - spanX * this.scale) / 2;
    this.ty = height - margin + y0 * this.scale - (height - 2 * margin - spanY * this.scale) / 2;
  }

  toScreen(p: Point): Point {
    return [p[0] * this.scale + this.tx, this.ty - p[1] * this.scale];
  }

  toWorld(p: Point): Point {
    return [(p[0] - this.tx) / this.scale, (this.ty - p[1]) / this.scale];
  }

  panBy(dxPixels: number, dyPixels: number): void {
    this.tx += dxPixels;
    this.ty += dyPixels;
  }

  zoomAt(screen: Point, factor: number): void {
    const world = this.toWorld(screen);
    this.scale *= factor;
    this.tx = screen[0] - world[0] * this.scale;
    this.ty = screen[1] + world[1] * this.scale;
  }
}
