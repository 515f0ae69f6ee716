/**
 * Workbench state, DOM-free.  One SessionView per open tab (the root session
 * and any divide/conquer children); the Workbench owns the tab list, the
 * error banner, and every server round trip.  Cluster assignments are only
 * ever taken from server responses, and the cross list is kept bijective
 * with the server-side cut set.
 */

import { ApiClient, ApiError, Layout, ViolationReport } from "./api.js";
import { Camera, displayPositions, nearestUncutEdge, Point } from "./geometry.js";

export interface Cross {
  point: Point; // world coordinates where the user clicked
  edge: number; // edge the server resolved and cut
}

export class SessionView {
  crosses: Cross[] = [];
  camera = new Camera();
  hoverEdge: number | null = null;
  kind: string;

  constructor(public layout: Layout) {
    this.kind = layout.kind;
    // a reopened session may already have cuts; mirror them as crosses at
    // the cut edges' midpoints so undo still works
    const pos = this.positions();
    for (const edge of layout.cuts) {
      const parent = layout.edges.find(([c]) => c === edge)?.[1];
      if (parent === undefined) continue;
      const mid: Point = [
        (pos[edge][0] + pos[parent][0]) / 2,
        (pos[edge][1] + pos[parent][1]) / 2,
      ];
      this.crosses.push({ point: mid, edge });
    }
  }

  get id(): string {
    return this.layout.id;
  }

  get clusterCount(): number {
    return this.layout.components.k;
  }

  positions(): Point[] {
    return displayPositions(this.layout);
  }

  /** Edge a cross at this world point would cut (hover preview). */
  previewAt(point: Point): number | null {
    return nearestUncutEdge(this.layout, this.positions(), point);
  }

  componentOf(node: number): number {
    return this.layout.components.assignment[node];
  }

  /** True when the cross markers and the server cut set are bijective. */
  crossesMatchCuts(): boolean {
    const cutSet = new Set(this.layout.cuts);
    if (cutSet.size !== this.crosses.length) return false;
    return this.crosses.every((c) => cutSet.has(c.edge));
  }
}

export class Workbench {
  tabs: SessionView[] = [];
  activeIndex = 0;
  banner: string | null = null;
  violations: ViolationReport | null = null;
  /** Merged root assignment from the most recent finalize, node -> component. */
  merged: Map<number, number> | null = null;

  constructor(public api: ApiClient) {}

  get active(): SessionView | null {
    return this.tabs[this.activeIndex] ?? null;
  }

  private fail(err: unknown): null {
    this.banner = err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
    return null;
  }

  async openSession(sessionId: string): Promise<SessionView | null> {
    try {
      const layout = await this.api.layout(sessionId);
      const view = new SessionView(layout);
      view.camera.fit(view.positions(), 800, 600);
      this.tabs.push(view);
      this.activeIndex = this.tabs.length - 1;
      this.banner = null;
      return view;
    } catch (err) {
      return this.fail(err);
    }
  }

  async refresh(view: SessionView): Promise<SessionView | null> {
    try {
      view.layout = await this.api.layout(view.id);
      this.banner = null;
      return view;
    } catch (err) {
      return this.fail(err);
    }
  }

  /** Resolve a cross to its nearest edge server-side and cut it. */
  async placeCross(view: SessionView, point: Point): Promise<number | null> {
    try {
      const resp = await this.api.placeCross(view.id, [point[0], point[1]]);
      view.crosses.push({ point, edge: resp.edge });
      view.layout = await this.api.layout(view.id);
      view.hoverEdge = null;
      this.banner = null;
      return resp.edge;
    } catch (err) {
      return this.fail(err);
    }
  }

  /** Remove the most recent cross and restore its edge. */
  async undo(view: SessionView): Promise<number | null> {
    const cross = view.crosses[view.crosses.length - 1];
    if (!cross) return null;
    try {
      await this.api.restore(view.id, cross.edge);
      view.crosses.pop();
      view.layout = await this.api.layout(view.id);
      this.banner = null;
      return cross.edge;
    } catch (err) {
      return this.fail(err);
    }
  }

  /** Persist a component drag; called on drop, not continuously. */
  async commitOffset(view: SessionView, component: number, deltaX: number): Promise<boolean> {
    try {
      await this.api.setOffset(view.id, component, [deltaX]);
      view.layout = await this.api.layout(view.id);
      this.banner = null;
      return true;
    } catch (err) {
      this.fail(err);
      return false;
    }
  }

  async divide(view: SessionView, component: number): Promise<SessionView | null> {
    try {
      const resp = await this.api.divide(view.id, component);
      view.layout = await this.api.layout(view.id);
      const child = new SessionView(resp.layout);
      child.camera.fit(child.positions(), 800, 600);
      this.tabs.push(child);
      this.activeIndex = this.tabs.length - 1;
      this.banner = null;
      return child;
    } catch (err) {
      return this.fail(err);
    }
  }

  async conquer(view: SessionView, component: number, sigma: number): Promise<SessionView | null> {
    try {
      const resp = await this.api.conquer(view.id, component, sigma);
      view.layout = await this.api.layout(view.id);
      const child = new SessionView(resp.layout);
      child.camera.fit(child.positions(), 800, 600);
      this.tabs.push(child);
      this.activeIndex = this.tabs.length - 1;
      this.banner = null;
      return child;
    } catch (err) {
      return this.fail(err);
    }
  }

  /** Refresh the merged root assignment after finishing work in a child. */
  async finalize(root: SessionView): Promise<Map<number, number> | null> {
    try {
      this.merged = await this.api.assignmentCsv(root.id);
      await this.refresh(root);
      this.banner = null;
      return this.merged;
    } catch (err) {
      return this.fail(err);
    }
  }

  get mergedClusterCount(): number {
    if (!this.merged) return 0;
    return new Set(this.merged.values()).size;
  }

  async refreshViolations(view: SessionView): Promise<ViolationReport | null> {
    try {
      this.violations = await this.api.violations(view.id);
      this.banner = null;
      return this.violations;
    } catch (err) {
      return this.fail(err);
    }
  }
}
