/**
 * Canvas drawing of one session view.  Takes the subset of the 2D context it
 * actually uses so tests can pass a recording stub.
 */

import { componentColor } from "./colors.js";
import { Point } from "./geometry.js";
import { SessionView } from "./state.js";

export interface Canvas2D {
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  stroke(): void;
  fill(): void;
  setLineDash(segments: number[]): void;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  fillStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
}

export function drawView(ctx: Canvas2D, view: SessionView, width: number, height: number): void {
  ctx.clearRect(0, 0, width, height);
  const positions = view.positions();
  const screen: Point[] = positions.map((p) => view.camera.toScreen(p));
  const cuts = new Set(view.layout.cuts);
  const assignment = view.layout.components.assignment;

  // intact edges, colored by component
  ctx.setLineDash([]);
  ctx.lineWidth = 1;
  for (const [child, parent] of view.layout.edges) {
    if (cuts.has(child)) continue;
    ctx.strokeStyle = child === view.hoverEdge ? "#000000" : componentColor(assignment[child]);
    ctx.lineWidth = child === view.hoverEdge ? 2.5 : 1;
    ctx.beginPath();
    ctx.moveTo(screen[child][0], screen[child][1]);
    ctx.lineTo(screen[parent][0], screen[parent][1]);
    ctx.stroke();
  }

  // cut edges, dashed
  ctx.setLineDash([6, 4]);
  ctx.strokeStyle = "#d62728";
  ctx.lineWidth = 1.2;
  for (const [child, parent] of view.layout.edges) {
    if (!cuts.has(child)) continue;
    ctx.beginPath();
    ctx.moveTo(screen[child][0], screen[child][1]);
    ctx.lineTo(screen[parent][0], screen[parent][1]);
    ctx.stroke();
  }
  ctx.setLineDash([]);

  // nodes
  for (let node = 0; node < screen.length; node++) {
    ctx.fillStyle = componentColor(assignment[node]);
    ctx.beginPath();
    ctx.arc(screen[node][0], screen[node][1], 3, 0, 2 * Math.PI);
    ctx.fill();
  }

  // cross markers at the user's recorded click points
  ctx.strokeStyle = "#d62728";
  ctx.lineWidth = 2;
  for (const cross of view.crosses) {
    const [cx, cy] = view.camera.toScreen(cross.point);
    ctx.beginPath();
    ctx.moveTo(cx - 5, cy - 5);
    ctx.lineTo(cx + 5, cy + 5);
    ctx.stroke();
    ctx.beginPath();
    ctx.moveTo(cx - 5, cy + 5);
    ctx.lineTo(cx + 5, cy - 5);
    ctx.stroke();
  }
}
