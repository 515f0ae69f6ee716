/**
 * DOM shell: tabs, canvas interaction (hover preview, crosses, component
 * drag, pan/zoom), undo, divide/conquer controls with the sigma slider, the
 * violations panel, and the error banner.
 */

import { componentColor } from "./colors.js";
import { nearestNode, Point } from "./geometry.js";
import { drawView } from "./render.js";
import { SessionView, Workbench } from "./state.js";

const CANVAS_W = 800;
const CANVAS_H = 600;

type DragState =
  | { mode: "pan"; lastX: number; lastY: number }
  | { mode: "component"; component: number; startWorld: Point; deltaX: number };

export class App {
  private canvas: HTMLCanvasElement;
  private ctx: CanvasRenderingContext2D;
  private tabsBar: HTMLElement;
  private bannerEl: HTMLElement;
  private statusEl: HTMLElement;
  private violationsEl: HTMLElement;
  private sigmaDialog: HTMLElement;
  private sigmaSlider: HTMLInputElement;
  private sigmaValue: HTMLElement;
  private drag: DragState | null = null;
  private selectedComponent = 0;

  constructor(
    private bench: Workbench,
    private rootEl: HTMLElement,
  ) {
    this.rootEl.innerHTML = `
      <div class="toolbar">
        <button data-act="undo">undo cross</button>
        <label>component <input type="number" data-role="component" value="0" min="0" style="width:4em"></label>
        <button data-act="divide">divide</button>
        <button data-act="conquer">conquer&hellip;</button>
        <button data-act="finalize">finalize &rarr; merged view</button>
        <span data-role="status"></span>
      </div>
      <div class="banner" data-role="banner" hidden></div>
      <div class="tabs" data-role="tabs"></div>
      <canvas width="${CANVAS_W}" height="${CANVAS_H}"></canvas>
      <div class="sigma-dialog" data-role="sigma" hidden>
        <label>sigma for conquer:
          <input type="range" min="-2" max="4" step="0.05" value="0">
        </label>
        <span data-role="sigma-value">1</span>
        <button data-act="conquer-go">rebuild</button>
        <button data-act="conquer-cancel">cancel</button>
      </div>
      <pre class="violations" data-role="violations"></pre>
    `;
    this.canvas = this.rootEl.querySelector("canvas")!;
    this.ctx = this.canvas.getContext("2d")!;
    this.tabsBar = this.rootEl.querySelector('[data-role="tabs"]')!;
    this.bannerEl = this.rootEl.querySelector('[data-role="banner"]')!;
    this.statusEl = this.rootEl.querySelector('[data-role="status"]')!;
    this.violationsEl = this.rootEl.querySelector('[data-role="violations"]')!;
    this.sigmaDialog = this.rootEl.querySelector('[data-role="sigma"]')!;
    this.sigmaSlider = this.sigmaDialog.querySelector("input")!;
    this.sigmaValue = this.rootEl.querySelector('[data-role="sigma-value"]')!;
    this.wireEvents();
  }

  private view(): SessionView | null {
    return this.bench.active;
  }

  private componentInput(): number {
    const input = this.rootEl.querySelector<HTMLInputElement>('[data-role="component"]')!;
    return Number(input.value) || 0;
  }

  private wireEvents(): void {
    this.rootEl.querySelector('[data-act="undo"]')!.addEventListener("click", async () => {
      const view = this.view();
      if (view) {
        await this.bench.undo(view);
        this.redraw();
      }
    });
    this.rootEl.querySelector('[data-act="divide"]')!.addEventListener("click", async () => {
      const view = this.view();
      if (view) {
        await this.bench.divide(view, this.componentInput());
        this.redraw();
      }
    });
    this.rootEl.querySelector('[data-act="conquer"]')!.addEventListener("click", () => {
      this.sigmaDialog.hidden = false;
    });
    this.sigmaSlider.addEventListener("input", () => {
      this.sigmaValue.textContent = this.sliderSigma().toPrecision(3);
    });
    this.sigmaDialog.querySelector('[data-act="conquer-go"]')!.addEventListener("click", async () => {
      this.sigmaDialog.hidden = true;
      const view = this.view();
      if (view) {
        await this.bench.conquer(view, this.componentInput(), this.sliderSigma());
        this.redraw();
      }
    });
    this.sigmaDialog.querySelector('[data-act="conquer-cancel"]')!.addEventListener("click", () => {
      this.sigmaDialog.hidden = true;
    });
    this.rootEl.querySelector('[data-act="finalize"]')!.addEventListener("click", async () => {
      const root = this.bench.tabs[0];
      if (root) {
        await this.bench.finalize(root);
        await this.bench.refreshViolations(root);
        this.bench.activeIndex = 0;
        this.redraw();
      }
    });

    this.canvas.addEventListener("mousemove", (ev) => this.onMove(ev));
    this.canvas.addEventListener("mousedown", (ev) => this.onDown(ev));
    this.canvas.addEventListener("mouseup", (ev) => void this.onUp(ev));
    this.canvas.addEventListener("click", (ev) => void this.onClick(ev));
    this.canvas.addEventListener("wheel", (ev) => {
      const view = this.view();
      if (!view) return;
      ev.preventDefault();
      view.camera.zoomAt(this.screenPoint(ev), ev.deltaY < 0 ? 1.15 : 1 / 1.15);
      this.redraw();
    });
  }

  private sliderSigma(): number {
    return Math.pow(10, Number(this.sigmaSlider.value));
  }

  private screenPoint(ev: MouseEvent): Point {
    const rect = this.canvas.getBoundingClientRect();
    return [ev.clientX - rect.left, ev.clientY - rect.top];
  }

  private onMove(ev: MouseEvent): void {
    const view = this.view();
    if (!view) return;
    const screen = this.screenPoint(ev);
    if (this.drag?.mode === "pan") {
      view.camera.panBy(screen[0] - this.drag.lastX, screen[1] - this.drag.lastY);
      this.drag.lastX = screen[0];
      this.drag.lastY = screen[1];
      this.redraw();
      return;
    }
    if (this.drag?.mode === "component") {
      const world = view.camera.toWorld(screen);
      this.drag.deltaX = world[0] - this.drag.startWorld[0];
      this.redraw();
      return;
    }
    const world = view.camera.toWorld(screen);
    const preview = view.previewAt(world);
    if (preview !== view.hoverEdge) {
      view.hoverEdge = preview;
      this.redraw();
    }
  }

  private onDown(ev: MouseEvent): void {
    const view = this.view();
    if (!view) return;
    const screen = this.screenPoint(ev);
    const world = view.camera.toWorld(screen);
    if (ev.shiftKey) {
      // shift-drag moves the component under the cursor
      const grabRadius = 12 / view.camera.scale;
      const node = nearestNode(view.positions(), world, grabRadius);
      if (node !== null) {
        this.drag = { mode: "component", component: view.componentOf(node), startWorld: world, deltaX: 0 };
        return;
      }
    }
    if (ev.button === 1 || ev.altKey) {
      this.drag = { mode: "pan", lastX: screen[0], lastY: screen[1] };
    }
  }

  private async onUp(_ev: MouseEvent): Promise<void> {
    const view = this.view();
    if (view && this.drag?.mode === "component" && this.drag.deltaX !== 0) {
      // offsets accumulate server-side relative to the embedding, so send
      // the current offset plus the drag delta
      const comp = this.drag.component;
      const reps = new Map(view.layout.offsets);
      let current = 0;
      view.layout.components.assignment.forEach((c, node) => {
        if (c === comp && reps.has(node)) current = reps.get(node)![0] ?? 0;
      });
      await this.bench.commitOffset(view, comp, current + this.drag.deltaX);
      this.redraw();
    }
    this.drag = null;
  }

  private async onClick(ev: MouseEvent): Promise<void> {
    const view = this.view();
    if (!view || ev.shiftKey || ev.altKey || this.drag) return;
    const world = view.camera.toWorld(this.screenPoint(ev));
    await this.bench.placeCross(view, world);
    this.redraw();
  }

  redraw(): void {
    const view = this.view();
    this.bannerEl.hidden = !this.bench.banner;
    this.bannerEl.textContent = this.bench.banner ?? "";
    this.tabsBar.innerHTML = "";
    this.bench.tabs.forEach((tab, i) => {
      const btn = document.createElement("button");
      btn.textContent = `${tab.kind} ${tab.id.slice(0, 6)} (k=${tab.clusterCount})`;
      btn.classList.toggle("active", i === this.bench.activeIndex);
      btn.addEventListener("click", () => {
        this.bench.activeIndex = i;
        this.redraw();
      });
      this.tabsBar.appendChild(btn);
    });
    if (!view) return;
    drawView(this.ctx, view, CANVAS_W, CANVAS_H);
    if (this.drag?.mode === "component") {
      // cheap drag feedback: translate the offsets locally for the preview
      const comp = this.drag.component;
      const delta = this.drag.deltaX;
      const positions = view.positions();
      this.ctx.strokeStyle = componentColor(comp);
      this.ctx.setLineDash([2, 2]);
      view.layout.components.assignment.forEach((c, node) => {
        if (c !== comp) return;
        const [sx, sy] = view.camera.toScreen([positions[node][0] + delta, positions[node][1]]);
        this.ctx.beginPath();
        this.ctx.arc(sx, sy, 3, 0, 2 * Math.PI);
        this.ctx.stroke();
      });
      this.ctx.setLineDash([]);
    }
    const merged = this.bench.mergedClusterCount;
    this.statusEl.textContent =
      `k=${view.clusterCount}, cuts=${view.layout.cuts.length}` + (merged ? `, merged k=${merged}` : "");
    if (this.bench.violations) {
      const v = this.bench.violations;
      this.violationsEl.textContent =
        `must-link violations: ${JSON.stringify(v.must_link)}\n` +
        `cannot-link violations: ${JSON.stringify(v.cannot_link)}\n` +
        `mixed-label components: ${JSON.stringify(v.mixed_label_components)}`;
    }
  }
}
