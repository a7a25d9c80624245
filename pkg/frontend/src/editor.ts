// SVG wireframe editor: draw with the active palette type, drag to
// move, corner handle to resize, click to select. All geometry changes
// go through the state module; this class only renders and translates
// pointer events.

import {
  addComponent,
  getComponent,
  moveComponent,
  resizeComponent,
  type CanvasState,
} from "./state.js";
import type { ComponentTypeName } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const HANDLE_SIZE = 14;

type DragMode =
  | { kind: "draw"; startX: number; startY: number; rect: SVGRectElement }
  | { kind: "move"; id: string; lastX: number; lastY: number }
  | { kind: "resize"; id: string };

export interface EditorCallbacks {
  onChange(): void;
  onSelect(id: string | null): void;
}

export class WireframeEditor {
  private readonly svg: SVGSVGElement;
  private readonly state: CanvasState;
  private readonly callbacks: EditorCallbacks;
  private drag: DragMode | null = null;
  activeType: ComponentTypeName = "Text";

  constructor(svg: SVGSVGElement, state: CanvasState, callbacks: EditorCallbacks) {
    this.svg = svg;
    this.state = state;
    this.callbacks = callbacks;
    svg.setAttribute("viewBox", `0 0 ${state.canvasW} ${state.canvasH}`);
    svg.addEventListener("pointerdown", (e) => this.onPointerDown(e));
    svg.addEventListener("pointermove", (e) => this.onPointerMove(e));
    svg.addEventListener("pointerup", (e) => this.onPointerUp(e));
    this.render();
  }

  private toCanvas(e: PointerEvent): { x: number; y: number } {
    const rect = this.svg.getBoundingClientRect();
    return {
      x: ((e.clientX - rect.left) / rect.width) * this.state.canvasW,
      y: ((e.clientY - rect.top) / rect.height) * this.state.canvasH,
    };
  }

  private onPointerDown(e: PointerEvent) {
    this.svg.setPointerCapture(e.pointerId);
    const { x, y } = this.toCanvas(e);
    const target = e.target as Element;
    const handleFor = target.getAttribute("data-handle-for");
    if (handleFor) {
      this.drag = { kind: "resize", id: handleFor };
      return;
    }
    const componentId = target.closest("[data-component-id]")?.getAttribute("data-component-id");
    if (componentId) {
      this.state.selectedId = componentId;
      this.callbacks.onSelect(componentId);
      this.drag = { kind: "move", id: componentId, lastX: x, lastY: y };
      this.render();
      return;
    }
    // empty canvas: start drawing a new box of the active palette type
    const rect = document.createElementNS(SVG_NS, "rect");
    rect.setAttribute("class", "draft");
    this.svg.appendChild(rect);
    this.drag = { kind: "draw", startX: x, startY: y, rect };
    this.state.selectedId = null;
    this.callbacks.onSelect(null);
    this.render();
    this.svg.appendChild(rect); // keep the draft above the re-rendered boxes
  }

  private onPointerMove(e: PointerEvent) {
    if (!this.drag) return;
    const { x, y } = this.toCanvas(e);
    if (this.drag.kind === "draw") {
      const { startX, startY, rect } = this.drag;
      rect.setAttribute("x", String(Math.min(x, startX)));
      rect.setAttribute("y", String(Math.min(y, startY)));
      rect.setAttribute("width", String(Math.abs(x - startX)));
      rect.setAttribute("height", String(Math.abs(y - startY)));
    } else if (this.drag.kind === "move") {
      moveComponent(this.state, this.drag.id, x - this.drag.lastX, y - this.drag.lastY);
      this.drag.lastX = x;
      this.drag.lastY = y;
      this.render();
    } else {
      const comp = getComponent(this.state, this.drag.id);
      if (comp) {
        resizeComponent(this.state, this.drag.id, x - comp.x, y - comp.y);
        this.render();
      }
    }
  }

  private onPointerUp(e: PointerEvent) {
    if (!this.drag) return;
    if (this.drag.kind === "draw") {
      const { startX, startY, rect } = this.drag;
      rect.remove();
      const { x, y } = this.toCanvas(e);
      const w = Math.abs(x - startX);
      const h = Math.abs(y - startY);
      if (w > 5 && h > 5) {
        const comp = addComponent(
          this.state, this.activeType,
          Math.min(x, startX), Math.min(y, startY), w, h,
        );
        this.callbacks.onSelect(comp.id);
      }
    }
    this.drag = null;
    this.render();
    this.callbacks.onChange();
  }

  render(): void {
    this.svg.querySelectorAll("[data-component-id], [data-handle-for]").forEach((n) => n.remove());
    for (const comp of this.state.components) {
      const group = document.createElementNS(SVG_NS, "g");
      group.setAttribute("data-component-id", comp.id);
      group.setAttribute("class", comp.id === this.state.selectedId ? "box selected" : "box");

      const rect = document.createElementNS(SVG_NS, "rect");
      rect.setAttribute("x", String(comp.x));
      rect.setAttribute("y", String(comp.y));
      rect.setAttribute("width", String(comp.w));
      rect.setAttribute("height", String(comp.h));
      group.appendChild(rect);

      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("x", String(comp.x + 10));
      label.setAttribute("y", String(comp.y + 34));
      label.textContent = `${comp.id} (${comp.type})`;
      group.appendChild(label);

      this.svg.appendChild(group);

      if (comp.id === this.state.selectedId) {
        const scale = this.state.canvasW / this.svg.getBoundingClientRect().width || 1;
        const s = HANDLE_SIZE * scale;
        const handle = document.createElementNS(SVG_NS, "rect");
        handle.setAttribute("data-handle-for", comp.id);
        handle.setAttribute("class", "handle");
        handle.setAttribute("x", String(comp.x + comp.w - s / 2));
        handle.setAttribute("y", String(comp.y + comp.h - s / 2));
        handle.setAttribute("width", String(s));
        handle.setAttribute("height", String(s));
        this.svg.appendChild(handle);
      }
    }
  }
}
