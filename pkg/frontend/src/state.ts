// Editor canvas state and its operations. Everything here is plain data
// and pure-ish mutations so the whole editing model unit-tests without
// a DOM; the SVG editor is only a view over this state.

import {
  COMPONENT_TYPES,
  isComponentType,
  type ComponentTypeName,
  type WireframeComponentDoc,
  type WireframeDocument,
} from "./types.js";

export interface EditorComponent {
  id: string;
  type: ComponentTypeName;
  x: number;
  y: number;
  w: number;
  h: number;
  hint?: string;
}

export interface CanvasState {
  canvasW: number;
  canvasH: number;
  components: EditorComponent[];
  selectedId: string | null;
  dirty: boolean;
}

export const SNAP_GRID = 20;
export const MIN_SIZE = 20;

export function createState(canvasW = 1440, canvasH = 2560): CanvasState {
  return { canvasW, canvasH, components: [], selectedId: null, dirty: false };
}

export function snap(value: number, grid = SNAP_GRID): number {
  return Math.round(value / grid) * grid;
}

const clamp = (v: number, lo: number, hi: number) => Math.min(hi, Math.max(lo, v));

/** ids are `<type-in-lowercase>-<n>`, unique within the wireframe. */
export function uniqueId(state: CanvasState, type: ComponentTypeName): string {
  const prefix = type.toLowerCase();
  const taken = new Set(state.components.map((c) => c.id));
  for (let n = 1; ; n++) {
    const candidate = `${prefix}-${n}`;
    if (!taken.has(candidate)) return candidate;
  }
}

export function getComponent(state: CanvasState, id: string): EditorComponent | undefined {
  return state.components.find((c) => c.id === id);
}

export function addComponent(
  state: CanvasState,
  type: ComponentTypeName,
  x: number,
  y: number,
  w: number,
  h: number,
): EditorComponent {
  let sx = clamp(snap(x), 0, state.canvasW - MIN_SIZE);
  let sy = clamp(snap(y), 0, state.canvasH - MIN_SIZE);
  const sw = clamp(Math.max(snap(w), MIN_SIZE), MIN_SIZE, state.canvasW - sx);
  const sh = clamp(Math.max(snap(h), MIN_SIZE), MIN_SIZE, state.canvasH - sy);
  const comp: EditorComponent = { id: uniqueId(state, type), type, x: sx, y: sy, w: sw, h: sh };
  state.components.push(comp);
  state.selectedId = comp.id;
  state.dirty = true;
  return comp;
}

export function moveComponent(state: CanvasState, id: string, dx: number, dy: number): void {
  const comp = getComponent(state, id);
  if (!comp) return;
  comp.x = clamp(snap(comp.x + dx), 0, state.canvasW - comp.w);
  comp.y = clamp(snap(comp.y + dy), 0, state.canvasH - comp.h);
  state.dirty = true;
}

export function resizeComponent(state: CanvasState, id: string, w: number, h: number): void {
  const comp = getComponent(state, id);
  if (!comp) return;
  comp.w = clamp(Math.max(snap(w), MIN_SIZE), MIN_SIZE, state.canvasW - comp.x);
  comp.h = clamp(Math.max(snap(h), MIN_SIZE), MIN_SIZE, state.canvasH - comp.y);
  state.dirty = true;
}

export function retypeComponent(state: CanvasState, id: string, type: ComponentTypeName): void {
  const comp = getComponent(state, id);
  if (!comp) return;
  comp.type = type;
  state.dirty = true;
}

export function setHint(state: CanvasState, id: string, hint: string): void {
  const comp = getComponent(state, id);
  if (!comp) return;
  if (hint.trim()) {
    comp.hint = hint;
  } else {
    delete comp.hint;
  }
  state.dirty = true;
}

export function deleteComponent(state: CanvasState, id: string): void {
  const index = state.components.findIndex((c) => c.id === id);
  if (index < 0) return;
  state.components.splice(index, 1);
  if (state.selectedId === id) state.selectedId = null;
  state.dirty = true;
}

export function toWireframeDocument(state: CanvasState): WireframeDocument {
  return {
    canvas_w: state.canvasW,
    canvas_h: state.canvasH,
    components: state.components.map((c) => {
      const doc: WireframeComponentDoc = {
        id: c.id,
        type: c.type,
        x: c.x,
        y: c.y,
        w: c.w,
        h: c.h,
      };
      if (c.hint) doc.hint = c.hint;
      return doc;
    }),
  };
}

/**
 * Mirror of the server's wireframe validation, so problems show inline
 * before a request is made. The server remains the authority; anything
 * flagged here would come back as a 400 with the same meaning.
 */
export function validateDocument(doc: WireframeDocument): string[] {
  const errors: string[] = [];
  if (!Number.isInteger(doc.canvas_w) || doc.canvas_w < 1) errors.push("canvas_w must be a positive integer");
  if (!Number.isInteger(doc.canvas_h) || doc.canvas_h < 1) errors.push("canvas_h must be a positive integer");
  if (doc.components.length === 0) errors.push("wireframe needs at least one component");
  const seen = new Set<string>();
  for (const c of doc.components) {
    if (!c.id) errors.push("a component is missing its id");
    if (seen.has(c.id)) errors.push(`duplicate component id '${c.id}'`);
    seen.add(c.id);
    if (!isComponentType(c.type)) errors.push(`component '${c.id}': unknown type '${c.type}'`);
    for (const [name, v] of Object.entries({ x: c.x, y: c.y, w: c.w, h: c.h })) {
      if (!Number.isInteger(v)) errors.push(`component '${c.id}': ${name} must be an integer`);
    }
    if (c.w <= 0 || c.h <= 0) errors.push(`component '${c.id}': extent must be positive`);
    if (c.x < 0 || c.y < 0 || c.x + c.w > doc.canvas_w || c.y + c.h > doc.canvas_h) {
      errors.push(`component '${c.id}': lies outside the ${doc.canvas_w}x${doc.canvas_h} canvas`);
    }
  }
  return errors;
}

export function paletteTypes(): readonly ComponentTypeName[] {
  return COMPONENT_TYPES;
}
