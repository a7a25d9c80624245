// Shared types: the wireframe document schema and the /v1 API shapes.

/** The 13 component types the engine dispatches on; the palette shows exactly these. */
export const COMPONENT_TYPES = [
  "Text",
  "TextButton",
  "Image",
  "BackgroundImage",
  "Icon",
  "Toolbar",
  "ListItem",
  "Input",
  "Card",
  "Checkbox",
  "RadioButton",
  "Drawer",
  "Modal",
] as const;

export type ComponentTypeName = (typeof COMPONENT_TYPES)[number];

export function isComponentType(value: string): value is ComponentTypeName {
  return (COMPONENT_TYPES as readonly string[]).includes(value);
}

/** One box in the wireframe document (source pixel coordinates). */
export interface WireframeComponentDoc {
  id: string;
  type: ComponentTypeName;
  x: number;
  y: number;
  w: number;
  h: number;
  hint?: string;
}

export interface WireframeDocument {
  canvas_w: number;
  canvas_h: number;
  components: WireframeComponentDoc[];
}

// --- API response shapes ----------------------------------------------------

export interface ComponentHints {
  text_hint: string | null;
  image_prompt: string | null;
  icon_hint: string | null;
}

export interface ThemeInfo {
  theme_color: string;
  primary_color: string;
  app_category: string;
  narrative: string;
  component_hints: Record<string, ComponentHints>;
}

export interface ComponentView {
  component_id: string;
  type: string;
  bbox: [number, number, number, number];
  kind: "text" | "image" | "icon" | "color";
  summary: string;
  prompt: string;
  backend: string;
  provenance_digest: string;
  notes: string[];
}

export interface CreateSessionResponse {
  session_id: string;
  revision: number;
  theme: ThemeInfo;
}

export interface GenerateResponse {
  session_id: string;
  revision: number;
  theme: ThemeInfo;
  components: ComponentView[];
}

export interface RegenerateResponse {
  session_id: string;
  revision: number;
  component: ComponentView;
}

export interface SessionInfo {
  session_id: string;
  revision: number;
  generated: boolean;
  prompt: string;
  wireframe: WireframeDocument & { units?: string };
  theme: ThemeInfo;
  components: ComponentView[];
}

/** Server error bodies: {code, message, detail?}; surfaced verbatim in the UI. */
export interface ErrorDocument {
  code: string;
  message: string;
  detail?: unknown;
}

/** A manual payload replacement for the direct-edit path. */
export type ManualPayload =
  | { kind: "text"; text: string }
  | { kind: "color"; color: string }
  | { kind: "icon"; svg: string; phrase?: string; icon_name?: string }
  | { kind: "image"; png_base64: string; prompt?: string };

export interface ExportResult {
  body: string;
  etag: string;
  revision: number;
}
