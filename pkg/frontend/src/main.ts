// Bootstrap: palette + editor + inspector on the left, generation
// console on the right. Configuration is a single value - the API base
// URL - read from <meta name="api-base"> (empty means same origin).

import { StudioApi } from "./api.js";
import { GenerationConsole } from "./console.js";
import { WireframeEditor } from "./editor.js";
import {
  createState,
  deleteComponent,
  getComponent,
  paletteTypes,
  retypeComponent,
  setHint,
  toWireframeDocument,
  validateDocument,
} from "./state.js";
import { isComponentType } from "./types.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

const apiBase =
  document.querySelector<HTMLMetaElement>('meta[name="api-base"]')?.content ?? "";
const api = new StudioApi(apiBase);
const state = createState();

const consolePanel = new GenerationConsole(api, {
  status: byId("status"),
  revision: byId("revision"),
  error: byId("error"),
  theme: byId("theme"),
  results: byId("results"),
  generateBtn: byId<HTMLButtonElement>("generate"),
  exportSvgBtn: byId<HTMLButtonElement>("export-svg"),
  exportJsonBtn: byId<HTMLButtonElement>("export-json"),
});

// --- palette: exactly the 13 configured component types -------------------

const paletteEl = byId("palette");
const editor = new WireframeEditor(
  byId("canvas") as unknown as SVGSVGElement,
  state,
  { onChange: refreshValidation, onSelect: renderInspector },
);

for (const type of paletteTypes()) {
  const btn = document.createElement("button");
  btn.textContent = type;
  btn.dataset.type = type;
  btn.addEventListener("click", () => {
    editor.activeType = type;
    paletteEl.querySelectorAll("button").forEach((b) => b.classList.remove("active"));
    btn.classList.add("active");
  });
  paletteEl.appendChild(btn);
}
paletteEl.querySelector("button")?.classList.add("active");

// --- inspector: retype, hint, delete for the selected component -----------

const inspector = byId("inspector");

function renderInspector(selectedId: string | null) {
  inspector.replaceChildren();
  if (!selectedId) {
    inspector.textContent = "select a box, or drag on empty canvas to draw one";
    return;
  }
  const comp = getComponent(state, selectedId);
  if (!comp) return;

  const title = document.createElement("strong");
  title.textContent = comp.id;

  const typeSelect = document.createElement("select");
  for (const type of paletteTypes()) {
    const option = document.createElement("option");
    option.value = type;
    option.textContent = type;
    option.selected = type === comp.type;
    typeSelect.appendChild(option);
  }
  typeSelect.addEventListener("change", () => {
    if (isComponentType(typeSelect.value)) {
      retypeComponent(state, comp.id, typeSelect.value);
      editor.render();
      refreshValidation();
    }
  });

  const hintInput = document.createElement("input");
  hintInput.placeholder = "hint (optional)";
  hintInput.value = comp.hint ?? "";
  hintInput.addEventListener("change", () => {
    setHint(state, comp.id, hintInput.value);
    refreshValidation();
  });

  const deleteBtn = document.createElement("button");
  deleteBtn.textContent = "delete";
  deleteBtn.addEventListener("click", () => {
    deleteComponent(state, comp.id);
    editor.render();
    renderInspector(null);
    refreshValidation();
  });

  inspector.append(title, typeSelect, hintInput, deleteBtn);
}
renderInspector(null);

// --- session creation with inline validation ------------------------------

const validationEl = byId("validation");

function refreshValidation() {
  const errors = state.components.length
    ? validateDocument(toWireframeDocument(state))
    : [];
  validationEl.replaceChildren();
  for (const message of errors) {
    const li = document.createElement("li");
    li.textContent = message;
    validationEl.appendChild(li);
  }
  validationEl.hidden = errors.length === 0;
}

byId<HTMLButtonElement>("create-session").addEventListener("click", () => {
  const prompt = byId<HTMLTextAreaElement>("prompt").value;
  const seedRaw = byId<HTMLInputElement>("seed").value.trim();
  const doc = toWireframeDocument(state);
  const errors = validateDocument(doc);
  if (errors.length) {
    refreshValidation();
    return;
  }
  const seed = seedRaw === "" ? undefined : Number(seedRaw);
  void consolePanel.createSession(prompt, doc, seed);
});
