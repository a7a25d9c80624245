// Generation console: session lifecycle, per-component result panes,
// targeted regeneration and exports. Optimistic updates are forbidden
// by design - every pane renders exclusively from server responses,
// and the revision badge only ever shows what the server reported.

import { ApiError, StudioApi } from "./api.js";
import type {
  ComponentView,
  ManualPayload,
  ThemeInfo,
  WireframeDocument,
} from "./types.js";

export interface ConsoleElements {
  status: HTMLElement;
  revision: HTMLElement;
  error: HTMLElement;
  theme: HTMLElement;
  results: HTMLElement;
  generateBtn: HTMLButtonElement;
  exportSvgBtn: HTMLButtonElement;
  exportJsonBtn: HTMLButtonElement;
}

type PendingAction = { label: string; run: () => Promise<void> } | null;

export class GenerationConsole {
  private readonly api: StudioApi;
  private readonly el: ConsoleElements;
  private sessionId: string | null = null;
  private revision: number | null = null;
  private busy = false;
  private lastAction: PendingAction = null;
  private components: ComponentView[] = [];

  constructor(api: StudioApi, elements: ConsoleElements) {
    this.api = api;
    this.el = elements;
    this.el.generateBtn.addEventListener("click", () => {
      void this.runAction("generate", () => this.doGenerate());
    });
    this.el.exportSvgBtn.addEventListener("click", () => {
      void this.runAction("export SVG", () => this.doExport("svg"));
    });
    this.el.exportJsonBtn.addEventListener("click", () => {
      void this.runAction("export JSON", () => this.doExport("json"));
    });
    this.refreshControls();
  }

  hasSession(): boolean {
    return this.sessionId !== null;
  }

  displayedRevision(): number | null {
    return this.revision;
  }

  /** One active session per tab: creating a new one replaces the old. */
  createSession(prompt: string, wireframe: WireframeDocument, seed?: number): Promise<void> {
    return this.runAction("create session", async () => {
      const created = await this.api.createSession(prompt, wireframe, seed);
      this.sessionId = created.session_id;
      this.revision = created.revision;
      this.components = [];
      this.renderTheme(created.theme);
      this.el.results.replaceChildren();
      this.setStatus(`session ${created.session_id} ready - generate when you like`);
    });
  }

  private async doGenerate(): Promise<void> {
    if (!this.sessionId) throw new Error("create a session first");
    const generated = await this.api.generate(this.sessionId);
    this.revision = generated.revision;
    this.components = generated.components;
    this.renderTheme(generated.theme);
    this.renderResults();
    this.setStatus(`generated ${generated.components.length} components`);
  }

  private async doExport(kind: "svg" | "json"): Promise<void> {
    if (!this.sessionId) throw new Error("create a session first");
    const result = kind === "svg"
      ? await this.api.exportSvg(this.sessionId)
      : await this.api.exportJson(this.sessionId);
    if (this.revision !== null && result.revision !== this.revision) {
      // server is the authority; adopt what the ETag says we received
      this.revision = result.revision;
      this.refreshControls();
    }
    download(
      kind === "svg" ? "prototype.svg" : "prototype.json",
      result.body,
      kind === "svg" ? "image/svg+xml" : "application/json",
    );
    this.setStatus(`exported prototype.${kind} at revision ${result.revision}`);
  }

  private regenerate(componentId: string, override: string): Promise<void> {
    return this.runAction(`regenerate ${componentId}`, async () => {
      if (!this.sessionId) throw new Error("create a session first");
      const body = override.trim() ? { override: override.trim() } : {};
      const updated = await this.api.regenerate(this.sessionId, componentId, body);
      this.revision = updated.revision;
      this.replaceComponent(updated.component);
      this.setStatus(`regenerated ${componentId} (revision ${updated.revision})`);
    });
  }

  private manualEdit(componentId: string, payload: ManualPayload): Promise<void> {
    return this.runAction(`edit ${componentId}`, async () => {
      if (!this.sessionId) throw new Error("create a session first");
      const updated = await this.api.regenerate(this.sessionId, componentId, { payload });
      this.revision = updated.revision;
      this.replaceComponent(updated.component);
      this.setStatus(`edited ${componentId} (revision ${updated.revision})`);
    });
  }

  private replaceComponent(view: ComponentView) {
    this.components = this.components.map((c) =>
      c.component_id === view.component_id ? view : c,
    );
    this.renderResults();
  }

  /** Serializes mutations; while one is in flight every control is disabled. */
  private async runAction(label: string, run: () => Promise<void>): Promise<void> {
    if (this.busy) return;
    this.busy = true;
    this.lastAction = { label, run };
    this.clearError();
    this.setStatus(`${label}...`);
    this.refreshControls();
    try {
      await run();
    } catch (err) {
      this.showError(label, err);
    } finally {
      this.busy = false;
      this.refreshControls();
    }
  }

  private refreshControls() {
    const enabled = !this.busy && this.sessionId !== null;
    this.el.generateBtn.disabled = !enabled;
    this.el.exportSvgBtn.disabled = !enabled || this.components.length === 0;
    this.el.exportJsonBtn.disabled = !enabled || this.components.length === 0;
    this.el.results
      .querySelectorAll<HTMLButtonElement>("button, input, textarea")
      .forEach((control) => {
        control.disabled = this.busy;
      });
    this.el.revision.textContent =
      this.revision === null ? "no session" : `revision ${this.revision}`;
  }

  private setStatus(text: string) {
    this.el.status.textContent = text;
  }

  private clearError() {
    this.el.error.replaceChildren();
    this.el.error.hidden = true;
  }

  /** Errors show the server document verbatim, plus a retry affordance. */
  private showError(label: string, err: unknown) {
    this.el.error.hidden = false;
    this.el.error.replaceChildren();
    const heading = document.createElement("strong");
    const body = document.createElement("pre");
    if (err instanceof ApiError) {
      heading.textContent = `${label} failed (${err.status} ${err.doc.code})`;
      body.textContent = JSON.stringify(err.doc, null, 2);
      if (err.status === 409) {
        this.setStatus("a mutation is already in progress on this session");
      } else {
        this.setStatus(`${label} failed`);
      }
    } else {
      heading.textContent = `${label} failed`;
      body.textContent = String(err);
      this.setStatus(`${label} failed`);
    }
    const retry = document.createElement("button");
    retry.textContent = "retry";
    retry.addEventListener("click", () => {
      const action = this.lastAction;
      if (action) void this.runAction(action.label, action.run);
    });
    this.el.error.append(heading, body, retry);
  }

  private renderTheme(theme: ThemeInfo) {
    this.el.theme.replaceChildren();
    const swatches = document.createElement("div");
    swatches.className = "swatches";
    for (const color of [theme.theme_color, theme.primary_color]) {
      const chip = document.createElement("span");
      chip.className = "swatch";
      chip.style.background = color;
      chip.title = color;
      swatches.appendChild(chip);
    }
    const title = document.createElement("div");
    title.textContent = `${theme.app_category} - theme ${theme.theme_color}, primary ${theme.primary_color}`;
    const narrative = document.createElement("p");
    narrative.textContent = theme.narrative;
    this.el.theme.append(swatches, title, narrative);
  }

  private renderResults() {
    this.el.results.replaceChildren();
    for (const comp of this.components) {
      this.el.results.appendChild(this.resultPane(comp));
    }
    this.refreshControls();
  }

  private resultPane(comp: ComponentView): HTMLElement {
    const pane = document.createElement("section");
    pane.className = "result";
    pane.dataset.componentId = comp.component_id;

    const header = document.createElement("header");
    header.textContent = `${comp.component_id} - ${comp.type} (${comp.kind})`;
    pane.appendChild(header);

    const summary = document.createElement("p");
    summary.className = "summary";
    summary.textContent = comp.summary;
    pane.appendChild(summary);

    const overrideInput = document.createElement("input");
    overrideInput.placeholder = "override, e.g. use the word Checkout";
    const regenBtn = document.createElement("button");
    regenBtn.textContent = "regenerate";
    regenBtn.addEventListener("click", () => {
      void this.regenerate(comp.component_id, overrideInput.value);
    });
    const row = document.createElement("div");
    row.className = "row";
    row.append(overrideInput, regenBtn);
    pane.appendChild(row);

    // direct manual edit for the payload kinds a text box can express
    if (comp.kind === "text" || comp.kind === "color") {
      const editInput = document.createElement("input");
      editInput.placeholder = comp.kind === "text" ? "replace text..." : "replace color #RRGGBB";
      const editBtn = document.createElement("button");
      editBtn.textContent = "apply edit";
      editBtn.addEventListener("click", () => {
        const value = editInput.value.trim();
        if (!value) return;
        const payload: ManualPayload =
          comp.kind === "text" ? { kind: "text", text: value } : { kind: "color", color: value };
        void this.manualEdit(comp.component_id, payload);
      });
      const editRow = document.createElement("div");
      editRow.className = "row";
      editRow.append(editInput, editBtn);
      pane.appendChild(editRow);
    }

    // provenance viewer: the exact composed prompt this component saw
    const details = document.createElement("details");
    const label = document.createElement("summary");
    label.textContent = `prompt (${comp.backend}, digest ${comp.provenance_digest})`;
    const prompt = document.createElement("pre");
    prompt.textContent = comp.prompt;
    details.append(label, prompt);
    pane.appendChild(details);

    return pane;
  }
}

function download(name: string, body: string, mime: string) {
  const blob = new Blob([body], { type: mime });
  const url = URL.createObjectURL(blob);
  const a = document.createElement("a");
  a.href = url;
  a.download = name;
  a.click();
  URL.revokeObjectURL(url);
}
