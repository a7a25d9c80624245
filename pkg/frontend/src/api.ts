// Typed client for the /v1 session API. Every UI action maps 1:1 onto
// one of these calls; no generation logic lives on this side of the wire.

import type {
  CreateSessionResponse,
  ErrorDocument,
  ExportResult,
  GenerateResponse,
  ManualPayload,
  RegenerateResponse,
  SessionInfo,
  WireframeDocument,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly doc: ErrorDocument;

  constructor(status: number, doc: ErrorDocument) {
    super(doc.message);
    this.status = status;
    this.doc = doc;
  }
}

function parseEtagRevision(etag: string | null): number {
  if (!etag) return NaN;
  const m = etag.match(/"?(\d+)"?/);
  return m ? Number(m[1]) : NaN;
}

export class StudioApi {
  private readonly baseUrl: string;
  private readonly fetchFn: typeof fetch;

  constructor(baseUrl = "", fetchFn: typeof fetch = fetch) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchFn = fetchFn;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchFn(`${this.baseUrl}${path}`, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    if (!res.ok) {
      throw new ApiError(res.status, await readErrorDocument(res));
    }
    return (await res.json()) as T;
  }

  createSession(
    prompt: string,
    wireframe: WireframeDocument,
    seed?: number,
  ): Promise<CreateSessionResponse> {
    return this.request("/v1/sessions", {
      method: "POST",
      body: JSON.stringify({ prompt, wireframe, seed: seed ?? null }),
    });
  }

  inspect(sessionId: string): Promise<SessionInfo> {
    return this.request(`/v1/sessions/${encodeURIComponent(sessionId)}`);
  }

  generate(sessionId: string): Promise<GenerateResponse> {
    return this.request(`/v1/sessions/${encodeURIComponent(sessionId)}/generate`, {
      method: "POST",
    });
  }

  regenerate(
    sessionId: string,
    componentId: string,
    body: { override?: string; payload?: ManualPayload },
  ): Promise<RegenerateResponse> {
    const path =
      `/v1/sessions/${encodeURIComponent(sessionId)}` +
      `/components/${encodeURIComponent(componentId)}/regenerate`;
    return this.request(path, { method: "POST", body: JSON.stringify(body) });
  }

  exportSvg(sessionId: string): Promise<ExportResult> {
    return this.export(sessionId, "prototype.svg");
  }

  exportJson(sessionId: string): Promise<ExportResult> {
    return this.export(sessionId, "prototype.json");
  }

  private async export(sessionId: string, name: string): Promise<ExportResult> {
    const res = await this.fetchFn(
      `${this.baseUrl}/v1/sessions/${encodeURIComponent(sessionId)}/${name}`,
    );
    if (!res.ok) {
      throw new ApiError(res.status, await readErrorDocument(res));
    }
    const etag = res.headers.get("etag") ?? "";
    return { body: await res.text(), etag, revision: parseEtagRevision(etag) };
  }
}

async function readErrorDocument(res: Response): Promise<ErrorDocument> {
  try {
    const doc = (await res.json()) as ErrorDocument;
    if (doc && typeof doc.code === "string" && typeof doc.message === "string") {
      return doc;
    }
    return { code: `http_${res.status}`, message: JSON.stringify(doc) };
  } catch {
    return { code: `http_${res.status}`, message: res.statusText || "request failed" };
  }
}
