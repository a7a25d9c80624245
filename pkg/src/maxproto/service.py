"""Session-based HTTP service: the generate / inspect / regenerate / export loop.

Sessions live in memory behind a per-session mutation lock (mutations
are serialized; a second writer gets 409), with an optional append-only
snapshot directory that persists generated prototypes across restarts.
Every response the UI needs is derived from server state - revisions
double as ETags so clients can tell exactly which prototype they hold.

All error bodies follow ``{code, message, detail?}``.
"""

from __future__ import annotations

import hashlib
import json
import re
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .agents import GenerationOptions, TemplateSet, generate_theme, orchestrate
from .agents.orchestrate import regenerate_component, replace_component_payload
from .agents.theme import ThemeOutcome
from .backends.base import BackendBundle
from .errors import (
    BackendError,
    GenerationError,
    InputError,
    MaxprotoError,
    PartialPrototypeError,
)
from .kb import KnowledgeStore
from .model import (
    ColorPayload,
    ComponentResult,
    GenerationRequest,
    IconPayload,
    ImagePayload,
    Prototype,
    TextPayload,
    ThemeDescription,
    parse_wireframe,
    wireframe_to_document,
)
from .raster import Raster
from .render import RenderOptions, document_to_json, parse_document, render_document, render_svg

DEFAULT_SESSION_TTL = 24 * 3600.0


class CreateSessionBody(BaseModel):
    prompt: str
    wireframe: dict
    seed: int | None = None


class RegenerateBody(BaseModel):
    override: str | None = None
    payload: dict | None = None


@dataclass
class Session:
    id: str
    request: GenerationRequest
    theme_outcome: ThemeOutcome | None
    prototype: Prototype | None = None
    revision: int = 1
    created_at: float = field(default_factory=time.time)
    updated_at: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock)


def _theme_json(theme: ThemeDescription) -> dict:
    return {
        "theme_color": theme.theme_color,
        "primary_color": theme.primary_color,
        "app_category": theme.app_category,
        "narrative": theme.narrative,
        "component_hints": {
            cid: {
                "text_hint": h.text_hint,
                "image_prompt": h.image_prompt,
                "icon_hint": h.icon_hint,
            }
            for cid, h in sorted(theme.component_hints.items())
        },
    }


def _payload_summary(res: ComponentResult) -> str:
    p = res.payload
    if isinstance(p, TextPayload):
        return p.text
    if isinstance(p, ImagePayload):
        return f"image {p.raster.width}x{p.raster.height}"
    if isinstance(p, IconPayload):
        return f"icon {p.icon_name} ('{p.phrase}')"
    return p.color


def _component_json(proto: Prototype, res: ComponentResult) -> dict:
    prov = proto.get_provenance(res.component_id)
    return {
        "component_id": res.component_id,
        "type": res.ctype.value,
        "bbox": [res.bbox.x, res.bbox.y, res.bbox.w, res.bbox.h],
        "kind": res.payload.kind,
        "summary": _payload_summary(res),
        "prompt": prov.prompt,
        "backend": prov.backend,
        "provenance_digest": hashlib.sha256(prov.prompt.encode("utf-8")).hexdigest()[:16],
        "notes": list(prov.notes),
    }


def _parse_manual_payload(raw: dict):
    kind = raw.get("kind")
    try:
        if kind == "text":
            return TextPayload(str(raw["text"]), bool(raw.get("truncated", False)))
        if kind == "color":
            color = str(raw["color"])
            if not re.fullmatch(r"#[0-9a-fA-F]{6}", color):
                raise InputError(f"color must be #RRGGBB, got {color!r}")
            return ColorPayload(color.upper())
        if kind == "icon":
            return IconPayload(
                str(raw["svg"]), str(raw.get("phrase", "")), str(raw.get("icon_name", ""))
            )
        if kind == "image":
            return ImagePayload(
                Raster.from_base64_png(raw["png_base64"]), str(raw.get("prompt", ""))
            )
    except KeyError as exc:
        raise InputError(f"manual payload of kind {kind!r} is missing field {exc}") from None
    raise InputError(f"unknown payload kind {kind!r}")


class ServiceError(Exception):
    def __init__(self, status: int, code: str, message: str, detail=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail

    def response(self) -> JSONResponse:
        body = {"code": self.code, "message": self.message}
        if self.detail is not None:
            body["detail"] = self.detail
        return JSONResponse(status_code=self.status, content=body)


def _map_error(exc: MaxprotoError) -> ServiceError:
    if isinstance(exc, PartialPrototypeError):
        return ServiceError(
            502,
            "partial_generation_failure",
            str(exc),
            detail={"completed": [r.component_id for r in exc.completed]},
        )
    if isinstance(exc, BackendError):
        return ServiceError(502, "backend_failure", str(exc))
    if isinstance(exc, GenerationError):
        return ServiceError(502, "generation_failure", str(exc))
    if isinstance(exc, InputError):
        detail = getattr(exc, "component_id", None)
        return ServiceError(
            400, "schema_violation", str(exc),
            detail={"component_id": detail} if detail else None,
        )
    return ServiceError(500, "internal_error", str(exc))


class SessionService:
    def __init__(
        self,
        ui_store: KnowledgeStore,
        icon_store: KnowledgeStore | None,
        backends: BackendBundle,
        *,
        templates: TemplateSet | None = None,
        options: GenerationOptions = GenerationOptions(),
        session_ttl: float = DEFAULT_SESSION_TTL,
        snapshot_dir=None,
        clock=time.time,
    ):
        self.ui_store = ui_store
        self.icon_store = icon_store
        self.backends = backends
        self.templates = templates
        self.options = options
        self.session_ttl = session_ttl
        self.snapshot_dir = Path(snapshot_dir) if snapshot_dir else None
        self.clock = clock
        self._sessions: dict[str, Session] = {}
        self._registry_lock = threading.Lock()
        if self.snapshot_dir:
            self.snapshot_dir.mkdir(parents=True, exist_ok=True)
            self._restore_snapshots()

    # -- session registry ------------------------------------------------

    def _sweep(self):
        now = self.clock()
        with self._registry_lock:
            expired = [
                sid for sid, s in self._sessions.items()
                if now - s.updated_at > self.session_ttl
            ]
            for sid in expired:
                del self._sessions[sid]

    def get_session(self, sid: str) -> Session:
        self._sweep()
        with self._registry_lock:
            session = self._sessions.get(sid)
        if session is None:
            raise ServiceError(404, "unknown_session", f"no session {sid!r}")
        return session

    # -- snapshots ---------------------------------------------------------

    def _snapshot(self, session: Session):
        if not self.snapshot_dir or session.prototype is None:
            return
        doc, _ = render_document(session.prototype)
        payload = {
            "session_id": session.id,
            "revision": session.revision,
            "prompt": session.request.prompt,
            "wireframe": wireframe_to_document(session.request.wireframe),
            "seed": session.request.seed,
            "prototype": doc,
        }
        path = self.snapshot_dir / f"{session.id}.{session.revision:06d}.json"
        path.write_text(json.dumps(payload, sort_keys=True), encoding="utf-8")

    def _restore_snapshots(self):
        latest: dict[str, Path] = {}
        for path in sorted(self.snapshot_dir.glob("*.json")):
            sid = path.name.rsplit(".", 2)[0]
            latest[sid] = path
        for sid, path in latest.items():
            try:
                raw = json.loads(path.read_text(encoding="utf-8"))
                request = GenerationRequest(
                    prompt=raw["prompt"],
                    wireframe=parse_wireframe(raw["wireframe"]),
                    seed=raw["seed"],
                )
                session = Session(
                    id=raw["session_id"],
                    request=request,
                    theme_outcome=None,
                    prototype=parse_document(raw["prototype"]),
                    revision=raw["revision"],
                )
                self._sessions[session.id] = session
            except (KeyError, ValueError, MaxprotoError):
                continue  # unreadable snapshot; skip rather than refuse to start

    # -- operations ---------------------------------------------------------

    def create_session(self, body: CreateSessionBody) -> dict:
        wireframe = parse_wireframe(body.wireframe)
        request = GenerationRequest(prompt=body.prompt, wireframe=wireframe, seed=body.seed)
        outcome = generate_theme(
            request,
            self.ui_store,
            self.backends,
            templates=self.templates,
            retrieval=self.options.retrieval,
            image_width=self.options.image_width,
            image_height=self.options.image_height,
        )
        session = Session(
            id=secrets.token_urlsafe(16),
            request=request,
            theme_outcome=outcome,
            created_at=self.clock(),
            updated_at=self.clock(),
        )
        with self._registry_lock:
            self._sessions[session.id] = session
        return {
            "session_id": session.id,
            "revision": session.revision,
            "theme": _theme_json(outcome.theme),
        }

    def _mutate(self, session: Session, fn):
        if not session.lock.acquire(blocking=False):
            raise ServiceError(
                409, "mutation_in_progress", "another mutation is running on this session"
            )
        try:
            result = fn()
            session.revision += 1
            session.updated_at = self.clock()
            self._snapshot(session)
            return result
        finally:
            session.lock.release()

    def generate(self, sid: str) -> dict:
        session = self.get_session(sid)

        def run():
            session.prototype = orchestrate(
                session.request,
                self.ui_store,
                self.icon_store,
                self.backends,
                templates=self.templates,
                options=self.options,
                theme_outcome=session.theme_outcome,
            )

        self._mutate(session, run)
        proto = session.prototype
        return {
            "session_id": sid,
            "revision": session.revision,
            "theme": _theme_json(proto.theme),
            "components": [_component_json(proto, r) for r in proto.results],
        }

    def regenerate(self, sid: str, cid: str, body: RegenerateBody) -> dict:
        session = self.get_session(sid)
        if session.prototype is None:
            raise ServiceError(409, "not_generated", "generate the prototype first")
        if cid not in session.request.wireframe.component_ids():
            raise ServiceError(404, "unknown_component", f"no component {cid!r}")

        def run():
            if body.payload is not None:
                payload = _parse_manual_payload(body.payload)
                try:
                    session.prototype = replace_component_payload(
                        session.prototype, cid, payload
                    )
                except ValueError as exc:
                    raise ServiceError(422, "payload_kind_mismatch", str(exc)) from exc
            else:
                session.prototype = regenerate_component(
                    session.prototype,
                    session.request,
                    cid,
                    self.backends,
                    self.icon_store,
                    override=body.override,
                    attempt=session.revision,
                    templates=self.templates,
                    options=self.options,
                )

        self._mutate(session, run)
        proto = session.prototype
        return {
            "session_id": sid,
            "revision": session.revision,
            "component": _component_json(proto, proto.get_result(cid)),
        }

    def inspect(self, sid: str) -> dict:
        session = self.get_session(sid)
        proto = session.prototype
        theme = proto.theme if proto else session.theme_outcome.theme
        return {
            "session_id": sid,
            "revision": session.revision,
            "generated": proto is not None,
            "prompt": session.request.prompt,
            "wireframe": wireframe_to_document(session.request.wireframe),
            "theme": _theme_json(theme),
            "components": (
                [_component_json(proto, r) for r in proto.results] if proto else []
            ),
        }

    def export_svg(self, sid: str) -> tuple[str, int]:
        session = self.get_session(sid)
        if session.prototype is None:
            raise ServiceError(409, "not_generated", "generate the prototype first")
        return render_svg(session.prototype, RenderOptions()), session.revision

    def export_json(self, sid: str) -> tuple[str, int]:
        session = self.get_session(sid)
        if session.prototype is None:
            raise ServiceError(409, "not_generated", "generate the prototype first")
        doc, _ = render_document(session.prototype, RenderOptions())
        return document_to_json(doc), session.revision


def create_app(
    ui_store: KnowledgeStore,
    icon_store: KnowledgeStore | None,
    backends: BackendBundle,
    *,
    templates: TemplateSet | None = None,
    options: GenerationOptions = GenerationOptions(),
    session_ttl: float = DEFAULT_SESSION_TTL,
    snapshot_dir=None,
    studio_dir=None,
    clock=time.time,
) -> FastAPI:
    service = SessionService(
        ui_store,
        icon_store,
        backends,
        templates=templates,
        options=options,
        session_ttl=session_ttl,
        snapshot_dir=snapshot_dir,
        clock=clock,
    )
    app = FastAPI(title="maxproto", version="1")
    app.state.service = service
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
        expose_headers=["ETag"],
    )
    if studio_dir is not None:
        app.mount(
            "/studio", StaticFiles(directory=studio_dir, html=True), name="studio"
        )

    @app.exception_handler(ServiceError)
    async def service_error_handler(request: Request, exc: ServiceError):
        return exc.response()

    @app.exception_handler(MaxprotoError)
    async def maxproto_error_handler(request: Request, exc: MaxprotoError):
        return _map_error(exc).response()

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={
                "code": "schema_violation",
                "message": "request body does not match the schema",
                "detail": exc.errors(),
            },
        )

    @app.post("/v1/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        return service.create_session(body)

    @app.get("/v1/sessions/{sid}")
    def inspect(sid: str):
        return service.inspect(sid)

    @app.post("/v1/sessions/{sid}/generate")
    def generate(sid: str):
        return service.generate(sid)

    @app.post("/v1/sessions/{sid}/components/{cid}/regenerate")
    def regenerate(sid: str, cid: str, body: RegenerateBody):
        return service.regenerate(sid, cid, body)

    @app.get("/v1/sessions/{sid}/prototype.svg")
    def export_svg(sid: str):
        svg, revision = service.export_svg(sid)
        return Response(
            content=svg,
            media_type="image/svg+xml",
            headers={"ETag": f'"{revision}"'},
        )

    @app.get("/v1/sessions/{sid}/prototype.json")
    def export_json(sid: str):
        text, revision = service.export_json(sid)
        return Response(
            content=text,
            media_type="application/json",
            headers={"ETag": f'"{revision}"'},
        )

    return app
