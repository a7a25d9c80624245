"""Knowledge bases: ingestion, persistence and embedding-based retrieval.

Two stores exist side by side. The UI store pairs layout composition
(typed boxes) with semantic text (content descriptions, a high-level
summary and the four theme attributes); the icon store pairs SVG markup
with a semantic description. Both are embedded with whatever backend is
configured and queried by exact cosine scan, which is plenty for stores
of up to tens of thousands of records.
"""

from __future__ import annotations

import hashlib
import json
import time
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmbeddingProgressError,
    EmptyKnowledgeBaseError,
    KnowledgeBaseError,
    ZeroVectorError,
)
from .model import BBox, GenerationRequest, render_wireframe_text


@dataclass(frozen=True)
class ThemeAttrs:
    """The four theme attributes a captioner answers per screenshot.

    Empty strings mark attributes the captioner could not produce.
    """

    theme_color: str = ""
    primary_color: str = ""
    theme_description: str = ""
    app_category: str = ""


@dataclass(frozen=True)
class KnowledgeRecord:
    id: str
    composition: tuple[tuple[str, BBox], ...]
    content_descriptions: tuple[str, ...]
    high_level: str
    theme_attrs: ThemeAttrs = field(default_factory=ThemeAttrs)
    embedding: tuple[float, ...] | None = None

    def __post_init__(self):
        if not self.composition:
            raise KnowledgeBaseError(f"record {self.id!r}: composition must be non-empty")


@dataclass(frozen=True)
class IconRecord:
    name: str
    svg: str
    description: str
    embedding: tuple[float, ...] | None = None

    def __post_init__(self):
        try:
            ET.fromstring(self.svg)
        except ET.ParseError as exc:
            raise KnowledgeBaseError(
                f"icon {self.name!r}: svg is not well-formed markup: {exc}"
            ) from exc


@dataclass(frozen=True)
class RetrievedReference:
    record_id: str
    score: float
    rendered: str


@dataclass(frozen=True)
class RetrievalConfig:
    """``k`` is the number of references injected into prompts (default 2)."""

    k: int = 2

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")


@dataclass(frozen=True)
class KnowledgeStore:
    kind: str  # "ui" | "icon"
    dim: int | None
    records: tuple

    def __post_init__(self):
        if self.kind not in ("ui", "icon"):
            raise KnowledgeBaseError(f"unknown store kind {self.kind!r}")

    def __len__(self) -> int:
        return len(self.records)

    def is_embedded(self) -> bool:
        return bool(self.records) and all(r.embedding is not None for r in self.records)


@dataclass(frozen=True)
class IngestReport:
    accepted: int
    skipped: int
    reasons: tuple[str, ...] = ()

    def __str__(self) -> str:
        lines = [f"accepted={self.accepted} skipped={self.skipped}"]
        lines.extend(f"  - {r}" for r in self.reasons)
        return "\n".join(lines)


# --- canonical text renderings ------------------------------------------------

def render_record(record: KnowledgeRecord) -> str:
    """The canonical rendering fed to the embedder and injected as a reference.

    One composition line per entry, then the three labeled semantic
    sections. Fixed here once so embeddings are reproducible.
    """
    lines = [f"{name} [{b.x},{b.y},{b.w},{b.h}]" for name, b in record.composition]
    lines.append("CONTENT: " + "; ".join(record.content_descriptions))
    lines.append("SUMMARY: " + record.high_level)
    ta = record.theme_attrs
    lines.append(
        "THEME: color="
        + ta.theme_color
        + " primary="
        + ta.primary_color
        + " category="
        + ta.app_category
        + " "
        + ta.theme_description
    )
    return "\n".join(lines)


def record_embedding_text(record) -> str:
    if isinstance(record, KnowledgeRecord):
        return render_record(record)
    if isinstance(record, IconRecord):
        return record.description
    raise TypeError(f"unknown record type {type(record)!r}")


def render_query(req: GenerationRequest) -> str:
    """Query text = user prompt followed by the layout rendering."""
    return req.prompt + "\n" + render_wireframe_text(req.wireframe)


def caption_questions() -> dict[str, str]:
    """The four instruction templates an external captioner should ask,
    keyed by the theme attribute each answer populates."""
    from importlib import resources

    return json.loads(
        resources.files("maxproto.data")
        .joinpath("caption_questions.json")
        .read_text("utf-8")
    )


# --- ingestion ----------------------------------------------------------------

def _iter_source(source) -> Iterator[tuple[str, dict]]:
    """Yield (origin, raw record) pairs from a dir, a .jsonl file, or an iterable."""
    if isinstance(source, (str, Path)):
        path = Path(source)
        if not path.exists():
            raise KnowledgeBaseError(f"source {path} does not exist")
        if path.is_dir():
            files = sorted(path.glob("*.json"))
            if not files:
                raise EmptyKnowledgeBaseError(f"no *.json records under {path}")
            for f in files:
                try:
                    yield f.name, json.loads(f.read_text(encoding="utf-8"))
                except (OSError, json.JSONDecodeError) as exc:
                    yield f.name, {"__error__": str(exc)}
        else:
            with path.open(encoding="utf-8") as fh:
                for i, line in enumerate(fh):
                    if not line.strip():
                        continue
                    try:
                        yield f"{path.name}:{i + 1}", json.loads(line)
                    except json.JSONDecodeError as exc:
                        yield f"{path.name}:{i + 1}", {"__error__": str(exc)}
    else:
        for i, raw in enumerate(source):
            yield f"record #{i}", raw


def _parse_raw_record(raw: dict, captions: dict) -> KnowledgeRecord:
    rid = raw.get("id")
    if not isinstance(rid, str) or not rid:
        raise KnowledgeBaseError("missing or empty id")
    comp_raw = raw.get("composition")
    if not isinstance(comp_raw, list) or not comp_raw:
        raise KnowledgeBaseError(f"record {rid!r}: composition missing or empty")
    composition = []
    for entry in comp_raw:
        if not isinstance(entry, dict) or "type" not in entry or "bbox" not in entry:
            raise KnowledgeBaseError(f"record {rid!r}: composition entry needs type and bbox")
        bbox_raw = entry["bbox"]
        if not isinstance(bbox_raw, list) or len(bbox_raw) != 4:
            raise KnowledgeBaseError(f"record {rid!r}: bbox must be [x,y,w,h]")
        composition.append((str(entry["type"]), BBox(*bbox_raw)))
    content = raw.get("content_descriptions", [])
    if not isinstance(content, list):
        raise KnowledgeBaseError(f"record {rid!r}: content_descriptions must be a list")
    high_level = raw.get("high_level", "")
    cap = captions.get(rid, {})
    attrs = ThemeAttrs(
        theme_color=str(cap.get("theme_color", "")),
        primary_color=str(cap.get("primary_color", "")),
        theme_description=str(cap.get("theme_description", "")),
        app_category=str(cap.get("app_category", "")),
    )
    return KnowledgeRecord(
        id=rid,
        composition=tuple(composition),
        content_descriptions=tuple(str(c) for c in content),
        high_level=str(high_level),
        theme_attrs=attrs,
    )


def ingest_ui_records(source, captions=None) -> tuple[KnowledgeStore, IngestReport]:
    """Build a UI knowledge store from raw records.

    ``source`` may be a directory of ``*.json`` files, a ``.jsonl``
    file, or an iterable of dicts. ``captions`` is an optional
    ``{record_id: {theme_color, primary_color, theme_description,
    app_category}}`` map (or a path to one) produced by an external
    captioner. Malformed records are skipped and reported; only an
    empty surviving set is fatal.
    """
    if isinstance(captions, (str, Path)):
        captions = json.loads(Path(captions).read_text(encoding="utf-8"))
    captions = captions or {}

    records: list[KnowledgeRecord] = []
    reasons: list[str] = []
    seen: set[str] = set()
    for origin, raw in _iter_source(source):
        if "__error__" in raw:
            reasons.append(f"{origin}: unreadable ({raw['__error__']})")
            continue
        try:
            rec = _parse_raw_record(raw, captions)
        except (KnowledgeBaseError, Exception) as exc:
            reasons.append(f"{origin}: {exc}")
            continue
        if rec.id in seen:
            reasons.append(f"{origin}: duplicate id {rec.id!r}")
            continue
        seen.add(rec.id)
        records.append(rec)

    if not records:
        raise EmptyKnowledgeBaseError(
            "no records survived ingestion"
            + (f" ({len(reasons)} skipped)" if reasons else "")
        )
    store = KnowledgeStore(kind="ui", dim=None, records=tuple(records))
    return store, IngestReport(len(records), len(reasons), tuple(reasons))


def build_icon_store(records: Iterable[IconRecord]) -> KnowledgeStore:
    recs = tuple(records)
    if not recs:
        raise EmptyKnowledgeBaseError("icon store must contain at least one icon")
    return KnowledgeStore(kind="icon", dim=None, records=recs)


# --- embedding ----------------------------------------------------------------

def _record_key(record) -> str:
    return record.id if isinstance(record, KnowledgeRecord) else record.name


def embed_records(
    store: KnowledgeStore,
    backend,
    *,
    attempts: int = 3,
    backoff: float = 0.25,
    sleep=time.sleep,
) -> KnowledgeStore:
    """Embed every record that does not have an embedding yet.

    Each record gets up to ``attempts`` tries with exponential backoff.
    On exhaustion an :class:`EmbeddingProgressError` is raised carrying
    the partially embedded store, so progress is never lost and a later
    call resumes where this one stopped.
    """
    if not store.records:
        raise EmptyKnowledgeBaseError("cannot embed an empty store")
    dim = backend.dim
    if store.dim is not None and store.dim != dim:
        raise DimensionMismatchError(
            f"store dim {store.dim} != backend dim {dim}"
        )
    new_records = list(store.records)
    last_ok: str | None = None
    for i, rec in enumerate(new_records):
        if rec.embedding is not None:
            if len(rec.embedding) != dim:
                raise DimensionMismatchError(
                    f"record {_record_key(rec)!r} embedding dim "
                    f"{len(rec.embedding)} != backend dim {dim}"
                )
            last_ok = _record_key(rec)
            continue
        text = record_embedding_text(rec)
        vec = None
        failure: Exception | None = None
        for attempt in range(attempts):
            try:
                vec = backend.embed(text)
                break
            except Exception as exc:
                failure = exc
                if attempt < attempts - 1:
                    sleep(backoff * (2**attempt))
        if vec is None:
            partial = KnowledgeStore(store.kind, store.dim, tuple(new_records))
            raise EmbeddingProgressError(
                f"embedding failed at record {_record_key(rec)!r} "
                f"after {attempts} attempts: {failure}",
                last_embedded_id=last_ok,
                partial_store=partial,
                cause=failure,
            )
        vec = tuple(float(v) for v in vec)
        if len(vec) != dim:
            raise DimensionMismatchError(
                f"backend returned dim {len(vec)}, declared {dim}"
            )
        new_records[i] = replace(rec, embedding=vec)
        last_ok = _record_key(rec)
    return KnowledgeStore(store.kind, dim, tuple(new_records))


# --- similarity and retrieval ---------------------------------------------------

def cosine_similarity(a, b) -> float:
    """dot(a, b) / (|a| * |b|); rejects mismatched dims and zero vectors."""
    va = np.asarray(a, dtype=np.float64)
    vb = np.asarray(b, dtype=np.float64)
    if va.shape != vb.shape or va.ndim != 1:
        raise DimensionMismatchError(f"vector dims differ: {va.shape} vs {vb.shape}")
    na = float(np.linalg.norm(va))
    nb = float(np.linalg.norm(vb))
    if na == 0.0 or nb == 0.0:
        raise ZeroVectorError("cosine similarity undefined for a zero vector")
    return float(np.dot(va, vb) / (na * nb))


def _require_embedded(store: KnowledgeStore):
    if not store.records:
        raise EmptyKnowledgeBaseError("store is empty")
    for rec in store.records:
        if rec.embedding is None:
            raise KnowledgeBaseError(
                f"store is not fully embedded (record {_record_key(rec)!r})"
            )


def retrieve(
    store: KnowledgeStore,
    query_text: str,
    backend,
    cfg: RetrievalConfig = RetrievalConfig(),
) -> list[RetrievedReference]:
    """Top-k records by cosine similarity to the embedded query.

    Returns exactly ``min(k, len(store))`` references, sorted by
    descending score with ties broken by ascending record id.
    """
    if not query_text.strip():
        raise KnowledgeBaseError("query text must be non-empty")
    _require_embedded(store)
    qvec = tuple(float(v) for v in backend.embed(query_text))
    scored = [
        (cosine_similarity(qvec, rec.embedding), _record_key(rec), rec)
        for rec in store.records
    ]
    scored.sort(key=lambda t: (-t[0], t[1]))
    out = []
    for score, rid, rec in scored[: cfg.k]:
        rendered = render_record(rec) if isinstance(rec, KnowledgeRecord) else rec.description
        out.append(RetrievedReference(record_id=rid, score=score, rendered=rendered))
    return out


def lookup_icon(store: KnowledgeStore, phrase: str, backend) -> IconRecord:
    """The icon whose description is most cosine-similar to ``phrase``.

    Ties break by ascending icon name.
    """
    if store.kind != "icon":
        raise KnowledgeBaseError(f"lookup_icon needs an icon store, got {store.kind!r}")
    _require_embedded(store)
    pvec = tuple(float(v) for v in backend.embed(phrase))
    best: IconRecord | None = None
    best_key: tuple[float, str] | None = None
    for rec in store.records:
        key = (-cosine_similarity(pvec, rec.embedding), rec.name)
        if best_key is None or key < best_key:
            best_key = key
            best = rec
    assert best is not None
    return best


# --- persistence ----------------------------------------------------------------

def _record_to_json(rec) -> dict:
    if isinstance(rec, KnowledgeRecord):
        return {
            "id": rec.id,
            "composition": [[name, [b.x, b.y, b.w, b.h]] for name, b in rec.composition],
            "content_descriptions": list(rec.content_descriptions),
            "high_level": rec.high_level,
            "theme_attrs": {
                "theme_color": rec.theme_attrs.theme_color,
                "primary_color": rec.theme_attrs.primary_color,
                "theme_description": rec.theme_attrs.theme_description,
                "app_category": rec.theme_attrs.app_category,
            },
            "embedding": list(rec.embedding) if rec.embedding is not None else None,
        }
    return {
        "name": rec.name,
        "svg": rec.svg,
        "description": rec.description,
        "embedding": list(rec.embedding) if rec.embedding is not None else None,
    }


def _record_from_json(kind: str, raw: dict):
    emb = raw.get("embedding")
    emb_t = tuple(float(v) for v in emb) if emb is not None else None
    if kind == "ui":
        return KnowledgeRecord(
            id=raw["id"],
            composition=tuple((name, BBox(*bbox)) for name, bbox in raw["composition"]),
            content_descriptions=tuple(raw["content_descriptions"]),
            high_level=raw["high_level"],
            theme_attrs=ThemeAttrs(**raw["theme_attrs"]),
            embedding=emb_t,
        )
    return IconRecord(
        name=raw["name"], svg=raw["svg"], description=raw["description"], embedding=emb_t
    )


def store_to_jsonl(store: KnowledgeStore) -> str:
    header = {"dim": store.dim, "kind": store.kind}
    lines = [json.dumps(header, sort_keys=True)]
    lines.extend(
        json.dumps(_record_to_json(rec), sort_keys=True) for rec in store.records
    )
    return "\n".join(lines) + "\n"


def save_store(store: KnowledgeStore, path) -> None:
    Path(path).write_text(store_to_jsonl(store), encoding="utf-8")


def load_store(path) -> KnowledgeStore:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise KnowledgeBaseError(f"store file {path} is empty")
    header = json.loads(lines[0])
    kind = header.get("kind")
    if kind not in ("ui", "icon"):
        raise KnowledgeBaseError(f"store file {path}: bad kind {kind!r}")
    records = tuple(
        _record_from_json(kind, json.loads(line)) for line in lines[1:] if line.strip()
    )
    if not records:
        raise EmptyKnowledgeBaseError(f"store file {path} holds no records")
    return KnowledgeStore(kind=kind, dim=header.get("dim"), records=records)


def store_hash(store: KnowledgeStore) -> str:
    """Stable content hash of the serialized store."""
    return hashlib.sha256(store_to_jsonl(store).encode("utf-8")).hexdigest()
