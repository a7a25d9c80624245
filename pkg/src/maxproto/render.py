"""Prototype exports: editable SVG and a lossless structured document.

The SVG carries one top-level group per component (background images
first, then wireframe order) so downstream tools can select and edit
each piece; geometry comes from scaling the normalized boxes onto the
output canvas. The JSON document is a faithful encoding of the whole
Prototype, provenance included, and parses back to an equal value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr
import re

from .model import (
    BBox,
    ColorPayload,
    ComponentHint,
    ComponentResult,
    ComponentType,
    IconPayload,
    ImagePayload,
    Prototype,
    ProvenanceRecord,
    TextPayload,
    ThemeDescription,
    scale_bbox_to_pixels,
)
from .raster import Raster

DOCUMENT_FORMAT = "maxproto-prototype"
DOCUMENT_VERSION = 1


@dataclass(frozen=True)
class RenderOptions:
    out_w: int = 512
    out_h: int = 512
    embed_rasters: bool = True   # inline base64; otherwise sidecar PNG files
    show_ids: bool = False       # debug overlay with component ids

    def __post_init__(self):
        if self.out_w < 1 or self.out_h < 1:
            raise ValueError("output dims must be positive")


def _font_size(pixel_h: int) -> str:
    size = min(96.0, max(8.0, 0.6 * pixel_h))
    return f"{size:.4g}"


_SVG_ROOT_RE = re.compile(r"<svg\b[^>]*>", re.DOTALL)
_VIEWBOX_RE = re.compile(r'viewBox\s*=\s*"([^"]*)"')


def _icon_fragment(svg: str, x: int, y: int, w: int, h: int, fill: str) -> str:
    """Inline an icon's SVG scaled to the component box, recolored.

    The icon's own root tag is replaced with a nested <svg> positioned
    in the parent document; a fill on that root recolors any path that
    does not set its own.
    """
    m = _SVG_ROOT_RE.search(svg)
    if not m:
        raise ValueError("icon svg has no <svg> root")
    vb = _VIEWBOX_RE.search(m.group(0))
    viewbox = vb.group(1) if vb else "0 0 24 24"
    inner = svg[m.end() : svg.rfind("</svg>")]
    return (
        f'<svg x="{x}" y="{y}" width="{w}" height="{h}" '
        f"viewBox={quoteattr(viewbox)} fill={quoteattr(fill)} "
        f'preserveAspectRatio="xMidYMid meet">{inner}</svg>'
    )


def render_svg(proto: Prototype, opts: RenderOptions = RenderOptions()) -> str:
    """One editable group per component; well-formed SVG 1.1 text.

    With ``embed_rasters`` unset, image payloads reference sidecar
    files ``rasters/<component_id>.png`` (written by
    :func:`write_outputs` or the caller).
    """
    w, h = opts.out_w, opts.out_h
    primary = proto.theme.primary_color
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill={quoteattr(proto.theme.theme_color)}/>',
    ]
    ordered = [r for r in proto.results if r.ctype is ComponentType.BACKGROUND_IMAGE]
    ordered += [r for r in proto.results if r.ctype is not ComponentType.BACKGROUND_IMAGE]
    for res in ordered:
        rect = scale_bbox_to_pixels(res.bbox, w, h)
        lines.append(f"<g id={quoteattr(res.component_id)}>")
        payload = res.payload
        if isinstance(payload, TextPayload):
            cx = rect.x + rect.w / 2
            cy = rect.y + rect.h / 2
            lines.append(
                f'<text x="{cx:.4g}" y="{cy:.4g}" font-size="{_font_size(rect.h)}" '
                f'font-family="sans-serif" fill={quoteattr(primary)} '
                f'text-anchor="middle" dominant-baseline="central">'
                f"{escape(payload.text)}</text>"
            )
        elif isinstance(payload, ImagePayload):
            if opts.embed_rasters:
                href = "data:image/png;base64," + payload.raster.to_base64_png()
            else:
                href = f"rasters/{res.component_id}.png"
            lines.append(
                f'<image x="{rect.x}" y="{rect.y}" width="{rect.w}" height="{rect.h}" '
                f'href={quoteattr(href)} preserveAspectRatio="none"/>'
            )
        elif isinstance(payload, IconPayload):
            lines.append(_icon_fragment(payload.svg, rect.x, rect.y, rect.w, rect.h, primary))
        elif isinstance(payload, ColorPayload):
            rx = min(8, rect.w // 4, rect.h // 4)
            lines.append(
                f'<rect x="{rect.x}" y="{rect.y}" width="{rect.w}" height="{rect.h}" '
                f'rx="{rx}" fill={quoteattr(payload.color)}/>'
            )
        lines.append("</g>")
    if opts.show_ids:
        lines.append('<g id="__debug__" font-family="monospace" font-size="10">')
        for res in proto.results:
            rect = scale_bbox_to_pixels(res.bbox, w, h)
            lines.append(
                f'<rect x="{rect.x}" y="{rect.y}" width="{rect.w}" height="{rect.h}" '
                'fill="none" stroke="#FF00FF" stroke-dasharray="4 2"/>'
            )
            lines.append(
                f'<text x="{rect.x + 2}" y="{rect.y + 11}" fill="#FF00FF">'
                f"{escape(res.component_id)}</text>"
            )
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


# --- structured document --------------------------------------------------------


def _raster_field(raster: Raster, name: str, opts: RenderOptions, sidecar: dict) -> dict:
    if opts.embed_rasters:
        return {"png_base64": raster.to_base64_png()}
    rel = f"rasters/{name}.png"
    sidecar[rel] = raster.to_png_bytes()
    return {"path": rel}


def _payload_to_json(res: ComponentResult, opts: RenderOptions, sidecar: dict) -> dict:
    p = res.payload
    if isinstance(p, TextPayload):
        return {"kind": "text", "text": p.text, "truncated": p.truncated}
    if isinstance(p, ImagePayload):
        return {
            "kind": "image",
            "prompt": p.prompt,
            **_raster_field(p.raster, res.component_id, opts, sidecar),
        }
    if isinstance(p, IconPayload):
        return {"kind": "icon", "svg": p.svg, "phrase": p.phrase, "icon_name": p.icon_name}
    return {"kind": "color", "color": p.color}


def _prov_to_json(p: ProvenanceRecord) -> dict:
    return {
        "component_id": p.component_id,
        "prompt": p.prompt,
        "backend": p.backend,
        "seed": p.seed,
        "notes": list(p.notes),
    }


def render_document(
    proto: Prototype, opts: RenderOptions = RenderOptions()
) -> tuple[dict, dict[str, bytes]]:
    """Encode the prototype as a JSON-able dict.

    Returns ``(document, sidecar_files)``; the sidecar map is empty in
    embed mode, otherwise it maps relative paths to PNG bytes which the
    caller must write next to the document.
    """
    sidecar: dict[str, bytes] = {}
    doc = {
        "format": DOCUMENT_FORMAT,
        "version": DOCUMENT_VERSION,
        "master_seed": proto.master_seed,
        "theme": {
            "theme_color": proto.theme.theme_color,
            "primary_color": proto.theme.primary_color,
            "app_category": proto.theme.app_category,
            "narrative": proto.theme.narrative,
            "component_hints": {
                cid: {
                    "text_hint": hint.text_hint,
                    "image_prompt": hint.image_prompt,
                    "icon_hint": hint.icon_hint,
                }
                for cid, hint in sorted(proto.theme.component_hints.items())
            },
        },
        "theme_image": _raster_field(proto.theme_image, "theme", opts, sidecar),
        "results": [
            {
                "component_id": r.component_id,
                "type": r.ctype.value,
                "bbox": [r.bbox.x, r.bbox.y, r.bbox.w, r.bbox.h],
                "payload": _payload_to_json(r, opts, sidecar),
            }
            for r in proto.results
        ],
        "provenance": [_prov_to_json(p) for p in proto.provenance],
        "theme_provenance": (
            _prov_to_json(proto.theme_provenance) if proto.theme_provenance else None
        ),
    }
    return doc, sidecar


def document_to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _raster_from_field(field: dict, base_dir) -> Raster:
    if "png_base64" in field:
        return Raster.from_base64_png(field["png_base64"])
    if base_dir is None:
        raise ValueError("document references sidecar rasters; base_dir required")
    return Raster.from_png_bytes((Path(base_dir) / field["path"]).read_bytes())


def parse_document(doc: dict | str, base_dir=None) -> Prototype:
    """Inverse of :func:`render_document`."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    if doc.get("format") != DOCUMENT_FORMAT:
        raise ValueError(f"not a {DOCUMENT_FORMAT} document")
    t = doc["theme"]
    theme = ThemeDescription(
        theme_color=t["theme_color"],
        primary_color=t["primary_color"],
        app_category=t["app_category"],
        narrative=t["narrative"],
        component_hints={
            cid: ComponentHint(
                text_hint=h["text_hint"],
                image_prompt=h["image_prompt"],
                icon_hint=h["icon_hint"],
            )
            for cid, h in t["component_hints"].items()
        },
    )
    results = []
    for raw in doc["results"]:
        p = raw["payload"]
        if p["kind"] == "text":
            payload = TextPayload(p["text"], p["truncated"])
        elif p["kind"] == "image":
            payload = ImagePayload(_raster_from_field(p, base_dir), p["prompt"])
        elif p["kind"] == "icon":
            payload = IconPayload(p["svg"], p["phrase"], p["icon_name"])
        elif p["kind"] == "color":
            payload = ColorPayload(p["color"])
        else:
            raise ValueError(f"unknown payload kind {p['kind']!r}")
        results.append(
            ComponentResult(
                raw["component_id"],
                ComponentType.from_name(raw["type"]),
                BBox(*raw["bbox"]),
                payload,
            )
        )
    provenance = tuple(
        ProvenanceRecord(
            component_id=p["component_id"],
            prompt=p["prompt"],
            backend=p["backend"],
            seed=p["seed"],
            notes=tuple(p["notes"]),
        )
        for p in doc["provenance"]
    )
    theme_prov = doc.get("theme_provenance")
    return Prototype(
        theme=theme,
        theme_image=_raster_from_field(doc["theme_image"], base_dir),
        results=tuple(results),
        provenance=provenance,
        theme_provenance=(
            ProvenanceRecord(
                component_id=theme_prov["component_id"],
                prompt=theme_prov["prompt"],
                backend=theme_prov["backend"],
                seed=theme_prov["seed"],
                notes=tuple(theme_prov["notes"]),
            )
            if theme_prov
            else None
        ),
        master_seed=doc["master_seed"],
    )


def write_outputs(proto: Prototype, out_dir, opts: RenderOptions = RenderOptions()) -> dict[str, Path]:
    """Write prototype.svg, prototype.json and any sidecar rasters.

    Returns the paths written, keyed by logical name.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    doc, sidecar = render_document(proto, opts)
    svg_path = out_dir / "prototype.svg"
    json_path = out_dir / "prototype.json"
    svg_path.write_text(render_svg(proto, opts), encoding="utf-8")
    json_path.write_text(document_to_json(doc), encoding="utf-8")
    written = {"svg": svg_path, "json": json_path}
    for rel, data in sidecar.items():
        path = out_dir / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
        written[rel] = path
    return written
