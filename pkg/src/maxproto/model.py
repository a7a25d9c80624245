"""Core domain types: wireframes, component results, prototypes.

Geometry convention: wireframe boxes live in a normalized integer
coordinate space of 0-1000 on both axes, regardless of the source
canvas size. All types here are immutable after construction and safe
to share across threads.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

from .errors import (
    BBoxRangeError,
    DuplicateIdError,
    UnknownComponentTypeError,
    WireframeError,
)
from .raster import Raster

NORM_MAX = 1000


class ComponentType(enum.Enum):
    """The 13 component kinds the engine understands."""

    TEXT = "Text"
    TEXT_BUTTON = "TextButton"
    IMAGE = "Image"
    BACKGROUND_IMAGE = "BackgroundImage"
    ICON = "Icon"
    TOOLBAR = "Toolbar"
    LIST_ITEM = "ListItem"
    INPUT = "Input"
    CARD = "Card"
    CHECKBOX = "Checkbox"
    RADIO_BUTTON = "RadioButton"
    DRAWER = "Drawer"
    MODAL = "Modal"

    @classmethod
    def from_name(cls, name: str) -> "ComponentType":
        """Parse a type name, case-insensitively, against the exact whitelist.

        Unknown names raise; nothing is ever coerced.
        """
        key = name.strip().lower()
        try:
            return _TYPE_BY_LOWER_NAME[key]
        except KeyError:
            raise UnknownComponentTypeError(f"unknown component type {name!r}") from None


_TYPE_BY_LOWER_NAME = {t.value.lower(): t for t in ComponentType}

# Which payload variant each component type must carry (mirrored by the
# agents dispatch table, which asserts agreement at import time).
PAYLOAD_KIND_FOR_TYPE: dict[ComponentType, str] = {
    ComponentType.TEXT: "text",
    ComponentType.TEXT_BUTTON: "text",
    ComponentType.IMAGE: "image",
    ComponentType.BACKGROUND_IMAGE: "image",
    ComponentType.ICON: "icon",
    ComponentType.TOOLBAR: "color",
    ComponentType.LIST_ITEM: "color",
    ComponentType.INPUT: "color",
    ComponentType.CARD: "color",
    ComponentType.CHECKBOX: "color",
    ComponentType.RADIO_BUTTON: "color",
    ComponentType.DRAWER: "color",
    ComponentType.MODAL: "color",
}

assert set(PAYLOAD_KIND_FOR_TYPE) == set(ComponentType)


@dataclass(frozen=True)
class BBox:
    """A box in the normalized 0-1000 space; x+w and y+h stay inside it."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        for name in ("x", "y", "w", "h"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise BBoxRangeError(f"bbox field {name} must be an integer, got {v!r}")
        if self.x < 0 or self.y < 0:
            raise BBoxRangeError(f"bbox origin must be non-negative: {self}")
        if self.w <= 0 or self.h <= 0:
            raise BBoxRangeError(f"bbox extent must be positive: {self}")
        if self.x + self.w > NORM_MAX or self.y + self.h > NORM_MAX:
            raise BBoxRangeError(f"bbox exceeds the 0-{NORM_MAX} space: {self}")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.x, self.y, self.w, self.h)

    def render(self) -> str:
        """Bracketed coordinate text used inside prompts: ``[x,y,w,h]``."""
        return f"[{self.x},{self.y},{self.w},{self.h}]"


@dataclass(frozen=True)
class PixelRect:
    """A non-empty rectangle in pixel space."""

    x: int
    y: int
    w: int
    h: int


def scale_bbox_to_pixels(bbox: BBox, target_w: int, target_h: int) -> PixelRect:
    """Map a normalized bbox onto a target pixel canvas.

    Origin rounds down, extent rounds up, then the rectangle is clamped
    inside the canvas; the result is never empty.
    """
    if target_w < 1 or target_h < 1:
        raise ValueError("target dimensions must be positive")
    x = math.floor(bbox.x * target_w / NORM_MAX)
    y = math.floor(bbox.y * target_h / NORM_MAX)
    w = math.ceil(bbox.w * target_w / NORM_MAX)
    h = math.ceil(bbox.h * target_h / NORM_MAX)
    x = min(x, target_w - 1)
    y = min(y, target_h - 1)
    w = max(1, min(w, target_w - x))
    h = max(1, min(h, target_h - y))
    return PixelRect(x, y, w, h)


@dataclass(frozen=True)
class WireframeComponent:
    id: str
    ctype: ComponentType
    bbox: BBox
    user_hint: str | None = None


@dataclass(frozen=True)
class Wireframe:
    """The user's layout input: an ordered list of typed boxes.

    Component order is the generation order. ``canvas_w``/``canvas_h``
    record the source pixel dimensions the document was authored in.
    """

    canvas_w: int
    canvas_h: int
    components: tuple[WireframeComponent, ...]

    def __post_init__(self):
        if self.canvas_w < 1 or self.canvas_h < 1:
            raise WireframeError("canvas dimensions must be positive")
        if not self.components:
            raise WireframeError("wireframe must contain at least one component")
        seen: set[str] = set()
        for comp in self.components:
            if comp.id in seen:
                raise DuplicateIdError(
                    f"duplicate component id {comp.id!r}", component_id=comp.id
                )
            seen.add(comp.id)

    def component_ids(self) -> list[str]:
        return [c.id for c in self.components]

    def get(self, component_id: str) -> WireframeComponent:
        for comp in self.components:
            if comp.id == component_id:
                return comp
        raise KeyError(component_id)


def _round_half_up(v: float) -> int:
    return math.floor(v + 0.5)


def parse_wireframe(document: str | dict) -> Wireframe:
    """Parse a wireframe document (JSON text or an already-decoded dict).

    Documents carry ``canvas_w``, ``canvas_h`` and ``components``
    ``{id, type, x, y, w, h, hint?}``. Coordinates default to source
    pixels and are normalized to the 0-1000 space by
    ``round(1000 * v / canvas_dim)`` (half rounds up); documents written
    by :func:`wireframe_to_document` carry ``"units": "normalized"`` and
    skip rescaling, which makes serialization lossless. When x+w lands
    on the canvas edge, rounding may overshoot 1000 by one unit; the
    extent is clamped back so bbox invariants always hold.
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise WireframeError(f"wireframe document is not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise WireframeError("wireframe document must be a JSON object")

    for field_name in ("canvas_w", "canvas_h", "components"):
        if field_name not in document:
            raise WireframeError(f"wireframe document missing field {field_name!r}")
    canvas_w, canvas_h = document["canvas_w"], document["canvas_h"]
    for dim_name, dim in (("canvas_w", canvas_w), ("canvas_h", canvas_h)):
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
            raise WireframeError(f"{dim_name} must be a positive integer, got {dim!r}")
    raw_components = document["components"]
    if not isinstance(raw_components, list) or not raw_components:
        raise WireframeError("components must be a non-empty list")
    units = document.get("units", "pixels")
    if units not in ("pixels", "normalized"):
        raise WireframeError(f"unknown units {units!r}")

    components: list[WireframeComponent] = []
    seen: set[str] = set()
    for i, raw in enumerate(raw_components):
        if not isinstance(raw, dict):
            raise WireframeError(f"component #{i} must be an object")
        cid = raw.get("id")
        if not isinstance(cid, str) or not cid:
            raise WireframeError(f"component #{i} has a missing or empty id")
        if cid in seen:
            raise DuplicateIdError(f"duplicate component id {cid!r}", component_id=cid)
        seen.add(cid)
        if "type" not in raw:
            raise WireframeError(f"component {cid!r} missing field 'type'", component_id=cid)
        try:
            ctype = ComponentType.from_name(str(raw["type"]))
        except UnknownComponentTypeError as exc:
            raise UnknownComponentTypeError(
                f"component {cid!r}: {exc}", component_id=cid
            ) from None
        coords = {}
        for field_name in ("x", "y", "w", "h"):
            v = raw.get(field_name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise WireframeError(
                    f"component {cid!r} field {field_name!r} must be an integer, got {v!r}",
                    component_id=cid,
                )
            coords[field_name] = v
        if units == "pixels":
            if coords["w"] <= 0 or coords["h"] <= 0:
                raise BBoxRangeError(
                    f"component {cid!r} has non-positive extent", component_id=cid
                )
            if (
                coords["x"] < 0
                or coords["y"] < 0
                or coords["x"] + coords["w"] > canvas_w
                or coords["y"] + coords["h"] > canvas_h
            ):
                raise BBoxRangeError(
                    f"component {cid!r} lies outside the {canvas_w}x{canvas_h} canvas",
                    component_id=cid,
                )
            x = _round_half_up(coords["x"] * NORM_MAX / canvas_w)
            y = _round_half_up(coords["y"] * NORM_MAX / canvas_h)
            w = _round_half_up(coords["w"] * NORM_MAX / canvas_w)
            h = _round_half_up(coords["h"] * NORM_MAX / canvas_h)
            if w < 1 or h < 1:
                raise BBoxRangeError(
                    f"component {cid!r} collapses to zero size after normalization",
                    component_id=cid,
                )
            w = min(w, NORM_MAX - x)
            h = min(h, NORM_MAX - y)
        else:
            x, y, w, h = coords["x"], coords["y"], coords["w"], coords["h"]
        hint = raw.get("hint")
        if hint is not None and not isinstance(hint, str):
            raise WireframeError(
                f"component {cid!r} hint must be a string", component_id=cid
            )
        try:
            bbox = BBox(x, y, w, h)
        except BBoxRangeError as exc:
            raise BBoxRangeError(f"component {cid!r}: {exc}", component_id=cid) from None
        components.append(WireframeComponent(cid, ctype, bbox, hint))

    return Wireframe(canvas_w, canvas_h, tuple(components))


def wireframe_to_document(wf: Wireframe) -> dict:
    """Serialize a wireframe losslessly (normalized units)."""
    return {
        "canvas_w": wf.canvas_w,
        "canvas_h": wf.canvas_h,
        "units": "normalized",
        "components": [
            {
                "id": c.id,
                "type": c.ctype.value,
                "x": c.bbox.x,
                "y": c.bbox.y,
                "w": c.bbox.w,
                "h": c.bbox.h,
                **({"hint": c.user_hint} if c.user_hint is not None else {}),
            }
            for c in wf.components
        ],
    }


def render_wireframe_text(wf: Wireframe) -> str:
    """One line per component, used in prompts and retrieval queries.

    Coordinates are normalized (0-1000), matching the bbox slot the
    sub-agent templates are filled with.
    """
    lines = []
    for c in wf.components:
        line = f"- {c.id} {c.ctype.value} {c.bbox.render()}"
        if c.user_hint:
            line += f" hint: {c.user_hint}"
        lines.append(line)
    return "\n".join(lines)


@dataclass(frozen=True)
class GenerationRequest:
    """The user's full input: prompt text, layout and an optional seed."""

    prompt: str
    wireframe: Wireframe
    seed: int | None = None

    def __post_init__(self):
        if not self.prompt.strip():
            raise WireframeError("prompt must be non-empty")


@dataclass(frozen=True)
class ComponentHint:
    """Per-component guidance extracted from the theme description."""

    text_hint: str | None = None
    image_prompt: str | None = None
    icon_hint: str | None = None


@dataclass(frozen=True)
class ThemeDescription:
    """The global design narrative the theme agent produces."""

    theme_color: str
    primary_color: str
    app_category: str
    narrative: str
    component_hints: dict[str, ComponentHint] = field(default_factory=dict)

    def __post_init__(self):
        if not self.narrative.strip():
            raise ValueError("theme narrative must be non-empty")


# --- component payloads ------------------------------------------------------

@dataclass(frozen=True)
class TextPayload:
    kind = "text"
    text: str
    truncated: bool = False


@dataclass(frozen=True)
class ImagePayload:
    kind = "image"
    raster: Raster
    prompt: str


@dataclass(frozen=True)
class IconPayload:
    kind = "icon"
    svg: str
    phrase: str
    icon_name: str


@dataclass(frozen=True)
class ColorPayload:
    kind = "color"
    color: str  # "#RRGGBB"


Payload = TextPayload | ImagePayload | IconPayload | ColorPayload


@dataclass(frozen=True)
class ComponentResult:
    """One resolved component; payload variant must match the type's kind."""

    component_id: str
    ctype: ComponentType
    bbox: BBox
    payload: Payload

    def __post_init__(self):
        expected = PAYLOAD_KIND_FOR_TYPE[self.ctype]
        if self.payload.kind != expected:
            raise ValueError(
                f"component {self.component_id!r} ({self.ctype.value}) requires a "
                f"{expected!r} payload, got {self.payload.kind!r}"
            )


@dataclass(frozen=True)
class ProvenanceRecord:
    """What was actually sent where for one generation step."""

    component_id: str
    prompt: str
    backend: str
    seed: int
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class Prototype:
    """The finished component tree plus everything needed to audit it."""

    theme: ThemeDescription
    theme_image: Raster
    results: tuple[ComponentResult, ...]
    provenance: tuple[ProvenanceRecord, ...]
    theme_provenance: ProvenanceRecord | None = None
    master_seed: int = 0

    def __post_init__(self):
        result_ids = [r.component_id for r in self.results]
        prov_ids = [p.component_id for p in self.provenance]
        if result_ids != prov_ids:
            raise ValueError("provenance must mirror results one-to-one, in order")
        if len(set(result_ids)) != len(result_ids):
            raise ValueError("duplicate component ids in results")

    def get_result(self, component_id: str) -> ComponentResult:
        for r in self.results:
            if r.component_id == component_id:
                return r
        raise KeyError(component_id)

    def get_provenance(self, component_id: str) -> ProvenanceRecord:
        for p in self.provenance:
            if p.component_id == component_id:
                return p
        raise KeyError(component_id)
