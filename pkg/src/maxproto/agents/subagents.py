"""Typed sub-agents and the dispatch table that routes components to them.

Text and icon components go to the chat backend, image components to
the image backend (seeded with a crop of the theme image, no layout
condition), and every remaining type is rendered editable as a flat
rectangle filled with the dominant color of its theme-image region.

Every handler receives the same composed prompt shape - its specific
sub-prompt followed by the cache block - and that exact string is what
lands in provenance, whether or not a chat call consumes it.
"""

from __future__ import annotations

import re

import numpy as np

from ..backends.base import BackendBundle, ImageRequest
from ..errors import CropError, EmptyContentError, EmptyPhraseError
from ..kb import KnowledgeStore, lookup_icon
from ..model import (
    ColorPayload,
    ComponentResult,
    ComponentType,
    IconPayload,
    ImagePayload,
    PAYLOAD_KIND_FOR_TYPE,
    ProvenanceRecord,
    TextPayload,
    ThemeDescription,
    WireframeComponent,
    scale_bbox_to_pixels,
)
from ..raster import Raster
from .cache import CachePool, compose_sub_prompt
from .templates import TemplateSet, default_templates

MAX_TEXT_CHARS = 80
MAX_PHRASE_CHARS = 24

# handler routing; must agree with the payload-kind map
DISPATCH_TABLE: dict[ComponentType, str] = {
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

assert set(DISPATCH_TABLE) == set(ComponentType), "dispatch table must be total"
assert DISPATCH_TABLE == PAYLOAD_KIND_FOR_TYPE, "dispatch disagrees with payload kinds"


def resolve_hint(comp: WireframeComponent, theme: ThemeDescription, kind: str) -> str | None:
    """Theme hint for the component, falling back to the user's hint."""
    hint = theme.component_hints.get(comp.id)
    themed = getattr(hint, kind) if hint else None
    return themed or comp.user_hint


def image_prompt_for(comp: WireframeComponent, theme: ThemeDescription) -> str:
    """The diffusion prompt: the theme's image hint, else the narrative."""
    hint = theme.component_hints.get(comp.id)
    if hint and hint.image_prompt:
        return hint.image_prompt
    return theme.narrative


def sub_prompt_for(
    comp: WireframeComponent,
    theme: ThemeDescription,
    templates: TemplateSet | None = None,
    override: str | None = None,
) -> str:
    """The specific sub-prompt for one component (the cache comes later).

    Text and icon use the configured templates; image and color
    components get fixed engine-built prompts since no chat backend
    consumes them. A regeneration override is appended as a labeled
    line.
    """
    templates = templates or default_templates()
    handler = DISPATCH_TABLE[comp.ctype]
    bbox = comp.bbox.render()
    if handler == "text":
        p_sub = templates["text"].render(
            bbox=bbox, prompt=resolve_hint(comp, theme, "text_hint") or ""
        )
    elif handler == "icon":
        p_sub = templates["icon"].render(
            bbox=bbox, prompt=resolve_hint(comp, theme, "icon_hint") or ""
        )
    elif handler == "image":
        p_sub = (
            "TASK: image\n"
            f"Generate the {comp.ctype.value} content at {bbox} as a continuation "
            "of the theme image crop supplied as the init image.\n"
            f"IMAGE_PROMPT: {image_prompt_for(comp, theme)}"
        )
    else:
        p_sub = (
            "TASK: color\n"
            f"Render the {comp.ctype.value} at {bbox} as an editable rectangle "
            "filled with the dominant color of its theme-image region."
        )
    if override is not None and override.strip():
        p_sub += f"\nUSER OVERRIDE: {override.strip()}"
    return p_sub


def _strip_wrapping_quotes(text: str) -> str:
    text = text.strip()
    while len(text) >= 2 and text[0] == text[-1] and text[0] in "\"'":
        text = text[1:-1].strip()
    return text


def run_text_agent(
    comp: WireframeComponent,
    theme: ThemeDescription,
    cache: CachePool,
    chat,
    *,
    seed: int,
    templates: TemplateSet | None = None,
    override: str | None = None,
) -> tuple[ComponentResult, ProvenanceRecord]:
    """Text content: first reply line, unquoted, hard-capped at 80 chars."""
    if DISPATCH_TABLE[comp.ctype] != "text":
        raise ValueError(f"text agent cannot handle {comp.ctype.value}")
    prompt = compose_sub_prompt(sub_prompt_for(comp, theme, templates, override), cache)
    reply = chat.complete(prompt, seed)
    first_line = reply.strip().splitlines()[0] if reply.strip() else ""
    text = _strip_wrapping_quotes(first_line)
    if not text:
        raise EmptyContentError(f"chat returned no usable text for {comp.id!r}")
    notes: tuple[str, ...] = ()
    truncated = False
    if len(text) > MAX_TEXT_CHARS:
        notes = (f"truncated from {len(text)} to {MAX_TEXT_CHARS} chars",)
        text = text[:MAX_TEXT_CHARS]
        truncated = True
    result = ComponentResult(comp.id, comp.ctype, comp.bbox, TextPayload(text, truncated))
    return result, ProvenanceRecord(comp.id, prompt, chat.name, seed, notes)


def run_icon_agent(
    comp: WireframeComponent,
    theme: ThemeDescription,
    cache: CachePool,
    chat,
    icon_store: KnowledgeStore,
    embed,
    *,
    seed: int,
    templates: TemplateSet | None = None,
    override: str | None = None,
) -> tuple[ComponentResult, ProvenanceRecord]:
    """Indicative phrase from chat, then nearest icon by description."""
    if comp.ctype is not ComponentType.ICON:
        raise ValueError(f"icon agent cannot handle {comp.ctype.value}")
    prompt = compose_sub_prompt(sub_prompt_for(comp, theme, templates, override), cache)
    reply = chat.complete(prompt, seed)
    m = re.search(r"\S+", reply)
    phrase = m.group(0)[:MAX_PHRASE_CHARS] if m else ""
    if not phrase:
        raise EmptyPhraseError(f"chat returned no phrase for icon {comp.id!r}")
    icon = lookup_icon(icon_store, phrase, embed)
    result = ComponentResult(
        comp.id, comp.ctype, comp.bbox, IconPayload(icon.svg, phrase, icon.name)
    )
    notes = (f"phrase '{phrase}' resolved to icon '{icon.name}'",)
    return result, ProvenanceRecord(comp.id, prompt, chat.name, seed, notes)


def run_image_agent(
    comp: WireframeComponent,
    theme: ThemeDescription,
    theme_raster: Raster,
    image_backend,
    cache: CachePool,
    *,
    seed: int,
    templates: TemplateSet | None = None,
    override: str | None = None,
) -> tuple[ComponentResult, ProvenanceRecord]:
    """Component imagery: theme-image crop as init, no layout condition."""
    if DISPATCH_TABLE[comp.ctype] != "image":
        raise ValueError(f"image agent cannot handle {comp.ctype.value}")
    prompt = compose_sub_prompt(sub_prompt_for(comp, theme, templates, override), cache)
    rect = scale_bbox_to_pixels(comp.bbox, theme_raster.width, theme_raster.height)
    try:
        crop = theme_raster.crop(rect.x, rect.y, rect.w, rect.h)
    except ValueError as exc:
        raise CropError(f"component {comp.id!r}: {exc}") from exc
    gen_prompt = image_prompt_for(comp, theme)
    if override is not None and override.strip():
        gen_prompt = f"{gen_prompt} {override.strip()}"
    raster = image_backend.generate(
        ImageRequest(
            prompt=gen_prompt,
            width=rect.w,
            height=rect.h,
            seed=seed,
            init_image=crop,
        )
    )
    result = ComponentResult(
        comp.id, comp.ctype, comp.bbox, ImagePayload(raster, gen_prompt)
    )
    return result, ProvenanceRecord(comp.id, prompt, image_backend.name, seed, ())


def dominant_color(region: Raster) -> str:
    """Exact 24-bit mode of the region; ties pick the smallest value.

    Returned as uppercase ``#RRGGBB``.
    """
    px = region.pixels.reshape(-1, 3).astype(np.uint32)
    codes = (px[:, 0] << 16) | (px[:, 1] << 8) | px[:, 2]
    values, counts = np.unique(codes, return_counts=True)
    winners = values[counts == counts.max()]
    return f"#{int(winners.min()):06X}"


def run_color_fallback(
    comp: WireframeComponent,
    theme: ThemeDescription,
    theme_raster: Raster,
    cache: CachePool,
    *,
    seed: int,
    templates: TemplateSet | None = None,
    override: str | None = None,
) -> tuple[ComponentResult, ProvenanceRecord]:
    """Editable rectangle filled with the region's dominant color.

    An override of the form ``#RRGGBB`` replaces the sampled color.
    """
    if DISPATCH_TABLE[comp.ctype] != "color":
        raise ValueError(f"color fallback cannot handle {comp.ctype.value}")
    prompt = compose_sub_prompt(sub_prompt_for(comp, theme, templates, override), cache)
    rect = scale_bbox_to_pixels(comp.bbox, theme_raster.width, theme_raster.height)
    region = theme_raster.crop(rect.x, rect.y, rect.w, rect.h)
    color = dominant_color(region)
    notes: tuple[str, ...] = ()
    if override is not None and re.fullmatch(r"#[0-9a-fA-F]{6}", override.strip()):
        color = override.strip().upper()
        notes = ("color overridden by user",)
    result = ComponentResult(comp.id, comp.ctype, comp.bbox, ColorPayload(color))
    return result, ProvenanceRecord(comp.id, prompt, "histogram", seed, notes)


def run_handler(
    comp: WireframeComponent,
    theme: ThemeDescription,
    theme_raster: Raster,
    cache: CachePool,
    backends: BackendBundle,
    icon_store: KnowledgeStore | None,
    *,
    seed: int,
    templates: TemplateSet | None = None,
    override: str | None = None,
) -> tuple[ComponentResult, ProvenanceRecord]:
    """Dispatch one component to its handler."""
    handler = DISPATCH_TABLE[comp.ctype]
    if handler == "text":
        return run_text_agent(
            comp, theme, cache, backends.chat,
            seed=seed, templates=templates, override=override,
        )
    if handler == "icon":
        if icon_store is None:
            raise EmptyPhraseError("icon components need an icon store")
        return run_icon_agent(
            comp, theme, cache, backends.chat, icon_store, backends.embed,
            seed=seed, templates=templates, override=override,
        )
    if handler == "image":
        return run_image_agent(
            comp, theme, theme_raster, backends.image, cache,
            seed=seed, templates=templates, override=override,
        )
    return run_color_fallback(
        comp, theme, theme_raster, cache,
        seed=seed, templates=templates, override=override,
    )
