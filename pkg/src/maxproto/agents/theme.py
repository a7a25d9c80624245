"""The theme agent: retrieval-grounded theme description plus theme image.

The theme prompt concatenates, in order, the template preamble, the
user prompt, the rendered layout and the retrieved references. The
chat reply is parsed tolerantly from labeled lines; one automatic
repair round (a re-ask with a format reminder) runs before a parse
failure surfaces. The theme image is generated with the rendered
wireframe as the spatial condition.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..backends.base import BackendBundle, ImageRequest, derive_seed, render_layout_condition
from ..errors import PromptBudgetError, ThemeParseError
from ..kb import KnowledgeStore, RetrievalConfig, RetrievedReference, render_query, retrieve
from ..model import (
    ComponentHint,
    GenerationRequest,
    ProvenanceRecord,
    ThemeDescription,
    render_wireframe_text,
)
from ..raster import Raster
from .templates import PromptTemplate, TemplateSet, default_templates

_NO_REFERENCES_MARKER = "NO REFERENCES AVAILABLE"
_TRUNCATION_NOTICE = "[references truncated to fit the prompt budget]"

_REQUIRED_LABELS = {
    "THEME_COLOR": "theme_color",
    "PRIMARY_COLOR": "primary_color",
    "CATEGORY": "app_category",
    "NARRATIVE": "narrative",
}
_LABEL_RE = re.compile(r"^\s*(THEME_COLOR|PRIMARY_COLOR|CATEGORY|NARRATIVE)\s*:\s*(.*)$")
_HINT_RE = re.compile(r"^\s*HINT\s+(?P<id>\S+)(?:\s+(?P<kind>text|image|icon))?\s*:\s*(?P<value>.*)$")

_FORMAT_REMINDER = (
    "FORMAT REMINDER: reply only with the labeled lines "
    "THEME_COLOR:, PRIMARY_COLOR:, CATEGORY:, NARRATIVE: "
    "and optional 'HINT <component_id> <text|image|icon>: <suggestion>' lines."
)


def render_references(refs: list[RetrievedReference]) -> str:
    if not refs:
        return _NO_REFERENCES_MARKER
    parts = []
    for i, ref in enumerate(refs, start=1):
        parts.append(f"REFERENCE {i} ({ref.record_id}, score={ref.score:.4f}):\n{ref.rendered}")
    return "\n".join(parts)


def compose_theme_prompt(
    req: GenerationRequest,
    refs: list[RetrievedReference],
    tmpl: PromptTemplate,
    max_input_chars: int,
) -> str:
    """Render the theme prompt, shrinking the references block to fit.

    References are dropped from the lowest-ranked end, then the block
    is cut mid-text; if the prompt is over budget even with no
    references at all, that is a :class:`PromptBudgetError`.
    """
    layout = render_wireframe_text(req.wireframe)

    def render_with(refs_text: str) -> str:
        return tmpl.render(prompt=req.prompt, layout=layout, references=refs_text)

    prompt = render_with(render_references(refs))
    if len(prompt) <= max_input_chars:
        return prompt
    for keep in range(len(refs) - 1, 0, -1):
        prompt = render_with(render_references(refs[:keep]) + "\n" + _TRUNCATION_NOTICE)
        if len(prompt) <= max_input_chars:
            return prompt
    base = render_with(_NO_REFERENCES_MARKER)
    if len(base) > max_input_chars:
        raise PromptBudgetError(
            f"theme prompt needs {len(base)} chars with no references; "
            f"budget is {max_input_chars}"
        )
    return base


def parse_theme_description(reply: str) -> ThemeDescription:
    """Extract labeled fields from a chat reply, ignoring stray chatter.

    All four of THEME_COLOR / PRIMARY_COLOR / CATEGORY / NARRATIVE must
    be present (the last occurrence of a repeated label wins);
    ``HINT <id> [kind]:`` lines accumulate per-component guidance, and a
    kind-less hint fills all three hint fields.
    """
    fields: dict[str, str] = {}
    hints: dict[str, dict[str, str]] = {}
    for line in reply.splitlines():
        m = _LABEL_RE.match(line)
        if m:
            fields[_REQUIRED_LABELS[m.group(1)]] = m.group(2).strip()
            continue
        m = _HINT_RE.match(line)
        if m:
            slot = hints.setdefault(m.group("id"), {})
            value = m.group("value").strip()
            kinds = (m.group("kind"),) if m.group("kind") else ("text", "image", "icon")
            for kind in kinds:
                slot[kind] = value
    missing = [
        label
        for label, attr in _REQUIRED_LABELS.items()
        if not fields.get(attr, "").strip()
    ]
    if missing:
        raise ThemeParseError(
            f"theme reply is missing required fields: {', '.join(missing)}",
            missing=missing,
        )
    component_hints = {
        cid: ComponentHint(
            text_hint=slot.get("text"),
            image_prompt=slot.get("image"),
            icon_hint=slot.get("icon"),
        )
        for cid, slot in hints.items()
    }
    return ThemeDescription(component_hints=component_hints, **fields)


def theme_image_prompt(theme: ThemeDescription) -> str:
    return (
        f"{theme.narrative} Full-screen {theme.app_category} app UI, "
        f"{theme.theme_color} background with {theme.primary_color} accents."
    )


@dataclass(frozen=True)
class ThemeOutcome:
    theme: ThemeDescription
    raster: Raster
    provenance: ProvenanceRecord
    image_prompt: str
    image_seed: int


def generate_theme(
    req: GenerationRequest,
    store: KnowledgeStore,
    backends: BackendBundle,
    *,
    templates: TemplateSet | None = None,
    retrieval: RetrievalConfig = RetrievalConfig(),
    image_width: int = 512,
    image_height: int = 512,
) -> ThemeOutcome:
    """Retrieve references, ask for the theme, render the theme image."""
    templates = templates or default_templates()
    master = req.seed if req.seed is not None else 0
    refs = retrieve(store, render_query(req), backends.embed, retrieval)
    prompt = compose_theme_prompt(
        req, refs, templates["theme"], backends.chat.max_input_chars
    )

    chat_seed = derive_seed(master, "theme-chat")
    reply = backends.chat.complete(prompt, chat_seed)
    notes: tuple[str, ...] = ()
    try:
        theme = parse_theme_description(reply)
    except ThemeParseError:
        repair_prompt = prompt + "\n\n" + _FORMAT_REMINDER
        repair_seed = derive_seed(master, "theme-chat-repair")
        reply = backends.chat.complete(repair_prompt, repair_seed)
        theme = parse_theme_description(reply)  # second failure propagates
        prompt, chat_seed = repair_prompt, repair_seed
        notes = ("repair round used",)

    known = set(req.wireframe.component_ids())
    dropped = sorted(set(theme.component_hints) - known)
    if dropped:
        theme = ThemeDescription(
            theme_color=theme.theme_color,
            primary_color=theme.primary_color,
            app_category=theme.app_category,
            narrative=theme.narrative,
            component_hints={
                cid: h for cid, h in theme.component_hints.items() if cid in known
            },
        )
        notes = notes + (f"dropped hints for unknown components: {', '.join(dropped)}",)

    img_prompt = theme_image_prompt(theme)
    img_seed = derive_seed(master, "theme-image")
    raster = backends.image.generate(
        ImageRequest(
            prompt=img_prompt,
            width=image_width,
            height=image_height,
            seed=img_seed,
            layout_condition=render_layout_condition(
                req.wireframe, image_width, image_height
            ),
        )
    )
    provenance = ProvenanceRecord(
        component_id="__theme__",
        prompt=prompt,
        backend=f"{backends.chat.name}+{backends.image.name}",
        seed=chat_seed,
        notes=notes,
    )
    return ThemeOutcome(
        theme=theme,
        raster=raster,
        provenance=provenance,
        image_prompt=img_prompt,
        image_seed=img_seed,
    )
