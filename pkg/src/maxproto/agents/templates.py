"""Prompt templates and their slot-filling renderer.

The three named templates (theme, text, icon) ship as editable JSON in
``maxproto/data/templates.json``; a user-supplied file overrides them
key by key. Slots are written ``[slotname]`` and drawn from a fixed
vocabulary; rendering a template that still has an unfilled slot is an
error, never a silent pass-through.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..errors import TemplateSlotError

TEMPLATE_NAMES = ("theme", "text", "icon")
SLOT_NAMES = ("prompt", "layout", "references", "bbox", "cache")

_SLOT_RE = re.compile(r"\[(" + "|".join(SLOT_NAMES) + r")\]")


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    template: str

    def __post_init__(self):
        if self.name not in TEMPLATE_NAMES:
            raise ValueError(f"unknown template name {self.name!r}")

    def slots(self) -> set[str]:
        return set(_SLOT_RE.findall(self.template))

    def render(self, **values: str) -> str:
        """Fill every slot in one pass; unfilled slots raise."""
        missing = self.slots() - set(values)
        if missing:
            raise TemplateSlotError(
                f"template {self.name!r}: unfilled slots {sorted(missing)}"
            )
        return _SLOT_RE.sub(lambda m: values[m.group(1)], self.template)


TemplateSet = dict[str, PromptTemplate]


def default_templates() -> TemplateSet:
    raw = json.loads(
        resources.files("maxproto.data").joinpath("templates.json").read_text("utf-8")
    )
    return {name: PromptTemplate(name, raw[name]) for name in TEMPLATE_NAMES}


def load_templates(path=None) -> TemplateSet:
    """Defaults, overlaid with any user file's entries."""
    templates = default_templates()
    if path is not None:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        for name, text in raw.items():
            if name not in TEMPLATE_NAMES:
                raise ValueError(f"template file defines unknown template {name!r}")
            templates[name] = PromptTemplate(name, text)
    return templates
