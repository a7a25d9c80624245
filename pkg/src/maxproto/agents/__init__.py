from ..model import ComponentHint, ThemeDescription
from .cache import (
    CachePool,
    DEFAULT_CACHE_BUDGET,
    cache_append,
    compose_sub_prompt,
    render_cache_entry,
    render_theme_summary,
)
from .orchestrate import (
    GenerationOptions,
    orchestrate,
    rebuild_cache_for,
    regenerate_component,
    replace_component_payload,
)
from .subagents import (
    DISPATCH_TABLE,
    dominant_color,
    run_color_fallback,
    run_icon_agent,
    run_image_agent,
    run_text_agent,
    sub_prompt_for,
)
from .templates import PromptTemplate, TemplateSet, default_templates, load_templates
from .theme import (
    ThemeOutcome,
    compose_theme_prompt,
    generate_theme,
    parse_theme_description,
)

__all__ = [
    "CachePool",
    "ComponentHint",
    "DEFAULT_CACHE_BUDGET",
    "DISPATCH_TABLE",
    "GenerationOptions",
    "PromptTemplate",
    "TemplateSet",
    "ThemeDescription",
    "ThemeOutcome",
    "cache_append",
    "compose_sub_prompt",
    "compose_theme_prompt",
    "default_templates",
    "dominant_color",
    "generate_theme",
    "load_templates",
    "orchestrate",
    "parse_theme_description",
    "rebuild_cache_for",
    "regenerate_component",
    "render_cache_entry",
    "render_theme_summary",
    "replace_component_payload",
    "run_color_fallback",
    "run_icon_agent",
    "run_image_agent",
    "run_text_agent",
    "sub_prompt_for",
]
