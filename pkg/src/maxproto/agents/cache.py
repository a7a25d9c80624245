"""The cache pool: accumulated generation context injected into sub-prompts.

The pool realizes the recurrence cache_t = result_{t-1} + cache_{t-1}:
each finished component's rendered summary is prepended, so entries
read most-recent-first. The theme summary seeds the pool and is pinned
at the tail; budget elision drops the oldest non-theme entries first
and never touches the theme or the newest entry.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..model import ColorPayload, ComponentResult, IconPayload, ImagePayload, TextPayload, ThemeDescription

DEFAULT_CACHE_BUDGET = 6000
_SUMMARY_LIMIT = 120


def _clip(text: str, limit: int = _SUMMARY_LIMIT) -> str:
    text = " ".join(text.split())
    return text if len(text) <= limit else text[: limit - 1] + "…"


def render_theme_summary(theme: ThemeDescription) -> str:
    return (
        f"[theme] color={theme.theme_color}; primary={theme.primary_color}; "
        f"category={theme.app_category}: {_clip(theme.narrative)}"
    )


def render_cache_entry(index: int, res: ComponentResult) -> str:
    """``[<idx>] <type> @ (x,y,w,h): <payload summary>`` (summary <= 120 chars)."""
    payload = res.payload
    if isinstance(payload, TextPayload):
        summary = f'text "{payload.text}"'
    elif isinstance(payload, ImagePayload):
        summary = f"image from prompt: {payload.prompt}"
    elif isinstance(payload, IconPayload):
        summary = f"icon {payload.icon_name} for phrase '{payload.phrase}'"
    elif isinstance(payload, ColorPayload):
        summary = f"fill {payload.color}"
    else:  # pragma: no cover - payload union is closed
        raise TypeError(f"unknown payload {payload!r}")
    b = res.bbox
    return f"[{index}] {res.ctype.value} @ ({b.x},{b.y},{b.w},{b.h}): {_clip(summary)}"


@dataclass(frozen=True)
class CachePool:
    """Immutable; every append returns a new pool.

    ``entries`` are rendered summaries, most recent first. When
    ``theme_pinned`` is true the final entry is the theme summary and
    is exempt from elision. ``next_index`` numbers appended results.
    """

    entries: tuple[str, ...] = ()
    char_budget: int = DEFAULT_CACHE_BUDGET
    theme_pinned: bool = False
    next_index: int = 0

    @classmethod
    def seeded(cls, theme: ThemeDescription, char_budget: int = DEFAULT_CACHE_BUDGET) -> "CachePool":
        """Slot 0 of every generation pass: the theme summary."""
        return cls(
            entries=(render_theme_summary(theme),),
            char_budget=char_budget,
            theme_pinned=True,
        )

    def rendered_length(self) -> int:
        if not self.entries:
            return 0
        return sum(len(e) for e in self.entries) + len(self.entries) - 1

    def render_block(self) -> str:
        body = "\n".join(self.entries) if self.entries else "(empty)"
        return (
            "=== DESIGN CONTEXT (most recent first) ===\n"
            + body
            + "\n=== END DESIGN CONTEXT ==="
        )


def cache_append(cache: CachePool, res: ComponentResult) -> CachePool:
    """Prepend the rendered result, then elide oldest entries over budget.

    The prior pool is untouched. Elision walks from the oldest retained
    entry (the one just before the pinned theme summary) toward newer
    ones; the theme summary and the entry appended right now always
    survive, even if the two of them alone exceed the budget.
    """
    entry = render_cache_entry(cache.next_index, res)
    entries = [entry, *cache.entries]
    protected_tail = 1 if cache.theme_pinned else 0

    def total(items: list[str]) -> int:
        return sum(len(e) for e in items) + max(0, len(items) - 1)

    while total(entries) > cache.char_budget and len(entries) - protected_tail > 1:
        del entries[len(entries) - protected_tail - 1]
    return CachePool(
        entries=tuple(entries),
        char_budget=cache.char_budget,
        theme_pinned=cache.theme_pinned,
        next_index=cache.next_index + 1,
    )


def compose_sub_prompt(p_sub: str, cache: CachePool) -> str:
    """Sub-agent prompt: the specific prompt followed by the cache block."""
    return p_sub + "\n\n" + cache.render_block()
