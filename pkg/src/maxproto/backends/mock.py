"""Deterministic in-process stand-ins for the three backend capabilities.

Every mock is a pure function of its inputs, hashed with blake2 so
outputs are identical across runs, processes and platforms. The exact
rules are documented below because the test suite re-implements them
as independent oracles; change a rule and its oracle together.
"""

from __future__ import annotations

import hashlib
import re

import numpy as np

from ..raster import Raster, resize_nearest
from .base import ImageRequest, stable_hash

_LAYOUT_LINE = re.compile(
    r"^- (?P<id>\S+) (?P<type>\w+) \[(?P<coords>\d+,\d+,\d+,\d+)\](?: hint: (?P<hint>.*))?$"
)
_TASK_LINE = re.compile(r"^TASK: (\w+)$", re.MULTILINE)

_THEME_COLORS = ("#1A237E", "#004D40", "#B71C1C", "#4A148C", "#263238", "#E65100")
_PRIMARY_COLORS = ("#FFC107", "#00BCD4", "#8BC34A", "#FF5722", "#9C27B0", "#03A9F4")
_CATEGORIES = ("productivity", "finance", "social", "travel", "health", "shopping")
_MOODS = ("calm", "bold", "playful", "minimal", "vivid", "warm")

_TEXT_KINDS = {"Text", "TextButton"}
_IMAGE_KINDS = {"Image", "BackgroundImage"}


def _hex4(value: int) -> str:
    return f"{value % 0x10000:04x}"


class MockChatBackend:
    """Replies keyed by the ``TASK: <kind>`` marker line agents embed.

    Rules (each deterministic in ``(prompt, seed)``):

    * ``theme`` - emits the labeled reply format the theme parser
      expects. Colors, category and mood are picked from fixed palettes
      by ``stable_hash("chat-theme", prompt, seed)``; a kind-appropriate
      ``HINT <id> <kind>:`` line is emitted for every ``- <id> <Type>
      [x,y,w,h]`` layout line found in the prompt (color-fallback types
      get no hint).
    * ``text`` - ``"Label-" + 4 hex digits`` of
      ``stable_hash("chat-text", prompt, seed)``.
    * ``icon`` - the first run of ASCII letters in the first
      ``COMPONENT_HINT:`` line's value, lowercased and cut to 12 chars;
      ``"msg"`` when the line is missing or holds no letters.
    * anything else - ``"OK-" + 4 hex digits`` of
      ``stable_hash("chat-any", prompt, seed)``.
    """

    def __init__(self, name: str = "mock-chat", max_input_chars: int = 100_000):
        self.name = name
        self.max_input_chars = max_input_chars

    def complete(self, prompt: str, seed: int) -> str:
        m = _TASK_LINE.search(prompt)
        task = m.group(1) if m else ""
        if task == "theme":
            return self._theme_reply(prompt, seed)
        if task == "text":
            return "Label-" + _hex4(stable_hash("chat-text", prompt, seed))
        if task == "icon":
            return self._icon_reply(prompt)
        return "OK-" + _hex4(stable_hash("chat-any", prompt, seed))

    def _theme_reply(self, prompt: str, seed: int) -> str:
        h = stable_hash("chat-theme", prompt, seed)
        theme = _THEME_COLORS[h % len(_THEME_COLORS)]
        primary = _PRIMARY_COLORS[(h >> 8) % len(_PRIMARY_COLORS)]
        category = _CATEGORIES[(h >> 16) % len(_CATEGORIES)]
        mood = _MOODS[(h >> 24) % len(_MOODS)]
        components = [
            m.groupdict() for m in (_LAYOUT_LINE.match(line) for line in prompt.splitlines()) if m
        ]
        lines = [
            f"THEME_COLOR: {theme}",
            f"PRIMARY_COLOR: {primary}",
            f"CATEGORY: {category}",
            f"NARRATIVE: A {mood} {category} screen with {len(components)} components.",
        ]
        for comp in components:
            cid, ctype = comp["id"], comp["type"]
            hint = (comp.get("hint") or "").strip()
            if ctype in _TEXT_KINDS:
                lines.append(f"HINT {cid} text: {hint or 'Label'} ({mood})")
            elif ctype in _IMAGE_KINDS:
                lines.append(f"HINT {cid} image: {mood} {category} illustration, {hint or 'hero'}")
            elif ctype == "Icon":
                lines.append(f"HINT {cid} icon: {hint or 'msg'}")
        return "\n".join(lines)

    @staticmethod
    def _icon_reply(prompt: str) -> str:
        for line in prompt.splitlines():
            if line.startswith("COMPONENT_HINT:"):
                value = line[len("COMPONENT_HINT:") :]
                m = re.search(r"[A-Za-z]+", value)
                if m:
                    return m.group(0).lower()[:12]
                break
        return "msg"


class MockEmbeddingBackend:
    """Character n-gram hashing embedder.

    Rule: the text is lowercased; its features are

    * all character n-grams of sizes 1, 2 and 3 (counted with
      multiplicity; the empty text has the single feature ``""``), and
    * for each whitespace-separated word, the n-grams (same sizes) of
      its consonant skeleton (the word with ``aeiou`` removed),
      namespaced with a ``"C:"`` prefix. The skeleton grams are what
      let abbreviations like ``msg`` land near ``message``.

    Each feature ``g`` is hashed with ``blake2b(g, digest_size=8,
    person=b"mxp-embed")``; the feature adds ``+1`` or ``-1`` (top hash
    bit) to vector component ``hash % dim``. The sum is L2-normalized.
    Should every contribution cancel, the component addressed by the
    hash of the whole lowercased text is set to 1 before normalizing,
    so no text ever maps to the zero vector.
    """

    def __init__(self, name: str = "mock-embed", dim: int = 64):
        self.name = name
        self.dim = dim

    @staticmethod
    def _feature_hash(gram: str) -> int:
        digest = hashlib.blake2b(
            gram.encode("utf-8"), digest_size=8, person=b"mxp-embed"
        ).digest()
        return int.from_bytes(digest, "big")

    @staticmethod
    def _ngrams(text: str) -> list[str]:
        return [text[i : i + n] for n in (1, 2, 3) for i in range(len(text) - n + 1)]

    def embed(self, text: str) -> list[float]:
        lowered = text.lower()
        grams = self._ngrams(lowered) or [""]
        for word in lowered.split():
            skeleton = "".join(ch for ch in word if ch not in "aeiou")
            grams.extend("C:" + g for g in self._ngrams(skeleton))
        vec = np.zeros(self.dim, dtype=np.float64)
        for gram in grams:
            h = self._feature_hash(gram)
            sign = 1.0 if (h >> 63) & 1 == 0 else -1.0
            vec[h % self.dim] += sign
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            vec[self._feature_hash(lowered) % self.dim] = 1.0
            norm = 1.0
        return [float(v) for v in vec / norm]


class MockImageBackend:
    """Flat-color rasters with condition tracing.

    Rule: the fill color is the low three bytes of
    ``stable_hash("image", prompt, seed)``. With ``init_image`` set the
    output is the per-channel mean of the (nearest-resized) init and
    the fill. With ``layout_condition`` set, every pixel whose
    condition luminance is below 128 is painted the fill's complement,
    so traced wireframe outlines survive into the output and crops of
    different regions differ.
    """

    supports_layout_condition = True
    supports_init_image = True

    def __init__(self, name: str = "mock-image"):
        self.name = name

    def generate(self, req: ImageRequest) -> Raster:
        h = stable_hash("image", req.prompt, req.seed)
        fill = np.array(
            [(h >> 16) & 0xFF, (h >> 8) & 0xFF, h & 0xFF], dtype=np.uint16
        )
        if req.init_image is not None:
            init = req.init_image
            if (init.width, init.height) != (req.width, req.height):
                init = resize_nearest(init, req.width, req.height)
            px = ((init.pixels.astype(np.uint16) + fill) // 2).astype(np.uint8)
            return Raster(px)
        px = np.empty((req.height, req.width, 3), dtype=np.uint8)
        px[:, :] = fill.astype(np.uint8)
        if req.layout_condition is not None:
            cond = req.layout_condition
            if (cond.width, cond.height) != (req.width, req.height):
                cond = resize_nearest(cond, req.width, req.height)
            luminance = cond.pixels.astype(np.uint16).sum(axis=2) // 3
            contrast = (255 - fill).astype(np.uint8)
            px[luminance < 128] = contrast
        return Raster(px)
