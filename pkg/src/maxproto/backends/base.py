"""Backend contracts shared by mocks and remote adapters.

Three capabilities exist: chat completion, text embedding, and
layout-conditioned image generation. The engine only ever talks to
these interfaces, so a run under mocks exercises exactly the same code
paths as a run against live services.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Protocol, Sequence, runtime_checkable

import numpy as np

from ..model import Wireframe, scale_bbox_to_pixels
from ..raster import Raster


@dataclass(frozen=True)
class ImageRequest:
    """One image generation call.

    ``layout_condition`` (the rendered wireframe raster) steers the
    theme image; ``init_image`` (a crop of the theme image) seeds
    component images. The engine never sets both at once.
    """

    prompt: str
    width: int
    height: int
    seed: int
    layout_condition: Raster | None = None
    init_image: Raster | None = None

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("image dims must be positive")
        if self.layout_condition is not None and self.init_image is not None:
            raise ValueError("layout_condition and init_image are mutually exclusive")


@runtime_checkable
class ChatBackend(Protocol):
    name: str
    max_input_chars: int

    def complete(self, prompt: str, seed: int) -> str: ...


@runtime_checkable
class EmbeddingBackend(Protocol):
    name: str
    dim: int

    def embed(self, text: str) -> Sequence[float]: ...


@runtime_checkable
class ImageBackend(Protocol):
    name: str
    supports_layout_condition: bool
    supports_init_image: bool

    def generate(self, req: ImageRequest) -> Raster: ...


@dataclass(frozen=True)
class BackendBundle:
    """The three capabilities an engine run needs, bound together."""

    chat: ChatBackend
    embed: EmbeddingBackend
    image: ImageBackend


def stable_hash(*parts) -> int:
    """Platform-independent 63-bit hash of the given parts."""
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        h.update(repr(part).encode("utf-8"))
        h.update(b"\x1f")
    return int.from_bytes(h.digest(), "big") & 0x7FFFFFFFFFFFFFFF


def derive_seed(master: int, *parts) -> int:
    """Per-call seed derived from the master seed and call identity.

    Regenerating one component therefore never disturbs the seeds of
    any other call.
    """
    return stable_hash("seed", master, *parts)


def render_layout_condition(wf: Wireframe, width: int, height: int) -> Raster:
    """Black-on-white outline raster of the wireframe boxes.

    This is the spatial condition handed to layout-aware image
    backends; outlines are two pixels thick, clipped to the canvas.
    """
    px = np.full((height, width, 3), 255, dtype=np.uint8)
    for comp in wf.components:
        r = scale_bbox_to_pixels(comp.bbox, width, height)
        x0, y0 = r.x, r.y
        x1, y1 = r.x + r.w, r.y + r.h
        t = 2
        px[y0 : min(y0 + t, y1), x0:x1] = 0
        px[max(y1 - t, y0) : y1, x0:x1] = 0
        px[y0:y1, x0 : min(x0 + t, x1)] = 0
        px[y0:y1, max(x1 - t, x0) : x1] = 0
    return Raster(px)
