"""In-memory RGB rasters with deterministic PNG encoding.

Rasters flow through the whole pipeline: the theme image, component
crops, mock-backend outputs and the exported SVG/JSON all carry them.
Encoding is done by a small built-in PNG writer (8-bit RGB, filter 0,
fixed zlib settings) so identical pixels always yield identical bytes;
decoding goes through Pillow so externally produced images load too.
"""

from __future__ import annotations

import base64
import io
import struct
import zlib
from dataclasses import dataclass

import numpy as np

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


@dataclass(frozen=True, eq=False)
class Raster:
    """An 8-bit RGB image, shape (height, width, 3)."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.uint8)
        if px.ndim != 3 or px.shape[2] != 3 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError(f"raster must be (h, w, 3) uint8, got shape {px.shape}")
        px = np.ascontiguousarray(px)
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Raster):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(
            np.array_equal(self.pixels, other.pixels)
        )

    def __repr__(self) -> str:
        return f"Raster({self.width}x{self.height})"

    @classmethod
    def flat(cls, width: int, height: int, color: tuple[int, int, int]) -> "Raster":
        """Uniform fill of ``color`` (RGB 0-255)."""
        px = np.empty((height, width, 3), dtype=np.uint8)
        px[:, :] = color
        return cls(px)

    def crop(self, x: int, y: int, w: int, h: int) -> "Raster":
        """Crop the rectangle (x, y, w, h); must lie inside the raster."""
        if w < 1 or h < 1 or x < 0 or y < 0 or x + w > self.width or y + h > self.height:
            raise ValueError(
                f"crop ({x},{y},{w},{h}) outside raster {self.width}x{self.height}"
            )
        return Raster(self.pixels[y : y + h, x : x + w])

    def to_png_bytes(self) -> bytes:
        return png_encode(self.pixels)

    def to_base64_png(self) -> str:
        return base64.b64encode(self.to_png_bytes()).decode("ascii")

    @classmethod
    def from_png_bytes(cls, data: bytes) -> "Raster":
        return cls(png_decode(data))

    @classmethod
    def from_base64_png(cls, data: str) -> "Raster":
        return cls.from_png_bytes(base64.b64decode(data))


def _chunk(tag: bytes, payload: bytes) -> bytes:
    return (
        struct.pack(">I", len(payload))
        + tag
        + payload
        + struct.pack(">I", zlib.crc32(tag + payload) & 0xFFFFFFFF)
    )


def png_encode(pixels: np.ndarray) -> bytes:
    """Encode (h, w, 3) uint8 pixels as a PNG.

    Always writes filter type 0 scanlines compressed at zlib level 6,
    so the byte stream is a pure function of the pixel data.
    """
    px = np.asarray(pixels, dtype=np.uint8)
    if px.ndim != 3 or px.shape[2] != 3:
        raise ValueError(f"expected (h, w, 3) pixels, got shape {px.shape}")
    h, w = px.shape[0], px.shape[1]
    ihdr = struct.pack(">IIBBBBB", w, h, 8, 2, 0, 0, 0)  # 8-bit truecolor RGB
    raw = np.empty((h, 1 + w * 3), dtype=np.uint8)
    raw[:, 0] = 0  # filter type 0 on every scanline
    raw[:, 1:] = px.reshape(h, w * 3)
    idat = zlib.compress(raw.tobytes(), 6)
    return (
        _PNG_SIGNATURE
        + _chunk(b"IHDR", ihdr)
        + _chunk(b"IDAT", idat)
        + _chunk(b"IEND", b"")
    )


def png_decode(data: bytes) -> np.ndarray:
    """Decode any PNG (or other Pillow-readable image) to (h, w, 3) uint8."""
    from PIL import Image

    with Image.open(io.BytesIO(data)) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8)


def load_image(path) -> Raster:
    """Load an image file from disk (any Pillow-supported format)."""
    from PIL import Image

    with Image.open(path) as im:
        return Raster(np.asarray(im.convert("RGB"), dtype=np.uint8))


def resize_nearest(raster: Raster, width: int, height: int) -> Raster:
    """Nearest-neighbour resize; deterministic and dependency-free."""
    if width < 1 or height < 1:
        raise ValueError("target dims must be positive")
    ys = (np.arange(height) * raster.height) // height
    xs = (np.arange(width) * raster.width) // width
    return Raster(raster.pixels[np.ix_(ys, xs)])
