"""Evaluation metrics over feature sets: Fréchet distance and diversity.

Both metrics operate on plain feature matrices so any external feature
extractor can feed them through the feature-file format; a built-in
"pixel-stats" extractor (per-channel mean/std plus an 8x8 grayscale
thumbnail, d = 70) keeps the whole pipeline testable offline.

The Fréchet distance between the Gaussians (mu_a, S_a), (mu_b, S_b) is

    |mu_a - mu_b|^2 + tr(S_a) + tr(S_b) - 2 tr((S_b^1/2 S_a S_b^1/2)^1/2)

with the matrix square roots taken by eigendecomposition of the
symmetrized operand, clipping negative eigenvalues at zero. Diversity
is the mean pairwise cosine dissimilarity of the rows, scaled by 100.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionMismatchError, ZeroVectorError
from .raster import Raster, resize_nearest

log = logging.getLogger("maxproto.metrics")

EVAL_IMAGE_SIZE = 512
_NEGATIVE_CLAMP = 1e-6


@dataclass(frozen=True, eq=False)
class FeatureSet:
    """n samples by d features; entries must be finite."""

    matrix: np.ndarray
    source: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
            raise ValueError(f"feature matrix must be 2-D and non-empty, got {m.shape}")
        if not np.isfinite(m).all():
            raise ValueError("feature matrix contains non-finite entries")
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[1])

    def __eq__(self, other):
        if not isinstance(other, FeatureSet):
            return NotImplemented
        return self.source == other.source and np.array_equal(self.matrix, other.matrix)


@dataclass(frozen=True, eq=False)
class GaussianStats:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64).reshape(-1)
        cov = np.asarray(self.cov, dtype=np.float64)
        if cov.shape != (mean.size, mean.size):
            raise ValueError(f"cov shape {cov.shape} does not match mean dim {mean.size}")
        if np.abs(cov - cov.T).max(initial=0.0) > 1e-8:
            raise ValueError("covariance must be symmetric within 1e-8")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def dim(self) -> int:
        return int(self.mean.size)


def fit_gaussian(fs: FeatureSet) -> GaussianStats:
    """Sample mean and unbiased (n-1) covariance, symmetrized."""
    if fs.n < 2:
        raise ValueError(f"need at least 2 samples to fit statistics, got {fs.n}")
    mean = fs.matrix.mean(axis=0)
    centered = fs.matrix - mean
    cov = centered.T @ centered / (fs.n - 1)
    cov = (cov + cov.T) / 2
    return GaussianStats(mean=mean, cov=cov)


def _psd_sqrt(sym: np.ndarray) -> np.ndarray:
    """Square root of a symmetric PSD matrix; negative eigenvalues clip to 0."""
    eigvals, eigvecs = np.linalg.eigh(sym)
    if eigvals.min(initial=0.0) < -1e-10 * max(1.0, float(eigvals.max(initial=0.0))):
        log.warning("clipping negative eigenvalue %.3e in matrix sqrt", eigvals.min())
    root = np.sqrt(np.clip(eigvals, 0.0, None))
    return (eigvecs * root) @ eigvecs.T


def frechet_distance(a: GaussianStats, b: GaussianStats) -> float:
    """Non-negative Fréchet distance between two Gaussian statistics."""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"stats dims differ: {a.dim} vs {b.dim}")
    sqrt_b = _psd_sqrt(b.cov)
    inner = sqrt_b @ a.cov @ sqrt_b
    inner = (inner + inner.T) / 2
    trace_sqrt = float(np.sqrt(np.clip(np.linalg.eigvalsh(inner), 0.0, None)).sum())
    mean_term = float(((a.mean - b.mean) ** 2).sum())
    value = mean_term + float(np.trace(a.cov)) + float(np.trace(b.cov)) - 2.0 * trace_sqrt
    if not np.isfinite(value):
        raise ValueError("Fréchet distance is not finite")
    if value < 0.0:
        if value < -_NEGATIVE_CLAMP:
            raise ValueError(f"Fréchet distance {value} below the floating-error clamp")
        log.warning("clamping tiny negative Fréchet distance %.3e to 0", value)
        value = 0.0
    return value


def generation_diversity(fs: FeatureSet) -> float:
    """Mean pairwise cosine dissimilarity of the rows, times 100."""
    if fs.n < 2:
        raise ValueError(f"diversity needs at least 2 samples, got {fs.n}")
    norms = np.linalg.norm(fs.matrix, axis=1)
    zero_rows = np.flatnonzero(norms == 0.0)
    if zero_rows.size:
        raise ZeroVectorError(f"all-zero feature row at index {int(zero_rows[0])}")
    unit = fs.matrix / norms[:, None]
    gram = unit @ unit.T
    iu = np.triu_indices(fs.n, k=1)
    return float(np.mean(1.0 - gram[iu]) * 100.0)


# --- feature extraction -----------------------------------------------------------


class PixelStatsExtractor:
    """Per-channel mean/std plus an 8x8 grayscale thumbnail (d = 70).

    Images are nearest-resized to 512x512 first, so inputs of any size
    are comparable.
    """

    name = "pixel-stats"
    dim = 70
    _THUMB = 8

    def extract(self, raster: Raster) -> np.ndarray:
        if (raster.width, raster.height) != (EVAL_IMAGE_SIZE, EVAL_IMAGE_SIZE):
            raster = resize_nearest(raster, EVAL_IMAGE_SIZE, EVAL_IMAGE_SIZE)
        px = raster.pixels.astype(np.float64)
        means = px.mean(axis=(0, 1))
        stds = px.std(axis=(0, 1))
        gray = px.mean(axis=2)
        block = EVAL_IMAGE_SIZE // self._THUMB
        thumb = gray.reshape(self._THUMB, block, self._THUMB, block).mean(axis=(1, 3))
        return np.concatenate([means, stds, thumb.reshape(-1)])


def extract_features(rasters, extractor=None, source: str = "") -> FeatureSet:
    """One feature row per image, in input order."""
    extractor = extractor or PixelStatsExtractor()
    rows = []
    for raster in rasters:
        row = np.asarray(extractor.extract(raster), dtype=np.float64).reshape(-1)
        if rows and row.size != rows[0].size:
            raise DimensionMismatchError(
                f"extractor returned dim {row.size}, previous rows have {rows[0].size}"
            )
        rows.append(row)
    if not rows:
        raise ValueError("no images to extract features from")
    return FeatureSet(np.vstack(rows), source=source or extractor.name)


# --- feature files -----------------------------------------------------------------


def save_features(fs: FeatureSet, path) -> None:
    """Header line ``{n, d, extractor}`` then one row of floats per line.

    Floats are written with ``repr`` so loading reproduces them exactly.
    """
    lines = [json.dumps({"n": fs.n, "d": fs.dim, "extractor": fs.source}, sort_keys=True)]
    for row in fs.matrix:
        lines.append(" ".join(repr(float(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_features(path) -> FeatureSet:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ValueError(f"feature file {path} is empty")
    header = json.loads(lines[0])
    rows = [
        np.array([float(v) for v in line.split()], dtype=np.float64)
        for line in lines[1:]
        if line.strip()
    ]
    if len(rows) != header["n"]:
        raise ValueError(f"feature file {path}: header n={header['n']}, found {len(rows)} rows")
    matrix = np.vstack(rows)
    if matrix.shape[1] != header["d"]:
        raise DimensionMismatchError(
            f"feature file {path}: header d={header['d']}, rows have {matrix.shape[1]}"
        )
    return FeatureSet(matrix, source=header.get("extractor", ""))


def evaluation_report(real: FeatureSet, generated: FeatureSet) -> dict:
    """FID between the two sets plus the generated set's diversity."""
    fid = frechet_distance(fit_gaussian(generated), fit_gaussian(real))
    gd = generation_diversity(generated)
    return {
        "fid": fid,
        "gd": gd,
        "n_real": real.n,
        "n_gen": generated.n,
        "extractor": generated.source,
    }
