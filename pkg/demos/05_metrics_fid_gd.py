"""Metrics: Fréchet distance and generation diversity on feature sets.

FID compares Gaussian statistics of a generated set against a real
set (lower = closer); diversity is the mean pairwise cosine
dissimilarity within a set, scaled by 100 (higher = more varied).
Features here come from the built-in pixel-stats extractor.
"""

import numpy as np

from maxproto import (
    FeatureSet,
    MockImageBackend,
    ImageRequest,
    extract_features,
    fit_gaussian,
    frechet_distance,
    generation_diversity,
)
from maxproto.metrics import GaussianStats, evaluation_report

# 1-D sanity check against the closed form (mu_a-mu_b)^2 + (s_a-s_b)^2.
a = GaussianStats(np.array([0.0]), np.array([[1.0]]))
b = GaussianStats(np.array([1.0]), np.array([[4.0]]))
print(f"1-D FID for mu 0->1, sigma 1->2: {frechet_distance(a, b):.6f} (closed form: 2.0)")

# Shifting a cloud by v moves FID by exactly |v|^2 when covariances match.
rng = np.random.default_rng(0)
base = rng.normal(size=(200, 8))
v = rng.normal(size=8) * 0.5
shifted = base + v
fid = frechet_distance(
    fit_gaussian(FeatureSet(base)), fit_gaussian(FeatureSet(shifted))
)
print(f"translation check: fid={fid:.6f}, |v|^2={float((v ** 2).sum()):.6f}")

# Feature extraction from rasters: mock "generated screens" with two
# different prompt seeds vs a "real" set.
backend = MockImageBackend()
real = [backend.generate(ImageRequest(prompt=f"real-{i}", width=64, height=64, seed=i)) for i in range(12)]
gen = [backend.generate(ImageRequest(prompt=f"gen-{i}", width=64, height=64, seed=100 + i)) for i in range(12)]
report = evaluation_report(
    extract_features(real, source="pixel-stats"),
    extract_features(gen, source="pixel-stats"),
)
print("\nmock screens report:")
for key, value in sorted(report.items()):
    print(f"  {key}: {value:.4f}" if isinstance(value, float) else f"  {key}: {value}")

# Diversity extremes.
identical = FeatureSet(np.tile([3.0, 1.0, 2.0], (6, 1)))
orthogonal = FeatureSet(np.eye(6))
print(f"\ndiversity of identical rows:  {generation_diversity(identical):.2f}")
print(f"diversity of orthogonal rows: {generation_diversity(orthogonal):.2f}")
