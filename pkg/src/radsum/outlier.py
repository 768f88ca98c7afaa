"""Bivariate Gaussian fit, Mahalanobis scoring, percentile filter, and the
truncation/padding budget rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UsageError, ValidationError

RIDGE_TRIGGER = 1e-8
RIDGE_SCALE = 1e-6


@dataclass(frozen=True)
class GaussianModel2D:
    mean: tuple[float, float]
    covariance: tuple[tuple[float, float], tuple[float, float]]
    inverse_covariance: tuple[tuple[float, float], tuple[float, float]]
    ridge: float


@dataclass(frozen=True)
class FilterResult:
    retained_ids: tuple[str, ...]
    excluded_ids: tuple[str, ...]
    threshold_d2: float
    percentile: float


def fit_gaussian(points: list[tuple[float, float]]) -> GaussianModel2D:
    """Sample mean/covariance (n-1 denominator) with ridge fallback.

    A ridge of RIDGE_SCALE * trace is added to the diagonal when the smallest
    eigenvalue drops below RIDGE_TRIGGER * trace, so collinear length pairs
    still produce an invertible model.
    """
    if len(points) < 3:
        raise ValidationError(f"need at least 3 points, got {len(points)}")
    data = np.asarray(points, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ValidationError("points must be 2-vectors")
    mean = data.mean(axis=0)
    cov = np.cov(data, rowvar=False, ddof=1)
    trace = float(np.trace(cov))
    if trace <= 0.0:
        raise ValidationError("fully degenerate data: both variances are zero")
    ridge = 0.0
    eigvals = np.linalg.eigvalsh(cov)
    if eigvals.min() < RIDGE_TRIGGER * trace:
        ridge = RIDGE_SCALE * trace
        cov = cov + ridge * np.eye(2)
    inv = np.linalg.inv(cov)
    return GaussianModel2D(
        mean=(float(mean[0]), float(mean[1])),
        covariance=tuple(tuple(float(x) for x in row) for row in cov),
        inverse_covariance=tuple(tuple(float(x) for x in row) for row in inv),
        ridge=ridge,
    )


def mahalanobis_sq(model: GaussianModel2D, point: tuple[float, float]) -> float:
    """Squared Mahalanobis distance (x - mu)^T Sigma^-1 (x - mu)."""
    dx = point[0] - model.mean[0]
    dy = point[1] - model.mean[1]
    inv = model.inverse_covariance
    d2 = (
        dx * (inv[0][0] * dx + inv[0][1] * dy)
        + dy * (inv[1][0] * dx + inv[1][1] * dy)
    )
    return max(d2, 0.0)


def filter_percentile(
    points: list[tuple[float, float]],
    ids: list[str],
    percentile: float,
    model: GaussianModel2D,
) -> FilterResult:
    """Retain the ceil(percentile * n) closest points by (d^2, id) order."""
    if not 0.0 < percentile <= 1.0:
        raise UsageError(f"percentile must be in (0, 1], got {percentile}")
    if len(points) != len(ids):
        raise ValidationError("points and ids must have matching sizes")
    scored = sorted(
        ((mahalanobis_sq(model, p), rid) for p, rid in zip(points, ids)),
        key=lambda item: (item[0], item[1]),
    )
    keep = math.ceil(percentile * len(scored))
    retained = scored[:keep]
    excluded = scored[keep:]
    return FilterResult(
        retained_ids=tuple(rid for _, rid in retained),
        excluded_ids=tuple(rid for _, rid in excluded),
        threshold_d2=retained[-1][0] if retained else 0.0,
        percentile=percentile,
    )


def truncation_length(max_word_tokens: int) -> int:
    """Transformer truncation/padding budget: ceil(1.33 * max), exact in integers."""
    if max_word_tokens < 1:
        raise UsageError("max_word_tokens must be >= 1")
    return -(-133 * max_word_tokens // 100)
