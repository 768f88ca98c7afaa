import math

import numpy as np
import pytest

from radsum.errors import UsageError, ValidationError
from radsum.outlier import (
    filter_percentile,
    fit_gaussian,
    mahalanobis_sq,
    truncation_length,
)


def _cloud(seed, n=50):
    rng = np.random.default_rng(seed)
    pts = rng.multivariate_normal([40, 8], [[25, 6], [6, 4]], size=n)
    return [tuple(map(float, p)) for p in pts]


class TestFitGaussian:
    def test_mean_and_covariance(self):
        points = [(0.0, 0.0), (2.0, 0.0), (0.0, 2.0), (2.0, 2.0)]
        model = fit_gaussian(points)
        assert model.mean == (1.0, 1.0)
        expected = np.cov(np.asarray(points), rowvar=False, ddof=1)
        assert np.allclose(model.covariance, expected)
        assert model.ridge == 0.0

    def test_too_few_points(self):
        with pytest.raises(ValidationError):
            fit_gaussian([(0.0, 0.0), (1.0, 1.0)])

    def test_collinear_triggers_ridge(self):
        points = [(float(i), 2.0 * float(i)) for i in range(10)]
        model = fit_gaussian(points)
        assert model.ridge > 0.0
        d2 = mahalanobis_sq(model, (3.0, 6.0))
        assert math.isfinite(d2)

    def test_fully_degenerate_rejected(self):
        with pytest.raises(ValidationError):
            fit_gaussian([(1.0, 1.0)] * 5)

    def test_inverse_is_inverse(self):
        model = fit_gaussian(_cloud(1))
        product = np.asarray(model.covariance) @ np.asarray(model.inverse_covariance)
        assert np.allclose(product, np.eye(2), atol=1e-9)


class TestMahalanobis:
    def test_zero_at_mean(self):
        model = fit_gaussian(_cloud(2))
        assert mahalanobis_sq(model, model.mean) == 0.0

    def test_identity_covariance_is_euclidean(self):
        rng = np.random.default_rng(9)
        pts = [tuple(map(float, p)) for p in rng.standard_normal((4000, 2))]
        model = fit_gaussian(pts)
        d2 = mahalanobis_sq(model, (model.mean[0] + 1.0, model.mean[1]))
        assert d2 == pytest.approx(1.0, rel=0.1)

    def test_nonnegative(self):
        model = fit_gaussian(_cloud(3))
        for p in _cloud(4, n=200):
            assert mahalanobis_sq(model, p) >= 0.0


class TestFilterPercentile:
    def test_retains_ceiling(self):
        points = _cloud(5, n=101)
        ids = [f"r{i:03d}" for i in range(101)]
        model = fit_gaussian(points)
        result = filter_percentile(points, ids, 0.98, model)
        assert len(result.retained_ids) == math.ceil(0.98 * 101)
        assert len(result.excluded_ids) == 101 - len(result.retained_ids)

    def test_excluded_are_farthest(self):
        points = _cloud(6, n=40)
        ids = [f"r{i}" for i in range(40)]
        model = fit_gaussian(points)
        result = filter_percentile(points, ids, 0.9, model)
        d2 = {rid: mahalanobis_sq(model, p) for p, rid in zip(points, ids)}
        worst_retained = max(d2[rid] for rid in result.retained_ids)
        best_excluded = min(d2[rid] for rid in result.excluded_ids)
        assert worst_retained <= best_excluded

    def test_tie_broken_by_id(self):
        points = [(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0), (0.0, 1.5), (0.0, -1.5)]
        ids = ["e", "b", "a", "d", "c"]
        model = fit_gaussian(points)
        result = filter_percentile(points, ids, 0.6, model)
        # b and a are equidistant; the lexicographically smaller id wins the slot
        assert "a" in result.retained_ids or "b" in result.retained_ids
        assert result.retained_ids[0] == "e"

    def test_percentile_one_keeps_all(self):
        points = _cloud(7, n=20)
        ids = [str(i) for i in range(20)]
        model = fit_gaussian(points)
        result = filter_percentile(points, ids, 1.0, model)
        assert sorted(result.retained_ids) == sorted(ids)
        assert result.excluded_ids == ()

    def test_bad_percentile(self):
        points = _cloud(8, n=5)
        model = fit_gaussian(points)
        with pytest.raises(UsageError):
            filter_percentile(points, list("abcde"), 0.0, model)

    def test_affine_invariance(self):
        points = _cloud(10, n=60)
        ids = [f"r{i:02d}" for i in range(60)]
        base = filter_percentile(points, ids, 0.95, fit_gaussian(points))
        a = np.array([[2.0, 0.5], [-0.3, 1.5]])
        b = np.array([10.0, -4.0])
        mapped = [tuple((a @ np.asarray(p) + b).tolist()) for p in points]
        shifted = filter_percentile(mapped, ids, 0.95, fit_gaussian(mapped))
        assert set(shifted.retained_ids) == set(base.retained_ids)


class TestTruncationLength:
    def test_known_values(self):
        assert truncation_length(96) == 128
        assert truncation_length(100) == 133
        assert truncation_length(1) == 2

    def test_matches_exact_ceiling(self):
        from fractions import Fraction

        for m in list(range(1, 2000)) + [10**6]:
            exact = Fraction(133, 100) * m
            assert truncation_length(m) == -(-exact.numerator // exact.denominator)

    def test_rejects_nonpositive(self):
        with pytest.raises(UsageError):
            truncation_length(0)
