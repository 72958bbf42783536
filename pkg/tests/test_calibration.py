"""Sigmoid score-to-probability calibration."""
from __future__ import annotations

import numpy as np
import pytest

from labelaudit.calibration import (
    MAX_SLOPE,
    constant_calibrator,
    fit_platt,
    sigmoid_probability,
)


class TestSigmoidProbability:
    def test_monotone_increasing_in_score_when_slope_negative(self):
        scores = np.linspace(-5, 5, 101)
        p = sigmoid_probability(scores, a=-2.0, b=0.5)
        assert np.all(np.diff(p) > 0)

    def test_extreme_scores_stay_in_open_interval(self):
        p = sigmoid_probability(np.array([-1e6, 0.0, 1e6]), a=-3.0, b=0.0)
        assert np.all(p > 0.0) and np.all(p < 1.0)
        assert p[0] < 1e-10 and p[2] > 1 - 1e-10

    def test_midpoint(self):
        p = sigmoid_probability(np.array([0.0]), a=-1.0, b=0.0)
        assert p[0] == pytest.approx(0.5, abs=1e-12)


class TestFitPlatt:
    def test_recovers_separation(self):
        rng = np.random.default_rng(0)
        scores = np.concatenate([rng.normal(-2, 0.5, 200), rng.normal(2, 0.5, 200)])
        targets = np.concatenate([np.zeros(200), np.ones(200)])
        a, b = fit_platt(scores, targets)
        assert a < 0
        p = sigmoid_probability(scores, a, b)
        assert p[:200].mean() < 0.1
        assert p[200:].mean() > 0.9

    def test_probability_increases_with_score(self):
        rng = np.random.default_rng(1)
        scores = rng.normal(0, 2, 300)
        targets = (scores + rng.normal(0, 1, 300) > 0).astype(float)
        a, b = fit_platt(scores, targets)
        grid = np.linspace(scores.min(), scores.max(), 50)
        p = sigmoid_probability(grid, a, b)
        assert np.all(np.diff(p) >= 0)

    def test_smoothed_targets_keep_probabilities_off_the_rails(self):
        # perfectly separated scores; smoothing stops a -> -inf
        scores = np.array([-1.0, -1.0, -1.0, 1.0, 1.0, 1.0])
        targets = np.array([0.0, 0.0, 0.0, 1.0, 1.0, 1.0])
        a, b = fit_platt(scores, targets)
        assert np.isfinite(a) and np.isfinite(b)
        p = sigmoid_probability(scores, a, b)
        assert np.all(p > 0.0) and np.all(p < 1.0)

    def test_slope_clamped_negative_on_anticorrelated_data(self):
        # targets move against scores: the unconstrained slope would be >= 0
        scores = np.array([-2.0, -1.0, 1.0, 2.0])
        targets = np.array([1.0, 1.0, 0.0, 0.0])
        a, _ = fit_platt(scores, targets)
        assert a <= MAX_SLOPE

    def test_deterministic(self):
        rng = np.random.default_rng(2)
        scores = rng.normal(0, 1, 100)
        targets = (scores > 0).astype(float)
        assert fit_platt(scores, targets) == fit_platt(scores, targets)

    def test_matches_brute_force_minimum(self):
        # grid-search the negative log likelihood around the fitted optimum
        rng = np.random.default_rng(3)
        scores = np.concatenate([rng.normal(-1, 1, 150), rng.normal(1, 1, 150)])
        targets = np.concatenate([np.zeros(150), np.ones(150)])
        a, b = fit_platt(scores, targets)

        n1, n0 = 150, 150
        hi, lo = (n1 + 1) / (n1 + 2), 1 / (n0 + 2)
        t = np.where(targets > 0, hi, lo)

        def nll(aa, bb):
            p = sigmoid_probability(scores, aa, bb)
            return -(t * np.log(p) + (1 - t) * np.log(1 - p)).sum()

        best = nll(a, b)
        for da in (-0.05, 0.05):
            for db in (-0.05, 0.05):
                assert nll(a + da, b + db) >= best - 1e-9


class TestConstantCalibrator:
    def test_laplace_prior_probability(self):
        a, b = constant_calibrator(n_positive=1, n_total=8)
        p = sigmoid_probability(np.array([-3.0, 0.0, 3.0]), a, b)
        expected = (1 + 1) / (8 + 2)
        np.testing.assert_allclose(p, expected, atol=1e-6)

    def test_always_below_half(self):
        for n_pos, n_total in [(0, 1), (5, 5), (9, 10), (0, 0)]:
            a, b = constant_calibrator(n_pos, n_total)
            p = sigmoid_probability(np.array([0.0]), a, b)
            assert p[0] < 0.5

    def test_slope_keeps_negative_invariant(self):
        a, _ = constant_calibrator(2, 10)
        assert a < 0
