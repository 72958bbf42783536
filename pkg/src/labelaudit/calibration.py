"""Platt-style sigmoid calibration of margin-classifier decision scores.

Fits p(y=1 | s) = 1 / (1 + exp(a*s + b)) by regularized maximum likelihood
(Newton iterations with backtracking, after Lin/Weng/Keerthi's numerically
stable reformulation of Platt's pseudocode). The slope ``a`` is clamped
negative so the calibrated probability is nondecreasing in the raw score.
"""
from __future__ import annotations

import numpy as np

MAX_SLOPE = -1e-12  # a must stay < 0: probability increases with score


def sigmoid_probability(scores: np.ndarray, a: float, b: float) -> np.ndarray:
    """Numerically stable 1 / (1 + exp(a*s + b)), always inside (0, 1)."""
    z = a * np.asarray(scores, dtype=np.float64) + b
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = np.exp(-z[pos]) / (1.0 + np.exp(-z[pos]))
    out[~pos] = 1.0 / (1.0 + np.exp(z[~pos]))
    tiny = np.finfo(np.float64).tiny
    return np.clip(out, tiny, 1.0 - 1e-16)


def fit_platt(
    scores: np.ndarray,
    positives: np.ndarray,
    max_iter: int = 100,
    min_step: float = 1e-10,
    ridge: float = 1e-12,
) -> tuple[float, float]:
    """Fit (a, b) on decision scores against binary targets.

    Uses Platt's smoothed targets (N+1)/(N+2) so the fit stays well-posed on
    small calibration sets. Deterministic.
    """
    scores = np.asarray(scores, dtype=np.float64)
    positives = np.asarray(positives, dtype=bool)
    n = scores.shape[0]
    prior1 = int(positives.sum())
    prior0 = n - prior1

    hi = (prior1 + 1.0) / (prior1 + 2.0)
    lo = 1.0 / (prior0 + 2.0)
    t = np.where(positives, hi, lo)

    a = 0.0
    b = np.log((prior0 + 1.0) / (prior1 + 1.0))

    def objective(a_: float, b_: float) -> float:
        z = a_ * scores + b_
        # -sum(t*log(p) + (1-t)*log(1-p)) with p = sigmoid(-z), stably:
        return float(np.sum((1.0 - t) * (-z) + np.logaddexp(0.0, -z) + z))

    f_old = objective(a, b)
    for _ in range(max_iter):
        p = sigmoid_probability(scores, a, b)
        # dF/dz = t - p for p = sigmoid(-z); Hessian weights p(1-p).
        d1 = t - p
        d2 = p * (1.0 - p)
        g_a = float(np.dot(scores, d1))
        g_b = float(d1.sum())
        if abs(g_a) < 1e-5 and abs(g_b) < 1e-5:
            break
        h_aa = float(np.dot(scores * scores, d2)) + ridge
        h_bb = float(d2.sum()) + ridge
        h_ab = float(np.dot(scores, d2))
        det = h_aa * h_bb - h_ab * h_ab
        if det <= 0:
            break
        da = -(h_bb * g_a - h_ab * g_b) / det
        db = -(h_aa * g_b - h_ab * g_a) / det
        gd = g_a * da + g_b * db
        step = 1.0
        while step >= min_step:
            a_new, b_new = a + step * da, b + step * db
            f_new = objective(a_new, b_new)
            if f_new < f_old + 1e-4 * step * gd:
                a, b, f_old = a_new, b_new, f_new
                break
            step /= 2.0
        else:
            break

    return min(a, MAX_SLOPE), b


def constant_calibrator(n_positive: int, n_total: int) -> tuple[float, float]:
    """Laplace-prior constant for degenerate labels (e.g. < 2 positives).

    Produces a flat calibrator whose output is (pos+1)/(n+2), clipped below
    0.5 so constant-negative classifiers predict negative everywhere.
    """
    p0 = (n_positive + 1.0) / (n_total + 2.0)
    p0 = min(p0, 0.5 - 1e-9)
    b = np.log(1.0 / p0 - 1.0)
    return MAX_SLOPE, float(b)
