"""2D record projection via exact t-SNE, plus lasso hit-testing.

Records are laid out from either their reduced text vectors or their
confidence vectors and colored by confidence score or information density.
The embedding is the standard exact algorithm: per-point bandwidths binary
searched to a target perplexity, early exaggeration, momentum switch and
adaptive gains. Everything is deterministic under the config seed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Protocol, Sequence

import numpy as np

from .errors import ValidationError
from .metrics import DensityReport, density_report
from .vectorize import SvdModel, TfidfModel, VectorizerConfig

if TYPE_CHECKING:
    from .corpus import CorpusSnapshot

LAYOUTS = ("word-vector", "confidence-vector")
COLORS = ("confidence", "info-density")

EARLY_EXAGGERATION = 12.0
EXAGGERATION_ITERS = 250
MOMENTUM_SWITCH_ITER = 250
INITIAL_MOMENTUM = 0.5
FINAL_MOMENTUM = 0.8
PERPLEXITY_SEARCH_ITERS = 50
PERPLEXITY_TOL = 1e-5
MIN_PROB = 1e-12


class FeatureProvider(Protocol):
    def features(self, texts: Sequence[str]) -> np.ndarray: ...


@dataclass
class VectorizerFeatures:
    """Feature provider for word-vector layouts when no model is trained."""

    tfidf: TfidfModel
    svd: SvdModel

    def features(self, texts: Sequence[str]) -> np.ndarray:
        return self.svd.reduce_many(self.tfidf.transform_many(texts))

    def fingerprint(self) -> str:
        return f"vectorizer-{self.svd.k}-{self.svd.seed}"


@dataclass(frozen=True)
class ProjectionConfig:
    layout: str = "confidence-vector"
    color: str = "confidence"
    perplexity: float = 30.0
    iterations: int = 1000
    learning_rate: float = 200.0
    seed: int = 0
    max_points: int = 5000

    def __post_init__(self) -> None:
        if self.layout not in LAYOUTS:
            raise ValidationError(f"layout must be one of {LAYOUTS}")
        if self.color not in COLORS:
            raise ValidationError(f"color must be one of {COLORS}")
        if self.perplexity < 1:
            raise ValidationError("perplexity must be at least 1")
        if self.iterations < 250:
            raise ValidationError("iterations must be at least 250")
        if self.learning_rate <= 0:
            raise ValidationError("learning_rate must be positive")
        if self.max_points < 4:
            raise ValidationError("max_points must be at least 4")

    def to_json(self) -> dict:
        return {
            "layout": self.layout,
            "color": self.color,
            "perplexity": self.perplexity,
            "iterations": self.iterations,
            "learning_rate": self.learning_rate,
            "seed": self.seed,
            "max_points": self.max_points,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ProjectionConfig":
        base = cls()
        return cls(
            layout=obj.get("layout", base.layout),
            color=obj.get("color", base.color),
            perplexity=obj.get("perplexity", base.perplexity),
            iterations=obj.get("iterations", base.iterations),
            learning_rate=obj.get("learning_rate", base.learning_rate),
            seed=obj.get("seed", base.seed),
            max_points=obj.get("max_points", base.max_points),
        )


@dataclass(frozen=True)
class Projection:
    record_ids: tuple[str, ...]
    coords: np.ndarray  # (n, 2)
    color_values: tuple[float, ...]
    config: ProjectionConfig
    subsampled: bool

    def to_json(self) -> dict:
        return {
            "points": [
                {"id": rid, "x": float(x), "y": float(y), "color": c}
                for rid, (x, y), c in zip(
                    self.record_ids, self.coords, self.color_values
                )
            ],
            "subsampled": self.subsampled,
            "config": self.config.to_json(),
        }


def _entropy_and_probs(
    neg_dist: np.ndarray, beta: float
) -> tuple[float, np.ndarray]:
    p = np.exp(neg_dist * beta)
    total = p.sum()
    if total <= 0:
        return 0.0, p
    h = math.log(total) - beta * float((neg_dist * p).sum()) / total
    return h, p / total


def _affinities(dist_sq: np.ndarray, perplexity: float) -> np.ndarray:
    """Row-conditional Gaussian affinities at the target perplexity."""
    n = dist_sq.shape[0]
    target = math.log(perplexity)
    cond = np.zeros((n, n))
    for i in range(n):
        neg = -np.delete(dist_sq[i], i)
        beta, lo, hi = 1.0, -math.inf, math.inf
        h, row = _entropy_and_probs(neg, beta)
        for _ in range(PERPLEXITY_SEARCH_ITERS):
            if abs(h - target) <= PERPLEXITY_TOL:
                break
            if h > target:
                lo = beta
                beta = beta * 2.0 if hi == math.inf else (beta + hi) / 2.0
            else:
                hi = beta
                beta = beta / 2.0 if lo == -math.inf else (beta + lo) / 2.0
            h, row = _entropy_and_probs(neg, beta)
        cond[i] = np.insert(row, i, 0.0)
    p = (cond + cond.T) / (2.0 * n)
    return np.maximum(p, MIN_PROB)


def _pairwise_sq(x: np.ndarray) -> np.ndarray:
    norms = (x * x).sum(axis=1)
    d = norms[:, None] + norms[None, :] - 2.0 * (x @ x.T)
    np.fill_diagonal(d, 0.0)
    return np.maximum(d, 0.0)


def project_with_trace(
    matrix: np.ndarray, config: ProjectionConfig
) -> tuple[np.ndarray, np.ndarray]:
    """t-SNE coordinates plus the per-iteration KL divergence trace."""
    x = np.asarray(matrix, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] < 1:
        raise ValidationError("projection input must be an n x d matrix")
    n = x.shape[0]
    if n < 4:
        raise ValidationError("projection requires at least 4 points")
    if not np.isfinite(x).all():
        raise ValidationError("projection input contains non-finite values")
    if config.perplexity >= n / 3:
        raise ValidationError(
            f"perplexity {config.perplexity} too large for {n} points "
            "(must be < n/3)"
        )

    p = _affinities(_pairwise_sq(x), config.perplexity)
    rng = np.random.default_rng(config.seed)
    y = rng.standard_normal((n, 2)) * 1e-4
    increment = np.zeros_like(y)
    gains = np.ones_like(y)
    kl_trace = np.zeros(config.iterations)

    for it in range(config.iterations):
        exaggeration = EARLY_EXAGGERATION if it < EXAGGERATION_ITERS else 1.0
        momentum = (
            INITIAL_MOMENTUM if it < MOMENTUM_SWITCH_ITER else FINAL_MOMENTUM
        )
        num = 1.0 / (1.0 + _pairwise_sq(y))
        np.fill_diagonal(num, 0.0)
        q = np.maximum(num / num.sum(), MIN_PROB)

        pq = (p * exaggeration - q) * num
        grad = 4.0 * (np.diag(pq.sum(axis=1)) - pq) @ y

        flip = np.sign(grad) != np.sign(increment)
        gains[flip] += 0.2
        gains[~flip] *= 0.8
        np.clip(gains, 0.01, None, out=gains)
        increment = momentum * increment - config.learning_rate * gains * grad
        y = y + increment
        y = y - y.mean(axis=0)

        kl_trace[it] = float((p * np.log(p / q)).sum())

    return y, kl_trace


def project(matrix: np.ndarray, config: ProjectionConfig) -> np.ndarray:
    coords, _ = project_with_trace(matrix, config)
    return coords


def layout_records(
    model: FeatureProvider | None,
    snapshot: "CorpusSnapshot",
    config: ProjectionConfig,
    density: DensityReport | None = None,
) -> Projection:
    """Assemble the layout matrix, project, and attach color values.

    ``model`` must be a trained surrogate for confidence layouts/colors; a
    bare feature provider suffices for word-vector layout colored by
    density. The -inf density sentinel maps to (min finite - 1) for color
    scaling, +inf to (max finite + 1).
    """
    if model is None:
        raise ValidationError("projection requires a model or vectorizer")
    records = snapshot.records
    ids = [r.id for r in records]
    n = len(records)
    subsampled = n > config.max_points
    if subsampled:
        rng = np.random.default_rng(config.seed)
        keep = np.sort(rng.choice(n, size=config.max_points, replace=False))
        records = tuple(records[i] for i in keep)
        ids = [r.id for r in records]
    texts = [r.text() for r in records]

    if config.layout == "word-vector":
        matrix = model.features(texts)
    else:
        if not hasattr(model, "predict_proba_many"):
            raise ValidationError(
                "confidence-vector layout requires a trained model"
            )
        matrix = model.predict_proba_many(texts)

    coords = project(matrix, config)

    if config.color == "confidence":
        if not hasattr(model, "predict_proba_many"):
            raise ValidationError("confidence coloring requires a trained model")
        probs = (
            matrix
            if config.layout == "confidence-vector"
            else model.predict_proba_many(texts)
        )
        colors = tuple(float(v) for v in probs.mean(axis=1))
    else:
        if density is None:
            vcfg = getattr(getattr(model, "tfidf", None), "config", None)
            density = density_report(snapshot, vcfg or VectorizerConfig())
        by_id = {row.record_id: row.density for row in density.rows}
        raw = [by_id[rid] for rid in ids]
        finite = [v for v in raw if math.isfinite(v)]
        lo = min(finite) - 1.0 if finite else -1.0
        hi = max(finite) + 1.0 if finite else 1.0
        colors = tuple(
            v if math.isfinite(v) else (lo if v < 0 else hi) for v in raw
        )

    return Projection(
        record_ids=tuple(ids),
        coords=coords,
        color_values=colors,
        config=config,
        subsampled=subsampled,
    )


def select_polygon(
    projection: Projection, polygon: Sequence[tuple[float, float]]
) -> set[str]:
    """Ids of projected points inside the polygon (even-odd rule)."""
    distinct = {(float(x), float(y)) for x, y in polygon}
    if len(distinct) < 3:
        raise ValidationError("polygon needs at least 3 distinct vertices")
    vertices = [(float(x), float(y)) for x, y in polygon]
    selected = set()
    for rid, (px, py) in zip(projection.record_ids, projection.coords):
        if _point_in_polygon(float(px), float(py), vertices):
            selected.add(rid)
    return selected


def _point_in_polygon(
    x: float, y: float, vertices: list[tuple[float, float]]
) -> bool:
    inside = False
    j = len(vertices) - 1
    for i in range(len(vertices)):
        xi, yi = vertices[i]
        xj, yj = vertices[j]
        if (yi > y) != (yj > y):
            x_cross = (xj - xi) * (y - yi) / (yj - yi) + xi
            if x < x_cross:
                inside = not inside
        j = i
    return inside
