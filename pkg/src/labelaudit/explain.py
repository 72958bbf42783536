"""Perturbation-based local explanation of a single prediction.

The record's distinct token types are masked out at random, the model is
re-queried on each perturbed text, and a weighted ridge regression from
presence masks to target-label probability yields per-token contribution
scores. Sample weights decay with cosine distance from the unperturbed mask.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from .corpus import Record
from .errors import NoTokensError, UnknownLabelError, ValidationError
from .vectorize import VectorizerConfig, tokenize

RIDGE_PENALTY = 1.0
TOP_LABEL_COUNT = 5


class CategoryScorer(Protocol):
    """The model surface the explainer needs."""

    def category_probabilities(
        self, text: str, category: str
    ) -> tuple[tuple[str, ...], np.ndarray]: ...

    def category_probabilities_many(
        self, texts: Sequence[str], category: str
    ) -> np.ndarray: ...


@dataclass(frozen=True)
class ExplainConfig:
    n_samples: int = 1000
    kernel_width: float = 25.0
    n_features: int = 10
    seed: int = 0
    target_label: str | None = None

    def __post_init__(self) -> None:
        if self.n_samples < 10:
            raise ValidationError("n_samples must be at least 10")
        if self.kernel_width <= 0:
            raise ValidationError("kernel_width must be positive")
        if self.n_features < 1:
            raise ValidationError("n_features must be at least 1")

    def to_json(self) -> dict:
        return {
            "n_samples": self.n_samples,
            "kernel_width": self.kernel_width,
            "n_features": self.n_features,
            "seed": self.seed,
            "target_label": self.target_label,
        }


@dataclass(frozen=True)
class Highlight:
    """Byte span of one token in the modeling text, signed by its
    contribution."""

    start: int
    end: int
    token: str
    sign: str  # positive | negative | none

    def to_json(self) -> dict:
        return {
            "start": self.start,
            "end": self.end,
            "token": self.token,
            "sign": self.sign,
        }


@dataclass(frozen=True)
class Explanation:
    record_id: str | None
    category: str
    target_label: str
    target_probability: float
    top_labels: tuple[tuple[str, float], ...]
    contributions: tuple[tuple[str, float], ...]
    highlights: tuple[Highlight, ...]
    intercept: float

    def to_json(self) -> dict:
        return {
            "record_id": self.record_id,
            "category": self.category,
            "target_label": self.target_label,
            "target_probability": self.target_probability,
            "top_labels": [[label, p] for label, p in self.top_labels],
            "contributions": [[token, s] for token, s in self.contributions],
            "highlights": [h.to_json() for h in self.highlights],
            "intercept": self.intercept,
        }


def perturb(
    tokens: Sequence[str], n_samples: int, seed: int
) -> list[tuple[np.ndarray, str]]:
    """Masked variants of a token sequence.

    Sample 0 keeps everything. Each further sample removes a uniform-random
    number of distinct token types (all their occurrences). Masks index the
    types in first-occurrence order.
    """
    if not tokens:
        raise ValidationError("cannot perturb an empty token list")
    types = list(dict.fromkeys(tokens))
    type_index = {t: i for i, t in enumerate(types)}
    n_types = len(types)
    rng = np.random.default_rng(seed)
    samples: list[tuple[np.ndarray, str]] = []
    for s in range(n_samples):
        mask = np.ones(n_types, dtype=np.float64)
        if s > 0:
            n_remove = int(rng.integers(1, n_types + 1))
            removed = rng.choice(n_types, size=n_remove, replace=False)
            mask[removed] = 0.0
        text = " ".join(t for t in tokens if mask[type_index[t]] > 0)
        samples.append((mask, text))
    return samples


def _weighted_ridge(
    masks: np.ndarray, targets: np.ndarray, weights: np.ndarray
) -> tuple[float, np.ndarray]:
    """Ridge fit with unpenalized intercept via normal equations."""
    n, d = masks.shape
    design = np.hstack([np.ones((n, 1)), masks])
    wx = design * weights[:, None]
    gram = design.T @ wx
    gram[np.arange(1, d + 1), np.arange(1, d + 1)] += RIDGE_PENALTY
    rhs = wx.T @ targets
    coef = np.linalg.solve(gram, rhs)
    return float(coef[0]), coef[1:]


def explain(
    model: CategoryScorer,
    record: Record | str,
    category: str,
    config: ExplainConfig | None = None,
    vectorizer_config: VectorizerConfig | None = None,
) -> Explanation:
    """Local explanation of the model's view of one record in one category.

    ``vectorizer_config`` defaults to the model's own tokenizer settings and
    only needs passing for models without a ``tfidf`` attribute.
    """
    config = config or ExplainConfig()
    if vectorizer_config is None:
        vectorizer_config = model.tfidf.config  # type: ignore[attr-defined]
    record_id = record.id if isinstance(record, Record) else None
    text = record.text() if isinstance(record, Record) else record

    tokens = tokenize(text, vectorizer_config)
    if not tokens:
        raise NoTokensError("record has no tokens under the model's tokenizer")
    vocabulary = getattr(getattr(model, "tfidf", None), "vocabulary", None)
    if vocabulary is not None and not any(t in vocabulary for t in tokens):
        raise NoTokensError("record has no in-vocabulary tokens")

    labels, base_probs = model.category_probabilities(text, category)
    if config.target_label is not None:
        if config.target_label not in labels:
            raise UnknownLabelError(
                f"label {config.target_label!r} not in category {category!r}"
            )
        target_idx = labels.index(config.target_label)
    else:
        target_idx = int(np.argmax(base_probs))
    target_label = labels[target_idx]

    order = sorted(range(len(labels)), key=lambda j: -base_probs[j])
    top_labels = tuple(
        (labels[j], float(base_probs[j])) for j in order[:TOP_LABEL_COUNT]
    )

    samples = perturb(tokens, config.n_samples, config.seed)
    masks = np.stack([m for m, _ in samples])
    texts = [t for _, t in samples]
    probs = model.category_probabilities_many(texts, category)[:, target_idx]

    n_types = masks.shape[1]
    # Cosine distance of a binary mask from the all-ones mask collapses to
    # 1 - sqrt(kept/total); the all-zero mask is at distance 1.
    distances = 1.0 - np.sqrt(masks.sum(axis=1) / n_types)
    weights = np.exp(-(distances**2) / config.kernel_width**2)
    intercept, coef = _weighted_ridge(masks, probs, weights)

    types = list(dict.fromkeys(tokens))
    ranked = sorted(range(n_types), key=lambda i: (-abs(coef[i]), i))
    picked = ranked[: config.n_features]
    contributions = tuple((types[i], float(coef[i])) for i in picked)

    signs: dict[str, str] = {}
    for i in picked:
        if coef[i] > 0:
            signs[types[i]] = "positive"
        elif coef[i] < 0:
            signs[types[i]] = "negative"
    highlights = _token_highlights(text, vectorizer_config, signs)

    return Explanation(
        record_id=record_id,
        category=category,
        target_label=target_label,
        target_probability=float(base_probs[target_idx]),
        top_labels=top_labels,
        contributions=contributions,
        highlights=highlights,
        intercept=intercept,
    )


def _token_highlights(
    text: str, config: VectorizerConfig, signs: dict[str, str]
) -> tuple[Highlight, ...]:
    """One span per kept token, with byte offsets into the UTF-8 text."""
    pattern = re.compile(config.token_pattern)
    highlights: list[Highlight] = []
    byte_pos = 0
    char_pos = 0
    for match in pattern.finditer(text):
        raw = match.group()
        token = raw.lower() if config.lowercase else raw
        if token in config.stopwords:
            continue
        byte_pos += len(text[char_pos : match.start()].encode("utf-8"))
        char_pos = match.start()
        start = byte_pos
        end = start + len(raw.encode("utf-8"))
        highlights.append(
            Highlight(
                start=start,
                end=end,
                token=token,
                sign=signs.get(token, "none"),
            )
        )
    return tuple(highlights)
