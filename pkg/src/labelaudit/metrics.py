"""Error-screening statistics over an annotated corpus.

Three quantitative signals, one per error family:

* duplication possibility per category, from label co-occurrence ratios
  (redundant labels tend to ride along with their twin);
* information density per record, ln(labelCount / wordCount) (under-labeled
  records sink to the bottom of the ascending ranking);
* calibrated confidence summaries per record and category (suspicious labels
  depress the surrogate's probabilities).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .corpus import CorpusSnapshot, Record
from .errors import UnknownCategoryError, ValidationError
from .vectorize import VectorizerConfig, tokenize

if TYPE_CHECKING:
    from .surrogate import SurrogateModel


@dataclass(frozen=True)
class CooccurrenceStats:
    """Symmetric co-assignment counts for one category.

    ``counts[i, j]`` is the number of records carrying both labels;
    the diagonal holds each label's total appearance count.
    """

    category: str
    labels: tuple[str, ...]
    counts: np.ndarray

    def num(self, label: str) -> int:
        return int(self.counts[self.labels.index(label), self.labels.index(label)])

    def co(self, a: str, b: str) -> int:
        return int(self.counts[self.labels.index(a), self.labels.index(b)])

    def to_json(self) -> dict:
        return {
            "category": self.category,
            "labels": list(self.labels),
            "counts": self.counts.tolist(),
        }


def cooccurrence(snapshot: CorpusSnapshot, category: str) -> CooccurrenceStats:
    """Exact pairwise co-assignment counts over all records."""
    schema = snapshot.schema
    if category not in schema.categories:
        raise UnknownCategoryError(f"unknown category: {category!r}")
    labels = schema.labels_in(category)
    index = {label: i for i, label in enumerate(labels)}
    counts = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for record in snapshot.records:
        present = sorted(
            index[l]
            for l in snapshot.annotations.labels_for(record.id)
            if l in index
        )
        for a in present:
            for b in present:
                counts[a, b] += 1
    return CooccurrenceStats(category=category, labels=labels, counts=counts)


def duplication_possibility(stats: CooccurrenceStats) -> float:
    """Category-level duplicate-label signal in [0, 1].

    Per label with any appearances: mean over its co-occurring partners of
    Co(l_i, l_j) / Num(l_i); partnerless labels contribute 0. The category
    score averages these over all appearing labels.
    """
    if not stats.labels:
        raise ValidationError(f"category {stats.category!r} has no labels")
    diag = np.diag(stats.counts)
    appearing = np.flatnonzero(diag > 0)
    if appearing.size == 0:
        raise ValidationError(
            f"category {stats.category!r} has no assigned labels"
        )
    per_label = []
    for i in appearing:
        partners = [
            stats.counts[i, j] / diag[i]
            for j in range(len(stats.labels))
            if j != i and stats.counts[i, j] > 0
        ]
        per_label.append(sum(partners) / len(partners) if partners else 0.0)
    return float(sum(per_label) / len(per_label))


@dataclass(frozen=True)
class PairRatio:
    label: str
    partner: str
    co_count: int
    num: int

    @property
    def ratio(self) -> float:
        return self.co_count / self.num

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "partner": self.partner,
            "co_count": self.co_count,
            "num": self.num,
            "ratio": self.ratio,
        }


@dataclass(frozen=True)
class DuplicationReport:
    """Per-category scores plus the ranked directional pair ratios."""

    scores: dict[str, float]
    pairs: dict[str, tuple[PairRatio, ...]]

    def to_json(self) -> dict:
        return {
            "scores": dict(self.scores),
            "pairs": {
                c: [p.to_json() for p in pairs] for c, pairs in self.pairs.items()
            },
        }


def duplication_report(snapshot: CorpusSnapshot) -> DuplicationReport:
    """Corpus-wide report; categories with no assigned labels score 0."""
    scores: dict[str, float] = {}
    pairs: dict[str, tuple[PairRatio, ...]] = {}
    for category in snapshot.schema.categories:
        stats = cooccurrence(snapshot, category)
        diag = np.diag(stats.counts)
        if not stats.labels or not (diag > 0).any():
            scores[category] = 0.0
            pairs[category] = ()
            continue
        scores[category] = duplication_possibility(stats)
        ranked = [
            PairRatio(
                label=stats.labels[i],
                partner=stats.labels[j],
                co_count=int(stats.counts[i, j]),
                num=int(diag[i]),
            )
            for i in range(len(stats.labels))
            for j in range(len(stats.labels))
            if i != j and stats.counts[i, j] > 0
        ]
        ranked.sort(key=lambda p: (-p.ratio, p.label, p.partner))
        pairs[category] = tuple(ranked)
    return DuplicationReport(scores=scores, pairs=pairs)


def info_density(
    record: Record, snapshot: CorpusSnapshot, config: VectorizerConfig | None = None
) -> float:
    """ln(labelCount / wordCount) over the record's modeling text.

    Zero labels yield -inf (so under-labeled records rank first ascending);
    zero countable words with labels present yield +inf.
    """
    config = config or VectorizerConfig()
    label_count = len(snapshot.annotations.labels_for(record.id))
    word_count = len(tokenize(record.text(), config))
    if label_count == 0:
        return -math.inf
    if word_count == 0:
        return math.inf
    return math.log(label_count / word_count)


@dataclass(frozen=True)
class DensityRow:
    record_id: str
    density: float
    label_count: int
    word_count: int

    def to_json(self) -> dict:
        return {
            "record_id": self.record_id,
            "density": self.density if math.isfinite(self.density) else None,
            "label_count": self.label_count,
            "word_count": self.word_count,
        }


@dataclass(frozen=True)
class DensityReport:
    rows: tuple[DensityRow, ...]

    def ranked(self) -> tuple[DensityRow, ...]:
        """Ascending by density; -inf rows first, ties keep corpus order."""
        return tuple(sorted(self.rows, key=lambda r: r.density))

    def to_json(self) -> dict:
        return {"rows": [r.to_json() for r in self.rows]}


def density_report(
    snapshot: CorpusSnapshot, config: VectorizerConfig | None = None
) -> DensityReport:
    config = config or VectorizerConfig()
    rows = []
    for record in snapshot.records:
        label_count = len(snapshot.annotations.labels_for(record.id))
        word_count = len(tokenize(record.text(), config))
        if label_count == 0:
            density = -math.inf
        elif word_count == 0:
            density = math.inf
        else:
            density = math.log(label_count / word_count)
        rows.append(
            DensityRow(
                record_id=record.id,
                density=density,
                label_count=label_count,
                word_count=word_count,
            )
        )
    return DensityReport(rows=tuple(rows))


@dataclass(frozen=True)
class ConfidenceRow:
    record_id: str
    vector: np.ndarray
    score: float
    by_category: dict[str, float]

    def to_json(self) -> dict:
        return {
            "record_id": self.record_id,
            "vector": [float(v) for v in self.vector],
            "score": self.score,
            "by_category": dict(self.by_category),
        }


@dataclass(frozen=True)
class ConfidenceReport:
    label_order: tuple[str, ...]
    rows: tuple[ConfidenceRow, ...]

    def to_json(self) -> dict:
        return {
            "label_order": list(self.label_order),
            "rows": [r.to_json() for r in self.rows],
        }


def confidence_report(
    model: "SurrogateModel", snapshot: CorpusSnapshot
) -> ConfidenceReport:
    """Batch confidence vectors plus per-record and per-category means."""
    from .surrogate import category_confidence, confidence_score

    texts = [record.text() for record in snapshot.records]
    probs = model.predict_proba_many(texts)
    rows = []
    for record, vector in zip(snapshot.records, probs):
        rows.append(
            ConfidenceRow(
                record_id=record.id,
                vector=vector,
                score=confidence_score(vector),
                by_category=category_confidence(vector, model.schema),
            )
        )
    return ConfidenceReport(label_order=model.label_order, rows=tuple(rows))
