"""Surrogate multi-label model approximating the unknown annotation process.

One hinge-loss linear classifier per label (one-vs-rest inside each
category), trained by epoch-based subgradient descent with the 1/(lambda*t)
schedule, then Platt-calibrated on a held-out split so the margin scores
become probabilities. The per-record concatenation of calibrated label
probabilities (global schema order) is the confidence vector.
"""
from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .calibration import constant_calibrator, fit_platt
from .corpus import AnnotationSet, CorpusSnapshot, LabelSchema, Record
from .errors import UnknownCategoryError, ValidationError
from .persist import read_container, write_container
from .vectorize import (
    SvdModel,
    TfidfModel,
    VectorizerConfig,
    effective_k,
    fit_tfidf,
    fit_truncated_svd,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainingConfig:
    C: float = 1.0
    epochs: int = 20
    seed: int = 0
    validation_fraction: float = 0.2
    calibration_fraction: float = 0.2

    def to_json(self) -> dict:
        return {
            "C": self.C,
            "epochs": self.epochs,
            "seed": self.seed,
            "validation_fraction": self.validation_fraction,
            "calibration_fraction": self.calibration_fraction,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TrainingConfig":
        base = cls()
        return cls(
            C=obj.get("C", base.C),
            epochs=obj.get("epochs", base.epochs),
            seed=obj.get("seed", base.seed),
            validation_fraction=obj.get(
                "validation_fraction", base.validation_fraction
            ),
            calibration_fraction=obj.get(
                "calibration_fraction", base.calibration_fraction
            ),
        )


@dataclass(frozen=True)
class EvalMetrics:
    hamming_loss: float
    micro_f1: float
    macro_f1: float

    def to_json(self) -> dict:
        return {
            "hamming_loss": self.hamming_loss,
            "micro_f1": self.micro_f1,
            "macro_f1": self.macro_f1,
        }


@dataclass
class CategoryModel:
    """Per-label weight vectors, biases, and calibration pairs for one
    category."""

    category: str
    labels: tuple[str, ...]
    weights: np.ndarray  # (m, k)
    biases: np.ndarray  # (m,)
    cal_a: np.ndarray  # (m,)
    cal_b: np.ndarray  # (m,)
    constant_negative: np.ndarray  # (m,) bool

    def decision_scores(self, features: np.ndarray) -> np.ndarray:
        return features @ self.weights.T + self.biases

    def probabilities(self, features: np.ndarray) -> np.ndarray:
        scores = self.decision_scores(features)
        z = scores * self.cal_a[None, :] + self.cal_b[None, :]
        z = np.clip(z, -500.0, 500.0)
        p = 1.0 / (1.0 + np.exp(z))
        tiny = np.finfo(np.float64).tiny
        return np.clip(p, tiny, 1.0 - 1e-16)


@dataclass
class SurrogateModel:
    tfidf: TfidfModel
    svd: SvdModel
    schema: LabelSchema
    categories: dict[str, CategoryModel]
    training_config: TrainingConfig

    @property
    def label_order(self) -> tuple[str, ...]:
        return self.schema.all_labels()

    def features(self, texts: Sequence[str]) -> np.ndarray:
        return self.svd.reduce_many(self.tfidf.transform_many(texts))

    def _record_text(self, record: Record | str) -> str:
        return record.text() if isinstance(record, Record) else record

    def predict_proba(self, record: Record | str) -> np.ndarray:
        """Length-|L| confidence vector in global label order."""
        return self.predict_proba_many([self._record_text(record)])[0]

    def predict_proba_many(self, texts: Sequence[str]) -> np.ndarray:
        features = self.features(texts)
        parts = [self.categories[c].probabilities(features) for c in self.schema.categories]
        return np.concatenate(parts, axis=1)

    def predict_labels(
        self, record: Record | str, threshold: float = 0.5
    ) -> dict[str, set[str]]:
        """Per-category label sets: a label is included iff p >= threshold."""
        features = self.features([self._record_text(record)])
        out: dict[str, set[str]] = {}
        for category in self.schema.categories:
            cm = self.categories[category]
            probs = cm.probabilities(features)[0]
            out[category] = {
                label for label, p in zip(cm.labels, probs) if p >= threshold
            }
        return out

    def _category(self, category: str) -> CategoryModel:
        cm = self.categories.get(category)
        if cm is None:
            raise UnknownCategoryError(f"unknown category: {category!r}")
        return cm

    def category_probabilities(
        self, text: str, category: str
    ) -> tuple[tuple[str, ...], np.ndarray]:
        """Labels and calibrated probabilities for one category (explainer
        hook)."""
        cm = self._category(category)
        features = self.features([text])
        return cm.labels, cm.probabilities(features)[0]

    def category_probabilities_many(
        self, texts: Sequence[str], category: str
    ) -> np.ndarray:
        cm = self._category(category)
        return cm.probabilities(self.features(texts))

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(self.svd.components.tobytes())
        for category in self.schema.categories:
            cm = self.categories[category]
            h.update(cm.weights.tobytes())
            h.update(cm.cal_a.tobytes())
            h.update(cm.cal_b.tobytes())
        return h.hexdigest()[:16]


def one_hot_encode(
    annotations: AnnotationSet, record_order: Sequence[str]
) -> dict[str, np.ndarray]:
    """Per category: n x m_c binary matrix in schema label order."""
    schema = annotations.schema
    out: dict[str, np.ndarray] = {}
    for category in schema.categories:
        labels = schema.labels_in(category)
        col = {label: j for j, label in enumerate(labels)}
        mat = np.zeros((len(record_order), len(labels)), dtype=np.int8)
        for i, record_id in enumerate(record_order):
            for label in annotations.labels_for(record_id):
                j = col.get(label)
                if j is not None:
                    mat[i, j] = 1
        out[category] = mat
    return out


def confidence_score(cv: np.ndarray) -> float:
    """Mean of all confidence-vector dimensions."""
    cv = np.asarray(cv, dtype=np.float64)
    if cv.size == 0:
        raise ValidationError("confidence_score of an empty label set")
    return float(cv.mean())


def category_confidence(cv: np.ndarray, schema: LabelSchema) -> dict[str, float]:
    """Mean probability per category, sliced out of the global layout."""
    cv = np.asarray(cv, dtype=np.float64)
    out: dict[str, float] = {}
    offset = 0
    for category in schema.categories:
        m = len(schema.labels_in(category))
        if m == 0:
            raise ValidationError(f"category {category!r} has no labels")
        out[category] = float(cv[offset : offset + m].mean())
        offset += m
    return out


def _hinge_subgradient_train(
    features: np.ndarray,
    targets: np.ndarray,
    c_reg: float,
    epochs: int,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Epoch-based subgradient descent on the hinge objective.

    All labels of one category share the sample permutations, which is
    equivalent to training them sequentially (trajectories are independent)
    but runs as one vectorized pass. Bias is unregularized.
    """
    n, k = features.shape
    m = targets.shape[1]
    lam = 1.0 / (c_reg * n)
    weights = np.zeros((m, k))
    biases = np.zeros(m)
    ysign = (2.0 * targets - 1.0).astype(np.float64)
    t = 0
    for _ in range(epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * t)
            x = features[i]
            margins = ysign[i] * (weights @ x + biases)
            active = margins < 1.0
            weights *= 1.0 - eta * lam
            if active.any():
                coeff = eta * ysign[i, active]
                weights[active] += coeff[:, None] * x[None, :]
                biases[active] += coeff
    return weights, biases


def _split_indices(
    n: int, labeled_mask: np.ndarray, fraction: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """80/20-style split, stratified by label presence where possible."""
    held: list[int] = []
    kept: list[int] = []
    for stratum in (np.flatnonzero(labeled_mask), np.flatnonzero(~labeled_mask)):
        if stratum.size == 0:
            continue
        perm = stratum[rng.permutation(stratum.size)]
        n_held = int(round(fraction * stratum.size))
        held.extend(perm[:n_held].tolist())
        kept.extend(perm[n_held:].tolist())
    return np.array(sorted(kept), dtype=np.int64), np.array(sorted(held), dtype=np.int64)


def train(
    snapshot: CorpusSnapshot,
    vectorizer_config: VectorizerConfig | None = None,
    training_config: TrainingConfig | None = None,
) -> tuple[SurrogateModel, EvalMetrics]:
    """Fit the full pipeline and report metrics on the validation split.

    The vectorizer is fitted over the whole corpus (its job is to describe
    this corpus); classifiers see only the training split, calibration a
    held-out slice of it, and metrics come from the untouched validation
    split.
    """
    vcfg = vectorizer_config or VectorizerConfig()
    tcfg = training_config or TrainingConfig()
    n = len(snapshot.records)
    if n < 2:
        raise ValidationError("training requires at least 2 records")
    schema = snapshot.schema
    if not schema.categories:
        raise ValidationError("training requires a schema with categories")
    for category in schema.categories:
        if not schema.labels_in(category):
            raise ValidationError(f"category {category!r} has no labels")

    texts = [record.text() for record in snapshot.records]
    record_ids = [record.id for record in snapshot.records]
    tfidf = fit_tfidf(texts, vcfg)
    matrix = tfidf.transform_many(texts)
    k = effective_k(vcfg.k, n, tfidf.n_terms)
    svd = fit_truncated_svd(matrix, k, vcfg.seed)
    features = svd.reduce_many(matrix)

    labeled_mask = np.array(
        [len(snapshot.annotations.labels_for(rid)) > 0 for rid in record_ids]
    )
    rng_split = np.random.default_rng([tcfg.seed, 0])
    train_idx, val_idx = _split_indices(
        n, labeled_mask, tcfg.validation_fraction, rng_split
    )
    if val_idx.size == 0 or train_idx.size == 0:
        raise ValidationError(
            f"degenerate split: validation_fraction={tcfg.validation_fraction} "
            f"leaves {train_idx.size} train / {val_idx.size} validation records"
        )
    rng_cal = np.random.default_rng([tcfg.seed, 1])
    perm = train_idx[rng_cal.permutation(train_idx.size)]
    n_cal = int(round(tcfg.calibration_fraction * train_idx.size))
    cal_idx = np.sort(perm[:n_cal])
    fit_idx = np.sort(perm[n_cal:])
    if fit_idx.size == 0:
        raise ValidationError("degenerate split: no records left to fit on")

    onehot = one_hot_encode(snapshot.annotations, record_ids)
    categories: dict[str, CategoryModel] = {}
    for ci, category in enumerate(schema.categories):
        labels = schema.labels_in(category)
        y_all = onehot[category].astype(np.float64)
        y_fit = y_all[fit_idx]
        rng_cat = np.random.default_rng([tcfg.seed, 2, ci])
        weights, biases = _hinge_subgradient_train(
            features[fit_idx], y_fit, tcfg.C, tcfg.epochs, rng_cat
        )

        m = len(labels)
        cal_a = np.zeros(m)
        cal_b = np.zeros(m)
        const_neg = np.zeros(m, dtype=bool)
        pos_fit = y_fit.sum(axis=0).astype(int)
        for j, label in enumerate(labels):
            if pos_fit[j] < 2:
                const_neg[j] = True
                weights[j] = 0.0
                biases[j] = 0.0
                cal_a[j], cal_b[j] = constant_calibrator(int(pos_fit[j]), fit_idx.size)
                log.warning(
                    "label %r (category %r) has %d positive training examples; "
                    "trained as constant-negative",
                    label,
                    category,
                    int(pos_fit[j]),
                )
                continue
            cal_a[j], cal_b[j] = _calibrate_label(
                features, y_all[:, j], weights[j], biases[j], cal_idx, fit_idx
            )
        categories[category] = CategoryModel(
            category=category,
            labels=labels,
            weights=weights,
            biases=biases,
            cal_a=cal_a,
            cal_b=cal_b,
            constant_negative=const_neg,
        )

    model = SurrogateModel(
        tfidf=tfidf,
        svd=svd,
        schema=schema,
        categories=categories,
        training_config=tcfg,
    )
    metrics = evaluate(model, snapshot, [record_ids[i] for i in val_idx])
    return model, metrics


def _calibrate_label(
    features: np.ndarray,
    y: np.ndarray,
    w: np.ndarray,
    b: float,
    cal_idx: np.ndarray,
    fit_idx: np.ndarray,
) -> tuple[float, float]:
    """Platt fit on the calibration split, widening to the training split
    when the calibration slice lacks one of the classes."""
    for idx in (cal_idx, np.concatenate([cal_idx, fit_idx])):
        if idx.size == 0:
            continue
        targets = y[idx] > 0
        if targets.any() and not targets.all():
            scores = features[idx] @ w + b
            return fit_platt(scores, targets)
    return constant_calibrator(int(y[fit_idx].sum()), fit_idx.size)


def evaluate(
    model: SurrogateModel, snapshot: CorpusSnapshot, split_ids: Sequence[str]
) -> EvalMetrics:
    """Hamming loss, micro-F1, macro-F1 of thresholded predictions on a
    split."""
    if not split_ids:
        raise ValidationError("evaluate requires a non-empty split")
    texts = [snapshot.record_by_id(rid).text() for rid in split_ids]
    probs = model.predict_proba_many(texts)
    y_pred = probs >= 0.5
    onehot = one_hot_encode(snapshot.annotations, split_ids)
    y_true = np.concatenate(
        [onehot[c] for c in model.schema.categories], axis=1
    ).astype(bool)
    return compute_metrics(y_true, y_pred)


def compute_metrics(y_true: np.ndarray, y_pred: np.ndarray) -> EvalMetrics:
    if y_true.shape != y_pred.shape:
        raise ValidationError("prediction/truth shape mismatch")
    # bool coercion first: ~ on int arrays is bitwise, not logical
    y_true = np.asarray(y_true).astype(bool)
    y_pred = np.asarray(y_pred).astype(bool)
    hamming = float(np.mean(y_true != y_pred))

    tp = np.logical_and(y_true, y_pred).sum(axis=0).astype(np.float64)
    fp = np.logical_and(~y_true, y_pred).sum(axis=0).astype(np.float64)
    fn = np.logical_and(y_true, ~y_pred).sum(axis=0).astype(np.float64)

    micro_denom = 2 * tp.sum() + fp.sum() + fn.sum()
    micro_f1 = 1.0 if micro_denom == 0 else float(2 * tp.sum() / micro_denom)

    per_label = np.empty(tp.shape[0])
    for j in range(tp.shape[0]):
        denom = 2 * tp[j] + fp[j] + fn[j]
        # No true instances and no predictions counts as perfect; no true
        # positives with any prediction/miss counts as zero.
        per_label[j] = 1.0 if denom == 0 else 2 * tp[j] / denom
    macro_f1 = float(per_label.mean()) if per_label.size else 1.0

    return EvalMetrics(hamming_loss=hamming, micro_f1=micro_f1, macro_f1=macro_f1)


MODEL_KIND = "surrogate"


def save_model(model: SurrogateModel, path: str | Path) -> None:
    meta = {
        "kind": MODEL_KIND,
        "vectorizer_config": model.tfidf.config.to_json(),
        "vocabulary": sorted(model.tfidf.vocabulary, key=model.tfidf.vocabulary.get),
        "k": model.svd.k,
        "svd_seed": model.svd.seed,
        # The container canonicalizes header keys, so category order must be
        # carried by lists, not dict keys.
        "schema_categories": list(model.schema.categories),
        "schema_labels": [[lab, cat] for lab, cat in model.schema.labels],
        "training_config": model.training_config.to_json(),
    }
    arrays: dict[str, np.ndarray] = {
        "idf": model.tfidf.idf,
        "components": model.svd.components,
        "singular_values": model.svd.singular_values,
    }
    for ci, category in enumerate(model.schema.categories):
        cm = model.categories[category]
        arrays[f"cat{ci}_weights"] = cm.weights
        arrays[f"cat{ci}_biases"] = cm.biases
        arrays[f"cat{ci}_cal_a"] = cm.cal_a
        arrays[f"cat{ci}_cal_b"] = cm.cal_b
        arrays[f"cat{ci}_const_neg"] = cm.constant_negative.astype(np.uint8)
    write_container(path, meta, arrays)


def load_model(path: str | Path) -> SurrogateModel:
    meta, arrays = read_container(path)
    if meta.get("kind") != MODEL_KIND:
        raise ValidationError(f"{path}: not a surrogate model file")
    vcfg = VectorizerConfig.from_json(meta["vectorizer_config"])
    vocabulary = {term: i for i, term in enumerate(meta["vocabulary"])}
    tfidf = TfidfModel(vocabulary=vocabulary, idf=arrays["idf"], config=vcfg)
    svd = SvdModel(
        components=arrays["components"],
        singular_values=arrays["singular_values"],
        k=int(meta["k"]),
        seed=int(meta["svd_seed"]),
    )
    schema = LabelSchema(
        categories=tuple(meta["schema_categories"]),
        labels=tuple((lab, cat) for lab, cat in meta["schema_labels"]),
    )
    categories: dict[str, CategoryModel] = {}
    for ci, category in enumerate(schema.categories):
        categories[category] = CategoryModel(
            category=category,
            labels=schema.labels_in(category),
            weights=arrays[f"cat{ci}_weights"],
            biases=arrays[f"cat{ci}_biases"],
            cal_a=arrays[f"cat{ci}_cal_a"],
            cal_b=arrays[f"cat{ci}_cal_b"],
            constant_negative=arrays[f"cat{ci}_const_neg"].astype(bool),
        )
    return SurrogateModel(
        tfidf=tfidf,
        svd=svd,
        schema=schema,
        categories=categories,
        training_config=TrainingConfig.from_json(meta["training_config"]),
    )
