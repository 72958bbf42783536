"""Text vectorization: tokenizer, TF-IDF weighting, truncated SVD reduction.

The reducer is a randomized range-finder SVD (oversampling 10, four power
iterations with QR re-orthonormalization), deterministic under a fixed seed.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .errors import ValidationError
from .persist import read_container, write_container
from .stopwords import ENGLISH_STOPWORDS

DEFAULT_TOKEN_PATTERN = r"[A-Za-z0-9_]{2,}"
DEFAULT_K = 300
SVD_OVERSAMPLES = 10
SVD_POWER_ITERATIONS = 4


@dataclass(frozen=True)
class VectorizerConfig:
    """Tokenizer + TF-IDF + SVD settings.

    ``token_pattern`` is applied after lowercasing (when enabled); the
    default keeps maximal runs of letters/digits/underscore of length >= 2.
    ``k`` is the target SVD dimensionality, capped at min(n, |V|) - 1 at fit
    time.
    """

    lowercase: bool = True
    token_pattern: str = DEFAULT_TOKEN_PATTERN
    stopwords: frozenset[str] = field(default=ENGLISH_STOPWORDS)
    sublinear_tf: bool = False
    use_bigrams: bool = False
    k: int = DEFAULT_K
    seed: int = 0

    def to_json(self) -> dict:
        return {
            "lowercase": self.lowercase,
            "token_pattern": self.token_pattern,
            "stopwords": sorted(self.stopwords),
            "sublinear_tf": self.sublinear_tf,
            "use_bigrams": self.use_bigrams,
            "k": self.k,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "VectorizerConfig":
        base = cls()
        stopwords = (
            frozenset(obj["stopwords"]) if "stopwords" in obj else base.stopwords
        )
        return cls(
            lowercase=obj.get("lowercase", base.lowercase),
            token_pattern=obj.get("token_pattern", base.token_pattern),
            stopwords=stopwords,
            sublinear_tf=obj.get("sublinear_tf", base.sublinear_tf),
            use_bigrams=obj.get("use_bigrams", base.use_bigrams),
            k=obj.get("k", base.k),
            seed=obj.get("seed", base.seed),
        )


def tokenize(text: str, config: VectorizerConfig | None = None) -> list[str]:
    """Tokenize to lowercased alphanumeric tokens with stopwords removed."""
    cfg = config or VectorizerConfig()
    if cfg.lowercase:
        text = text.lower()
    tokens = re.findall(cfg.token_pattern, text)
    if cfg.stopwords:
        tokens = [t for t in tokens if t not in cfg.stopwords]
    return tokens


def _terms(tokens: Sequence[str], config: VectorizerConfig) -> list[str]:
    if not config.use_bigrams:
        return list(tokens)
    return list(tokens) + [
        f"{a} {b}" for a, b in zip(tokens, tokens[1:])
    ]


@dataclass(frozen=True)
class TfidfModel:
    """Fitted vocabulary and smoothed idf weights.

    idf(t) = ln((1 + N) / (1 + df(t))) + 1, so a term present in every
    document gets weight exactly 1 and nothing is zeroed out.
    """

    vocabulary: dict[str, int]
    idf: np.ndarray
    config: VectorizerConfig

    @property
    def n_terms(self) -> int:
        return len(self.vocabulary)

    def transform(self, text: str) -> sp.csr_matrix:
        """Raw term counts times idf, L2-normalized; all-OOV text yields an
        (un-normalized) zero vector."""
        return self.transform_many([text])

    def transform_many(self, texts: Sequence[str]) -> sp.csr_matrix:
        indptr = [0]
        indices: list[int] = []
        data: list[float] = []
        for text in texts:
            counts: dict[int, float] = {}
            for term in _terms(tokenize(text, self.config), self.config):
                col = self.vocabulary.get(term)
                if col is not None:
                    counts[col] = counts.get(col, 0.0) + 1.0
            for col in sorted(counts):
                tf = counts[col]
                if self.config.sublinear_tf:
                    tf = 1.0 + np.log(tf)
                indices.append(col)
                data.append(tf * self.idf[col])
            indptr.append(len(indices))
        mat = sp.csr_matrix(
            (np.asarray(data), np.asarray(indices, dtype=np.int64), np.asarray(indptr)),
            shape=(len(texts), self.n_terms),
        )
        norms = np.sqrt(np.asarray(mat.multiply(mat).sum(axis=1)).ravel())
        scale = np.divide(1.0, norms, out=np.zeros_like(norms), where=norms > 0)
        return sp.diags(scale) @ mat


def fit_tfidf(
    corpus_texts: Sequence[str], config: VectorizerConfig | None = None
) -> TfidfModel:
    """Fit vocabulary and idf over the corpus.

    The vocabulary is sorted, so the model depends only on term/document
    counts, not on document order.
    """
    cfg = config or VectorizerConfig()
    if not corpus_texts:
        raise ValidationError("fit_tfidf requires at least one document")
    df: dict[str, int] = {}
    for text in corpus_texts:
        for term in set(_terms(tokenize(text, cfg), cfg)):
            df[term] = df.get(term, 0) + 1
    if not df:
        raise ValidationError("all documents are empty after tokenization")
    vocabulary = {term: i for i, term in enumerate(sorted(df))}
    n_docs = len(corpus_texts)
    counts = np.array([df[t] for t in sorted(df)], dtype=np.float64)
    idf = np.log((1.0 + n_docs) / (1.0 + counts)) + 1.0
    return TfidfModel(vocabulary=vocabulary, idf=idf, config=cfg)


@dataclass(frozen=True)
class SvdModel:
    """Top-k right singular subspace of the TF-IDF matrix."""

    components: np.ndarray  # (k, |V|), rows orthonormal
    singular_values: np.ndarray  # (k,), nonincreasing
    k: int
    seed: int

    def reduce(self, v: sp.spmatrix | np.ndarray) -> np.ndarray:
        """Project one sparse/dense vocabulary-length vector to k dims."""
        if sp.issparse(v):
            if v.shape[1] != self.components.shape[1]:
                raise ValidationError(
                    f"dimension mismatch: vector has {v.shape[1]} entries, "
                    f"vocabulary has {self.components.shape[1]}"
                )
            return np.asarray((v @ self.components.T)).ravel()
        arr = np.asarray(v, dtype=np.float64).ravel()
        if arr.shape[0] != self.components.shape[1]:
            raise ValidationError(
                f"dimension mismatch: vector has {arr.shape[0]} entries, "
                f"vocabulary has {self.components.shape[1]}"
            )
        return self.components @ arr

    def reduce_many(self, matrix: sp.spmatrix) -> np.ndarray:
        if matrix.shape[1] != self.components.shape[1]:
            raise ValidationError("dimension mismatch in reduce_many")
        return np.asarray(matrix @ self.components.T)


def fit_truncated_svd(matrix: sp.spmatrix, k: int, seed: int) -> SvdModel:
    """Randomized range-finder SVD of a sparse n x |V| matrix.

    Sketch width is k + 10; four power iterations, each re-orthonormalized
    by QR, sharpen the subspace before the small dense SVD.
    """
    n, d = matrix.shape
    if k < 1 or k > min(n, d):
        raise ValidationError(f"k={k} out of range for a {n}x{d} matrix")
    matrix = matrix.tocsr().astype(np.float64)
    if matrix.nnz == 0:
        raise ValidationError("cannot decompose an all-zero matrix")
    rng = np.random.default_rng(seed)
    p = min(k + SVD_OVERSAMPLES, min(n, d))
    omega = rng.standard_normal((d, p))
    q, _ = np.linalg.qr(matrix @ omega)
    for _ in range(SVD_POWER_ITERATIONS):
        z, _ = np.linalg.qr(matrix.T @ q)
        q, _ = np.linalg.qr(matrix @ z)
    b = np.asarray(q.T @ matrix)
    _, s, vt = np.linalg.svd(b, full_matrices=False)
    return SvdModel(
        components=np.ascontiguousarray(vt[:k]),
        singular_values=np.ascontiguousarray(s[:k]),
        k=k,
        seed=seed,
    )


def effective_k(requested_k: int, n_docs: int, n_terms: int) -> int:
    """Default-k rule: cap at min(n, |V|) - 1, floor at 1."""
    return max(1, min(requested_k, min(n_docs, n_terms) - 1))


def fit_vectorizer(
    corpus_texts: Sequence[str], config: VectorizerConfig | None = None
) -> tuple[TfidfModel, SvdModel, np.ndarray]:
    """Fit TF-IDF then SVD over the corpus; returns the reduced matrix too."""
    cfg = config or VectorizerConfig()
    tfidf = fit_tfidf(corpus_texts, cfg)
    matrix = tfidf.transform_many(corpus_texts)
    k = effective_k(cfg.k, len(corpus_texts), tfidf.n_terms)
    svd = fit_truncated_svd(matrix, k, cfg.seed)
    return tfidf, svd, svd.reduce_many(matrix)


def save_vectorizer(path: str | Path, tfidf: TfidfModel, svd: SvdModel) -> None:
    meta = {
        "kind": "vectorizer",
        "config": tfidf.config.to_json(),
        "vocabulary": sorted(tfidf.vocabulary, key=tfidf.vocabulary.get),
        "k": svd.k,
        "svd_seed": svd.seed,
    }
    write_container(
        path,
        meta,
        {
            "idf": tfidf.idf,
            "components": svd.components,
            "singular_values": svd.singular_values,
        },
    )


def load_vectorizer(path: str | Path) -> tuple[TfidfModel, SvdModel]:
    meta, arrays = read_container(path)
    cfg = VectorizerConfig.from_json(meta["config"])
    vocabulary = {term: i for i, term in enumerate(meta["vocabulary"])}
    tfidf = TfidfModel(vocabulary=vocabulary, idf=arrays["idf"], config=cfg)
    svd = SvdModel(
        components=arrays["components"],
        singular_values=arrays["singular_values"],
        k=int(meta["k"]),
        seed=int(meta["svd_seed"]),
    )
    return tfidf, svd
