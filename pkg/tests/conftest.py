"""Shared fixtures: small hand-built snapshots and one trained model.

The trained model is session-scoped because fitting it dominates test
runtime; tests must treat it as read-only.
"""
from __future__ import annotations

import pytest

from labelaudit.corpus import AnnotationSet, CorpusSnapshot, LabelSchema, Record
from labelaudit.surrogate import TrainingConfig, train
from labelaudit.synth import separable_corpus
from labelaudit.vectorize import VectorizerConfig


def make_snapshot(
    texts: dict[str, str],
    schema: dict[str, list[str]],
    assignments: dict[str, set[str]],
    version: int = 0,
) -> CorpusSnapshot:
    """Build a snapshot from plain dicts; single text field named 'text'."""
    records = tuple(
        Record(id=rid, text_fields=(("text", text),)) for rid, text in texts.items()
    )
    ann = AnnotationSet(
        schema=LabelSchema.from_dict(schema),
        assignments={rid: frozenset(labels) for rid, labels in assignments.items()},
        version=version,
    )
    return CorpusSnapshot(records=records, annotations=ann)


@pytest.fixture
def hvac_snapshot() -> CorpusSnapshot:
    """Six-record corpus over two categories, enough to exercise every
    metric branch (partnerless labels, empty category, unlabeled record)."""
    texts = {
        "r1": "compressor runs too hot and trips",
        "r2": "room too hot occupants complain",
        "r3": "fan belt squeals on startup",
        "r4": "replaced thermostat batteries",
        "r5": "chilled water pump leaking at seal",
        # r6 is all stopwords: zero tokens after tokenization, still ingestable
        "r6": "is was of the and",
    }
    schema = {
        "problem": ["too_hot", "room_hot", "noise", "leak"],
        "item": ["compressor", "fan", "pump"],
        "status": ["deferred"],
    }
    assignments = {
        "r1": {"too_hot", "room_hot", "compressor"},
        "r2": {"too_hot", "room_hot"},
        "r3": {"noise", "fan"},
        "r5": {"leak", "pump"},
    }
    return make_snapshot(texts, schema, assignments)


@pytest.fixture(scope="session")
def separable_snapshot() -> CorpusSnapshot:
    return separable_corpus(n=300, seed=5)


@pytest.fixture(scope="session")
def trained(separable_snapshot):
    """(model, metrics) fit once on the separable corpus."""
    vcfg = VectorizerConfig(k=48, seed=5)
    tcfg = TrainingConfig(seed=5)
    return train(separable_snapshot, vcfg, tcfg)


@pytest.fixture(scope="session")
def trained_model(trained):
    return trained[0]
