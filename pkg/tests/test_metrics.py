"""Co-occurrence counts, duplication possibility, information density."""
from __future__ import annotations

import json
import math

import numpy as np
import pytest

from labelaudit.errors import UnknownCategoryError, ValidationError
from labelaudit.metrics import (
    confidence_report,
    cooccurrence,
    density_report,
    duplication_possibility,
    duplication_report,
    info_density,
)
from labelaudit.vectorize import VectorizerConfig

from conftest import make_snapshot


def brute_force_duplication(snapshot, category) -> float:
    """Independent reference: sets and dict counters only, no arrays."""
    labels = snapshot.schema.labels_in(category)
    num = {l: 0 for l in labels}
    co: dict[tuple[str, str], int] = {}
    for record in snapshot.records:
        present = [
            l for l in labels if l in snapshot.annotations.labels_for(record.id)
        ]
        for a in present:
            num[a] += 1
            for b in present:
                if a != b:
                    co[(a, b)] = co.get((a, b), 0) + 1
    per_label = []
    for a in labels:
        if num[a] == 0:
            continue
        ratios = [co[(a, b)] / num[a] for b in labels if co.get((a, b), 0) > 0]
        per_label.append(sum(ratios) / len(ratios) if ratios else 0.0)
    return sum(per_label) / len(per_label)


def random_snapshot(rng: np.random.Generator):
    n_labels = int(rng.integers(1, 11))
    n_records = int(rng.integers(1, 51))
    labels = [f"l{i}" for i in range(n_labels)]
    texts = {f"r{i}": f"word{i} text" for i in range(n_records)}
    assignments = {}
    for i in range(n_records):
        k = int(rng.integers(0, n_labels + 1))
        if k:
            picked = rng.choice(n_labels, size=k, replace=False)
            assignments[f"r{i}"] = {labels[j] for j in picked}
    return make_snapshot(texts, {"cat": labels}, assignments)


class TestCooccurrence:
    def test_counts_on_fixture(self, hvac_snapshot):
        stats = cooccurrence(hvac_snapshot, "problem")
        assert stats.labels == ("too_hot", "room_hot", "noise", "leak")
        assert stats.num("too_hot") == 2
        assert stats.co("too_hot", "room_hot") == 2
        assert stats.co("too_hot", "noise") == 0
        np.testing.assert_array_equal(stats.counts, stats.counts.T)

    def test_diagonal_is_label_count(self, hvac_snapshot):
        stats = cooccurrence(hvac_snapshot, "item")
        assert stats.num("compressor") == 1
        assert stats.num("fan") == 1
        assert stats.num("pump") == 1
        assert stats.co("fan", "pump") == 0

    def test_unknown_category(self, hvac_snapshot):
        with pytest.raises(UnknownCategoryError):
            cooccurrence(hvac_snapshot, "nope")


class TestDuplicationPossibility:
    def test_worked_example(self):
        # Num = (4, 4, 2); a and b co-occur twice; c never pairs.
        # a: mean(2/4) = .5; b: mean(2/4) = .5; c: 0 -> score = 1/3
        texts = {f"r{i}": "t" for i in range(6)}
        assignments = {
            "r0": {"a", "b"},
            "r1": {"a", "b"},
            "r2": {"a"},
            "r3": {"a"},
            "r4": {"b", "c"},
            "r5": {"b", "c"},
        }
        snap = make_snapshot(texts, {"cat": ["a", "b", "c"]}, assignments)
        stats = cooccurrence(snap, "cat")
        assert stats.num("a") == 4 and stats.num("b") == 4 and stats.num("c") == 2
        assert stats.co("a", "b") == 2
        # a: 2/4; b: mean(2/4, 2/4) = 1/2; c: 2/2 = 1 -> (0.5+0.5+1)/3
        assert duplication_possibility(stats) == pytest.approx(2 / 3)

    def test_single_pair_with_partnerless_third_label(self):
        # Num = (4, 4, 2), only Co(a,b) = 2: per-label means (.5, .5, 0)
        texts = {f"r{i}": "t" for i in range(10)}
        assignments = {
            "r0": {"a", "b"},
            "r1": {"a", "b"},
            "r2": {"a"},
            "r3": {"a"},
            "r4": {"b"},
            "r5": {"b"},
            "r6": {"c"},
            "r7": {"c"},
        }
        snap = make_snapshot(texts, {"cat": ["a", "b", "c"]}, assignments)
        stats = cooccurrence(snap, "cat")
        assert stats.num("a") == 4 and stats.num("b") == 4 and stats.num("c") == 2
        assert stats.co("a", "b") == 2
        assert duplication_possibility(stats) == pytest.approx(1 / 3, abs=1e-12)

    def test_always_coassigned_pair_scores_one(self):
        texts = {f"r{i}": "t" for i in range(5)}
        assignments = {f"r{i}": {"x", "y"} for i in range(5)}
        snap = make_snapshot(texts, {"cat": ["x", "y"]}, assignments)
        assert duplication_possibility(cooccurrence(snap, "cat")) == pytest.approx(1.0)

    def test_never_coassigned_scores_zero(self):
        texts = {f"r{i}": "t" for i in range(4)}
        assignments = {
            "r0": {"x"},
            "r1": {"x"},
            "r2": {"y"},
            "r3": {"y"},
        }
        snap = make_snapshot(texts, {"cat": ["x", "y"]}, assignments)
        assert duplication_possibility(cooccurrence(snap, "cat")) == 0.0

    def test_no_assigned_labels_rejected(self):
        snap = make_snapshot({"r": "t"}, {"cat": ["x"]}, {})
        with pytest.raises(ValidationError):
            duplication_possibility(cooccurrence(snap, "cat"))

    def test_matches_brute_force_on_random_corpora(self):
        rng = np.random.default_rng(17)
        checked = 0
        while checked < 60:
            snap = random_snapshot(rng)
            stats = cooccurrence(snap, "cat")
            if not (np.diag(stats.counts) > 0).any():
                continue
            got = duplication_possibility(stats)
            want = brute_force_duplication(snap, "cat")
            assert got == pytest.approx(want, abs=1e-12)
            checked += 1


class TestDuplicationReport:
    def test_empty_category_scores_zero(self, hvac_snapshot):
        report = duplication_report(hvac_snapshot)
        assert report.scores["status"] == 0.0
        assert report.pairs["status"] == ()

    def test_pairs_ranked_by_ratio(self, hvac_snapshot):
        report = duplication_report(hvac_snapshot)
        pairs = report.pairs["problem"]
        ratios = [p.ratio for p in pairs]
        assert ratios == sorted(ratios, reverse=True)
        top = pairs[0]
        assert {top.label, top.partner} == {"too_hot", "room_hot"}

    def test_json_shape(self, hvac_snapshot):
        payload = duplication_report(hvac_snapshot).to_json()
        assert set(payload) == {"scores", "pairs"}
        assert json.dumps(payload)


class TestInfoDensity:
    def test_exact_arithmetic(self, hvac_snapshot):
        record = hvac_snapshot.record_by_id("r1")
        # 3 labels; text "compressor runs too hot and trips" keeps
        # compressor/runs/hot/trips after stopwords (too, and dropped)
        got = info_density(record, hvac_snapshot)
        assert got == pytest.approx(math.log(3 / 4), abs=1e-12)

    def test_zero_labels_is_negative_infinity(self, hvac_snapshot):
        record = hvac_snapshot.record_by_id("r4")
        assert info_density(record, hvac_snapshot) == -math.inf

    def test_zero_words_with_labels_is_positive_infinity(self):
        snap = make_snapshot({"r": "is was of"}, {"c": ["x"]}, {"r": {"x"}})
        assert info_density(snap.record_by_id("r"), snap) == math.inf

    def test_monotone_in_label_count(self):
        base = {"c": ["x", "y", "z"]}
        text = {"r": "alpha beta gamma delta"}
        d1 = info_density(
            make_snapshot(text, base, {"r": {"x"}}).record_by_id("r"),
            make_snapshot(text, base, {"r": {"x"}}),
        )
        d2 = info_density(
            make_snapshot(text, base, {"r": {"x", "y"}}).record_by_id("r"),
            make_snapshot(text, base, {"r": {"x", "y"}}),
        )
        assert d2 > d1

    def test_monotone_decreasing_in_word_count(self):
        schema = {"c": ["x"]}
        short = make_snapshot({"r": "alpha beta"}, schema, {"r": {"x"}})
        long = make_snapshot({"r": "alpha beta gamma delta"}, schema, {"r": {"x"}})
        assert info_density(short.record_by_id("r"), short) > info_density(
            long.record_by_id("r"), long
        )

    def test_random_pairs_match_log_formula(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            labels = int(rng.integers(1, 9))
            words = int(rng.integers(1, 40))
            texts = {"r": " ".join(f"tok{i}" for i in range(words))}
            schema = {"c": [f"l{i}" for i in range(8)]}
            snap = make_snapshot(
                texts, schema, {"r": {f"l{i}" for i in range(labels)}}
            )
            got = info_density(snap.record_by_id("r"), snap)
            assert got == pytest.approx(math.log(labels / words), abs=1e-12)


class TestDensityReport:
    def test_unlabeled_records_rank_first(self, hvac_snapshot):
        report = density_report(hvac_snapshot)
        ranked = report.ranked()
        # r4 (no labels) first; r6 is all-stopword but also unlabeled
        first_two = {ranked[0].record_id, ranked[1].record_id}
        assert first_two == {"r4", "r6"}
        assert ranked[0].density == -math.inf

    def test_ascending_order(self, hvac_snapshot):
        densities = [r.density for r in density_report(hvac_snapshot).ranked()]
        assert densities == sorted(densities)

    def test_json_encodes_nonfinite_as_null(self, hvac_snapshot):
        payload = density_report(hvac_snapshot).to_json()
        by_id = {row["record_id"]: row for row in payload["rows"]}
        assert by_id["r4"]["density"] is None
        assert isinstance(by_id["r1"]["density"], float)
        assert json.dumps(payload)

    def test_respects_vectorizer_config(self):
        # without stopword removal the word count rises, density falls
        snap = make_snapshot(
            {"r": "the pump is leaking"}, {"c": ["x"]}, {"r": {"x"}}
        )
        default = info_density(snap.record_by_id("r"), snap)
        raw = info_density(
            snap.record_by_id("r"), snap, VectorizerConfig(stopwords=frozenset())
        )
        assert raw < default


class TestConfidenceReport:
    def test_rows_aligned_with_model(self, trained_model, separable_snapshot):
        report = confidence_report(trained_model, separable_snapshot)
        assert report.label_order == trained_model.label_order
        assert len(report.rows) == len(separable_snapshot.records)
        row = report.rows[0]
        assert row.record_id == separable_snapshot.records[0].id
        assert row.score == pytest.approx(float(np.mean(row.vector)))
        assert set(row.by_category) == set(trained_model.schema.categories)

    def test_scores_in_unit_interval(self, trained_model, separable_snapshot):
        report = confidence_report(trained_model, separable_snapshot)
        scores = [row.score for row in report.rows]
        assert all(0.0 < s < 1.0 for s in scores)
