"""Synthetic corpus generators: determinism and planted structure."""
from __future__ import annotations

import numpy as np
import pytest

from labelaudit.metrics import duplication_report, info_density
from labelaudit.synth import (
    GENERATORS,
    duplicate_pair_corpus,
    gaussian_clusters,
    generate,
    html_polluted_corpus,
    missing_label_corpus,
    separable_corpus,
    two_cluster_corpus,
)


def labels_for(snapshot, rid):
    return snapshot.annotations.labels_for(rid)


class TestGenerate:
    def test_known_kinds(self):
        for kind in GENERATORS:
            snapshot = generate(kind, n=20, seed=3)
            assert len(snapshot.records) == 20

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            generate("bogus", n=10, seed=0)

    def test_deterministic(self):
        a = generate("separable", n=40, seed=11)
        b = generate("separable", n=40, seed=11)
        assert [r.text() for r in a.records] == [r.text() for r in b.records]
        assert a.annotations.assignments == b.annotations.assignments

    def test_seed_changes_output(self):
        a = generate("separable", n=40, seed=1)
        b = generate("separable", n=40, seed=2)
        assert [r.text() for r in a.records] != [r.text() for r in b.records]

    def test_zero_padded_ids(self):
        snapshot = generate("separable", n=3, seed=0)
        assert [r.id for r in snapshot.records] == ["000000", "000001", "000002"]


class TestSeparable:
    def test_one_label_per_category(self):
        snapshot = separable_corpus(n=60, seed=2)
        for record in snapshot.records:
            per_category = {
                c: labels_for(snapshot, record.id)
                & set(snapshot.schema.labels_in(c))
                for c in snapshot.schema.categories
            }
            assert all(len(v) == 1 for v in per_category.values())

    def test_trigger_tokens_present(self):
        from labelaudit.synth import SEPARABLE_TRIGGERS

        snapshot = separable_corpus(n=60, seed=2)
        for record in snapshot.records:
            tokens = set(record.text().split())
            for category, labs in SEPARABLE_TRIGGERS.items():
                assigned = labels_for(snapshot, record.id) & set(labs)
                (label,) = assigned
                assert tokens & set(labs[label])


class TestDuplicatePair:
    def test_pair_always_coassigned(self):
        snapshot = duplicate_pair_corpus(n=120, seed=4)
        saw_pair = False
        for record in snapshot.records:
            labs = labels_for(snapshot, record.id)
            assert ("too_hot" in labs) == ("room_hot" in labs)
            saw_pair = saw_pair or "too_hot" in labs
        assert saw_pair

    def test_problem_category_scores_highest(self):
        snapshot = duplicate_pair_corpus(n=200, seed=4)
        scores = duplication_report(snapshot).scores
        assert scores["problem"] > scores["item"]
        assert scores["problem"] > scores["solution"]
        assert scores["problem"] > 0.6


class TestHtmlPolluted:
    def test_polluted_fraction(self):
        snapshot = html_polluted_corpus(n=200, seed=6, polluted_fraction=0.25)
        junk = [
            r.id
            for r in snapshot.records
            if "br_richard" in labels_for(snapshot, r.id)
        ]
        assert len(junk) == 50

    def test_polluted_records_contain_markup_tokens(self):
        from labelaudit.synth import HTML_JUNK

        snapshot = html_polluted_corpus(n=80, seed=6)
        for record in snapshot.records:
            if "br_richard" in labels_for(snapshot, record.id):
                assert set(record.text().split()) <= set(HTML_JUNK)


class TestMissingLabel:
    def test_planted_cluster_is_least_dense(self):
        snapshot = missing_label_corpus(n=120, seed=8, missing_fraction=0.2)
        sparse = {
            r.id
            for r in snapshot.records
            if labels_for(snapshot, r.id) == {"qa"}
        }
        assert len(sparse) == 24
        worst = max(
            info_density(r, snapshot) for r in snapshot.records if r.id in sparse
        )
        best = min(
            info_density(r, snapshot)
            for r in snapshot.records
            if r.id not in sparse
        )
        assert worst < best


class TestTwoCluster:
    def test_cluster_map_matches_labels(self):
        snapshot, clusters = two_cluster_corpus(n=50, seed=9)
        assert set(clusters) == {r.id for r in snapshot.records}
        for record in snapshot.records:
            want = "water" if clusters[record.id] == 0 else "electric"
            assert labels_for(snapshot, record.id) == {want}

    def test_vocabularies_disjoint(self):
        from labelaudit.synth import TOPIC_A, TOPIC_B

        snapshot, clusters = two_cluster_corpus(n=50, seed=9)
        for record in snapshot.records:
            pool = TOPIC_A if clusters[record.id] == 0 else TOPIC_B
            assert set(record.text().split()) <= set(pool)


class TestGaussianClusters:
    def test_shapes_and_label_counts(self):
        X, y = gaussian_clusters(n_per_cluster=30, dim=12, n_clusters=4, seed=1)
        assert X.shape == (120, 12)
        assert np.bincount(y).tolist() == [30, 30, 30, 30]

    def test_centers_equidistant(self):
        X, y = gaussian_clusters(
            n_per_cluster=400, dim=16, n_clusters=3, separation=10.0, seed=2
        )
        centers = np.stack([X[y == c].mean(axis=0) for c in range(3)])
        for i in range(3):
            for j in range(i + 1, 3):
                d = np.linalg.norm(centers[i] - centers[j])
                np.testing.assert_allclose(d, 10.0, rtol=0.05)

    def test_too_many_clusters_rejected(self):
        with pytest.raises(ValueError):
            gaussian_clusters(dim=2, n_clusters=4)

    def test_deterministic(self):
        a, _ = gaussian_clusters(seed=5)
        b, _ = gaussian_clusters(seed=5)
        np.testing.assert_array_equal(a, b)
