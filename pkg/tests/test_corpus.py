"""Corpus ingestion, schema validation, annotation loading, export."""
from __future__ import annotations

import json

import pytest

from labelaudit.corpus import (
    AnnotationSet,
    CorpusSnapshot,
    LabelSchema,
    Record,
    derive_schema,
    export,
    ingest,
    ingest_annotations,
    query_by_label,
)
from labelaudit.errors import (
    ParseError,
    UnknownLabelError,
    UnknownRecordError,
    ValidationError,
)

from conftest import make_snapshot


class TestLabelSchema:
    def test_ownership_and_order(self):
        schema = LabelSchema.from_dict({"a": ["x", "y"], "b": ["z"]})
        assert schema.categories == ("a", "b")
        assert schema.category_of("z") == "b"
        assert schema.labels_in("a") == ("x", "y")
        assert schema.all_labels() == ("x", "y", "z")

    def test_label_owned_by_two_categories_rejected(self):
        with pytest.raises(ValidationError):
            LabelSchema.from_dict({"a": ["x"], "b": ["x"]})

    def test_duplicate_label_within_category_rejected(self):
        with pytest.raises(ValidationError):
            LabelSchema.from_dict({"a": ["x", "x"]})

    def test_unknown_lookups_raise(self):
        schema = LabelSchema.from_dict({"a": ["x"]})
        with pytest.raises(UnknownLabelError):
            schema.category_of("nope")
        from labelaudit.errors import UnknownCategoryError

        with pytest.raises(UnknownCategoryError):
            schema.labels_in("nope")

    def test_dict_roundtrip(self):
        d = {"problem": ["hot", "cold"], "item": ["fan"]}
        assert LabelSchema.from_dict(d).to_dict() == d


class TestAnnotationSet:
    def test_assignment_outside_schema_rejected(self):
        schema = LabelSchema.from_dict({"a": ["x"]})
        with pytest.raises(UnknownLabelError):
            AnnotationSet(schema=schema, assignments={"r1": frozenset({"y"})})

    def test_labels_by_category_orders_by_schema(self):
        schema = LabelSchema.from_dict({"a": ["x", "y"], "b": ["z"]})
        ann = AnnotationSet(schema=schema, assignments={"r1": frozenset({"y", "x"})})
        assert ann.labels_by_category("r1") == {"a": ["x", "y"], "b": []}
        assert ann.labels_for("missing") == frozenset()


class TestSnapshot:
    def test_duplicate_record_ids_rejected(self):
        records = (
            Record(id="r1", text_fields=(("text", "a"),)),
            Record(id="r1", text_fields=(("text", "b"),)),
        )
        schema = LabelSchema.from_dict({"a": ["x"]})
        ann = AnnotationSet(schema=schema, assignments={})
        with pytest.raises(ValidationError):
            CorpusSnapshot(records=records, annotations=ann)

    def test_record_lookup(self, hvac_snapshot):
        assert hvac_snapshot.record_by_id("r3").text_fields[0][1].startswith("fan")
        assert hvac_snapshot.has_record("r6")
        with pytest.raises(UnknownRecordError):
            hvac_snapshot.record_by_id("zzz")

    def test_record_text_concatenates_fields_in_order(self):
        r = Record(id="r", text_fields=(("summary", "too hot"), ("detail", "room 4b")))
        assert r.text() == "too hot room 4b"

    def test_query_by_label(self, hvac_snapshot):
        assert query_by_label(hvac_snapshot, "too_hot") == ["r1", "r2"]
        with pytest.raises(UnknownLabelError):
            query_by_label(hvac_snapshot, "nope")


class TestIngest:
    def test_jsonl_with_explicit_ids(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(
            '{"rid": "a1", "summary": "too hot", "detail": "room 4b"}\n'
            '{"rid": "a2", "summary": "fan noise", "detail": ""}\n',
            encoding="utf-8",
        )
        snap = ingest(path, format="jsonl", field_spec=["summary", "detail"], id_field="rid")
        assert [r.id for r in snap.records] == ["a1", "a2"]
        assert snap.record_by_id("a1").text() == "too hot room 4b"

    def test_jsonl_generated_ids_are_stable(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"text": "one"}\n{"text": "two"}\n', encoding="utf-8")
        snap = ingest(path, format="jsonl", field_spec=["text"])
        assert [r.id for r in snap.records] == ["000000", "000001"]

    def test_csv(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text("id,text\nr1,too hot\nr2,fan noise\n", encoding="utf-8")
        snap = ingest(path, format="csv", field_spec=["text"], id_field="id")
        assert len(snap) == 2
        assert snap.record_by_id("r2").text() == "fan noise"

    def test_missing_field_rejected(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"summary": "x"}\n', encoding="utf-8")
        with pytest.raises(ParseError):
            ingest(path, format="jsonl", field_spec=["text"])

    def test_duplicate_explicit_ids_rejected(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(
            '{"id": "r1", "text": "a"}\n{"id": "r1", "text": "b"}\n', encoding="utf-8"
        )
        with pytest.raises(ValidationError):
            ingest(path, format="jsonl", field_spec=["text"], id_field="id")

    def test_unknown_format_rejected(self, tmp_path):
        path = tmp_path / "c.xml"
        path.write_text("<x/>", encoding="utf-8")
        with pytest.raises(ValidationError):
            ingest(path, format="xml", field_spec=["text"])


class TestAnnotations:
    def _corpus(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(
            '{"id": "r1", "text": "too hot"}\n{"id": "r2", "text": "fan"}\n',
            encoding="utf-8",
        )
        return ingest(path, format="jsonl", field_spec=["text"], id_field="id")

    def test_json_mapping(self, tmp_path):
        snap = self._corpus(tmp_path)
        ann_path = tmp_path / "a.json"
        ann_path.write_text(
            json.dumps(
                {
                    "r1": {"problem": ["hot"], "item": []},
                    "r2": {"problem": [], "item": ["fan"]},
                }
            ),
            encoding="utf-8",
        )
        schema = derive_schema(ann_path, format="json")
        assert schema.to_dict() == {"problem": ["hot"], "item": ["fan"]}
        ann = ingest_annotations(ann_path, schema, snap, format="json")
        assert ann.labels_for("r1") == frozenset({"hot"})

    def test_unknown_record_in_annotations_rejected(self, tmp_path):
        snap = self._corpus(tmp_path)
        ann_path = tmp_path / "a.json"
        ann_path.write_text(json.dumps({"zzz": {"problem": ["hot"]}}), encoding="utf-8")
        schema = derive_schema(ann_path, format="json")
        with pytest.raises(UnknownRecordError):
            ingest_annotations(ann_path, schema, snap, format="json")


class TestExport:
    def test_roundtrip_identity(self, tmp_path, hvac_snapshot):
        out = tmp_path / "snap.jsonl"
        export(hvac_snapshot, out)
        again = ingest(out, format="jsonl", field_spec=["text"], id_field="id")
        lines = out.read_text(encoding="utf-8").splitlines()
        assert len(lines) == len(hvac_snapshot)
        row = json.loads(lines[0])
        assert row["id"] == "r1"
        assert set(row["labels"]["problem"]) == {"too_hot", "room_hot"}
        assert [r.id for r in again.records] == [r.id for r in hvac_snapshot.records]
        # exporting the re-ingested corpus reproduces the file byte for byte
        out2 = tmp_path / "snap2.jsonl"
        schema = hvac_snapshot.schema
        ann = AnnotationSet(
            schema=schema,
            assignments={
                rid: frozenset(
                    lab
                    for labs in json.loads(line)["labels"].values()
                    for lab in labs
                )
                for line, rid in zip(lines, [r.id for r in again.records])
            },
        )
        export(again.with_annotations(ann), out2)
        assert out.read_bytes() == out2.read_bytes()


class TestMakeSnapshotHelper:
    def test_version_passthrough(self):
        snap = make_snapshot({"r": "x"}, {"a": ["x"]}, {"r": {"x"}}, version=3)
        assert snap.version == 3
        assert snap.schema.categories == ("a",)
