"""Corpus store: records, label schema, annotations, and immutable snapshots.

Every other module reads from a :class:`CorpusSnapshot`; only the relabel
engine produces new snapshots (with a strictly increasing version number).
"""
from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import (
    ParseError,
    UnknownCategoryError,
    UnknownLabelError,
    UnknownRecordError,
    ValidationError,
)

SYNTH_ID_WIDTH = 6


@dataclass(frozen=True)
class Record:
    """One technical-text entry: an id plus ordered named text fields."""

    id: str
    text_fields: tuple[tuple[str, str], ...]

    def field_map(self) -> dict[str, str]:
        return dict(self.text_fields)

    def text(self) -> str:
        """Modeling text: all fields concatenated in order, space-separated."""
        return " ".join(value for _, value in self.text_fields if value)


@dataclass(frozen=True)
class LabelSchema:
    """Ordered categories plus the label -> category ownership map.

    ``labels`` preserves declaration order; the per-category order it induces
    defines one-hot column order and the global confidence-vector layout.
    """

    categories: tuple[str, ...]
    labels: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        known = set(self.categories)
        if len(known) != len(self.categories):
            raise ValidationError("duplicate category names in schema")
        seen: dict[str, str] = {}
        for label, category in self.labels:
            if not label.strip():
                raise ValidationError("empty label string in schema")
            if category not in known:
                raise UnknownCategoryError(
                    f"label {label!r} declared under unknown category {category!r}"
                )
            if label in seen:
                raise ValidationError(
                    f"label {label!r} declared in both {seen[label]!r} and {category!r}; "
                    "each label belongs to exactly one category"
                )
            seen[label] = category

    @classmethod
    def from_dict(cls, by_category: Mapping[str, Sequence[str]]) -> "LabelSchema":
        categories = tuple(by_category.keys())
        labels = tuple(
            (label, category)
            for category in categories
            for label in by_category[category]
        )
        return cls(categories=categories, labels=labels)

    def to_dict(self) -> dict[str, list[str]]:
        return {c: list(self.labels_in(c)) for c in self.categories}

    def category_of(self, label: str) -> str:
        for lab, cat in self.labels:
            if lab == label:
                return cat
        raise UnknownLabelError(f"unknown label {label!r}")

    def has_label(self, label: str) -> bool:
        return any(lab == label for lab, _ in self.labels)

    def labels_in(self, category: str) -> tuple[str, ...]:
        if category not in self.categories:
            raise UnknownCategoryError(f"unknown category {category!r}")
        return tuple(lab for lab, cat in self.labels if cat == category)

    def all_labels(self) -> tuple[str, ...]:
        """Global flattened label order: categories in order, labels per
        category in declaration order."""
        return tuple(
            lab for cat in self.categories for lab in self.labels_in(cat)
        )


@dataclass(frozen=True)
class AnnotationSet:
    """Immutable record-id -> label-set mapping under a fixed schema."""

    schema: LabelSchema
    assignments: Mapping[str, frozenset[str]]
    version: int = 0

    def __post_init__(self) -> None:
        for record_id, labels in self.assignments.items():
            for label in labels:
                if not self.schema.has_label(label):
                    raise UnknownLabelError(
                        f"record {record_id!r} carries label {label!r} "
                        "which is not in the schema"
                    )

    def labels_for(self, record_id: str) -> frozenset[str]:
        return self.assignments.get(record_id, frozenset())

    def labels_by_category(self, record_id: str) -> dict[str, list[str]]:
        assigned = self.labels_for(record_id)
        return {
            cat: [lab for lab in self.schema.labels_in(cat) if lab in assigned]
            for cat in self.schema.categories
        }


@dataclass(frozen=True)
class CorpusSnapshot:
    """Immutable (records, annotations) pair; relabeling yields a new one."""

    records: tuple[Record, ...]
    annotations: AnnotationSet
    created_at: float = field(default_factory=time.time)

    def __post_init__(self) -> None:
        ids = [r.id for r in self.records]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValidationError(f"duplicate record ids: {dupes[:5]}")
        object.__setattr__(self, "_index", {r.id: i for i, r in enumerate(self.records)})

    @property
    def version(self) -> int:
        return self.annotations.version

    @property
    def schema(self) -> LabelSchema:
        return self.annotations.schema

    def __len__(self) -> int:
        return len(self.records)

    def has_record(self, record_id: str) -> bool:
        return record_id in self._index  # type: ignore[attr-defined]

    def record_by_id(self, record_id: str) -> Record:
        idx = self._index.get(record_id)  # type: ignore[attr-defined]
        if idx is None:
            raise UnknownRecordError(f"unknown record id {record_id!r}")
        return self.records[idx]

    def with_annotations(self, annotations: AnnotationSet) -> "CorpusSnapshot":
        return CorpusSnapshot(records=self.records, annotations=annotations)


def _empty_annotations() -> AnnotationSet:
    return AnnotationSet(
        schema=LabelSchema(categories=(), labels=()), assignments={}, version=0
    )


def _check_record_fields(
    row_no: int, values: dict[str, str], field_spec: Sequence[str]
) -> None:
    if not any(values[name].strip() for name in field_spec):
        raise ValidationError(
            f"row {row_no}: every text field is empty (fields: {list(field_spec)})"
        )


def _ingest_csv(
    path: Path, field_spec: Sequence[str], id_field: str | None
) -> list[Record]:
    records: list[Record] = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh, strict=True)
        header = reader.fieldnames or []
        missing = [name for name in field_spec if name not in header]
        if missing:
            raise ParseError(f"{path}: text fields not found in header: {missing}")
        if id_field is not None and id_field not in header:
            raise ParseError(f"{path}: id field {id_field!r} not found in header")
        row_no = 1  # header is line 1
        try:
            for row in reader:
                row_no += 1
                if None in row or any(v is None for v in row.values()):
                    raise ParseError(f"{path}: row {row_no}: malformed column count")
                values = {name: row[name] for name in field_spec}
                _check_record_fields(row_no, values, field_spec)
                rid = (
                    row[id_field]
                    if id_field is not None
                    else format(row_no - 2, f"0{SYNTH_ID_WIDTH}d")
                )
                records.append(
                    Record(id=rid, text_fields=tuple((n, values[n]) for n in field_spec))
                )
        except csv.Error as exc:
            raise ParseError(f"{path}: row {row_no + 1}: {exc}") from exc
    return records


def _ingest_jsonl(
    path: Path, field_spec: Sequence[str], id_field: str | None
) -> list[Record]:
    records: list[Record] = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}: line {line_no}: {exc}") from exc
            if not isinstance(obj, dict):
                raise ParseError(f"{path}: line {line_no}: expected a JSON object")
            missing = [name for name in field_spec if name not in obj]
            if missing:
                raise ParseError(
                    f"{path}: line {line_no}: missing text fields {missing}"
                )
            values = {name: str(obj[name]) for name in field_spec}
            _check_record_fields(line_no, values, field_spec)
            if id_field is not None:
                if id_field not in obj:
                    raise ParseError(
                        f"{path}: line {line_no}: missing id field {id_field!r}"
                    )
                rid = str(obj[id_field])
            else:
                rid = format(len(records), f"0{SYNTH_ID_WIDTH}d")
            records.append(
                Record(id=rid, text_fields=tuple((n, values[n]) for n in field_spec))
            )
    return records


def ingest(
    records_path: str | Path,
    format: str,
    field_spec: Sequence[str],
    id_field: str | None = None,
) -> CorpusSnapshot:
    """Load a corpus file into a snapshot with empty annotations.

    ``format`` is ``csv`` (RFC-4180 quoting) or ``jsonl``. Ids come from
    ``id_field`` when given, else are synthesized as zero-padded row indices.
    """
    path = Path(records_path)
    if not path.exists():
        raise ParseError(f"corpus file not found: {path}")
    if not field_spec:
        raise ValidationError("field_spec must name at least one text field")
    if format == "csv":
        records = _ingest_csv(path, field_spec, id_field)
    elif format == "jsonl":
        records = _ingest_jsonl(path, field_spec, id_field)
    else:
        raise ValidationError(f"unsupported corpus format {format!r}")
    if id_field is not None:
        ids = [r.id for r in records]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValidationError(f"duplicate record ids in {path}: {dupes[:5]}")
    return CorpusSnapshot(records=tuple(records), annotations=_empty_annotations())


def _annotations_from_obj(
    obj: Mapping[str, Mapping[str, Sequence[str]]],
    schema: LabelSchema,
    snapshot: CorpusSnapshot,
) -> dict[str, frozenset[str]]:
    assignments: dict[str, frozenset[str]] = {}
    for record_id, per_category in obj.items():
        if not snapshot.has_record(record_id):
            raise UnknownRecordError(f"annotations reference unknown record {record_id!r}")
        labels: set[str] = set()
        for category, cat_labels in per_category.items():
            if category not in schema.categories:
                raise UnknownCategoryError(
                    f"record {record_id!r}: unknown category {category!r}"
                )
            for label in cat_labels:
                if not schema.has_label(label):
                    raise UnknownLabelError(
                        f"record {record_id!r}: unknown label {label!r}"
                    )
                owner = schema.category_of(label)
                if owner != category:
                    raise ValidationError(
                        f"record {record_id!r}: label {label!r} belongs to "
                        f"category {owner!r}, not {category!r}"
                    )
                labels.add(label)
        assignments[record_id] = frozenset(labels)
    return assignments


def _load_annotation_obj(
    path: Path, format: str
) -> dict[str, Mapping[str, Sequence[str]]]:
    """Normalize either annotation format to {record_id: {category: [labels]}}."""
    if format == "json":
        try:
            obj = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from exc
        if not isinstance(obj, dict):
            raise ParseError(f"{path}: expected a JSON object keyed by record id")
        return obj
    if format == "jsonl":
        obj = {}
        with path.open(encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    row = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(f"{path}: line {line_no}: {exc}") from exc
                rid = str(row.get("id", f"{line_no - 1:0{SYNTH_ID_WIDTH}d}"))
                obj[rid] = row.get("labels", {})
        return obj
    raise ValidationError(f"unsupported annotation format {format!r}")


def ingest_annotations(
    path: str | Path,
    schema: LabelSchema,
    snapshot: CorpusSnapshot,
    format: str = "json",
) -> AnnotationSet:
    """Load annotations for an ingested corpus; result is at version 0.

    ``json`` expects ``{record_id: {category: [labels...]}}``. ``jsonl``
    reads the per-record ``labels`` objects of an exported snapshot, which
    makes export round-trippable.
    """
    obj = _load_annotation_obj(Path(path), format)
    assignments = _annotations_from_obj(obj, schema, snapshot)
    return AnnotationSet(schema=schema, assignments=assignments, version=0)


def derive_schema(path: str | Path, format: str = "json") -> LabelSchema:
    """Build a schema from an annotation file, in first-seen order."""
    obj = _load_annotation_obj(Path(path), format)
    by_category: dict[str, list[str]] = {}
    for per_category in obj.values():
        for category, labels in per_category.items():
            bucket = by_category.setdefault(category, [])
            for label in labels:
                if label not in bucket:
                    bucket.append(label)
    return LabelSchema.from_dict(by_category)


def query_by_label(snapshot: CorpusSnapshot, label: str) -> list[str]:
    """Ids of exactly the records carrying ``label``, in corpus order."""
    if not snapshot.schema.has_label(label):
        raise UnknownLabelError(f"unknown label {label!r}")
    ann = snapshot.annotations
    return [r.id for r in snapshot.records if label in ann.labels_for(r.id)]


def export(snapshot: CorpusSnapshot, path: str | Path) -> None:
    """Write the snapshot as JSON-Lines: one object per record with its text
    fields and per-category label arrays (empty arrays included)."""
    p = Path(path)
    with p.open("w", encoding="utf-8") as fh:
        for record in snapshot.records:
            obj: dict[str, object] = {"id": record.id}
            obj.update(record.field_map())
            obj["labels"] = snapshot.annotations.labels_by_category(record.id)
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def export_lines(snapshot: CorpusSnapshot) -> Iterable[str]:
    """Streaming variant of :func:`export` used by the API server."""
    for record in snapshot.records:
        obj: dict[str, object] = {"id": record.id}
        obj.update(record.field_map())
        obj["labels"] = snapshot.annotations.labels_by_category(record.id)
        yield json.dumps(obj, ensure_ascii=False) + "\n"
