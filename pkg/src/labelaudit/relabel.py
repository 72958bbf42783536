"""Relabeling operations: collected lazily, applied on request.

Remove / Modify / Insert at corpus, sub-group, or record scope accumulate in
a history list. Nothing touches the snapshot until apply, which replays the
pending ops in order (set semantics on each record's label set), bumps the
version, and appends to a JSON-lines audit log when configured.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable

from .corpus import AnnotationSet, CorpusSnapshot, LabelSchema
from .errors import (
    SchemaConflictError,
    StaleVersionError,
    UnknownCategoryError,
    UnknownLabelError,
    UnknownRecordError,
    ValidationError,
)

SCOPE_KINDS = ("corpus", "subgroup", "record")
OP_KINDS = ("remove", "modify", "insert")

PENDING = "pending"
APPLIED = "applied"
REVERTED = "reverted"


@dataclass(frozen=True)
class Scope:
    kind: str
    record_ids: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if self.kind not in SCOPE_KINDS:
            raise ValidationError(f"scope kind must be one of {SCOPE_KINDS}")
        if self.kind == "corpus" and self.record_ids:
            raise ValidationError("corpus scope carries no record ids")
        if self.kind == "subgroup" and not self.record_ids:
            raise ValidationError("subgroup scope requires a non-empty id set")
        if self.kind == "record" and len(self.record_ids) != 1:
            raise ValidationError("record scope requires exactly one id")

    @classmethod
    def corpus(cls) -> "Scope":
        return cls(kind="corpus")

    @classmethod
    def subgroup(cls, record_ids: Iterable[str]) -> "Scope":
        return cls(kind="subgroup", record_ids=frozenset(record_ids))

    @classmethod
    def record(cls, record_id: str) -> "Scope":
        return cls(kind="record", record_ids=frozenset({record_id}))

    def to_json(self) -> dict:
        return {"kind": self.kind, "record_ids": sorted(self.record_ids)}

    @classmethod
    def from_json(cls, obj: dict) -> "Scope":
        return cls(
            kind=obj["kind"], record_ids=frozenset(obj.get("record_ids", []))
        )


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass(frozen=True)
class RelabelOp:
    """One remove / modify / insert suggestion.

    ``label`` is the source for remove/modify; ``new_label`` + ``category``
    describe the modify target or the inserted label.
    """

    kind: str
    scope: Scope
    label: str | None = None
    new_label: str | None = None
    category: str | None = None
    note: str | None = None
    timestamp: str = field(default_factory=_now)

    def __post_init__(self) -> None:
        if self.kind not in OP_KINDS:
            raise ValidationError(f"op kind must be one of {OP_KINDS}")
        if self.kind == "remove":
            if not self.label:
                raise ValidationError("remove requires a label")
        elif self.kind == "modify":
            if not self.label:
                raise ValidationError("modify requires a source label")
            if not self.new_label or not self.new_label.strip():
                raise ValidationError("modify requires a non-empty new_label")
            if self.new_label == self.label:
                raise ValidationError("modify target must differ from source")
        else:
            if not self.new_label or not self.new_label.strip():
                raise ValidationError("insert requires a non-empty new_label")
            if not self.category:
                raise ValidationError("insert requires a category")

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "scope": self.scope.to_json(),
            "label": self.label,
            "new_label": self.new_label,
            "category": self.category,
            "note": self.note,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RelabelOp":
        kwargs = {
            "kind": obj["kind"],
            "scope": Scope.from_json(obj["scope"]),
            "label": obj.get("label"),
            "new_label": obj.get("new_label"),
            "category": obj.get("category"),
            "note": obj.get("note"),
        }
        if obj.get("timestamp"):
            kwargs["timestamp"] = obj["timestamp"]
        return cls(**kwargs)


@dataclass
class HistoryEntry:
    op_id: int
    op: RelabelOp
    status: str = PENDING

    def to_json(self) -> dict:
        out = self.op.to_json()
        out["op_id"] = self.op_id
        out["status"] = self.status
        return out


class RelabelHistory:
    """Ordered, replayable op list anchored to a snapshot version.

    Applied ops stay in the list for audit; each apply consumes only the
    pending ones and re-anchors the history to the produced version.
    Reverting is a tombstone: the op is skipped by any future apply, no
    inverse op is synthesized.
    """

    def __init__(
        self, snapshot: CorpusSnapshot, audit_path: str | Path | None = None
    ) -> None:
        self._snapshot = snapshot
        self.base_version = snapshot.version
        self.entries: list[HistoryEntry] = []
        self._next_id = 1
        self._audit_path = Path(audit_path) if audit_path else None

    def _audit(self, event: dict) -> None:
        if self._audit_path is None:
            return
        with self._audit_path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, ensure_ascii=False) + "\n")

    def _validate(self, op: RelabelOp) -> RelabelOp:
        snapshot = self._snapshot
        schema = snapshot.schema
        if op.scope.kind != "corpus":
            for rid in op.scope.record_ids:
                if not snapshot.has_record(rid):
                    raise UnknownRecordError(f"unknown record id {rid!r}")
        if op.kind in ("remove", "modify"):
            if not schema.has_label(op.label):
                raise UnknownLabelError(f"unknown label {op.label!r}")
        if op.kind == "modify":
            category = op.category
            if category is None:
                # Target keeps its declared home when it already exists,
                # otherwise it lands next to the source label.
                category = (
                    schema.category_of(op.new_label)
                    if schema.has_label(op.new_label)
                    else schema.category_of(op.label)
                )
                op = RelabelOp(
                    kind=op.kind,
                    scope=op.scope,
                    label=op.label,
                    new_label=op.new_label,
                    category=category,
                    note=op.note,
                    timestamp=op.timestamp,
                )
            _check_target_category(schema, op.new_label, category)
        if op.kind == "insert":
            _check_target_category(schema, op.new_label, op.category)
        return op

    def propose(self, op: RelabelOp) -> int:
        """Validate against the anchored snapshot and append as pending."""
        op = self._validate(op)
        op_id = self._next_id
        self._next_id += 1
        self.entries.append(HistoryEntry(op_id=op_id, op=op))
        self._audit({"event": "propose", "op_id": op_id, "op": op.to_json()})
        return op_id

    def revert(self, op_id: int) -> None:
        entry = self._entry(op_id)
        entry.status = REVERTED
        self._audit({"event": "revert", "op_id": op_id})

    def _entry(self, op_id: int) -> HistoryEntry:
        for entry in self.entries:
            if entry.op_id == op_id:
                return entry
        raise ValidationError(f"unknown op id {op_id}")

    def pending(self) -> list[HistoryEntry]:
        return [e for e in self.entries if e.status == PENDING]

    def apply(self, snapshot: CorpusSnapshot) -> CorpusSnapshot:
        """Replay pending ops onto the snapshot; returns the new snapshot.

        With nothing pending this is a no-op: the same snapshot comes back
        and no version is consumed.
        """
        if snapshot.version != self.base_version:
            raise StaleVersionError(
                f"history anchored at version {self.base_version}, "
                f"snapshot is at {snapshot.version}"
            )
        pending = self.pending()
        if not pending:
            return snapshot

        new_annotations = replay(
            snapshot, [entry.op for entry in pending], snapshot.version + 1
        )
        result = snapshot.with_annotations(new_annotations)
        for entry in pending:
            entry.status = APPLIED
        self._snapshot = result
        self.base_version = result.version
        self._audit(
            {
                "event": "apply",
                "base_version": snapshot.version,
                "result_version": result.version,
                "op_ids": [entry.op_id for entry in pending],
            }
        )
        return result

    def history_list(self) -> list[dict]:
        return [entry.to_json() for entry in self.entries]


def _check_target_category(
    schema: LabelSchema, label: str, category: str
) -> None:
    if category not in schema.categories:
        raise UnknownCategoryError(f"unknown category {category!r}")
    if schema.has_label(label) and schema.category_of(label) != category:
        raise SchemaConflictError(
            f"label {label!r} already belongs to category "
            f"{schema.category_of(label)!r}, not {category!r}"
        )


def replay(
    snapshot: CorpusSnapshot, ops: list[RelabelOp], new_version: int
) -> AnnotationSet:
    """Pure op replay producing a fresh AnnotationSet at ``new_version``."""
    schema = snapshot.schema
    all_ids = [r.id for r in snapshot.records]
    assigned: dict[str, set[str]] = {
        rid: set(snapshot.annotations.labels_for(rid)) for rid in all_ids
    }
    categories = list(schema.categories)
    by_category: dict[str, list[str]] = {
        c: list(schema.labels_in(c)) for c in categories
    }
    owner: dict[str, str] = {
        lab: cat for cat in categories for lab in by_category[cat]
    }

    def add_to_schema(label: str, category: str) -> None:
        current = owner.get(label)
        if current is not None:
            if current != category:
                raise SchemaConflictError(
                    f"label {label!r} already belongs to category "
                    f"{current!r}, not {category!r}"
                )
            return
        if category not in by_category:
            raise UnknownCategoryError(f"unknown category {category!r}")
        by_category[category].append(label)
        owner[label] = category

    def drop_if_unassigned(label: str) -> None:
        if label in owner and not any(label in s for s in assigned.values()):
            by_category[owner.pop(label)].remove(label)

    for op in ops:
        scope_ids = (
            all_ids if op.scope.kind == "corpus" else sorted(op.scope.record_ids)
        )
        if op.kind == "remove":
            for rid in scope_ids:
                assigned[rid].discard(op.label)
            if op.scope.kind == "corpus":
                drop_if_unassigned(op.label)
        elif op.kind == "modify":
            category = op.category or owner.get(op.new_label) or owner.get(op.label)
            if category is None:
                # Source vanished (e.g. dropped by an earlier corpus remove).
                # Nothing carries it, so there is nothing to rename.
                continue
            add_to_schema(op.new_label, category)
            for rid in scope_ids:
                if op.label in assigned[rid]:
                    assigned[rid].discard(op.label)
                    assigned[rid].add(op.new_label)
            if op.scope.kind == "corpus":
                drop_if_unassigned(op.label)
        else:
            add_to_schema(op.new_label, op.category)
            for rid in scope_ids:
                assigned[rid].add(op.new_label)

    new_schema = LabelSchema(
        categories=tuple(categories),
        labels=tuple(
            (lab, cat) for cat in categories for lab in by_category[cat]
        ),
    )
    return AnnotationSet(
        schema=new_schema,
        assignments={
            rid: frozenset(labels) for rid, labels in assigned.items() if labels
        },
        version=new_version,
    )
