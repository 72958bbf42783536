"""Command-line entry points for the full pipeline.

Exit codes: 0 success, 1 usage error, 2 data error. All outputs are
deterministic under a fixed --seed.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from .corpus import (
    CorpusSnapshot,
    derive_schema,
    export,
    ingest,
    ingest_annotations,
)
from .errors import LabelAuditError, ValidationError
from .explain import ExplainConfig, explain
from .metrics import (
    confidence_report,
    cooccurrence,
    density_report,
    duplication_report,
)
from .project import ProjectionConfig, VectorizerFeatures, layout_records
from .relabel import RelabelHistory, RelabelOp
from .surrogate import TrainingConfig, evaluate, load_model, save_model, train
from .synth import GENERATORS, generate
from .vectorize import DEFAULT_K, VectorizerConfig, fit_vectorizer


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; this tool reserves 2 for data
    errors, so remap to 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_corpus_args(p: argparse.ArgumentParser, annotations_required: bool) -> None:
    p.add_argument("--corpus", required=True, help="corpus file (csv or jsonl)")
    p.add_argument(
        "--format", default="jsonl", choices=("csv", "jsonl"), help="corpus format"
    )
    p.add_argument(
        "--fields",
        default="text",
        help="comma-separated text field names (default: text)",
    )
    p.add_argument("--id-field", default=None, help="record id field name")
    p.add_argument(
        "--annotations",
        required=annotations_required,
        default=None,
        help="annotation file; json mapping or exported jsonl",
    )
    p.add_argument(
        "--annotations-format",
        default=None,
        choices=("json", "jsonl"),
        help="default: by extension (.jsonl -> jsonl, else json)",
    )


def _add_vectorizer_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, default=DEFAULT_K, help="SVD dimensionality")
    p.add_argument("--bigrams", action="store_true", help="add bigram terms")
    p.add_argument(
        "--sublinear-tf", action="store_true", help="use 1 + ln(tf) weighting"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="labelaudit", description=__doc__)
    parser.add_argument("--seed", type=int, default=0, help="global random seed")
    parser.add_argument(
        "--workdir",
        default=".labelaudit",
        help="directory where each run's resolved config is recorded",
    )
    # The globals are also accepted after the subcommand; SUPPRESS keeps a
    # pre-subcommand value from being clobbered by the subparser default.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--workdir", default=argparse.SUPPRESS)
    sub = parser.add_subparsers(
        dest="subcommand", required=True, parser_class=_Parser
    )

    p = sub.add_parser(
        "ingest", help="load, validate, and normalize a corpus", parents=[common]
    )
    _add_corpus_args(p, annotations_required=False)
    p.add_argument("--out", required=True, help="normalized snapshot (jsonl)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("train", help="fit the surrogate model", parents=[common])
    _add_corpus_args(p, annotations_required=True)
    _add_vectorizer_args(p)
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--epochs", type=int, default=20)
    p.add_argument("--c-reg", type=float, default=1.0, dest="c_reg")
    p.add_argument("--validation-fraction", type=float, default=0.2)
    p.add_argument("--calibration-fraction", type=float, default=0.2)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser(
        "evaluate", help="score a saved model on a corpus", parents=[common]
    )
    _add_corpus_args(p, annotations_required=True)
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", help="quality reports to stdout", parents=[common])
    _add_corpus_args(p, annotations_required=True)
    p.add_argument(
        "--metric",
        required=True,
        choices=("duplication", "density", "confidence", "cooccurrence"),
    )
    p.add_argument("--category", default=None)
    p.add_argument("--model", default=None, help="required for confidence")
    p.add_argument("--report-format", default="json", choices=("json", "csv"))
    p.set_defaults(func=cmd_report)

    p = sub.add_parser(
        "project", help="2D projection of the corpus", parents=[common]
    )
    _add_corpus_args(p, annotations_required=True)
    p.add_argument("--model", default=None)
    p.add_argument("--layout", default="word-vector", choices=("word-vector", "confidence-vector"))
    p.add_argument("--color", default="info-density", choices=("confidence", "info-density"))
    p.add_argument("--perplexity", type=float, default=30.0)
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--max-points", type=int, default=5000)
    p.add_argument("--out", required=True, help="projection JSON file")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("explain", help="explain one prediction", parents=[common])
    _add_corpus_args(p, annotations_required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--record-id", required=True)
    p.add_argument("--category", required=True)
    p.add_argument("--label", default=None, help="explicit target label")
    p.add_argument("--n-samples", type=int, default=1000)
    p.add_argument("--kernel-width", type=float, default=25.0)
    p.add_argument("--n-features", type=int, default=10)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser(
        "relabel", help="replay relabel ops from a file", parents=[common]
    )
    _add_corpus_args(p, annotations_required=True)
    p.add_argument("--ops", required=True, help="JSON array of relabel ops")
    p.add_argument("--apply", action="store_true")
    p.add_argument("--out", default=None, help="exported snapshot (jsonl)")
    p.add_argument(
        "--audit-log", default=None, help="default: <out>.audit.jsonl"
    )
    p.set_defaults(func=cmd_relabel)

    p = sub.add_parser(
        "export", help="export the snapshot as jsonl", parents=[common]
    )
    _add_corpus_args(p, annotations_required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="run the HTTP service", parents=[common])
    _add_corpus_args(p, annotations_required=False)
    p.add_argument("--model", default=None)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8787)
    p.add_argument("--audit-log", default=None)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser(
        "synth", help="generate a synthetic benchmark corpus", parents=[common]
    )
    p.add_argument("--kind", required=True, choices=sorted(GENERATORS))
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--out", required=True, help="corpus jsonl (fields + labels)")
    p.add_argument(
        "--annotations-out", default=None, help="also write {id: {category: [labels]}}"
    )
    p.set_defaults(func=cmd_synth)

    return parser


def _annotations_format(args: argparse.Namespace) -> str:
    if args.annotations_format:
        return args.annotations_format
    return "jsonl" if str(args.annotations).endswith(".jsonl") else "json"


def _load_snapshot(args: argparse.Namespace) -> CorpusSnapshot:
    fields = [f for f in args.fields.split(",") if f]
    snapshot = ingest(
        args.corpus, format=args.format, field_spec=fields, id_field=args.id_field
    )
    if getattr(args, "annotations", None):
        fmt = _annotations_format(args)
        schema = derive_schema(args.annotations, format=fmt)
        annotations = ingest_annotations(
            args.annotations, schema, snapshot, format=fmt
        )
        snapshot = snapshot.with_annotations(annotations)
    return snapshot


def _vectorizer_config(args: argparse.Namespace) -> VectorizerConfig:
    return VectorizerConfig(
        use_bigrams=getattr(args, "bigrams", False),
        sublinear_tf=getattr(args, "sublinear_tf", False),
        k=getattr(args, "k", DEFAULT_K),
        seed=args.seed,
    )


def _print_json(obj: object) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=False)
    sys.stdout.write("\n")


def _record_run(args: argparse.Namespace) -> None:
    """Persist the resolved configuration of this run for reproducibility."""
    if not args.workdir:
        return
    workdir = Path(args.workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    resolved = {
        k: v for k, v in vars(args).items() if k != "func" and not callable(v)
    }
    resolved["recorded_at"] = datetime.now(timezone.utc).isoformat()
    existing = len(list(workdir.glob(f"run-{args.subcommand}-*.json")))
    out = workdir / f"run-{args.subcommand}-{existing + 1:04d}.json"
    out.write_text(json.dumps(resolved, indent=2) + "\n", encoding="utf-8")


def cmd_ingest(args: argparse.Namespace) -> int:
    snapshot = _load_snapshot(args)
    export(snapshot, args.out)
    _print_json(
        {
            "records": len(snapshot.records),
            "categories": len(snapshot.schema.categories),
            "labels": len(snapshot.schema.all_labels()),
            "out": args.out,
        }
    )
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    snapshot = _load_snapshot(args)
    tcfg = TrainingConfig(
        C=args.c_reg,
        epochs=args.epochs,
        seed=args.seed,
        validation_fraction=args.validation_fraction,
        calibration_fraction=args.calibration_fraction,
    )
    model, metrics = train(snapshot, _vectorizer_config(args), tcfg)
    save_model(model, args.out)
    _print_json({"metrics": metrics.to_json(), "model": args.out})
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    snapshot = _load_snapshot(args)
    model = load_model(args.model)
    ids = [r.id for r in snapshot.records]
    metrics = evaluate(model, snapshot, ids)
    _print_json({"metrics": metrics.to_json(), "records": len(ids)})
    return 0


def _csv_out(header: list[str], rows: list[list[object]]) -> None:
    writer = csv.writer(sys.stdout)
    writer.writerow(header)
    writer.writerows(rows)


def cmd_report(args: argparse.Namespace) -> int:
    snapshot = _load_snapshot(args)
    metric = args.metric
    as_csv = args.report_format == "csv"

    if metric == "cooccurrence":
        if not args.category:
            raise ValidationError("cooccurrence report requires --category")
        stats = cooccurrence(snapshot, args.category)
        if as_csv:
            header = ["label", *stats.labels]
            rows = [
                [label, *stats.counts[i].tolist()]
                for i, label in enumerate(stats.labels)
            ]
            _csv_out(header, rows)
        else:
            _print_json(stats.to_json())
        return 0

    if metric == "duplication":
        report = duplication_report(snapshot)
        if args.category is not None:
            if args.category not in report.scores:
                raise ValidationError(f"unknown category {args.category!r}")
            payload = {
                "category": args.category,
                "score": report.scores[args.category],
                "pairs": [p.to_json() for p in report.pairs[args.category]],
            }
        else:
            payload = report.to_json()
        if as_csv:
            rows = [
                [c, p.label, p.partner, p.co_count, p.num, p.ratio]
                for c, pairs in report.pairs.items()
                if args.category in (None, c)
                for p in pairs
            ]
            _csv_out(["category", "label", "partner", "co_count", "num", "ratio"], rows)
        else:
            _print_json(payload)
        return 0

    if metric == "density":
        vcfg = VectorizerConfig()
        report = density_report(snapshot, vcfg)
        if as_csv:
            rows = [
                [r.record_id, r.density, r.label_count, r.word_count]
                for r in report.ranked()
            ]
            _csv_out(["record_id", "density", "label_count", "word_count"], rows)
        else:
            payload = report.to_json()
            payload["ranked_ids"] = [r.record_id for r in report.ranked()]
            _print_json(payload)
        return 0

    # confidence
    if not args.model:
        raise ValidationError("confidence report requires --model")
    model = load_model(args.model)
    report = confidence_report(model, snapshot)
    if as_csv:
        header = ["record_id", "score", *report.label_order]
        rows = [
            [r.record_id, r.score, *[float(v) for v in r.vector]]
            for r in report.rows
        ]
        _csv_out(header, rows)
    else:
        _print_json(report.to_json())
    return 0


def cmd_project(args: argparse.Namespace) -> int:
    snapshot = _load_snapshot(args)
    config = ProjectionConfig(
        layout=args.layout,
        color=args.color,
        perplexity=args.perplexity,
        iterations=args.iterations,
        seed=args.seed,
        max_points=args.max_points,
    )
    if args.model:
        provider = load_model(args.model)
    else:
        if config.layout == "confidence-vector" or config.color == "confidence":
            raise ValidationError(
                "confidence layout/color requires --model; "
                "use word-vector layout with info-density color otherwise"
            )
        texts = [r.text() for r in snapshot.records]
        tfidf, svd, _ = fit_vectorizer(texts, _vectorizer_config(args))
        provider = VectorizerFeatures(tfidf, svd)
    projection = layout_records(provider, snapshot, config)
    Path(args.out).write_text(
        json.dumps(projection.to_json(), indent=2) + "\n", encoding="utf-8"
    )
    _print_json(
        {
            "points": len(projection.record_ids),
            "subsampled": projection.subsampled,
            "out": args.out,
        }
    )
    return 0


def cmd_explain(args: argparse.Namespace) -> int:
    snapshot = _load_snapshot(args)
    model = load_model(args.model)
    record = snapshot.record_by_id(args.record_id)
    config = ExplainConfig(
        n_samples=args.n_samples,
        kernel_width=args.kernel_width,
        n_features=args.n_features,
        seed=args.seed,
        target_label=args.label,
    )
    explanation = explain(model, record, args.category, config)
    _print_json(explanation.to_json())
    return 0


def cmd_relabel(args: argparse.Namespace) -> int:
    snapshot = _load_snapshot(args)
    try:
        ops_raw = json.loads(Path(args.ops).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{args.ops}: {exc}") from exc
    if not isinstance(ops_raw, list):
        raise ValidationError(f"{args.ops}: expected a JSON array of ops")

    audit = args.audit_log
    if audit is None and args.out:
        audit = f"{args.out}.audit.jsonl"
    history = RelabelHistory(snapshot, audit_path=audit)
    for obj in ops_raw:
        history.propose(RelabelOp.from_json(obj))
    result = {"proposed": len(ops_raw), "applied": False}
    if args.apply:
        snapshot = history.apply(snapshot)
        result["applied"] = True
        result["snapshot_version"] = snapshot.version
        if args.out:
            export(snapshot, args.out)
            result["out"] = args.out
    result["history"] = history.history_list()
    _print_json(result)
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    snapshot = _load_snapshot(args)
    export(snapshot, args.out)
    _print_json({"records": len(snapshot.records), "out": args.out})
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .server import serve
    from .surrogate import load_model as load

    snapshot = _load_snapshot(args)
    model = load(args.model) if args.model else None
    serve(
        snapshot,
        host=args.host,
        port=args.port,
        model=model,
        audit_path=args.audit_log,
    )
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    snapshot = generate(args.kind, n=args.n, seed=args.seed)
    export(snapshot, args.out)
    if args.annotations_out:
        ann = {
            r.id: snapshot.annotations.labels_by_category(r.id)
            for r in snapshot.records
        }
        Path(args.annotations_out).write_text(
            json.dumps(ann, indent=2) + "\n", encoding="utf-8"
        )
    _print_json(
        {
            "kind": args.kind,
            "records": len(snapshot.records),
            "out": args.out,
        }
    )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _record_run(args)
        return args.func(args)
    except BrokenPipeError:
        # Downstream closed the pipe (e.g. | head); not a data error.
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except LabelAuditError as exc:
        print(f"labelaudit: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"labelaudit: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
