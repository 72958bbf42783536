"""JSON-over-HTTP service wrapping the audit pipeline for the companion UI.

One session owns the snapshot, the optional trained model, the relabel
history, and a projection cache. Reads are concurrent; mutations (propose /
revert / apply, model installation) serialize through one lock. Training and
projection run as background jobs polled via /jobs/{id}. Every JSON response
carries the snapshot version it was computed from.
"""
from __future__ import annotations

import hashlib
import json
import logging
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, StreamingResponse
from pydantic import BaseModel

from .corpus import CorpusSnapshot, export_lines, query_by_label
from .errors import (
    LabelAuditError,
    ModelNotTrainedError,
    StaleVersionError,
    UnknownCacheKeyError,
)
from .explain import ExplainConfig, explain
from .metrics import (
    confidence_report,
    cooccurrence,
    density_report,
    duplication_report,
)
from .project import (
    Projection,
    ProjectionConfig,
    VectorizerFeatures,
    layout_records,
    select_polygon,
)
from .relabel import RelabelHistory, RelabelOp
from .surrogate import SurrogateModel, TrainingConfig, train
from .vectorize import VectorizerConfig, fit_vectorizer

log = logging.getLogger(__name__)

JOB_WORKERS = 2


class SessionState:
    def __init__(
        self,
        snapshot: CorpusSnapshot,
        model: SurrogateModel | None = None,
        audit_path: str | None = None,
    ) -> None:
        self.snapshot = snapshot
        self.model = model
        self.model_version: int | None = snapshot.version if model else None
        self.metrics = None
        self.history = RelabelHistory(snapshot, audit_path)
        self.projections: dict[str, Projection] = {}
        self.jobs: dict[str, dict[str, Any]] = {}
        self.lock = threading.Lock()
        self.executor = ThreadPoolExecutor(max_workers=JOB_WORKERS)
        self._fallback: tuple[int, VectorizerFeatures] | None = None

    def version(self) -> int:
        return self.snapshot.version

    def require_model(self) -> SurrogateModel:
        if self.model is None:
            raise ModelNotTrainedError(
                "no trained model in this session; POST /train first"
            )
        return self.model

    def feature_provider(self):
        """The trained model, or a lazily fitted bare vectorizer."""
        if self.model is not None:
            return self.model
        snapshot = self.snapshot
        if self._fallback is not None and self._fallback[0] == snapshot.version:
            return self._fallback[1]
        texts = [r.text() for r in snapshot.records]
        tfidf, svd, _ = fit_vectorizer(texts, VectorizerConfig())
        shim = VectorizerFeatures(tfidf, svd)
        self._fallback = (snapshot.version, shim)
        return shim

    def submit_job(self, fn: Callable[[], dict]) -> str:
        job_id = uuid.uuid4().hex[:12]
        self.jobs[job_id] = {"status": "queued", "result": None, "error": None}

        def run() -> None:
            self.jobs[job_id]["status"] = "running"
            try:
                result = fn()
            except Exception as exc:
                log.exception("job %s failed", job_id)
                self.jobs[job_id]["status"] = "error"
                self.jobs[job_id]["error"] = {
                    "code": getattr(exc, "code", "error"),
                    "detail": str(exc),
                }
            else:
                self.jobs[job_id]["status"] = "done"
                self.jobs[job_id]["result"] = result

        self.executor.submit(run)
        return job_id


class TrainRequest(BaseModel):
    vectorizer_config: dict[str, Any] = {}
    training_config: dict[str, Any] = {}


class ProjectionRequest(BaseModel):
    config: dict[str, Any] = {}


class SelectRequest(BaseModel):
    cache_key: str
    polygon: list[tuple[float, float]]


class ExplainRequest(BaseModel):
    record_id: str
    category: str
    config: dict[str, Any] = {}


class ProposeRequest(BaseModel):
    op: dict[str, Any]


class RevertRequest(BaseModel):
    op_id: int


class ApplyRequest(BaseModel):
    base_version: int


def _explain_config(obj: dict[str, Any]) -> ExplainConfig:
    base = ExplainConfig()
    return ExplainConfig(
        n_samples=obj.get("n_samples", base.n_samples),
        kernel_width=obj.get("kernel_width", base.kernel_width),
        n_features=obj.get("n_features", base.n_features),
        seed=obj.get("seed", base.seed),
        target_label=obj.get("target_label"),
    )


def _projection_cache_key(
    version: int, model_id: str, config: ProjectionConfig
) -> str:
    blob = json.dumps(config.to_json(), sort_keys=True)
    digest = hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]
    return f"{version}:{model_id}:{digest}"


def create_app(
    snapshot: CorpusSnapshot,
    model: SurrogateModel | None = None,
    audit_path: str | None = None,
) -> FastAPI:
    app = FastAPI(title="labelaudit", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    state = SessionState(snapshot, model=model, audit_path=audit_path)
    app.state.session = state

    @app.exception_handler(LabelAuditError)
    async def _handle_domain_error(request: Request, exc: LabelAuditError):
        status = (
            409
            if isinstance(exc, (StaleVersionError, ModelNotTrainedError))
            else 400
        )
        return JSONResponse(
            status_code=status,
            content={
                "code": exc.code,
                "detail": str(exc),
                "snapshot_version": state.version(),
            },
        )

    @app.get("/health")
    def health():
        return {"status": "ok", "snapshot_version": state.version()}

    @app.get("/snapshot")
    def snapshot_stats():
        snap = state.snapshot
        schema = snap.schema
        n_assigned = sum(
            len(snap.annotations.labels_for(r.id)) for r in snap.records
        )
        return {
            "snapshot_version": snap.version,
            "n_records": len(snap.records),
            "n_categories": len(schema.categories),
            "n_labels": len(schema.all_labels()),
            "n_assigned_labels": n_assigned,
            "schema": schema.to_dict(),
            "model_trained": state.model is not None,
            "trained_on_version": state.model_version,
        }

    @app.get("/labels/tree")
    def labels_tree():
        snap = state.snapshot
        report = duplication_report(snap)
        counts: dict[str, int] = {}
        for record in snap.records:
            for label in snap.annotations.labels_for(record.id):
                counts[label] = counts.get(label, 0) + 1
        categories = [
            {
                "name": category,
                "duplication_score": report.scores[category],
                "labels": [
                    {"name": label, "count": counts.get(label, 0)}
                    for label in snap.schema.labels_in(category)
                ],
            }
            for category in snap.schema.categories
        ]
        return {"categories": categories, "snapshot_version": snap.version}

    @app.get("/labels/cooccurrence")
    def labels_cooccurrence(category: str = Query(...)):
        stats = cooccurrence(state.snapshot, category)
        payload = stats.to_json()
        payload["snapshot_version"] = state.version()
        return payload

    @app.get("/records")
    def records(label: str | None = None, ids: str | None = None):
        snap = state.snapshot
        if label is not None:
            selected = query_by_label(snap, label)
            if ids is not None:
                wanted = set(ids.split(","))
                selected = [rid for rid in selected if rid in wanted]
        elif ids is not None:
            selected = [rid for rid in ids.split(",") if rid]
        else:
            selected = [r.id for r in snap.records]
        rows = []
        for rid in selected:
            record = snap.record_by_id(rid)
            rows.append(
                {
                    "id": rid,
                    "fields": record.field_map(),
                    "labels": snap.annotations.labels_by_category(rid),
                }
            )
        return {"rows": rows, "snapshot_version": snap.version}

    @app.post("/train")
    def train_endpoint(body: TrainRequest):
        snap = state.snapshot
        vcfg = VectorizerConfig.from_json(body.vectorizer_config)
        tcfg = TrainingConfig.from_json(body.training_config)

        def job() -> dict:
            trained, metrics = train(snap, vcfg, tcfg)
            with state.lock:
                state.model = trained
                state.model_version = snap.version
                state.metrics = metrics
            return {
                "metrics": metrics.to_json(),
                "trained_on_version": snap.version,
                "model_id": trained.fingerprint(),
            }

        job_id = state.submit_job(job)
        return {"job_id": job_id, "snapshot_version": snap.version}

    @app.get("/metrics")
    def metrics_endpoint():
        if state.metrics is None:
            raise ModelNotTrainedError("no metrics; POST /train first")
        return {
            "metrics": state.metrics.to_json(),
            "trained_on_version": state.model_version,
            "snapshot_version": state.version(),
        }

    @app.get("/confidence")
    def confidence_endpoint():
        model_ = state.require_model()
        report = confidence_report(model_, state.snapshot)
        payload = report.to_json()
        payload["snapshot_version"] = state.version()
        return payload

    @app.get("/density")
    def density_endpoint():
        vcfg = (
            state.model.tfidf.config if state.model is not None else VectorizerConfig()
        )
        report = density_report(state.snapshot, vcfg)
        payload = report.to_json()
        payload["ranked_ids"] = [row.record_id for row in report.ranked()]
        payload["snapshot_version"] = state.version()
        return payload

    @app.post("/projection")
    def projection_endpoint(body: ProjectionRequest):
        snap = state.snapshot
        config = ProjectionConfig.from_json(body.config)
        needs_model = (
            config.layout == "confidence-vector" or config.color == "confidence"
        )
        if needs_model:
            provider = state.require_model()
        else:
            provider = state.feature_provider()
        model_id = provider.fingerprint()
        cache_key = _projection_cache_key(snap.version, model_id, config)

        def job() -> dict:
            cached = state.projections.get(cache_key)
            if cached is None:
                vcfg = getattr(getattr(provider, "tfidf", None), "config", None)
                density = density_report(snap, vcfg or VectorizerConfig())
                cached = layout_records(provider, snap, config, density=density)
                state.projections[cache_key] = cached
            payload = cached.to_json()
            payload["cache_key"] = cache_key
            payload["snapshot_version"] = snap.version
            return payload

        job_id = state.submit_job(job)
        return {
            "job_id": job_id,
            "cache_key": cache_key,
            "snapshot_version": snap.version,
        }

    @app.post("/projection/select")
    def projection_select(body: SelectRequest):
        projection = state.projections.get(body.cache_key)
        if projection is None:
            raise UnknownCacheKeyError(
                f"no projection under cache key {body.cache_key!r}; re-request it"
            )
        ids = select_polygon(projection, body.polygon)
        return {
            "record_ids": sorted(ids),
            "cache_key": body.cache_key,
            "snapshot_version": state.version(),
        }

    @app.post("/explain")
    def explain_endpoint(body: ExplainRequest):
        model_ = state.require_model()
        record = state.snapshot.record_by_id(body.record_id)
        config = _explain_config(body.config)
        explanation = explain(model_, record, body.category, config)
        payload = explanation.to_json()
        payload["snapshot_version"] = state.version()
        return payload

    @app.post("/relabel/propose")
    def relabel_propose(body: ProposeRequest):
        op = RelabelOp.from_json(body.op)
        with state.lock:
            op_id = state.history.propose(op)
        return {"op_id": op_id, "snapshot_version": state.version()}

    @app.post("/relabel/revert")
    def relabel_revert(body: RevertRequest):
        with state.lock:
            state.history.revert(body.op_id)
        return {
            "op_id": body.op_id,
            "status": "reverted",
            "snapshot_version": state.version(),
        }

    @app.post("/relabel/apply")
    def relabel_apply(body: ApplyRequest):
        with state.lock:
            if body.base_version != state.snapshot.version:
                raise StaleVersionError(
                    f"apply requested against version {body.base_version}, "
                    f"current is {state.snapshot.version}"
                )
            applied_ids = [e.op_id for e in state.history.pending()]
            state.snapshot = state.history.apply(state.snapshot)
        return {
            "snapshot_version": state.version(),
            "applied_op_ids": applied_ids,
        }

    @app.get("/relabel/history")
    def relabel_history():
        return {
            "ops": state.history.history_list(),
            "snapshot_version": state.version(),
        }

    @app.get("/export")
    def export_endpoint():
        snap = state.snapshot
        return StreamingResponse(
            iter(export_lines(snap)),
            media_type="application/x-ndjson",
            headers={"X-Snapshot-Version": str(snap.version)},
        )

    @app.get("/jobs/{job_id}")
    def job_status(job_id: str):
        job = state.jobs.get(job_id)
        if job is None:
            return JSONResponse(
                status_code=404,
                content={
                    "code": "unknown_job",
                    "detail": f"no job {job_id!r}",
                    "snapshot_version": state.version(),
                },
            )
        return {
            "job_id": job_id,
            "status": job["status"],
            "result": job["result"],
            "error": job["error"],
            "snapshot_version": state.version(),
        }

    return app


def serve(
    snapshot: CorpusSnapshot,
    host: str = "127.0.0.1",
    port: int = 8787,
    model: SurrogateModel | None = None,
    audit_path: str | None = None,
) -> None:
    """Run the service until interrupted."""
    import uvicorn

    app = create_app(snapshot, model=model, audit_path=audit_path)
    schema = snapshot.schema
    log.info(
        "serving %d records, %d categories, %d labels at snapshot version %d",
        len(snapshot.records),
        len(schema.categories),
        len(schema.all_labels()),
        snapshot.version,
    )
    uvicorn.run(app, host=host, port=port, log_level="info")
