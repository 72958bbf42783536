"""Annotation-quality auditing for large multi-label technical-text corpora.

Train a surrogate classifier over existing annotations, surface duplicate /
wrong / missing labels through co-occurrence, confidence, and density
metrics, inspect individual predictions with perturbation-based
explanations and a 2D projection, then fix the corpus with replayable
relabeling operations at corpus, sub-group, or record scale.
"""
from .corpus import (
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
from .errors import (
    LabelAuditError,
    ModelFormatError,
    ModelNotTrainedError,
    ModelVersionError,
    NoTokensError,
    ParseError,
    SchemaConflictError,
    StaleVersionError,
    UnknownCategoryError,
    UnknownLabelError,
    UnknownRecordError,
    ValidationError,
)
from .explain import ExplainConfig, Explanation, explain, perturb
from .metrics import (
    ConfidenceReport,
    CooccurrenceStats,
    DensityReport,
    DuplicationReport,
    confidence_report,
    cooccurrence,
    density_report,
    duplication_possibility,
    duplication_report,
    info_density,
)
from .project import (
    Projection,
    ProjectionConfig,
    layout_records,
    project,
    select_polygon,
)
from .relabel import RelabelHistory, RelabelOp, Scope
from .surrogate import (
    EvalMetrics,
    SurrogateModel,
    TrainingConfig,
    category_confidence,
    confidence_score,
    evaluate,
    load_model,
    one_hot_encode,
    save_model,
    train,
)
from .vectorize import (
    SvdModel,
    TfidfModel,
    VectorizerConfig,
    fit_tfidf,
    fit_truncated_svd,
    fit_vectorizer,
    load_vectorizer,
    save_vectorizer,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotationSet",
    "ConfidenceReport",
    "CooccurrenceStats",
    "CorpusSnapshot",
    "DensityReport",
    "DuplicationReport",
    "EvalMetrics",
    "ExplainConfig",
    "Explanation",
    "LabelAuditError",
    "LabelSchema",
    "ModelFormatError",
    "ModelNotTrainedError",
    "ModelVersionError",
    "NoTokensError",
    "ParseError",
    "Projection",
    "ProjectionConfig",
    "Record",
    "RelabelHistory",
    "RelabelOp",
    "SchemaConflictError",
    "Scope",
    "StaleVersionError",
    "SurrogateModel",
    "SvdModel",
    "TfidfModel",
    "TrainingConfig",
    "UnknownCategoryError",
    "UnknownLabelError",
    "UnknownRecordError",
    "ValidationError",
    "VectorizerConfig",
    "category_confidence",
    "confidence_report",
    "confidence_score",
    "cooccurrence",
    "density_report",
    "derive_schema",
    "duplication_possibility",
    "duplication_report",
    "evaluate",
    "explain",
    "export",
    "fit_tfidf",
    "fit_truncated_svd",
    "fit_vectorizer",
    "info_density",
    "ingest",
    "ingest_annotations",
    "layout_records",
    "load_model",
    "load_vectorizer",
    "one_hot_encode",
    "perturb",
    "project",
    "query_by_label",
    "save_model",
    "save_vectorizer",
    "select_polygon",
    "tokenize",
    "train",
]
