"""Exception hierarchy shared across the package."""


class LabelAuditError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


class ParseError(LabelAuditError):
    """Input file could not be parsed; message names row/column where known."""

    code = "parse_error"


class ValidationError(LabelAuditError):
    """A precondition or data invariant was violated."""

    code = "validation_error"


class UnknownLabelError(ValidationError):
    code = "unknown_label"


class UnknownCategoryError(ValidationError):
    code = "unknown_category"


class UnknownRecordError(ValidationError):
    code = "unknown_record"


class StaleVersionError(LabelAuditError):
    """Relabel apply was issued against an outdated snapshot version."""

    code = "stale_version"


class SchemaConflictError(ValidationError):
    """A relabel target names a category conflicting with the existing schema."""

    code = "schema_conflict"


class ModelFormatError(LabelAuditError):
    """Model file is corrupt or not a model file at all."""

    code = "corrupt_model"


class ModelVersionError(LabelAuditError):
    """Model file was written by an unsupported format version."""

    code = "model_version"


class NoTokensError(LabelAuditError):
    """Record has no in-vocabulary tokens; the requested result is undefined."""

    code = "no_tokens"


class ModelNotTrainedError(LabelAuditError):
    """A model-dependent operation was requested before training."""

    code = "model_not_trained"


class UnknownCacheKeyError(ValidationError):
    """Projection cache key does not match any computed projection."""

    code = "unknown_cache_key"
