"""Exception taxonomy.

Every exception carries a stable ``code`` string so callers (and the CLI,
which maps all of these to exit status 1) can branch on the failure class
without parsing messages.
"""

from __future__ import annotations


class AuditError(Exception):
    """Base class for all toolkit errors."""

    code = "AUDIT_ERROR"


class RepresentationError(AuditError):
    """Outcome representations are mixed or incomparable."""

    code = "REPRESENTATION_ERROR"


class DataError(AuditError):
    """A value-level problem in the input data."""

    code = "DATA_ERROR"


class SchemaError(AuditError):
    """A structural problem: bad header, duplicate id, unknown column."""

    code = "SCHEMA_ERROR"


class EmptyDatasetError(AuditError):
    """An operation received no records or no aligned pairs."""

    code = "EMPTY_DATASET"


class EmptyGroupError(AuditError):
    """An expected protected group has zero records."""

    code = "EMPTY_GROUP"


class MatrixIncompleteError(AuditError):
    """A supplied pairwise-distance table is missing a needed entry."""

    code = "MATRIX_INCOMPLETE"


class ConfigError(AuditError):
    """Invalid or internally inconsistent configuration."""

    code = "CONFIG_ERROR"


class GenerationError(AuditError):
    """A synthetic scenario target is unattainable."""

    code = "GENERATION_ERROR"


class InternalInconsistencyError(AuditError):
    """Computed quantities contradict each other; indicates a bug upstream."""

    code = "INTERNAL_INCONSISTENCY"
