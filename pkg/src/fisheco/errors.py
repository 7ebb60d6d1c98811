"""Exception hierarchy shared by all fisheco modules."""

from __future__ import annotations


class FishecoError(Exception):
    """Base class; ``kind`` is a stable machine-readable tag."""

    kind = "error"

    def __init__(self, message: str, kind: str | None = None) -> None:
        super().__init__(message)
        if kind is not None:
            self.kind = kind

    @property
    def message(self) -> str:
        return str(self.args[0]) if self.args else ""


class SchemaError(FishecoError):
    kind = "schema-error"


class MergeConflictError(SchemaError):
    kind = "merge-conflict"


class NotFoundError(FishecoError):
    kind = "not-found"


class GraphError(FishecoError):
    """Rejected mutation or malformed graph document.

    ``kind`` is one of duplicate-id, unknown-type, unknown-attribute,
    attribute-kind-mismatch, unknown-entity, unknown-relation-triple,
    unknown-verb, guard-violation, duplicate-relation, tense-date,
    malformed-document, schema-mismatch.
    """

    kind = "graph-error"


class PatternError(FishecoError):
    kind = "pattern-error"


class SimulationError(FishecoError):
    kind = "simulation-error"
