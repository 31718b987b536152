"""Exception hierarchy for croissant-forge.

Every error raised by the library derives from CroissantError so callers can
catch one base type. CLI exit-code mapping lives in cli.py.
"""

from __future__ import annotations


class CroissantError(Exception):
    """Base class for all croissant-forge errors."""


# --- document / graph layer ---------------------------------------------


class MalformedJson(CroissantError):
    """Input bytes are not parseable JSON."""


class NoDatasetNode(CroissantError):
    """The document contains no node typed sc:Dataset."""


class MultipleDatasetNodes(CroissantError):
    """The document contains more than one node typed sc:Dataset."""


# --- model layer ----------------------------------------------------------


class ShapeIssue:
    """One structurally impossible node found while building the model."""

    def __init__(self, path: str, reason: str) -> None:
        self.path = path
        self.reason = reason

    def __repr__(self) -> str:
        return f"ShapeIssue({self.path!r}, {self.reason!r})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ShapeIssue)
            and (self.path, self.reason) == (other.path, other.reason)
        )


class ShapeError(CroissantError):
    """Aggregate of every shape problem in one document, reported at once."""

    def __init__(self, issues: list[ShapeIssue]) -> None:
        self.issues = issues
        summary = "; ".join(f"{i.path}: {i.reason}" for i in issues)
        super().__init__(f"{len(issues)} shape error(s): {summary}")


# --- resources layer ------------------------------------------------------


class FetchFailed(CroissantError):
    def __init__(self, url: str, cause: str) -> None:
        self.url = url
        self.cause = cause
        super().__init__(f"failed to fetch {url}: {cause}")


class ChecksumMismatch(CroissantError):
    def __init__(self, url: str, expected: str, actual: str) -> None:
        self.url = url
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"sha256 mismatch for {url}: expected {expected}, got {actual}"
        )


class ArchiveMemberMissing(CroissantError):
    def __init__(self, member: str, archive: str) -> None:
        self.member = member
        self.archive = archive
        super().__init__(f"member {member!r} not found in archive {archive}")


class GlobInvalid(CroissantError):
    def __init__(self, pattern: str, reason: str = "") -> None:
        self.pattern = pattern
        msg = f"invalid glob pattern {pattern!r}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


class NotAnArchive(CroissantError):
    """The containedIn parent of a FileSet is not a tar/zip/directory."""


class UnsupportedArchiveFormat(CroissantError):
    def __init__(self, mime: str) -> None:
        self.mime = mime
        super().__init__(f"unsupported archive format: {mime}")


class CorruptArchive(CroissantError):
    pass


# --- records layer --------------------------------------------------------


class PlanError(CroissantError):
    """A RecordSet definition cannot be turned into an executable plan."""


class RecordSetUnknown(PlanError):
    def __init__(self, record_set_id: str, known: list[str]) -> None:
        self.record_set_id = record_set_id
        super().__init__(
            f"no record set {record_set_id!r}; document defines {known or 'none'}"
        )


class JoinColumnMissing(PlanError):
    def __init__(self, resource_id: str, column: str) -> None:
        self.resource_id = resource_id
        self.column = column
        super().__init__(f"column {column!r} not present in resource {resource_id!r}")


class UnsupportedEncodingFormat(PlanError):
    def __init__(self, mime: str, detail: str = "") -> None:
        self.mime = mime
        msg = f"cannot decode sources with encodingFormat {mime!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ColumnMissing(CroissantError):
    def __init__(self, column: str) -> None:
        self.column = column
        super().__init__(f"row has no column {column!r}")


class EncodingMismatch(CroissantError):
    """Extract kind is incompatible with the source's encoding format."""


class RegexInvalid(PlanError):
    def __init__(self, pattern: str, reason: str) -> None:
        self.pattern = pattern
        super().__init__(f"invalid regex {pattern!r}: {reason}")


class JsonPathInvalid(PlanError):
    def __init__(self, expr: str, reason: str) -> None:
        self.expr = expr
        super().__init__(f"invalid JSON path {expr!r}: {reason}")


class TypeMismatch(CroissantError):
    """A text transform was applied to a non-text value."""


class CoercionFailed(CroissantError):
    def __init__(self, value: object, target: str) -> None:
        self.value = value
        self.target = target
        super().__init__(f"cannot coerce {value!r} to {target}")


class SliceSyntax(CroissantError):
    def __init__(self, expr: str, reason: str = "") -> None:
        self.expr = expr
        msg = f"bad slice expression {expr!r}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)
