"""Croissant 1.0 conformance checks over a DatasetModel.

All findings go into the report; the validation itself is total and pure
(never fetches content — content-level checks happen at fetch time).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field

from . import globmatch, jsonpath
from .context import CONFORMS_TO_1_0
from .errors import GlobInvalid, JsonPathInvalid
from .model import (
    DatasetModel,
    FieldDef,
    FileObject,
    FileSet,
    JsonPathExtract,
    RecordSetDef,
    RegexTransform,
    walk_fields,
)

ERROR_CODES = {
    "REQUIRED_MISSING",
    "REF_UNRESOLVED",
    "KEY_NOT_A_FIELD",
    "SHA256_MALFORMED",
    "GLOB_INVALID",
    "REGEX_INVALID",
    "JSONPATH_INVALID",
}
WARNING_CODES = {
    "RECOMMENDED_MISSING",
    "JOIN_COLUMN_UNKNOWN_FORMAT",
    "CONFORMS_TO_UNSUPPORTED",
    "UNKNOWN_PROPERTY",
}

# Rule table: dataset-level attribute -> (model accessor, requirement level).
DATASET_REQUIRED = ("name", "description", "conformsTo")
DATASET_RECOMMENDED = ("license", "url", "citeAs", "creator", "datePublished")

_METADATA_ATTRS = {
    "name": "name",
    "description": "description",
    "conformsTo": "conforms_to",
    "license": "license",
    "url": "url",
    "citeAs": "cite_as",
    "creator": "creator",
    "datePublished": "date_published",
}

# Formats whose columns a join can address.
TABULAR_FORMATS = {"text/csv", "application/json"}

_SHA256_RE = re.compile(r"^[0-9a-f]{64}$")


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    severity: str  # error | warning | info
    entity: str
    prop: str
    message: str

    @property
    def path(self) -> str:
        return f"{self.entity}.{self.prop}"

    def to_json(self) -> dict:
        return {
            "code": self.code,
            "severity": self.severity,
            "path": self.path,
            "message": self.message,
        }


@dataclass
class ValidationReport:
    issues: list[ValidationIssue] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.counts["error"] == 0

    @property
    def counts(self) -> dict[str, int]:
        counts = {"error": 0, "warning": 0, "info": 0}
        for issue in self.issues:
            counts[issue.severity] += 1
        return counts

    def errors(self) -> list[ValidationIssue]:
        return [i for i in self.issues if i.severity == "error"]


class _Checker:
    def __init__(self, model: DatasetModel) -> None:
        self.model = model
        self.issues: list[ValidationIssue] = []
        self.resource_ids = {r.id for r in model.resources}

    def add(self, code: str, entity: str, prop: str, message: str) -> None:
        severity = "error" if code in ERROR_CODES else "warning"
        self.issues.append(ValidationIssue(code, severity, entity, prop, message))

    def run(self) -> ValidationReport:
        self.dataset_rules()
        for res in self.model.resources:
            if isinstance(res, FileObject):
                self.file_object_rules(res)
            else:
                self.file_set_rules(res)
        for rs in self.model.record_sets:
            self.record_set_rules(rs)
        self.rai_rules()
        self.issues.sort(key=lambda i: (i.entity, i.prop, i.code))
        return ValidationReport(issues=self.issues)

    def dataset_rules(self) -> None:
        md = self.model.metadata
        for attr in DATASET_REQUIRED:
            if not getattr(md, _METADATA_ATTRS[attr]):
                self.add(
                    "REQUIRED_MISSING", "dataset", attr,
                    f"required dataset property {attr!r} is missing",
                )
        for attr in DATASET_RECOMMENDED:
            if not getattr(md, _METADATA_ATTRS[attr]):
                self.add(
                    "RECOMMENDED_MISSING", "dataset", attr,
                    f"recommended dataset property {attr!r} is missing",
                )
        if md.conforms_to and md.conforms_to != CONFORMS_TO_1_0:
            self.add(
                "CONFORMS_TO_UNSUPPORTED", "dataset", "conformsTo",
                f"conformsTo {md.conforms_to!r} is not the supported 1.0 IRI",
            )

    def check_ref(self, entity: str, prop: str, target: str) -> None:
        if target not in self.resource_ids:
            self.add(
                "REF_UNRESOLVED", entity, prop,
                f"{prop} names unknown resource {target!r}",
            )

    def file_object_rules(self, res: FileObject) -> None:
        if not res.content_url:
            self.add(
                "REQUIRED_MISSING", res.id, "contentUrl",
                "FileObject needs a contentUrl",
            )
        if not res.encoding_format:
            self.add(
                "REQUIRED_MISSING", res.id, "encodingFormat",
                "FileObject needs an encodingFormat",
            )
        if res.sha256 is not None and not _SHA256_RE.match(res.sha256):
            self.add(
                "SHA256_MALFORMED", res.id, "sha256",
                "sha256 must be 64 lowercase hex characters",
            )
        if res.contained_in is not None:
            self.check_ref(res.id, "containedIn", res.contained_in)

    def file_set_rules(self, res: FileSet) -> None:
        if res.contained_in is None:
            self.add(
                "REQUIRED_MISSING", res.id, "containedIn",
                "FileSet needs a containedIn parent",
            )
        else:
            self.check_ref(res.id, "containedIn", res.contained_in)
        if not res.includes:
            self.add(
                "REQUIRED_MISSING", res.id, "includes",
                "FileSet needs at least one includes pattern",
            )
        if not res.encoding_format:
            self.add(
                "REQUIRED_MISSING", res.id, "encodingFormat",
                "FileSet needs an encodingFormat",
            )
        for prop, patterns in (("includes", res.includes), ("excludes", res.excludes)):
            for pattern in patterns:
                try:
                    globmatch.translate(pattern)
                except GlobInvalid as exc:
                    self.add("GLOB_INVALID", res.id, prop, str(exc))

    def record_set_rules(self, rs: RecordSetDef) -> None:
        field_ids = set(rs.field_ids())
        keys = [] if rs.key is None else (
            [rs.key] if isinstance(rs.key, str) else rs.key
        )
        for key in keys:
            if key not in field_ids:
                self.add(
                    "KEY_NOT_A_FIELD", rs.id, "key",
                    f"key {key!r} does not name a field of this record set",
                )
        for f, _parent in walk_fields(rs):
            self.field_rules(f)

    def field_rules(self, f: FieldDef) -> None:
        if f.source is not None:
            self.check_ref(f.id, "source", f.source.target_id)
            target = self.model.resource(f.source.target_id)
            if target is not None:
                want = FileObject if f.source.target_kind == "fileObject" else FileSet
                if not isinstance(target, want):
                    self.add(
                        "REF_UNRESOLVED", f.id, "source",
                        f"source names {f.source.target_id!r} as a "
                        f"{f.source.target_kind} but it is not one",
                    )
            if isinstance(f.source.extract, JsonPathExtract):
                try:
                    jsonpath.parse(f.source.extract.expr)
                except JsonPathInvalid as exc:
                    self.add("JSONPATH_INVALID", f.id, "source.extract", str(exc))
            for t in f.source.transforms:
                if isinstance(t, RegexTransform):
                    try:
                        compiled = re.compile(t.pattern)
                    except re.error as exc:
                        self.add(
                            "REGEX_INVALID", f.id, "source.transform",
                            f"regex does not compile: {exc}",
                        )
                    else:
                        if compiled.groups < 1:
                            self.add(
                                "REGEX_INVALID", f.id, "source.transform",
                                "regex transform needs at least one capture group",
                            )
        if f.references is not None:
            if f.references.target_id not in self.resource_ids:
                self.add(
                    "REF_UNRESOLVED", f.id, "references",
                    f"references names unknown resource {f.references.target_id!r}",
                )
            else:
                target = self.model.resource(f.references.target_id)
                fmt = getattr(target, "encoding_format", "")
                if fmt not in TABULAR_FORMATS:
                    self.add(
                        "JOIN_COLUMN_UNKNOWN_FORMAT", f.id, "references",
                        f"cannot address column {f.references.column!r} in a "
                        f"resource of format {fmt!r}",
                    )

    def rai_rules(self) -> None:
        for key in self.model.rai.extras:
            self.add(
                "UNKNOWN_PROPERTY", "dataset", key,
                f"{key!r} is not a recognized RAI attribute",
            )


def validate(model: DatasetModel) -> ValidationReport:
    """Run every conformance rule; deterministic, ordered issue list."""
    return _Checker(model).run()


def report_to_json(report: ValidationReport) -> bytes:
    payload = {
        "passed": report.passed,
        "counts": report.counts,
        "issues": [i.to_json() for i in report.issues],
    }
    return json.dumps(payload, separators=(",", ":"), ensure_ascii=False).encode("utf-8")
