"""Execute RecordSet definitions: extraction, transforms, joins, coercion,
split slicing.

Iteration is driven by the root source (the resource feeding the most
fields); fields sourced from other tabular resources are joined in via their
declared references, inner-join semantics with one-to-many fan-out.
"""

from __future__ import annotations

import base64
import csv
import datetime as _dt
import json
import math
import re
from dataclasses import dataclass, field as dc_field
from typing import Iterator

from . import jsonpath
from .errors import (
    CoercionFailed,
    ColumnMissing,
    EncodingMismatch,
    JoinColumnMissing,
    PlanError,
    RecordSetUnknown,
    RegexInvalid,
    SliceSyntax,
    TypeMismatch,
    UnsupportedEncodingFormat,
)
from .model import (
    BoundingBox,
    ColumnExtract,
    DataType,
    DatasetModel,
    Extract,
    FieldDef,
    FilePropertyExtract,
    FileSet,
    JsonPathExtract,
    Record,
    RecordSetDef,
    RegexTransform,
    ReplaceTransform,
    SeparatorTransform,
    Transform,
    Value,
)
from .resources import FileEntry, ResourceStore

# --- slices -------------------------------------------------------------------

_SLICE_RE = re.compile(
    r"^(?P<name>[^\[\]]+?)\s*(?:\[(?P<start>\d+%?)?:(?P<end>\d+%?)?\])?$"
)


@dataclass(frozen=True)
class SplitSlice:
    """A record-set (or split) name plus an optional contiguous range."""

    name: str
    start: int | None = None
    end: int | None = None
    percent: bool = False

    def bounds(self, n: int) -> tuple[int, int]:
        if self.percent:
            lo = 0 if self.start is None else math.floor(n * self.start / 100)
            hi = n if self.end is None else math.floor(n * self.end / 100)
        else:
            lo = 0 if self.start is None else min(self.start, n)
            hi = n if self.end is None else min(self.end, n)
        return lo, max(lo, hi)

    @property
    def is_full(self) -> bool:
        return self.start is None and self.end is None


def parse_slice(expr: str) -> SplitSlice:
    """Parse ``name``, ``name[10:20]`` or ``name[:80%]`` expressions."""
    m = _SLICE_RE.match(expr.strip())
    if not m or not m.group("name").strip():
        raise SliceSyntax(expr)
    name = m.group("name").strip()
    raw_start, raw_end = m.group("start"), m.group("end")
    if raw_start is None and raw_end is None:
        return SplitSlice(name=name)

    forms = {raw.endswith("%") for raw in (raw_start, raw_end) if raw is not None}
    if len(forms) > 1:
        raise SliceSyntax(expr, "cannot mix percent and absolute bounds")
    percent = forms == {True}
    start = int(raw_start.rstrip("%")) if raw_start is not None else None
    end = int(raw_end.rstrip("%")) if raw_end is not None else None
    if percent:
        for bound in (start, end):
            if bound is not None and bound > 100:
                raise SliceSyntax(expr, "percent bound exceeds 100")
    if start is not None and end is not None and start > end:
        raise SliceSyntax(expr, "start exceeds end")
    return SplitSlice(name=name, start=start, end=end, percent=percent)


# --- standalone operations ------------------------------------------------------


def extract(entry: object, ex: Extract) -> Value:
    """Pull one raw value out of a FileEntry, a table row, or a JSON document."""
    if isinstance(ex, FilePropertyExtract):
        if not isinstance(entry, FileEntry):
            raise EncodingMismatch(
                f"fileProperty extraction needs a file, got {type(entry).__name__}"
            )
        if ex.prop == "content":
            return entry.read_bytes()
        if ex.prop == "filename":
            return entry.filename
        if ex.prop == "fullpath":
            return entry.fullpath
        # lines
        text = entry.read_bytes().decode("utf-8")
        return text.splitlines()
    if isinstance(ex, ColumnExtract):
        if not isinstance(entry, dict):
            raise EncodingMismatch(
                f"column extraction needs a table row, got {type(entry).__name__}"
            )
        if ex.name not in entry:
            raise ColumnMissing(ex.name)
        return entry[ex.name]
    # JsonPathExtract
    if isinstance(entry, (bytes, str)):
        entry = json.loads(entry)
    return jsonpath.parse(ex.expr).find(entry)


_REGEX_CACHE: dict[str, re.Pattern[str]] = {}


def _compiled(pattern: str) -> re.Pattern[str]:
    compiled = _REGEX_CACHE.get(pattern)
    if compiled is None:
        try:
            compiled = re.compile(pattern)
        except re.error as exc:
            raise RegexInvalid(pattern, str(exc)) from exc
        if compiled.groups < 1:
            raise RegexInvalid(pattern, "needs at least one capture group")
        _REGEX_CACHE[pattern] = compiled
    return compiled


def apply_transforms(value: Value, transforms: tuple[Transform, ...] | list) -> Value:
    """Apply transforms left to right; a non-matching regex yields None."""
    for t in transforms:
        if value is None:
            return None
        if isinstance(value, list):
            value = [apply_transforms(v, [t]) for v in value]
            continue
        if isinstance(value, bytes):
            raise TypeMismatch("text transforms cannot run on byte content")
        text = value if isinstance(value, str) else str(value)
        if isinstance(t, RegexTransform):
            m = _compiled(t.pattern).search(text)
            value = m.group(1) if m else None
        elif isinstance(t, ReplaceTransform):
            value = text.replace(t.find, t.replacement)
        elif isinstance(t, SeparatorTransform):
            value = text.split(t.sep)
    return value


_INT_RE = re.compile(r"^[+-]?\d+$")
_TRUE = {"true", "1"}
_FALSE = {"false", "0"}


def coerce(value: Value, data_type: DataType | None) -> Value:
    """Coerce one raw value to its declared semantic type."""
    if value is None or data_type is None:
        return value
    if isinstance(value, list) and data_type != DataType.BOUNDING_BOX:
        return [coerce(v, data_type) for v in value]
    try:
        return _coerce_scalar(value, data_type)
    except CoercionFailed:
        raise
    except (ValueError, TypeError) as exc:
        raise CoercionFailed(value, data_type.term) from exc


def _coerce_scalar(value: Value, data_type: DataType) -> Value:
    if data_type == DataType.INTEGER:
        if isinstance(value, bool):
            return int(value)
        if isinstance(value, int):
            return value
        if isinstance(value, float) and value.is_integer():
            return int(value)
        if isinstance(value, str) and _INT_RE.match(value.strip()):
            return int(value.strip())
        raise CoercionFailed(value, data_type.term)
    if data_type == DataType.FLOAT:
        if isinstance(value, bool):
            raise CoercionFailed(value, data_type.term)
        if isinstance(value, (int, float)):
            return float(value)
        if isinstance(value, str):
            return float(value.strip())
        raise CoercionFailed(value, data_type.term)
    if data_type == DataType.BOOLEAN:
        if isinstance(value, bool):
            return value
        if isinstance(value, int) and value in (0, 1):
            return bool(value)
        if isinstance(value, str):
            lowered = value.strip().lower()
            if lowered in _TRUE:
                return True
            if lowered in _FALSE:
                return False
        raise CoercionFailed(value, data_type.term)
    if data_type == DataType.DATE:
        if isinstance(value, _dt.date):
            return value
        if isinstance(value, str):
            text = value.strip()
            try:
                return _dt.date.fromisoformat(text)
            except ValueError:
                return _dt.datetime.fromisoformat(text)
        raise CoercionFailed(value, data_type.term)
    if data_type == DataType.BOUNDING_BOX:
        if isinstance(value, BoundingBox):
            return value
        if isinstance(value, (list, tuple)) and len(value) == 4:
            nums = [float(v) for v in value]
            return BoundingBox(*nums)
        raise CoercionFailed(value, data_type.term)
    if data_type == DataType.GEO_COORDINATES:
        if isinstance(value, dict):
            return {
                "latitude": float(value.get("latitude")),
                "longitude": float(value.get("longitude")),
            }
        raise CoercionFailed(value, data_type.term)
    if data_type == DataType.IMAGE_OBJECT:
        if isinstance(value, (bytes, str)):
            return value
        raise CoercionFailed(value, data_type.term)
    if data_type in (DataType.TEXT, DataType.LABEL, DataType.SPLIT, DataType.URL):
        if isinstance(value, bytes):
            return value.decode("utf-8")
        if isinstance(value, str):
            return value
        if isinstance(value, (int, float, bool)):
            return str(value)
        raise CoercionFailed(value, data_type.term)
    # open extension types pass values through untouched
    return value


# --- planning -------------------------------------------------------------------


@dataclass
class FieldProgram:
    field: FieldDef
    out_key: str
    mode: str  # root | join | static | group
    join_resource: str | None = None
    children: list["FieldProgram"] = dc_field(default_factory=list)


@dataclass
class JoinSpec:
    resource_id: str
    column: str
    key_field_id: str
    index: dict[str, list[dict]] = dc_field(default_factory=dict)


@dataclass
class RecordPlan:
    record_set: RecordSetDef
    root_source_id: str
    root_kind: str  # fileSet | fileObject
    driver: str  # fileset | table | json | lines | single
    programs: list[FieldProgram]
    joins: dict[str, JoinSpec]
    prefetch_ids: list[str]
    split_program: FieldProgram | None = None

    @property
    def record_set_id(self) -> str:
        return self.record_set.id


def _leaf_fields(rs: RecordSetDef) -> list[FieldDef]:
    leafs = []
    for f in rs.fields:
        if f.sub_fields:
            leafs.extend(sub for sub in f.sub_fields if sub.source is not None)
        elif f.source is not None:
            leafs.append(f)
    return leafs


def _read_rows(store: ResourceStore, resource_id: str) -> list[dict]:
    res = store.model.resource(resource_id)
    local = store.local(resource_id)
    fmt = res.encoding_format if res is not None else ""
    if fmt == "text/csv":
        with open(local.local_path, "r", encoding="utf-8", newline="") as stream:
            return list(csv.DictReader(stream))
    if fmt == "application/json":
        doc = json.loads(local.local_path.read_text(encoding="utf-8"))
        if isinstance(doc, list) and all(isinstance(row, dict) for row in doc):
            return doc
        raise UnsupportedEncodingFormat(
            fmt, "JSON resource is not an array of objects"
        )
    raise UnsupportedEncodingFormat(fmt, f"resource {resource_id!r} is not tabular")


def _table_columns(store: ResourceStore, resource_id: str) -> list[str]:
    res = store.model.resource(resource_id)
    local = store.local(resource_id)
    fmt = res.encoding_format if res is not None else ""
    if fmt == "text/csv":
        with open(local.local_path, "r", encoding="utf-8", newline="") as stream:
            reader = csv.reader(stream)
            return next(reader, [])
    rows = _read_rows(store, resource_id)
    columns: list[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    return columns


def plan(model: DatasetModel, record_set_id: str, store: ResourceStore) -> RecordPlan:
    """Build an executable plan: root selection, field programs, join indexes."""
    rs = model.record_set(record_set_id)
    if rs is None:
        raise RecordSetUnknown(record_set_id, [r.id for r in model.record_sets])

    leafs = _leaf_fields(rs)
    if not leafs:
        raise PlanError(f"record set {record_set_id!r} has no sourced fields")

    counts: dict[str, int] = {}
    first_pos: dict[str, int] = {}
    for pos, f in enumerate(leafs):
        target = f.source.target_id
        counts[target] = counts.get(target, 0) + 1
        first_pos.setdefault(target, pos)
    root_source_id = sorted(counts, key=lambda t: (-counts[t], first_pos[t]))[0]
    root_res = model.resource(root_source_id)
    if root_res is None:
        raise PlanError(f"root source {root_source_id!r} is not a resource")
    root_kind = "fileSet" if isinstance(root_res, FileSet) else "fileObject"

    joins: dict[str, JoinSpec] = {}
    for f in leafs:
        if f.references is None:
            continue
        target = f.references.target_id
        if target == root_source_id or target in joins:
            continue
        if f.source.target_id != root_source_id:
            raise PlanError(
                f"join key field {f.id!r} must be sourced from the root source "
                f"{root_source_id!r}"
            )
        joins[target] = JoinSpec(
            resource_id=target,
            column=f.references.column,
            key_field_id=f.id,
        )

    def build_program(f: FieldDef, parent: FieldDef | None) -> FieldProgram:
        out_key = f.id
        if parent is not None:
            if f.semantic_role is not None:
                out_key = f.semantic_role
            elif f.id.startswith(parent.id + "/"):
                out_key = f.id[len(parent.id) + 1 :]
            else:
                out_key = f.id.rsplit("/", 1)[-1]
        if f.sub_fields:
            return FieldProgram(
                field=f,
                out_key=out_key,
                mode="group",
                children=[build_program(sub, f) for sub in f.sub_fields],
            )
        source = f.source
        if source.target_id == root_source_id:
            mode, join_res = "root", None
        elif source.target_id in joins:
            if not isinstance(source.extract, ColumnExtract):
                raise PlanError(
                    f"field {f.id!r} is joined from {source.target_id!r} and must "
                    "use a column extract"
                )
            mode, join_res = "join", source.target_id
        elif isinstance(source.extract, (FilePropertyExtract, JsonPathExtract)):
            mode, join_res = "static", None
        else:
            raise PlanError(
                f"field {f.id!r} reads from {source.target_id!r} which is neither "
                "the root source nor joined via references"
            )
        return FieldProgram(field=f, out_key=out_key, mode=mode, join_resource=join_res)

    programs = [build_program(f, None) for f in rs.fields]

    driver = _pick_driver(root_res, programs)

    # prefetch list: root chain + join tables + static sources
    prefetch: list[str] = []

    def note(res_id: str | None) -> None:
        while res_id is not None and res_id not in prefetch:
            prefetch.append(res_id)
            parent = model.resource(res_id)
            res_id = getattr(parent, "contained_in", None)

    note(root_source_id)
    for join in joins.values():
        note(join.resource_id)
    for p in _walk_programs(programs):
        if p.mode == "static":
            note(p.field.source.target_id)

    # verify join columns and build indexes up front
    for join in joins.values():
        columns = _table_columns(store, join.resource_id)
        if join.column not in columns:
            raise JoinColumnMissing(join.resource_id, join.column)
        for row in _read_rows(store, join.resource_id):
            key = row.get(join.column)
            if key is None:
                continue
            join.index.setdefault(str(key), []).append(row)

    split_program = None
    for p in _walk_programs(programs):
        if p.field.is_split and p.mode != "group":
            split_program = p
            break

    return RecordPlan(
        record_set=rs,
        root_source_id=root_source_id,
        root_kind=root_kind,
        driver=driver,
        programs=programs,
        joins=joins,
        prefetch_ids=prefetch,
        split_program=split_program,
    )


def _walk_programs(programs: list[FieldProgram]) -> Iterator[FieldProgram]:
    for p in programs:
        yield p
        yield from _walk_programs(p.children)


def _pick_driver(root_res, programs: list[FieldProgram]) -> str:
    root_extracts = [
        p.field.source.extract
        for p in _walk_programs(programs)
        if p.mode == "root"
    ]
    if isinstance(root_res, FileSet):
        for ex in root_extracts:
            if not isinstance(ex, FilePropertyExtract):
                raise EncodingMismatch(
                    f"{type(ex).__name__} cannot run against FileSet members"
                )
        return "fileset"

    fmt = root_res.encoding_format
    if any(isinstance(ex, FilePropertyExtract) and ex.prop == "lines"
           for ex in root_extracts):
        return "lines"
    if fmt == "text/csv":
        for ex in root_extracts:
            if isinstance(ex, JsonPathExtract):
                raise EncodingMismatch("jsonPath extraction cannot run on a CSV")
        return "table"
    if fmt == "application/json":
        for ex in root_extracts:
            if isinstance(ex, ColumnExtract):
                raise EncodingMismatch(
                    "column extraction on a JSON resource is not supported"
                )
        if any(isinstance(ex, JsonPathExtract) for ex in root_extracts):
            return "json"
        return "single"
    if all(isinstance(ex, FilePropertyExtract) for ex in root_extracts):
        return "single"
    raise UnsupportedEncodingFormat(fmt)


# --- execution --------------------------------------------------------------------


@dataclass
class RecordStats:
    """Mutable counters filled in while a record stream is consumed."""

    records: int = 0
    warnings: list[str] = dc_field(default_factory=list)

    def warn(self, message: str) -> None:
        self.warnings.append(message)


class _Executor:
    def __init__(
        self,
        plan: RecordPlan,
        store: ResourceStore,
        strict: bool,
        stats: RecordStats,
    ) -> None:
        self.plan = plan
        self.store = store
        self.strict = strict
        self.stats = stats
        self._static_values: dict[str, Value] = {}
        self._json_matches: dict[str, list] = {}
        self._programs_by_id = {
            p.field.id: p for p in _walk_programs(plan.programs)
        }

    # -- root entries ------------------------------------------------------

    def root_entries(self) -> list:
        plan = self.plan
        if plan.driver == "fileset":
            return self.store.entries(plan.root_source_id)
        if plan.driver == "table":
            return _read_rows(self.store, plan.root_source_id)
        if plan.driver == "json":
            local = self.store.local(plan.root_source_id)
            doc = json.loads(local.local_path.read_text(encoding="utf-8"))
            lengths = set()
            for p in _walk_programs(plan.programs):
                if p.mode == "root" and isinstance(p.field.source.extract, JsonPathExtract):
                    matches = jsonpath.parse(p.field.source.extract.expr).find(doc)
                    self._json_matches[p.field.id] = matches
                    lengths.add(len(matches))
            if not self._json_matches:
                return []
            if len(lengths) > 1:
                self.stats.warn(
                    f"jsonPath programs matched diverging counts {sorted(lengths)}; "
                    "iterating to the longest with nulls"
                )
            return list(range(max(lengths)))
        if plan.driver == "lines":
            entry = self.store.file_entry(plan.root_source_id)
            return entry.read_bytes().decode("utf-8").splitlines()
        # single
        return [self.store.file_entry(plan.root_source_id)]

    # -- per-record evaluation ----------------------------------------------

    def raw_root_value(self, program: FieldProgram, entry: object) -> Value:
        ex = program.field.source.extract
        if self.plan.driver == "json":
            if isinstance(ex, FilePropertyExtract):
                return self.static_value(program)
            matches = self._json_matches.get(program.field.id, [])
            index = entry  # ordinal
            return matches[index] if index < len(matches) else None
        if self.plan.driver == "lines":
            if isinstance(ex, FilePropertyExtract) and ex.prop == "lines":
                return entry  # the line itself
            return extract(self.store.file_entry(self.plan.root_source_id), ex)
        if self.plan.driver == "table":
            if isinstance(ex, FilePropertyExtract):
                return self.static_value(program)
            return extract(entry, ex)
        return extract(entry, ex)

    def static_value(self, program: FieldProgram) -> Value:
        field_id = program.field.id
        if field_id not in self._static_values:
            source = program.field.source
            ex = source.extract
            if isinstance(ex, JsonPathExtract):
                local = self.store.local(source.target_id)
                doc = json.loads(local.local_path.read_text(encoding="utf-8"))
                value: Value = jsonpath.parse(ex.expr).find(doc)
            else:
                entry = self.store.file_entry(source.target_id)
                value = extract(entry, ex)
            self._static_values[field_id] = value
        return self._static_values[field_id]

    def evaluate(
        self,
        program: FieldProgram,
        entry: object,
        joined: dict[str, dict],
        ordinal: int,
    ) -> Value:
        f = program.field
        if program.mode == "group":
            group: dict[str, Value] = {}
            for child in program.children:
                group[child.out_key] = self.evaluate(child, entry, joined, ordinal)
            if f.data_type == DataType.GEO_COORDINATES:
                return self.coerce_checked(group, f, ordinal)
            return group

        try:
            if program.mode == "root":
                raw = self.raw_root_value(program, entry)
            elif program.mode == "join":
                row = joined.get(program.join_resource or "")
                ex = f.source.extract
                raw = None if row is None else extract(row, ex)
            else:
                raw = self.static_value(program)
            raw = apply_transforms(raw, f.source.transforms)
            if raw is None:
                self.stats.warn(
                    f"record {ordinal}: field {f.id!r} has no value; emitting null"
                )
                return None
            return self.coerce_checked(raw, f, ordinal)
        except (ColumnMissing, EncodingMismatch, TypeMismatch) as exc:
            if self.strict:
                raise type(exc)(f"record {ordinal}: {exc}") from exc
            self.stats.warn(f"record {ordinal}: field {f.id!r}: {exc}")
            return None

    def coerce_checked(self, raw: Value, f: FieldDef, ordinal: int) -> Value:
        try:
            return coerce(raw, f.data_type)
        except CoercionFailed as exc:
            if self.strict:
                raise CoercionFailed(
                    f"record {ordinal}: field {f.id!r}: {exc.value!r}", exc.target
                ) from exc
            self.stats.warn(f"record {ordinal}: field {f.id!r}: {exc}")
            return None

    # -- join keys ------------------------------------------------------------

    def key_value(self, join: JoinSpec, entry: object) -> str | None:
        program = self._programs_by_id.get(join.key_field_id)
        if program is None:  # pragma: no cover - key fields always planned
            return None
        raw = self.raw_root_value(program, entry)
        raw = apply_transforms(raw, program.field.source.transforms)
        return None if raw is None else str(raw)

    def fan_out(self, entry: object) -> list[dict[str, dict]]:
        """Matched-row combinations for one root entry (inner join)."""
        combos: list[dict[str, dict]] = [{}]
        for resource_id, join in self.plan.joins.items():
            key = self.key_value(join, entry)
            rows = join.index.get(key, []) if key is not None else []
            if not rows:
                return []
            if len(rows) > 1 and self._is_declared_key(join.key_field_id):
                # declared keys do not dedup, but duplicates are surfaced
                self.stats.warn(
                    f"key field {join.key_field_id!r} value {key!r} matches "
                    f"{len(rows)} rows in {resource_id!r}"
                )
            combos = [
                {**combo, resource_id: row} for combo in combos for row in rows
            ]
        return combos

    def _is_declared_key(self, field_id: str) -> bool:
        key = self.plan.record_set.key
        if key is None:
            return False
        return field_id in key if isinstance(key, list) else field_id == key

    def build_record(
        self, entry: object, joined: dict[str, dict], ordinal: int
    ) -> Record:
        record: Record = {}
        for program in self.plan.programs:
            record[program.field.id] = self.evaluate(program, entry, joined, ordinal)
        return record

    def split_value(
        self, entry: object, joined: dict[str, dict], ordinal: int
    ) -> str | None:
        if self.plan.split_program is None:
            return None
        value = self.evaluate(self.plan.split_program, entry, joined, ordinal)
        return None if value is None else str(value)


def iter_records(
    model: DatasetModel,
    record_set_id: str,
    *,
    store: ResourceStore | None = None,
    base: str | None = None,
    slice_spec: SplitSlice | str | None = None,
    split: str | None = None,
    limit: int | None = None,
    strict: bool = False,
    stats: RecordStats | None = None,
    plan_: RecordPlan | None = None,
) -> Iterator[Record]:
    """Stream fully-joined, typed records of one record set, in defined order.

    Planning (and its errors) happens eagerly, before the stream is consumed.
    """
    if store is None:
        store = ResourceStore(model, base=base)
    if isinstance(slice_spec, str):
        slice_spec = parse_slice(slice_spec)
    the_plan = plan_ if plan_ is not None else plan(model, record_set_id, store)
    stats = stats if stats is not None else RecordStats()

    split_filter = split
    if slice_spec is not None and slice_spec.name != record_set_id:
        if the_plan.split_program is None:
            raise SliceSyntax(
                slice_spec.name,
                f"{slice_spec.name!r} is neither the record set id nor a split "
                "(no Split-typed field)",
            )
        if split_filter is None:
            split_filter = slice_spec.name

    executor = _Executor(the_plan, store, strict, stats)
    entries = executor.root_entries()

    def survivors() -> Iterator[tuple[object, dict[str, dict], int]]:
        ordinal = 0
        for entry in entries:
            for joined in executor.fan_out(entry):
                if split_filter is not None:
                    value = executor.split_value(entry, joined, ordinal)
                    if value != split_filter:
                        continue
                yield entry, joined, ordinal
                ordinal += 1

    lo, hi = 0, None
    if slice_spec is not None and not slice_spec.is_full:
        if slice_spec.percent:
            # extra counting pass: evaluates only join keys and the split field
            mark = len(stats.warnings)
            total = sum(1 for _ in survivors())
            del stats.warnings[mark:]
            lo, hi = slice_spec.bounds(total)
        else:
            lo, hi = slice_spec.bounds(1 << 62)

    def stream() -> Iterator[Record]:
        produced = 0
        for position, (entry, joined, ordinal) in enumerate(survivors()):
            if position < lo:
                continue
            if hi is not None and position >= hi:
                break
            if limit is not None and produced >= limit:
                break
            record = executor.build_record(entry, joined, ordinal)
            stats.records += 1
            produced += 1
            yield record

    return stream()


# --- wire format --------------------------------------------------------------


def value_to_json(value: Value) -> object:
    if isinstance(value, bytes):
        return {"$bytes": base64.b64encode(value).decode("ascii")}
    if isinstance(value, BoundingBox):
        return value.as_list()
    if isinstance(value, (_dt.datetime, _dt.date)):
        return value.isoformat()
    if isinstance(value, list):
        return [value_to_json(v) for v in value]
    if isinstance(value, dict):
        return {k: value_to_json(v) for k, v in value.items()}
    return value


def record_to_jsonl(record: Record) -> str:
    """One record as a JSON line: bytes base64-wrapped, nesting preserved."""
    return json.dumps(
        {k: value_to_json(v) for k, v in record.items()},
        separators=(",", ":"),
        ensure_ascii=False,
    )
