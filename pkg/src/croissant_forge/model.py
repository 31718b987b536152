"""Typed four-layer Croissant model and the graph <-> model mapping.

from_graph is lenient about *missing* values (validation reports those); it
raises ShapeError only for structurally impossible nodes, aggregated so a
document's problems are reported in one pass.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass, field as dc_field
from typing import ClassVar

from .errors import ShapeError, ShapeIssue
from .graph import CONFORMS_TO_KEY, Node, NodeGraph, PropertyValue, Ref

# --- semantic datatypes -----------------------------------------------------


@dataclass(frozen=True)
class DataType:
    """A semantic type: one of the well-known members or any open IRI."""

    term: str

    TEXT: ClassVar["DataType"]
    INTEGER: ClassVar["DataType"]
    FLOAT: ClassVar["DataType"]
    BOOLEAN: ClassVar["DataType"]
    DATE: ClassVar["DataType"]
    IMAGE_OBJECT: ClassVar["DataType"]
    GEO_COORDINATES: ClassVar["DataType"]
    BOUNDING_BOX: ClassVar["DataType"]
    LABEL: ClassVar["DataType"]
    SPLIT: ClassVar["DataType"]
    URL: ClassVar["DataType"]

    @property
    def is_known(self) -> bool:
        return self in _KNOWN_DATATYPES


DataType.TEXT = DataType("sc:Text")
DataType.INTEGER = DataType("sc:Integer")
DataType.FLOAT = DataType("sc:Float")
DataType.BOOLEAN = DataType("sc:Boolean")
DataType.DATE = DataType("sc:Date")
DataType.IMAGE_OBJECT = DataType("sc:ImageObject")
DataType.GEO_COORDINATES = DataType("sc:GeoCoordinates")
DataType.BOUNDING_BOX = DataType("cr:BoundingBox")
DataType.LABEL = DataType("cr:Label")
DataType.SPLIT = DataType("cr:Split")
DataType.URL = DataType("sc:URL")

_KNOWN_DATATYPES = {
    DataType.TEXT,
    DataType.INTEGER,
    DataType.FLOAT,
    DataType.BOOLEAN,
    DataType.DATE,
    DataType.IMAGE_OBJECT,
    DataType.GEO_COORDINATES,
    DataType.BOUNDING_BOX,
    DataType.LABEL,
    DataType.SPLIT,
    DataType.URL,
}


# --- record values ----------------------------------------------------------


@dataclass(frozen=True)
class BoundingBox:
    """XYWH bounding box, the COCO convention."""

    x: float
    y: float
    w: float
    h: float

    def as_list(self) -> list[float]:
        return [self.x, self.y, self.w, self.h]


# One joined, typed row: fully-qualified field id -> value. Values are
# scalars, bytes, dates, lists, bounding boxes, or nested records (subFields).
Value = (
    None
    | str
    | int
    | float
    | bool
    | bytes
    | _dt.date
    | BoundingBox
    | list
    | dict
)
Record = dict


Extras = dict[str, list[PropertyValue]]


# --- extract / transform / reference variants --------------------------------


@dataclass(frozen=True)
class ColumnExtract:
    name: str


FILE_PROPERTIES = ("content", "filename", "fullpath", "lines")


@dataclass(frozen=True)
class FilePropertyExtract:
    prop: str  # content | filename | fullpath | lines


@dataclass(frozen=True)
class JsonPathExtract:
    expr: str


Extract = ColumnExtract | FilePropertyExtract | JsonPathExtract


@dataclass(frozen=True)
class RegexTransform:
    pattern: str


@dataclass(frozen=True)
class ReplaceTransform:
    find: str
    replacement: str


@dataclass(frozen=True)
class SeparatorTransform:
    sep: str


Transform = RegexTransform | ReplaceTransform | SeparatorTransform


@dataclass(frozen=True)
class SourceSpec:
    target_id: str
    target_kind: str  # "fileObject" | "fileSet"
    extract: Extract
    transforms: tuple[Transform, ...] = ()


@dataclass(frozen=True)
class ReferenceSpec:
    """This field's value equals the named column of the target fileObject."""

    target_id: str
    column: str


# --- entities ----------------------------------------------------------------


@dataclass
class DatasetMetadata:
    name: str = ""
    description: str = ""
    conforms_to: str = ""
    license: str | None = None
    url: str | None = None
    cite_as: str | None = None
    creator: list[str] = dc_field(default_factory=list)
    publisher: list[str] = dc_field(default_factory=list)
    date_published: str | None = None
    in_language: list[str] = dc_field(default_factory=list)
    version: str | None = None
    is_live_dataset: bool | None = None


@dataclass
class FileObject:
    id: str
    content_url: str = ""
    encoding_format: str = ""
    sha256: str | None = None
    contained_in: str | None = None
    extras: Extras = dc_field(default_factory=dict)


@dataclass
class FileSet:
    id: str
    contained_in: str | None = None
    includes: list[str] = dc_field(default_factory=list)
    excludes: list[str] = dc_field(default_factory=list)
    encoding_format: str = ""
    extras: Extras = dc_field(default_factory=dict)


Resource = FileObject | FileSet


@dataclass
class FieldDef:
    id: str
    data_types: list[DataType] = dc_field(default_factory=list)
    source: SourceSpec | None = None
    references: ReferenceSpec | None = None
    sub_fields: list["FieldDef"] = dc_field(default_factory=list)
    semantic_role: str | None = None  # latitude | longitude (suffix rule)
    extras: Extras = dc_field(default_factory=dict)

    @property
    def data_type(self) -> DataType | None:
        return self.data_types[0] if self.data_types else None

    @property
    def is_split(self) -> bool:
        return DataType.SPLIT in self.data_types


@dataclass
class RecordSetDef:
    id: str
    key: str | list[str] | None = None
    fields: list[FieldDef] = dc_field(default_factory=list)
    data_types: list[DataType] = dc_field(default_factory=list)
    extras: Extras = dc_field(default_factory=dict)

    def field_ids(self) -> list[str]:
        out = []
        for f, _parent in walk_fields(self):
            out.append(f.id)
        return out


def walk_fields(record_set: RecordSetDef):
    """Yield (field, parent_or_None) over fields then their subFields."""
    for f in record_set.fields:
        yield f, None
        for sub in f.sub_fields:
            yield sub, f


@dataclass
class RaiBlock:
    data_collection: str | list[str] | None = None
    data_collection_timeframe: str | list[str] | None = None
    data_annotation_platform: str | list[str] | None = None
    annotator_demographics: str | list[str] | None = None
    data_use_cases: str | list[str] | None = None
    personal_sensitive_information: str | list[str] | None = None
    extras: Extras = dc_field(default_factory=dict)

    def is_empty(self) -> bool:
        return self == RaiBlock()


RAI_KEYS: dict[str, str] = {
    "rai:dataCollection": "data_collection",
    "rai:dataCollectionTimeframe": "data_collection_timeframe",
    "rai:dataAnnotationPlatform": "data_annotation_platform",
    "rai:annotatorDemographics": "annotator_demographics",
    "rai:dataUseCases": "data_use_cases",
    "rai:personalSensitiveInformation": "personal_sensitive_information",
}


@dataclass
class DatasetModel:
    metadata: DatasetMetadata = dc_field(default_factory=DatasetMetadata)
    resources: list[Resource] = dc_field(default_factory=list)
    record_sets: list[RecordSetDef] = dc_field(default_factory=list)
    rai: RaiBlock = dc_field(default_factory=RaiBlock)
    root_id: str | None = None  # explicit @id of the dataset node, if any
    extras: Extras = dc_field(default_factory=dict)

    def resource(self, resource_id: str) -> Resource | None:
        for r in self.resources:
            if r.id == resource_id:
                return r
        return None

    def record_set(self, record_set_id: str) -> RecordSetDef | None:
        for rs in self.record_sets:
            if rs.id == record_set_id:
                return rs
        return None


# --- graph -> model -----------------------------------------------------------

_METADATA_KEYS = {
    "sc:name",
    "sc:description",
    CONFORMS_TO_KEY,
    "sc:license",
    "sc:url",
    "cr:citeAs",
    "sc:creator",
    "sc:publisher",
    "sc:datePublished",
    "sc:inLanguage",
    "sc:version",
    "cr:isLiveDataset",
}
_STRUCTURAL_KEYS = {"sc:distribution", "cr:recordSet"}


class _ModelBuilder:
    def __init__(self, graph: NodeGraph) -> None:
        self.graph = graph
        self.issues: list[ShapeIssue] = []

    def issue(self, path: str, reason: str) -> None:
        self.issues.append(ShapeIssue(path, reason))

    # -- small helpers ---------------------------------------------------

    def first_text(self, node: Node, key: str) -> str | None:
        for v in node.properties.get(key, []):
            if isinstance(v, str):
                return v
        return None

    def as_id(self, value: PropertyValue) -> str | None:
        if isinstance(value, Ref):
            return value.id
        if isinstance(value, str):
            return value
        return None

    def child(self, node: Node, key: str) -> Node | None:
        """Resolve the first value of key as an embedded child node."""
        value = node.first(key)
        if isinstance(value, Ref):
            return self.graph.nodes.get(value.id)
        return None

    def agent_names(self, node: Node, key: str) -> list[str]:
        names = []
        for v in node.properties.get(key, []):
            if isinstance(v, str):
                names.append(v)
            elif isinstance(v, Ref):
                target = self.graph.nodes.get(v.id)
                name = self.first_text(target, "sc:name") if target else None
                names.append(name if name is not None else v.id)
        return names

    # -- entities --------------------------------------------------------

    def build(self) -> DatasetModel:
        root = self.graph.root_node
        metadata = self.metadata(root)
        rai = self.rai(root)

        resources: list[Resource] = []
        record_set_nodes: list[Node] = []
        field_node_ids: set[str] = set()
        for node in self.graph.nodes.values():
            kinds = [
                t for t in node.types
                if t in ("cr:FileObject", "cr:FileSet", "cr:RecordSet", "cr:Field")
            ]
            if len(kinds) > 1:
                self.issue(node.id, f"node has conflicting types {kinds}")
                continue
            if not kinds:
                continue
            kind = kinds[0]
            if kind == "cr:FileObject":
                resources.append(self.file_object(node))
            elif kind == "cr:FileSet":
                resources.append(self.file_set(node))
            elif kind == "cr:RecordSet":
                record_set_nodes.append(node)
            else:
                field_node_ids.add(node.id)

        by_id = {r.id: r for r in resources}
        for res in resources:
            if isinstance(res, FileSet) and isinstance(
                by_id.get(res.contained_in or ""), FileSet
            ):
                self.issue(
                    res.id,
                    "FileSet containedIn must name a FileObject, not another FileSet",
                )

        record_sets = []
        attached: set[str] = set()
        for node in record_set_nodes:
            record_sets.append(self.record_set(node, attached))
        for orphan in sorted(field_node_ids - attached):
            self.issue(orphan, "cr:Field node not attached to any RecordSet")

        extras: Extras = {}
        for key, values in root.properties.items():
            if key in _METADATA_KEYS or key in _STRUCTURAL_KEYS:
                continue
            if key.startswith("rai:"):
                continue
            extras[key] = list(values)

        root_id = None if root.id.startswith("_:") else root.id
        model = DatasetModel(
            metadata=metadata,
            resources=resources,
            record_sets=record_sets,
            rai=rai,
            root_id=root_id,
            extras=extras,
        )
        if self.issues:
            raise ShapeError(self.issues)
        return model

    def metadata(self, root: Node) -> DatasetMetadata:
        version = root.first("sc:version")
        live = root.first("cr:isLiveDataset")
        if isinstance(live, str):
            live = {"true": True, "false": False}.get(live.lower())
        return DatasetMetadata(
            name=self.first_text(root, "sc:name") or "",
            description=self.first_text(root, "sc:description") or "",
            conforms_to=self.first_text(root, CONFORMS_TO_KEY) or "",
            license=self.first_text(root, "sc:license"),
            url=self.first_text(root, "sc:url"),
            cite_as=self.first_text(root, "cr:citeAs"),
            creator=self.agent_names(root, "sc:creator"),
            publisher=self.agent_names(root, "sc:publisher"),
            date_published=self.first_text(root, "sc:datePublished"),
            in_language=root.texts("sc:inLanguage"),
            version=str(version) if version is not None else None,
            is_live_dataset=live if isinstance(live, bool) else None,
        )

    def rai(self, root: Node) -> RaiBlock:
        block = RaiBlock()
        for key, values in root.properties.items():
            if not key.startswith("rai:"):
                continue
            texts = [v for v in values if isinstance(v, str)]
            value: str | list[str] | None
            if not texts:
                value = None
            elif len(texts) == 1:
                value = texts[0]
            else:
                value = texts
            if key in RAI_KEYS:
                if value is not None:
                    setattr(block, RAI_KEYS[key], value)
            else:
                block.extras[key] = list(values)
        return block

    def _extras(self, node: Node, consumed: set[str]) -> Extras:
        return {
            k: list(v) for k, v in node.properties.items() if k not in consumed
        }

    def file_object(self, node: Node) -> FileObject:
        consumed = {"sc:contentUrl", "sc:encodingFormat", "cr:sha256", "cr:containedIn"}
        contained = node.first("cr:containedIn")
        return FileObject(
            id=node.id,
            content_url=self.first_text(node, "sc:contentUrl") or "",
            encoding_format=self.first_text(node, "sc:encodingFormat") or "",
            sha256=self.first_text(node, "cr:sha256"),
            contained_in=self.as_id(contained) if contained is not None else None,
            extras=self._extras(node, consumed),
        )

    def file_set(self, node: Node) -> FileSet:
        consumed = {"cr:containedIn", "cr:includes", "cr:excludes", "sc:encodingFormat"}
        contained = node.first("cr:containedIn")
        return FileSet(
            id=node.id,
            contained_in=self.as_id(contained) if contained is not None else None,
            includes=node.texts("cr:includes"),
            excludes=node.texts("cr:excludes"),
            encoding_format=self.first_text(node, "sc:encodingFormat") or "",
            extras=self._extras(node, consumed),
        )

    def record_set(self, node: Node, attached: set[str]) -> RecordSetDef:
        consumed = {"cr:key", "cr:field", "cr:dataType"}
        key_ids = [self.as_id(v) for v in node.properties.get("cr:key", [])]
        key_ids = [k for k in key_ids if k]
        key: str | list[str] | None
        if not key_ids:
            key = None
        elif len(key_ids) == 1:
            key = key_ids[0]
        else:
            key = key_ids

        fields = []
        for value in node.properties.get("cr:field", []):
            child = (
                self.graph.nodes.get(value.id) if isinstance(value, Ref) else None
            )
            if child is None:
                self.issue(node.id, f"cr:field entry {value!r} is not a Field node")
                continue
            fields.append(self.field(child, attached, parent_type=None))

        return RecordSetDef(
            id=node.id,
            key=key,
            fields=fields,
            data_types=[DataType(t) for t in node.texts("cr:dataType")],
            extras=self._extras(node, consumed),
        )

    def field(
        self, node: Node, attached: set[str], parent_type: DataType | None
    ) -> FieldDef:
        consumed = {"cr:dataType", "cr:source", "cr:references", "cr:subField"}
        attached.add(node.id)
        data_types = [DataType(t) for t in node.texts("cr:dataType")]

        source = None
        source_node = self.child(node, "cr:source")
        if source_node is not None:
            source = self.source(node.id, source_node)
        elif node.first("cr:source") is not None:
            self.issue(node.id, "cr:source must be an object")

        references = None
        ref_node = self.child(node, "cr:references")
        if ref_node is not None:
            references = self.reference(node.id, ref_node)
        elif node.first("cr:references") is not None:
            self.issue(node.id, "cr:references must be an object")

        sub_fields = []
        for value in node.properties.get("cr:subField", []):
            child = (
                self.graph.nodes.get(value.id) if isinstance(value, Ref) else None
            )
            if child is None:
                self.issue(node.id, f"cr:subField entry {value!r} is not a Field node")
                continue
            sub_fields.append(
                self.field(
                    child,
                    attached,
                    parent_type=data_types[0] if data_types else None,
                )
            )

        if source is not None and sub_fields:
            self.issue(node.id, "field declares both source and subField")
        if source is None and not sub_fields:
            self.issue(node.id, "field declares neither source nor subField")

        role = None
        if parent_type == DataType.GEO_COORDINATES:
            if node.id.endswith("/latitude"):
                role = "latitude"
            elif node.id.endswith("/longitude"):
                role = "longitude"

        return FieldDef(
            id=node.id,
            data_types=data_types,
            source=source,
            references=references,
            sub_fields=sub_fields,
            semantic_role=role,
            extras=self._extras(node, consumed),
        )

    def source(self, field_id: str, node: Node) -> SourceSpec | None:
        fo = node.first("cr:fileObject")
        fs = node.first("cr:fileSet")
        if fo is not None and fs is not None:
            self.issue(field_id, "source names both fileObject and fileSet")
            return None
        if fo is None and fs is None:
            self.issue(field_id, "source names neither fileObject nor fileSet")
            return None
        target_kind = "fileObject" if fo is not None else "fileSet"
        target_id = self.as_id(fo if fo is not None else fs)
        if not target_id:
            self.issue(field_id, "source target is not an id")
            return None

        extract = self.extract(field_id, node)
        if extract is None:
            return None

        transforms = []
        for value in node.properties.get("cr:transform", []):
            t_node = self.graph.nodes.get(value.id) if isinstance(value, Ref) else None
            if t_node is None:
                self.issue(field_id, "transform must be an object")
                continue
            t = self.transform(field_id, t_node)
            if t is not None:
                transforms.append(t)
        return SourceSpec(
            target_id=target_id,
            target_kind=target_kind,
            extract=extract,
            transforms=tuple(transforms),
        )

    def extract(self, field_id: str, source_node: Node) -> Extract | None:
        extract_node = self.child(source_node, "cr:extract")
        # common shorthand: "column" directly on the source object
        if extract_node is None:
            column = self.first_text(source_node, "cr:column")
            if column is not None:
                return ColumnExtract(column)
            self.issue(field_id, "source has no extract")
            return None

        column = self.first_text(extract_node, "cr:column")
        file_prop = self.first_text(extract_node, "cr:fileProperty")
        json_path = self.first_text(extract_node, "cr:jsonPath")
        given = [v for v in (column, file_prop, json_path) if v is not None]
        if len(given) != 1:
            self.issue(field_id, "extract needs exactly one of column/fileProperty/jsonPath")
            return None
        if column is not None:
            return ColumnExtract(column)
        if file_prop is not None:
            if file_prop not in FILE_PROPERTIES:
                self.issue(field_id, f"unknown fileProperty {file_prop!r}")
                return None
            return FilePropertyExtract(file_prop)
        return JsonPathExtract(json_path)

    def transform(self, field_id: str, node: Node) -> Transform | None:
        regex = self.first_text(node, "cr:regex")
        separator = self.first_text(node, "cr:separator")
        replace = node.first("cr:replace")
        given = sum(v is not None for v in (regex, separator, replace))
        if given != 1:
            self.issue(field_id, "transform needs exactly one of regex/replace/separator")
            return None
        if regex is not None:
            return RegexTransform(regex)
        if separator is not None:
            return SeparatorTransform(separator)
        if isinstance(replace, str):
            self.issue(
                field_id,
                "replace must be an object with find/with, not a single text",
            )
            return None
        replace_node = self.child(node, "cr:replace")
        if replace_node is None:
            self.issue(field_id, "replace must be an object with find/with")
            return None
        find = self.first_text(replace_node, "cr:find")
        repl = self.first_text(replace_node, "cr:with")
        if find is None or repl is None:
            self.issue(field_id, "replace object needs both find and with")
            return None
        return ReplaceTransform(find=find, replacement=repl)

    def reference(self, field_id: str, node: Node) -> ReferenceSpec | None:
        if node.first("cr:fileSet") is not None:
            self.issue(field_id, "references must target a fileObject, not a fileSet")
            return None
        target = self.as_id(node.first("cr:fileObject"))
        column = self.first_text(node, "cr:column")
        if not target or column is None:
            self.issue(field_id, "references needs fileObject and column")
            return None
        return ReferenceSpec(target_id=target, column=column)


def from_graph(graph: NodeGraph) -> DatasetModel:
    """Map a NodeGraph into the typed model; raises ShapeError (aggregated)."""
    return _ModelBuilder(graph).build()


# --- model -> graph -----------------------------------------------------------


class _GraphBuilder:
    def __init__(self) -> None:
        self.nodes: dict[str, Node] = {}
        self.counter = 0

    def fresh_id(self) -> str:
        candidate = f"_:b{self.counter}"
        self.counter += 1
        while candidate in self.nodes:
            candidate = f"_:b{self.counter}"
            self.counter += 1
        return candidate

    def add(self, node_id: str | None, types: list[str]) -> Node:
        node = Node(id=node_id or self.fresh_id(), types=list(types))
        self.nodes[node.id] = node
        return node

    def put(self, node: Node, key: str, values: list[PropertyValue]) -> None:
        if values:
            node.properties[key] = values


def _texts(value: str | list[str] | None) -> list[PropertyValue]:
    if value is None:
        return []
    if isinstance(value, str):
        return [value]
    return list(value)


def to_graph(model: DatasetModel) -> NodeGraph:
    """Rebuild a NodeGraph from a model; inverse of from_graph on valid models."""
    b = _GraphBuilder()
    root = b.add(model.root_id, ["sc:Dataset"])
    md = model.metadata
    b.put(root, "sc:name", [md.name] if md.name else [])
    b.put(root, "sc:description", [md.description] if md.description else [])
    b.put(root, CONFORMS_TO_KEY, [md.conforms_to] if md.conforms_to else [])
    b.put(root, "sc:license", [md.license] if md.license is not None else [])
    b.put(root, "sc:url", [md.url] if md.url is not None else [])
    b.put(root, "cr:citeAs", [md.cite_as] if md.cite_as is not None else [])
    b.put(root, "sc:creator", list(md.creator))
    b.put(root, "sc:publisher", list(md.publisher))
    b.put(
        root,
        "sc:datePublished",
        [md.date_published] if md.date_published is not None else [],
    )
    b.put(root, "sc:inLanguage", list(md.in_language))
    b.put(root, "sc:version", [md.version] if md.version is not None else [])
    b.put(
        root,
        "cr:isLiveDataset",
        [md.is_live_dataset] if md.is_live_dataset is not None else [],
    )
    for rai_key, attr in RAI_KEYS.items():
        b.put(root, rai_key, _texts(getattr(model.rai, attr)))
    for key, values in model.rai.extras.items():
        b.put(root, key, list(values))
    for key, values in model.extras.items():
        b.put(root, key, list(values))

    distribution: list[PropertyValue] = []
    for res in model.resources:
        if isinstance(res, FileObject):
            node = b.add(res.id, ["cr:FileObject"])
            b.put(node, "sc:contentUrl", [res.content_url] if res.content_url else [])
            b.put(
                node,
                "sc:encodingFormat",
                [res.encoding_format] if res.encoding_format else [],
            )
            b.put(node, "cr:sha256", [res.sha256] if res.sha256 is not None else [])
            if res.contained_in is not None:
                b.put(node, "cr:containedIn", [Ref(res.contained_in)])
        else:
            node = b.add(res.id, ["cr:FileSet"])
            if res.contained_in is not None:
                b.put(node, "cr:containedIn", [Ref(res.contained_in)])
            b.put(node, "cr:includes", list(res.includes))
            b.put(node, "cr:excludes", list(res.excludes))
            b.put(
                node,
                "sc:encodingFormat",
                [res.encoding_format] if res.encoding_format else [],
            )
        for key, values in res.extras.items():
            b.put(node, key, list(values))
        distribution.append(Ref(node.id))
    b.put(root, "sc:distribution", distribution)

    record_sets: list[PropertyValue] = []
    for rs in model.record_sets:
        node = b.add(rs.id, ["cr:RecordSet"])
        if rs.key is not None:
            keys = [rs.key] if isinstance(rs.key, str) else list(rs.key)
            b.put(node, "cr:key", list(keys))
        b.put(node, "cr:dataType", [t.term for t in rs.data_types])
        b.put(node, "cr:field", [Ref(_emit_field(b, f)) for f in rs.fields])
        for key, values in rs.extras.items():
            b.put(node, key, list(values))
        record_sets.append(Ref(node.id))
    b.put(root, "cr:recordSet", record_sets)

    return NodeGraph(
        nodes=b.nodes,
        root=root.id,
        context_version=md.conforms_to,
    )


def _emit_field(b: _GraphBuilder, f: FieldDef) -> str:
    node = b.add(f.id, ["cr:Field"])
    b.put(node, "cr:dataType", [t.term for t in f.data_types])
    if f.source is not None:
        source = b.add(None, [])
        kind_key = "cr:fileObject" if f.source.target_kind == "fileObject" else "cr:fileSet"
        b.put(source, kind_key, [Ref(f.source.target_id)])
        extract = b.add(None, [])
        ex = f.source.extract
        if isinstance(ex, ColumnExtract):
            b.put(extract, "cr:column", [ex.name])
        elif isinstance(ex, FilePropertyExtract):
            b.put(extract, "cr:fileProperty", [ex.prop])
        else:
            b.put(extract, "cr:jsonPath", [ex.expr])
        b.put(source, "cr:extract", [Ref(extract.id)])
        transforms: list[PropertyValue] = []
        for t in f.source.transforms:
            t_node = b.add(None, [])
            if isinstance(t, RegexTransform):
                b.put(t_node, "cr:regex", [t.pattern])
            elif isinstance(t, SeparatorTransform):
                b.put(t_node, "cr:separator", [t.sep])
            else:
                r_node = b.add(None, [])
                b.put(r_node, "cr:find", [t.find])
                b.put(r_node, "cr:with", [t.replacement])
                b.put(t_node, "cr:replace", [Ref(r_node.id)])
            transforms.append(Ref(t_node.id))
        b.put(source, "cr:transform", transforms)
        b.put(node, "cr:source", [Ref(source.id)])
    if f.references is not None:
        ref = b.add(None, [])
        b.put(ref, "cr:fileObject", [Ref(f.references.target_id)])
        b.put(ref, "cr:column", [f.references.column])
        b.put(node, "cr:references", [Ref(ref.id)])
    b.put(node, "cr:subField", [Ref(_emit_field(b, sub)) for sub in f.sub_fields])
    for key, values in f.extras.items():
        b.put(node, key, list(values))
    return node.id
