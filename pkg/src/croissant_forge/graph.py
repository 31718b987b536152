"""Load Croissant JSON-LD into a normalized node graph and serialize it back.

The graph is the raw substrate every other layer reads: one Node per JSON-LD
object, stable ids (explicit ``@id`` or generated ``_:b<n>`` in depth-first
document order), property keys compacted onto the canonical context.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import context
from .errors import MalformedJson, MultipleDatasetNodes, NoDatasetNode

DATASET_TYPE = "sc:Dataset"
CONFORMS_TO_KEY = "dct:conformsTo"


@dataclass(frozen=True)
class Ref:
    """Reference to another node by id; may dangle (validate catches that)."""

    id: str


# literal text/number/boolean, or a Ref
PropertyValue = str | int | float | bool | Ref


@dataclass
class Node:
    id: str
    types: list[str] = field(default_factory=list)
    properties: dict[str, list[PropertyValue]] = field(default_factory=dict)

    def first(self, key: str) -> PropertyValue | None:
        values = self.properties.get(key)
        return values[0] if values else None

    def texts(self, key: str) -> list[str]:
        return [v for v in self.properties.get(key, []) if isinstance(v, str)]


@dataclass
class NodeGraph:
    nodes: dict[str, Node]
    root: str
    context_version: str = ""
    warnings: list[str] = field(default_factory=list, compare=False)

    @property
    def root_node(self) -> Node:
        return self.nodes[self.root]


class _Loader:
    def __init__(self, raw: object) -> None:
        self.nodes: dict[str, Node] = {}
        self.warnings: list[str] = []
        self.taken_ids = _collect_explicit_ids(raw)
        self.counter = 0

    def fresh_id(self) -> str:
        while True:
            candidate = f"_:b{self.counter}"
            self.counter += 1
            if candidate not in self.taken_ids:
                self.taken_ids.add(candidate)
                return candidate

    def warn(self, message: str) -> None:
        self.warnings.append(message)

    def node_for(self, obj: dict) -> str:
        raw_id = obj.get("@id")
        node_id = raw_id if isinstance(raw_id, str) else self.fresh_id()
        node = self.nodes.get(node_id)
        if node is None:
            node = Node(id=node_id)
            self.nodes[node_id] = node

        for raw_type in _as_list(obj.get("@type")):
            if not isinstance(raw_type, str):
                continue
            compacted, known = context.compact_type(raw_type)
            if not known:
                self.warn(f"unknown type {raw_type!r} on node {node_id}")
            if compacted not in node.types:
                node.types.append(compacted)

        for key, raw_value in obj.items():
            if key in ("@id", "@type", "@context", "@graph"):
                continue
            compacted, known = context.compact_key(key)
            if not known:
                self.warn(f"unknown term {key!r} on node {node_id}")
            values = self.convert_values(raw_value, compacted, node_id)
            if not values:
                continue
            node.properties.setdefault(compacted, []).extend(values)
        return node_id

    def convert_values(
        self, raw: object, key: str, owner: str
    ) -> list[PropertyValue]:
        out: list[PropertyValue] = []
        for item in _as_list(raw):
            if item is None:
                self.warn(f"null value for {key!r} on node {owner} dropped")
            elif isinstance(item, list):
                out.extend(self.convert_values(item, key, owner))
            elif isinstance(item, dict):
                if set(item.keys()) == {"@id"} and isinstance(item["@id"], str):
                    out.append(Ref(item["@id"]))
                elif not item:
                    # a bare {} carries nothing and cannot round-trip; drop it
                    self.warn(f"empty object value for {key!r} on node {owner} dropped")
                else:
                    out.append(Ref(self.node_for(item)))
            elif isinstance(item, str) and key == "cr:dataType":
                compacted, known = context.compact_type(item)
                if not known:
                    self.warn(f"unknown dataType {item!r} on node {owner}")
                out.append(compacted)
            elif isinstance(item, (str, bool, int, float)):
                out.append(item)
            else:
                self.warn(f"unsupported value for {key!r} on node {owner} dropped")
        return out


def _as_list(raw: object) -> list:
    if raw is None:
        return []
    if isinstance(raw, list):
        return raw
    return [raw]


def _collect_explicit_ids(raw: object) -> set[str]:
    found: set[str] = set()
    stack = [raw]
    while stack:
        item = stack.pop()
        if isinstance(item, dict):
            value = item.get("@id")
            if isinstance(value, str):
                found.add(value)
            stack.extend(item.values())
        elif isinstance(item, list):
            stack.extend(item)
    return found


def load_document(data: bytes | str) -> NodeGraph:
    """Parse Croissant JSON-LD text into a NodeGraph.

    Raises MalformedJson / NoDatasetNode / MultipleDatasetNodes. Unknown
    context terms are kept verbatim and reported via graph.warnings.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedJson(f"input is not UTF-8: {exc}") from exc
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedJson(str(exc)) from exc
    if not isinstance(raw, dict):
        raise MalformedJson("top-level JSON value must be an object")

    loader = _Loader(raw)
    if not (set(raw.keys()) <= {"@context", "@graph"}):
        loader.node_for(raw)
    for member in _as_list(raw.get("@graph")):
        if isinstance(member, dict):
            loader.node_for(member)

    dataset_ids = [n.id for n in loader.nodes.values() if DATASET_TYPE in n.types]
    if not dataset_ids:
        raise NoDatasetNode("no node typed sc:Dataset")
    if len(dataset_ids) > 1:
        raise MultipleDatasetNodes(f"multiple sc:Dataset nodes: {dataset_ids}")

    root = loader.nodes[dataset_ids[0]]
    conforms = root.first(CONFORMS_TO_KEY)
    return NodeGraph(
        nodes=loader.nodes,
        root=root.id,
        context_version=conforms if isinstance(conforms, str) else "",
        warnings=loader.warnings,
    )


_HEAD_KEYS = ("sc:name", "sc:description")


class _Emitter:
    def __init__(self, graph: NodeGraph) -> None:
        self.graph = graph
        self.emitted: set[str] = set()

    def emit(self, node_id: str, is_root: bool = False) -> dict:
        self.emitted.add(node_id)
        node = self.graph.nodes[node_id]
        out: dict = {}
        if node.types:
            out["@type"] = node.types[0] if len(node.types) == 1 else node.types
        out["@id"] = node.id

        props = dict(node.properties)
        if is_root and CONFORMS_TO_KEY not in props and self.graph.context_version:
            props[CONFORMS_TO_KEY] = [self.graph.context_version]

        ordered = [k for k in _HEAD_KEYS if k in props]
        ordered += sorted(
            (k for k in props if k not in _HEAD_KEYS),
            key=context.surface_key,
        )
        for key in ordered:
            values = [self.value(v) for v in props[key]]
            if not values:
                continue
            out[context.surface_key(key)] = values[0] if len(values) == 1 else values
        return out

    def value(self, v: PropertyValue) -> object:
        if isinstance(v, Ref):
            if v.id in self.graph.nodes and v.id not in self.emitted:
                return self.emit(v.id)
            return {"@id": v.id}
        return v


def to_canonical_json(graph: NodeGraph) -> bytes:
    """Serialize a NodeGraph to deterministic UTF-8 JSON.

    Properties are sorted lexicographically by surface key with @type, @id,
    name, description leading; each node is inlined at its first reference and
    stubbed as {"@id": ...} afterwards; nodes unreachable from the root land
    in a top-level "@graph" array.
    """
    emitter = _Emitter(graph)
    doc = emitter.emit(graph.root, is_root=True)
    leftovers = []
    for node_id in sorted(graph.nodes):
        if node_id not in emitter.emitted:
            leftovers.append(emitter.emit(node_id))
    if leftovers:
        doc["@graph"] = leftovers
    text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    return text.encode("utf-8")
