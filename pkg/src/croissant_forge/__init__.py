"""croissant-forge: an independent Croissant 1.0 toolkit.

Parse and validate Croissant JSON-LD, fetch and verify the described
resources, and stream fully-joined typed records out of any conformant
dataset description.
"""

from .dataset import Dataset
from .errors import CroissantError
from .graph import NodeGraph, load_document, to_canonical_json
from .health import HealthReport, scan_corpus
from .model import (
    BoundingBox,
    DatasetModel,
    DataType,
    FileObject,
    FileSet,
    RecordSetDef,
    from_graph,
    to_graph,
)
from .records import RecordStats, iter_records, parse_slice
from .resources import Cache, FileEntry, LocalResource, ResourceStore
from .validation import ValidationReport, validate

__version__ = "0.1.0"

__all__ = [
    "BoundingBox",
    "Cache",
    "CroissantError",
    "Dataset",
    "DatasetModel",
    "DataType",
    "FileEntry",
    "FileObject",
    "FileSet",
    "HealthReport",
    "LocalResource",
    "NodeGraph",
    "RecordSetDef",
    "RecordStats",
    "ResourceStore",
    "ValidationReport",
    "from_graph",
    "iter_records",
    "load_document",
    "parse_slice",
    "scan_corpus",
    "to_canonical_json",
    "to_graph",
    "validate",
    "__version__",
]
