"""Convenience facade: one object from document to records."""

from __future__ import annotations

from pathlib import Path
from urllib.parse import urlparse

from . import graph as graph_mod
from . import model as model_mod
from . import records as records_mod
from . import validation
from .errors import FetchFailed
from .resources import Cache, ResourceStore


class Dataset:
    """Load a Croissant document and stream its record sets.

    >>> ds = Dataset("tests/fixtures/minipass/minipass.json")
    >>> ds.validate().passed
    True
    >>> next(iter(ds.records("images")))["images/hash"]
    'aa'
    """

    def __init__(self, source: str | Path, *, cache: Cache | None = None) -> None:
        self.source = str(source)
        data, base = _read(self.source)
        self.graph = graph_mod.load_document(data)
        self.model = model_mod.from_graph(self.graph)
        self.base = base
        self._store = ResourceStore(self.model, base=base, cache=cache)

    @property
    def metadata(self) -> model_mod.DatasetMetadata:
        return self.model.metadata

    def validate(self) -> validation.ValidationReport:
        return validation.validate(self.model)

    def to_canonical_json(self) -> bytes:
        return graph_mod.to_canonical_json(self.graph)

    def record_sets(self) -> list[str]:
        return [rs.id for rs in self.model.record_sets]

    def records(
        self,
        record_set: str,
        *,
        slice_spec: str | None = None,
        split: str | None = None,
        limit: int | None = None,
        strict: bool = False,
        stats: records_mod.RecordStats | None = None,
    ):
        return records_mod.iter_records(
            self.model,
            record_set,
            store=self._store,
            slice_spec=slice_spec,
            split=split,
            limit=limit,
            strict=strict,
            stats=stats,
        )


def _read(source: str) -> tuple[bytes, str | None]:
    if urlparse(source).scheme in ("http", "https"):
        import requests

        try:
            response = requests.get(source, timeout=60)
            response.raise_for_status()
        except requests.RequestException as exc:
            raise FetchFailed(source, str(exc)) from exc
        return response.content, source
    path = Path(source)
    return path.read_bytes(), str(path.parent)
