"""Bootstrap resources and RecordSet definitions from uploaded data.

Inference rules: a CSV becomes a FileObject plus one RecordSet with a field
per column (types guessed by value sniffing); an archive becomes a FileObject
plus one FileSet per distinct member extension with a ``*.<ext>`` include.
"""

from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import io
import posixpath
import re
import tarfile
import zipfile
from pathlib import Path

from .errors import CroissantError
from .model import (
    ColumnExtract,
    DataType,
    DatasetModel,
    DatasetMetadata,
    FieldDef,
    FileObject,
    FileSet,
    RecordSetDef,
    SourceSpec,
)

_SNIFF_ROWS = 100

CSV_SUFFIXES = (".csv",)
TAR_SUFFIXES = (".tar", ".tar.gz", ".tgz")
ZIP_SUFFIXES = (".zip",)


class UnsupportedUpload(CroissantError):
    def __init__(self, filename: str) -> None:
        super().__init__(
            f"cannot infer structure from {filename!r}; "
            "supported uploads: .csv, .tar, .tar.gz, .tgz, .zip"
        )


def slugify(text: str) -> str:
    slug = re.sub(r"[^A-Za-z0-9_\-]+", "-", text).strip("-")
    return slug or "resource"


def guess_column_type(values: list[str]) -> DataType:
    nonempty = [v for v in values if v != ""]
    if not nonempty:
        return DataType.TEXT
    if all(re.fullmatch(r"[+-]?\d+", v) for v in nonempty):
        return DataType.INTEGER
    if all(_is_float(v) for v in nonempty):
        return DataType.FLOAT
    if all(_is_iso_date(v) for v in nonempty):
        return DataType.DATE
    return DataType.TEXT


def _is_float(value: str) -> bool:
    try:
        float(value)
        return True
    except ValueError:
        return False


def _is_iso_date(value: str) -> bool:
    try:
        _dt.date.fromisoformat(value)
        return True
    except ValueError:
        return False


def infer_from_upload(filename: str, data: bytes, stored_url: str) -> DatasetModel:
    """Build the inferred resources + record sets for one uploaded file.

    stored_url is where the upload was persisted; it becomes the contentUrl.
    """
    lowered = filename.lower()
    if lowered.endswith(CSV_SUFFIXES):
        return _infer_csv(filename, data, stored_url)
    if lowered.endswith(TAR_SUFFIXES) or lowered.endswith(ZIP_SUFFIXES):
        return _infer_archive(filename, data, stored_url)
    raise UnsupportedUpload(filename)


def _stem(filename: str) -> str:
    name = Path(filename).name
    for suffix in TAR_SUFFIXES + ZIP_SUFFIXES + CSV_SUFFIXES:
        if name.lower().endswith(suffix):
            return name[: -len(suffix)]
    return Path(name).stem


def _infer_csv(filename: str, data: bytes, stored_url: str) -> DatasetModel:
    stem = slugify(_stem(filename))
    text = data.decode("utf-8", errors="replace")
    reader = csv.DictReader(io.StringIO(text))
    columns = reader.fieldnames or []
    samples: dict[str, list[str]] = {c: [] for c in columns}
    for i, row in enumerate(reader):
        if i >= _SNIFF_ROWS:
            break
        for c in columns:
            samples[c].append(row.get(c) or "")

    file_object = FileObject(
        id=stem,
        content_url=stored_url,
        encoding_format="text/csv",
        sha256=hashlib.sha256(data).hexdigest(),
    )
    fields = [
        FieldDef(
            id=f"{stem}_records/{slugify(c)}",
            data_types=[guess_column_type(samples[c])],
            source=SourceSpec(
                target_id=stem,
                target_kind="fileObject",
                extract=ColumnExtract(c),
            ),
        )
        for c in columns
    ]
    record_set = RecordSetDef(id=f"{stem}_records", fields=fields)
    return DatasetModel(
        metadata=_skeleton_metadata(stem),
        resources=[file_object],
        record_sets=[record_set],
    )


def _infer_archive(filename: str, data: bytes, stored_url: str) -> DatasetModel:
    stem = slugify(_stem(filename))
    lowered = filename.lower()
    if lowered.endswith(ZIP_SUFFIXES):
        archive_format = "application/zip"
        with zipfile.ZipFile(io.BytesIO(data)) as zf:
            members = [i.filename for i in zf.infolist() if not i.is_dir()]
    else:
        archive_format = (
            "application/x-tar" if lowered.endswith(".tar") else "application/gzip"
        )
        with tarfile.open(fileobj=io.BytesIO(data), mode="r:*") as tar:
            members = [m.name for m in tar.getmembers() if m.isfile()]

    file_object = FileObject(
        id=stem,
        content_url=stored_url,
        encoding_format=archive_format,
        sha256=hashlib.sha256(data).hexdigest(),
    )
    extensions: list[str] = []
    for member in members:
        ext = posixpath.splitext(member)[1].lstrip(".").lower()
        if ext and ext not in extensions:
            extensions.append(ext)
    file_sets = [
        FileSet(
            id=f"{stem}-{ext}-files",
            contained_in=stem,
            includes=[f"*.{ext}"],
            encoding_format=_MIME_BY_EXT.get(ext, "application/octet-stream"),
        )
        for ext in sorted(extensions)
    ]
    return DatasetModel(
        metadata=_skeleton_metadata(stem),
        resources=[file_object, *file_sets],
    )


def _skeleton_metadata(stem: str) -> DatasetMetadata:
    from .context import CONFORMS_TO_1_0

    # placeholder description keeps the skeleton valid until the author edits it
    return DatasetMetadata(
        name=stem,
        description=f"Imported from {stem}.",
        conforms_to=CONFORMS_TO_1_0,
    )


_MIME_BY_EXT = {
    "jpg": "image/jpeg",
    "jpeg": "image/jpeg",
    "png": "image/png",
    "txt": "text/plain",
    "csv": "text/csv",
    "json": "application/json",
    "wav": "audio/wav",
    "mp3": "audio/mpeg",
}
