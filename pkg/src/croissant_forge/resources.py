"""Turn the resource layer into local bytes.

FileObjects are fetched (http(s), file paths, data: URIs) into a
content-addressed cache keyed by sha256(url + declared sha256); declared
checksums are always re-verified, and a blob only becomes visible after the
digest check (temp file + atomic rename). FileSets resolve to ordered member
lists over tar/zip archives or directories.
"""

from __future__ import annotations

import base64
import datetime as _dt
import hashlib
import json
import os
import posixpath
import shutil
import tarfile
import threading
import zipfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import BinaryIO, Callable
from urllib.parse import urlparse, urljoin, unquote

import requests
from filelock import FileLock

from .errors import (
    ArchiveMemberMissing,
    ChecksumMismatch,
    CorruptArchive,
    FetchFailed,
    NotAnArchive,
    UnsupportedArchiveFormat,
)
from .globmatch import GlobSet
from .model import DatasetModel, FileObject, FileSet

CACHE_ENV = "CROISSANT_FORGE_CACHE"
DEFAULT_CACHE = "~/.cache/croissant-forge"

TAR_FORMATS = {
    "application/x-tar",
    "application/gzip",
    "application/x-gtar",
    "application/x-gzip",
}
ZIP_FORMATS = {"application/zip"}
ARCHIVE_FORMATS = TAR_FORMATS | ZIP_FORMATS


@dataclass(frozen=True)
class LocalResource:
    resource_id: str
    local_path: Path
    verified: bool
    encoding_format: str

    def read_bytes(self) -> bytes:
        return self.local_path.read_bytes()


@dataclass(frozen=True)
class FileEntry:
    """One concrete file, possibly inside an archive, content read lazily."""

    owner_id: str
    fullpath: str  # '/'-separated, relative to archive root
    opener: Callable[[], BinaryIO] = dc_field(compare=False)

    @property
    def filename(self) -> str:
        return posixpath.basename(self.fullpath)

    def open(self) -> BinaryIO:
        return self.opener()

    def read_bytes(self) -> bytes:
        with self.open() as stream:
            return stream.read()


# --- config ------------------------------------------------------------------


def load_config(path: str | Path) -> dict[str, dict[str, str]]:
    """Parse the croissant-forge.toml-style config.

    Format: ``[section]`` headers followed by ``key = "value"`` lines; ``#``
    starts a comment. The ``[hosts]`` section maps host names to bearer
    tokens sent with requests to that host.
    """
    sections: dict[str, dict[str, str]] = {}
    current: dict[str, str] | None = None
    for raw_line in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = sections.setdefault(line[1:-1].strip(), {})
            continue
        if "=" in line and current is not None:
            key, _, value = line.partition("=")
            value = value.strip()
            if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
                value = value[1:-1]
            current[key.strip()] = value
    return sections


# --- cache -------------------------------------------------------------------


class Cache:
    """Content-addressed download cache: <cache>/<key>/blob + meta.json."""

    def __init__(self, root: str | Path | None = None) -> None:
        if root is None:
            root = os.environ.get(CACHE_ENV) or DEFAULT_CACHE
        self.root = Path(root).expanduser()
        self.root.mkdir(parents=True, exist_ok=True)

    def key_for(self, url: str, declared_sha256: str | None) -> str:
        material = f"{url}\n{declared_sha256 or ''}".encode("utf-8")
        return hashlib.sha256(material).hexdigest()

    def lock(self, key: str) -> FileLock:
        return FileLock(str(self.root / f"{key}.lock"))

    def lookup(self, key: str) -> tuple[Path, dict] | None:
        blob = self.root / key / "blob"
        meta = self.root / key / "meta.json"
        if blob.is_file() and meta.is_file():
            try:
                return blob, json.loads(meta.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError):
                return None
        return None

    def store(
        self,
        key: str,
        write_to: Callable[[BinaryIO], None],
        url: str,
        declared_sha256: str | None,
    ) -> tuple[Path, dict]:
        """Write bytes via write_to, verify, then atomically publish."""
        key_dir = self.root / key
        key_dir.mkdir(parents=True, exist_ok=True)
        tmp = key_dir / f".tmp-{os.getpid()}-{threading.get_ident()}"
        try:
            with open(tmp, "wb") as out:
                write_to(out)
            digest = _sha256_file(tmp)
            if declared_sha256 is not None and digest != declared_sha256:
                raise ChecksumMismatch(url, declared_sha256, digest)
            blob = key_dir / "blob"
            os.replace(tmp, blob)
        finally:
            if tmp.exists():
                tmp.unlink()
        meta = {
            "url": url,
            "sha256": digest,
            "declaredSha256": declared_sha256,
            "verified": declared_sha256 is not None,
            "fetchTime": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        }
        (key_dir / "meta.json").write_text(
            json.dumps(meta, indent=2) + "\n", encoding="utf-8"
        )
        return blob, meta


def _sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as stream:
        for chunk in iter(lambda: stream.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


# --- fetching ----------------------------------------------------------------


def resolve_url(content_url: str, base: str | Path | None) -> str:
    """Resolve a contentUrl against the document location.

    base is either the document's own URL (http) or its directory (local).
    """
    parsed = urlparse(content_url)
    if parsed.scheme in ("http", "https", "data", "file"):
        return content_url
    if Path(content_url).is_absolute():
        return content_url
    if base is None:
        return content_url
    if isinstance(base, str) and urlparse(base).scheme in ("http", "https"):
        return urljoin(base, content_url)
    return str(Path(base) / content_url)


def _http_session(config: dict | None) -> requests.Session:
    session = requests.Session()
    session.max_redirects = 5
    return session


def _auth_headers(url: str, config: dict | None) -> dict[str, str]:
    if not config:
        return {}
    token = config.get("hosts", {}).get(urlparse(url).hostname or "")
    return {"Authorization": f"Bearer {token}"} if token else {}


def fetch(
    file_object: FileObject,
    cache: Cache,
    *,
    parent: LocalResource | None = None,
    base: str | Path | None = None,
    config: dict | None = None,
) -> LocalResource:
    """Materialize one FileObject on local disk, verifying its checksum.

    Archive members (containedIn set) are extracted from parent; everything
    else is resolved from contentUrl.
    """
    declared = file_object.sha256
    if file_object.contained_in is not None:
        if parent is None:
            raise FetchFailed(
                file_object.content_url,
                f"resource {file_object.id!r} is contained in "
                f"{file_object.contained_in!r} which was not provided",
            )
        return _fetch_member(file_object, cache, parent)

    url = resolve_url(file_object.content_url, base)
    scheme = urlparse(url).scheme

    if scheme in ("http", "https"):
        key = cache.key_for(url, declared)
        with cache.lock(key):
            hit = cache.lookup(key)
            if hit is not None:
                blob, meta = hit
            else:
                def download(out: BinaryIO) -> None:
                    try:
                        with _http_session(config).get(
                            url,
                            stream=True,
                            timeout=60,
                            headers=_auth_headers(url, config),
                        ) as response:
                            response.raise_for_status()
                            for chunk in response.iter_content(1 << 20):
                                out.write(chunk)
                    except requests.RequestException as exc:
                        raise FetchFailed(url, str(exc)) from exc

                blob, meta = cache.store(key, download, url, declared)
        return LocalResource(
            resource_id=file_object.id,
            local_path=blob,
            verified=bool(meta.get("verified")),
            encoding_format=file_object.encoding_format,
        )

    if scheme == "data":
        payload = _decode_data_uri(url)
        key = cache.key_for(url, declared)
        with cache.lock(key):
            hit = cache.lookup(key)
            if hit is not None:
                blob, meta = hit
            else:
                blob, meta = cache.store(
                    key, lambda out: out.write(payload), url, declared
                )
        return LocalResource(
            resource_id=file_object.id,
            local_path=blob,
            verified=bool(meta.get("verified")),
            encoding_format=file_object.encoding_format,
        )

    # local filesystem: use in place, verify every time
    path = Path(unquote(urlparse(url).path)) if scheme == "file" else Path(url)
    if not path.exists():
        raise FetchFailed(url, "no such file")
    verified = False
    if declared is not None and path.is_file():
        digest = _sha256_file(path)
        if digest != declared:
            raise ChecksumMismatch(url, declared, digest)
        verified = True
    return LocalResource(
        resource_id=file_object.id,
        local_path=path,
        verified=verified,
        encoding_format=file_object.encoding_format,
    )


def _decode_data_uri(url: str) -> bytes:
    header, _, payload = url.partition(",")
    if not _:
        raise FetchFailed(url, "malformed data: URI")
    if header.endswith(";base64"):
        return base64.b64decode(payload)
    return unquote(payload).encode("utf-8")


def _fetch_member(
    file_object: FileObject, cache: Cache, parent: LocalResource
) -> LocalResource:
    member = file_object.content_url
    key = cache.key_for(f"{parent.local_path}!{member}", file_object.sha256)
    with cache.lock(key):
        hit = cache.lookup(key)
        if hit is not None:
            blob, meta = hit
        else:
            with open_archive(parent) as archive:
                normalized = _normalize_member(member)
                if normalized not in archive.names():
                    raise ArchiveMemberMissing(member, str(parent.local_path))

                def extract(out: BinaryIO) -> None:
                    with archive.open_member(normalized) as stream:
                        shutil.copyfileobj(stream, out)

                blob, meta = cache.store(
                    key, extract, f"{parent.local_path}!{member}", file_object.sha256
                )
    return LocalResource(
        resource_id=file_object.id,
        local_path=blob,
        verified=bool(meta.get("verified")),
        encoding_format=file_object.encoding_format,
    )


# --- archives ------------------------------------------------------------------


def _normalize_member(name: str) -> str:
    name = name.replace("\\", "/")
    while name.startswith("./"):
        name = name[2:]
    return name.strip("/")


class ArchiveHandle:
    """Streaming view over tar/zip members or a directory tree."""

    def names(self) -> list[str]:
        raise NotImplementedError

    def open_member(self, name: str) -> BinaryIO:
        raise NotImplementedError

    def close(self) -> None:
        pass

    def __enter__(self) -> "ArchiveHandle":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


class _TarHandle(ArchiveHandle):
    def __init__(self, path: Path) -> None:
        try:
            self.tar = tarfile.open(path, "r:*")
        except tarfile.TarError as exc:
            raise CorruptArchive(f"{path}: {exc}") from exc
        self.members = {}
        for member in self.tar.getmembers():
            if member.isfile():
                self.members[_normalize_member(member.name)] = member

    def names(self) -> list[str]:
        return list(self.members)

    def open_member(self, name: str) -> BinaryIO:
        member = self.members.get(_normalize_member(name))
        if member is None:
            raise ArchiveMemberMissing(name, self.tar.name or "<tar>")
        stream = self.tar.extractfile(member)
        if stream is None:  # pragma: no cover - isfile() filtered above
            raise ArchiveMemberMissing(name, self.tar.name or "<tar>")
        return stream

    def close(self) -> None:
        self.tar.close()


class _ZipHandle(ArchiveHandle):
    def __init__(self, path: Path) -> None:
        try:
            self.zip = zipfile.ZipFile(path)
        except zipfile.BadZipFile as exc:
            raise CorruptArchive(f"{path}: {exc}") from exc
        self.infos = {
            _normalize_member(info.filename): info
            for info in self.zip.infolist()
            if not info.is_dir()
        }

    def names(self) -> list[str]:
        return list(self.infos)

    def open_member(self, name: str) -> BinaryIO:
        info = self.infos.get(_normalize_member(name))
        if info is None:
            raise ArchiveMemberMissing(name, self.zip.filename or "<zip>")
        return self.zip.open(info)

    def close(self) -> None:
        self.zip.close()


class _DirHandle(ArchiveHandle):
    def __init__(self, path: Path) -> None:
        self.root = path
        found = []
        for dirpath, dirnames, filenames in os.walk(path):
            dirnames.sort()
            rel = Path(dirpath).relative_to(path)
            for filename in sorted(filenames):
                found.append((rel / filename).as_posix())
        self._names = found

    def names(self) -> list[str]:
        return self._names

    def open_member(self, name: str) -> BinaryIO:
        target = self.root / _normalize_member(name)
        if not target.is_file():
            raise ArchiveMemberMissing(name, str(self.root))
        return open(target, "rb")


def open_archive(resource: LocalResource) -> ArchiveHandle:
    """Open a fetched resource for member enumeration."""
    if resource.local_path.is_dir():
        return _DirHandle(resource.local_path)
    fmt = resource.encoding_format
    if fmt in TAR_FORMATS:
        return _TarHandle(resource.local_path)
    if fmt in ZIP_FORMATS:
        return _ZipHandle(resource.local_path)
    raise UnsupportedArchiveFormat(fmt)


def resolve_file_set(
    file_set: FileSet, parent: LocalResource, archive: ArchiveHandle | None = None
) -> list[FileEntry]:
    """All members matching includes minus excludes, lexicographic fullpath."""
    if archive is None:
        if not parent.local_path.is_dir() and parent.encoding_format not in ARCHIVE_FORMATS:
            raise NotAnArchive(
                f"{file_set.id}: containedIn resource {parent.resource_id!r} has "
                f"format {parent.encoding_format!r}, not an archive or directory"
            )
        archive = open_archive(parent)
    globs = GlobSet(file_set.includes, file_set.excludes)
    entries = []
    for name in sorted(archive.names()):
        if globs.matches(name):
            entries.append(
                FileEntry(
                    owner_id=file_set.id,
                    fullpath=name,
                    opener=(lambda n=name, a=archive: a.open_member(n)),
                )
            )
    return entries


# --- the store -----------------------------------------------------------------


class ResourceStore:
    """Binds a model to fetched local resources, with memoization."""

    def __init__(
        self,
        model: DatasetModel,
        *,
        base: str | Path | None = None,
        cache: Cache | None = None,
        config: dict | None = None,
    ) -> None:
        self.model = model
        self.base = base
        self.cache = cache if cache is not None else Cache()
        self.config = config
        self._locals: dict[str, LocalResource] = {}
        self._archives: dict[str, ArchiveHandle] = {}
        self._lock = threading.Lock()

    def close(self) -> None:
        with self._lock:
            for handle in self._archives.values():
                handle.close()
            self._archives.clear()

    def __enter__(self) -> "ResourceStore":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def _resource(self, resource_id: str):
        res = self.model.resource(resource_id)
        if res is None:
            raise FetchFailed(resource_id, "no such resource in the document")
        return res

    def local(self, resource_id: str) -> LocalResource:
        with self._lock:
            cached = self._locals.get(resource_id)
        if cached is not None:
            return cached
        res = self._resource(resource_id)
        if not isinstance(res, FileObject):
            raise FetchFailed(resource_id, "only FileObjects can be fetched directly")
        parent = None
        if res.contained_in is not None:
            parent = self.local(res.contained_in)
        result = fetch(
            res, self.cache, parent=parent, base=self.base, config=self.config
        )
        with self._lock:
            self._locals[resource_id] = result
        return result

    def archive(self, resource_id: str) -> ArchiveHandle:
        with self._lock:
            handle = self._archives.get(resource_id)
            if handle is not None:
                return handle
        local = self.local(resource_id)
        handle = open_archive(local)
        with self._lock:
            existing = self._archives.setdefault(resource_id, handle)
        if existing is not handle:
            handle.close()
        return existing

    def entries(self, file_set_id: str) -> list[FileEntry]:
        res = self._resource(file_set_id)
        if not isinstance(res, FileSet):
            raise FetchFailed(file_set_id, "not a FileSet")
        if res.contained_in is None:
            raise FetchFailed(file_set_id, "FileSet has no containedIn parent")
        parent_res = self._resource(res.contained_in)
        parent_local = self.local(res.contained_in)
        if (
            not parent_local.local_path.is_dir()
            and parent_res.encoding_format not in ARCHIVE_FORMATS
        ):
            raise NotAnArchive(
                f"{file_set_id}: containedIn resource {res.contained_in!r} has "
                f"format {parent_res.encoding_format!r}, not an archive or directory"
            )
        archive = self.archive(res.contained_in)
        return resolve_file_set(res, parent_local, archive)

    def file_entry(self, file_object_id: str) -> FileEntry:
        """A FileEntry view of a plain FileObject (for fileProperty extracts)."""
        res = self._resource(file_object_id)
        local = self.local(file_object_id)
        if res.contained_in is not None:
            fullpath = _normalize_member(res.content_url)
        else:
            fullpath = posixpath.basename(
                urlparse(resolve_url(res.content_url, self.base)).path
            ) or local.local_path.name
        return FileEntry(
            owner_id=file_object_id,
            fullpath=fullpath,
            opener=lambda: open(local.local_path, "rb"),
        )

    def prefetch(self, resource_ids: list[str], workers: int = 4) -> None:
        file_objects = [
            rid for rid in resource_ids
            if isinstance(self.model.resource(rid), FileObject)
        ]
        if not file_objects:
            return
        with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
            for result in pool.map(self.local, file_objects):
                _ = result
