"""Corpus health: crawl many Croissant documents, validate, compute metrics.

A corpus is a local directory of *.json files or a remote listing endpoint;
every document is attempted exactly once and per-document failures never
abort the scan. Aggregates (mean, population stddev) cover valid docs only.
"""

from __future__ import annotations

import json
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Callable
from urllib.parse import urlparse

from .errors import CroissantError
from .graph import load_document
from .model import DatasetModel, FileObject, FileSet, from_graph, walk_fields
from .validation import validate

METRICS = ("fileObjects", "fileSets", "recordSets", "fields")


@dataclass
class DocResult:
    id: str
    status: str  # valid | invalid | parseFailed | fetchFailed
    counts: dict[str, int] | None = None
    detail: str = ""

    def to_json(self) -> dict:
        row: dict = {"id": self.id, "status": self.status}
        for metric in METRICS:
            row[metric] = self.counts[metric] if self.counts else None
        if self.detail:
            row["detail"] = self.detail
        return row


@dataclass
class HealthReport:
    per_doc: list[DocResult] = dc_field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.per_doc)

    @property
    def fetch_failed(self) -> int:
        return sum(1 for d in self.per_doc if d.status == "fetchFailed")

    @property
    def downloaded(self) -> int:
        return self.total - self.fetch_failed

    @property
    def parse_failed(self) -> int:
        return sum(1 for d in self.per_doc if d.status == "parseFailed")

    @property
    def invalid(self) -> int:
        return sum(1 for d in self.per_doc if d.status == "invalid")

    @property
    def valid(self) -> int:
        return sum(1 for d in self.per_doc if d.status == "valid")

    @property
    def invalid_rate(self) -> float | None:
        if self.downloaded == 0:
            return None
        return self.invalid / self.downloaded

    def aggregates(self) -> dict[str, dict[str, float]] | None:
        valid_docs = [d for d in self.per_doc if d.status == "valid"]
        if not valid_docs:
            return None
        out = {}
        for metric in METRICS:
            values = [d.counts[metric] for d in valid_docs]
            out[metric] = {
                "mean": statistics.mean(values),
                "stddev": statistics.pstdev(values),
            }
        return out


def model_counts(model: DatasetModel) -> dict[str, int]:
    fields = sum(
        sum(1 for _ in walk_fields(rs)) for rs in model.record_sets
    )
    return {
        "fileObjects": sum(1 for r in model.resources if isinstance(r, FileObject)),
        "fileSets": sum(1 for r in model.resources if isinstance(r, FileSet)),
        "recordSets": len(model.record_sets),
        "fields": fields,
    }


def check_document(doc_id: str, data: bytes) -> DocResult:
    try:
        model = from_graph(load_document(data))
    except CroissantError as exc:
        return DocResult(id=doc_id, status="parseFailed", detail=str(exc))
    counts = model_counts(model)
    report = validate(model)
    status = "valid" if report.passed else "invalid"
    detail = ""
    if not report.passed:
        detail = "; ".join(i.code for i in report.errors()[:3])
    return DocResult(id=doc_id, status=status, counts=counts, detail=detail)


# --- corpus enumeration ----------------------------------------------------------

# A listing adapter maps (listing URL, response bytes) -> document URLs.
ListingAdapter = Callable[[str, bytes], list[str]]


def _adapter_json_array(listing_url: str, body: bytes) -> list[str]:
    doc = json.loads(body)
    urls = []
    for item in doc:
        if isinstance(item, str):
            urls.append(item)
        elif isinstance(item, dict) and isinstance(item.get("url"), str):
            urls.append(item["url"])
    return urls


def _adapter_hf_like(listing_url: str, body: bytes) -> list[str]:
    """Listing of dataset ids; documents live at /api/datasets/<id>/croissant."""
    parsed = urlparse(listing_url)
    base = f"{parsed.scheme}://{parsed.netloc}"
    doc = json.loads(body)
    urls = []
    for item in doc:
        dataset_id = item if isinstance(item, str) else (
            item.get("id") if isinstance(item, dict) else None
        )
        if dataset_id:
            urls.append(f"{base}/api/datasets/{dataset_id}/croissant")
    return urls


ADAPTERS: dict[str, ListingAdapter] = {
    "json-array": _adapter_json_array,
    "hf-like": _adapter_hf_like,
}


def _scan_jobs(
    source: str | Path, limit: int | None, adapter: str
) -> list[tuple[str, Callable[[], bytes]]]:
    """One (doc id, byte loader) job per corpus document."""
    if isinstance(source, Path) or not urlparse(str(source)).scheme in ("http", "https"):
        directory = Path(source)
        paths = sorted(directory.glob("*.json"))
        if limit is not None:
            paths = paths[:limit]
        return [(p.stem, (lambda path=p: path.read_bytes())) for p in paths]

    import requests

    listing_url = str(source)
    response = requests.get(listing_url, timeout=60)
    response.raise_for_status()
    parse_listing = ADAPTERS[adapter]
    urls = parse_listing(listing_url, response.content)
    if limit is not None:
        urls = urls[:limit]

    def loader(url: str) -> Callable[[], bytes]:
        def fetch_doc() -> bytes:
            resp = requests.get(url, timeout=60)
            resp.raise_for_status()
            return resp.content

        return fetch_doc

    return [(url, loader(url)) for url in urls]


def scan_corpus(
    source: str | Path,
    *,
    limit: int | None = None,
    workers: int = 8,
    adapter: str = "json-array",
) -> HealthReport:
    """Scan a corpus directory or listing endpoint into a HealthReport."""
    jobs = _scan_jobs(source, limit, adapter)

    def run(job: tuple[str, Callable[[], bytes]]) -> DocResult:
        doc_id, load = job
        try:
            data = load()
        except Exception as exc:
            return DocResult(id=doc_id, status="fetchFailed", detail=str(exc))
        return check_document(doc_id, data)

    if workers <= 1:
        results = [run(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, jobs))

    results.sort(key=lambda d: d.id)
    report = HealthReport(per_doc=results)
    # count conservation, asserted on every scan
    assert report.total == report.downloaded + report.fetch_failed
    assert report.downloaded == report.parse_failed + report.invalid + report.valid
    return report


# --- serialization ---------------------------------------------------------------


def report_to_json(report: HealthReport) -> bytes:
    payload = {
        "schema": 1,
        "total": report.total,
        "downloaded": report.downloaded,
        "fetchFailed": report.fetch_failed,
        "parseFailed": report.parse_failed,
        "invalid": report.invalid,
        "valid": report.valid,
        "invalidRate": report.invalid_rate,
        "aggregates": report.aggregates(),
        "perDoc": [d.to_json() for d in report.per_doc],
    }
    return json.dumps(payload, indent=2, ensure_ascii=False).encode("utf-8")


def report_to_table(report: HealthReport) -> str:
    lines = []
    rate = report.invalid_rate
    lines.append("corpus health")
    lines.append("-------------")
    lines.append(f"total         {report.total:>6}")
    lines.append(f"downloaded    {report.downloaded:>6}")
    lines.append(f"fetch failed  {report.fetch_failed:>6}")
    lines.append(f"parse failed  {report.parse_failed:>6}")
    lines.append(f"invalid       {report.invalid:>6}")
    lines.append(f"valid         {report.valid:>6}")
    lines.append(
        "invalid rate  " + (f"{rate * 100:>5.1f}%" if rate is not None else "   n/a")
    )
    aggregates = report.aggregates()
    if aggregates is not None:
        lines.append("")
        lines.append(f"{'metric':<12} {'mean':>10} {'stddev':>10}")
        for metric in METRICS:
            stats = aggregates[metric]
            lines.append(
                f"{metric:<12} {stats['mean']:>10.3f} {stats['stddev']:>10.3f}"
            )
    lines.append("")
    width = max([len(d.id) for d in report.per_doc], default=2)
    header = f"{'id':<{width}} {'status':<12} " + " ".join(
        f"{m:>11}" for m in METRICS
    )
    lines.append(header)
    for d in report.per_doc:
        counts = [
            f"{d.counts[m]:>11}" if d.counts else f"{'-':>11}" for m in METRICS
        ]
        lines.append(f"{d.id:<{width}} {d.status:<12} " + " ".join(counts))
    return "\n".join(lines) + "\n"
