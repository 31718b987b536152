"""croissant-forge command line: validate / inspect / records / health / serve.

Exit codes: 0 success, 1 validation failed, 2 usage error, 3 fetch/IO error,
4 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from urllib.parse import urlparse

from . import graph, health, model, records
from . import validation
from .errors import (
    ArchiveMemberMissing,
    ChecksumMismatch,
    CorruptArchive,
    CroissantError,
    FetchFailed,
    MalformedJson,
    MultipleDatasetNodes,
    NoDatasetNode,
    NotAnArchive,
    PlanError,
    ShapeError,
    SliceSyntax,
    UnsupportedArchiveFormat,
)
from .resources import ResourceStore

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_FETCH = 3
EXIT_INTERNAL = 4

_DOCUMENT_ERRORS = (MalformedJson, NoDatasetNode, MultipleDatasetNodes, ShapeError)
_FETCH_ERRORS = (
    FetchFailed,
    ChecksumMismatch,
    ArchiveMemberMissing,
    NotAnArchive,
    UnsupportedArchiveFormat,
    CorruptArchive,
    OSError,
)


def _read_document(arg: str) -> tuple[bytes, str | None]:
    """Load raw document bytes from a path, '-' (stdin), or an HTTP URL."""
    if arg == "-":
        return sys.stdin.buffer.read(), None
    scheme = urlparse(arg).scheme
    if scheme in ("http", "https"):
        import requests

        try:
            response = requests.get(arg, timeout=60)
            response.raise_for_status()
        except requests.RequestException as exc:
            raise FetchFailed(arg, str(exc)) from exc
        return response.content, arg
    path = Path(arg)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise FetchFailed(arg, str(exc)) from exc
    return data, str(path.parent)


def _load_model(arg: str):
    data, base = _read_document(arg)
    g = graph.load_document(data)
    return g, model.from_graph(g), base


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        _g, m, _base = _load_model(args.document)
    except _DOCUMENT_ERRORS as exc:
        if args.json:
            print(json.dumps({"passed": False, "error": str(exc)}))
        else:
            print(f"invalid document: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    report = validation.validate(m)
    if args.json:
        sys.stdout.write(validation.report_to_json(report).decode("utf-8") + "\n")
    else:
        counts = report.counts
        status = "passed" if report.passed else "failed"
        parts = []
        if counts["error"]:
            parts.append(f"{counts['error']} error" + ("s" if counts["error"] != 1 else ""))
        if counts["warning"]:
            parts.append(
                f"{counts['warning']} warning" + ("s" if counts["warning"] != 1 else "")
            )
        suffix = f" ({', '.join(parts)})" if parts else ""
        print(f"{status}{suffix}")
        for issue in report.issues:
            print(f"  {issue.severity.upper():<7} {issue.code:<26} {issue.path}: {issue.message}")
    return EXIT_OK if report.passed else EXIT_VALIDATION


def cmd_inspect(args: argparse.Namespace) -> int:
    g, m, _base = _load_model(args.document)
    if args.json:
        sys.stdout.write(graph.to_canonical_json(g).decode("utf-8"))
        return EXIT_OK
    md = m.metadata
    file_objects = [r for r in m.resources if isinstance(r, model.FileObject)]
    file_sets = [r for r in m.resources if isinstance(r, model.FileSet)]
    print(f"name:        {md.name}")
    print(f"description: {md.description}")
    print(f"license:     {md.license or '-'}")
    print(f"url:         {md.url or '-'}")
    print(f"conformsTo:  {md.conforms_to or '-'}")
    if not m.rai.is_empty():
        print("rai:         present")
    plural_fo = "s" if len(file_objects) != 1 else ""
    plural_fs = "s" if len(file_sets) != 1 else ""
    print(f"resources:   {len(file_objects)} FileObject{plural_fo}, {len(file_sets)} FileSet{plural_fs}")
    for r in m.resources:
        if isinstance(r, model.FileObject):
            where = f" in {r.contained_in}" if r.contained_in else ""
            print(f"  - {r.id} (FileObject, {r.encoding_format}){where}")
        else:
            print(
                f"  - {r.id} (FileSet, {r.encoding_format}) in {r.contained_in}, "
                f"includes {', '.join(r.includes)}"
            )
    plural_rs = "s" if len(m.record_sets) != 1 else ""
    print(f"record sets: {len(m.record_sets)} RecordSet{plural_rs}")
    for rs in m.record_sets:
        n_fields = len(rs.fields)
        nested = [f for f in rs.fields if f.sub_fields]
        nested_note = ""
        if nested:
            nested_note = ", " + ", ".join(
                f"{f.id} with {len(f.sub_fields)} subFields" for f in nested
            )
        key_note = f", key={rs.key}" if rs.key else ""
        plural_f = "s" if n_fields != 1 else ""
        print(f"  - {rs.id}: {n_fields} field{plural_f}{key_note}{nested_note}")
    return EXIT_OK


def cmd_records(args: argparse.Namespace) -> int:
    try:
        _g, m, base = _load_model(args.document)
    except _DOCUMENT_ERRORS as exc:
        print(f"invalid document: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    stats = records.RecordStats()
    try:
        store = ResourceStore(m, base=base)
        stream = records.iter_records(
            m,
            args.record_set,
            store=store,
            slice_spec=args.slice,
            split=args.split,
            limit=args.limit,
            strict=args.strict,
            stats=stats,
        )
        if args.output == "jsonl":
            for record in stream:
                print(records.record_to_jsonl(record))
        else:
            first = None
            count = 0
            for record in stream:
                if first is None:
                    first = record
                count += 1
            print(f"{count} records from {args.record_set!r}")
            if first is not None:
                print("first record:")
                print(
                    json.dumps(
                        {k: records.value_to_json(v) for k, v in first.items()},
                        indent=2,
                        ensure_ascii=False,
                    )
                )
    except (PlanError, SliceSyntax) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if stats.warnings and not args.quiet:
        print(f"{len(stats.warnings)} warnings", file=sys.stderr)
    return EXIT_OK


def cmd_health(args: argparse.Namespace) -> int:
    report = health.scan_corpus(
        args.source,
        limit=args.limit,
        workers=args.workers,
        adapter=args.adapter,
    )
    if args.json:
        sys.stdout.write(health.report_to_json(report).decode("utf-8") + "\n")
    else:
        sys.stdout.write(health.report_to_table(report))
    return EXIT_OK


def _find_static_dir(explicit: str | None) -> str | None:
    if explicit:
        return explicit
    candidate = Path(__file__).resolve().parent.parent.parent / "frontend" / "dist"
    if candidate.is_dir():
        return str(candidate)
    if Path("frontend/dist").is_dir():
        return "frontend/dist"
    return None


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(static_dir=_find_static_dir(args.static))
    if args.open:
        import webbrowser

        webbrowser.open(f"http://{args.host}:{args.port}/")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="croissant-forge",
        description="Parse, validate, and stream records out of Croissant 1.0 "
        "dataset descriptions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a document against the 1.0 rules")
    p.add_argument("document", help="path, URL, or - for stdin")
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("inspect", help="summarize metadata and inventory")
    p.add_argument("document", help="path, URL, or - for stdin")
    p.add_argument("--json", action="store_true", help="emit the canonical document")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("records", help="stream joined records as JSON lines")
    p.add_argument("document", help="path, URL, or - for stdin")
    p.add_argument("--record-set", required=True, help="record set id to execute")
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--slice", default=None, help='e.g. "default[:80%%]"')
    p.add_argument("--split", default=None, help="keep rows whose split field equals this")
    p.add_argument("--output", choices=("jsonl", "summary"), default="jsonl")
    p.add_argument("--strict", action="store_true", help="abort on first record error")
    p.add_argument("--quiet", action="store_true", help="suppress warning summary")
    p.set_defaults(func=cmd_records)

    p = sub.add_parser("health", help="scan a corpus and compute metrics")
    p.add_argument("source", help="directory of *.json files or a listing URL")
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--workers", type=int, default=8)
    p.add_argument("--adapter", choices=sorted(health.ADAPTERS), default="json-array")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_health)

    p = sub.add_parser("serve", help="run the editor API (and UI when built)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8230)
    p.add_argument("--static", default=None, help="editor asset directory")
    p.add_argument("--open", action="store_true", help="open a browser tab")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _DOCUMENT_ERRORS as exc:
        print(f"invalid document: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (PlanError, SliceSyntax) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _FETCH_ERRORS as exc:
        print(f"fetch error: {exc}", file=sys.stderr)
        return EXIT_FETCH
    except CroissantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
