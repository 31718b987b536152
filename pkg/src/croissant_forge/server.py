"""Local HTTP service backing the authoring editor.

All validation, inference, and canonicalization logic lives here so the
editor holds no duplicate rule tables. Stateless between requests except the
upload scratch directory.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import FileResponse, JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from . import graph, model, records, validation
from .context import CONFORMS_TO_1_0
from .errors import CroissantError, PlanError, SliceSyntax
from .infer import UnsupportedUpload, infer_from_upload
from .model import RAI_KEYS
from .resources import Cache, ResourceStore
from .validation import DATASET_RECOMMENDED, DATASET_REQUIRED

MAX_UPLOAD_BYTES = 100 * 1024 * 1024

DATASET_ATTRIBUTES = [
    {"key": "name", "label": "Name", "kind": "text", "level": "required"},
    {"key": "description", "label": "Description", "kind": "multiline", "level": "required"},
    {"key": "conformsTo", "label": "Conforms to", "kind": "text", "level": "required"},
    {"key": "license", "label": "License", "kind": "text", "level": "recommended"},
    {"key": "url", "label": "URL", "kind": "text", "level": "recommended"},
    {"key": "citeAs", "label": "Cite as", "kind": "multiline", "level": "recommended"},
    {"key": "creator", "label": "Creator(s)", "kind": "list", "level": "recommended"},
    {"key": "datePublished", "label": "Date published", "kind": "date", "level": "recommended"},
    {"key": "publisher", "label": "Publisher(s)", "kind": "list", "level": "optional"},
    {"key": "inLanguage", "label": "Language(s)", "kind": "list", "level": "optional"},
    {"key": "version", "label": "Version", "kind": "text", "level": "optional"},
    {"key": "isLiveDataset", "label": "Live dataset", "kind": "boolean", "level": "optional"},
]

RAI_ATTRIBUTES = [
    {"key": "rai:dataCollection", "label": "Data collection", "useCase": "Data life cycle"},
    {"key": "rai:dataCollectionTimeframe", "label": "Collection timeframe", "useCase": "Data life cycle"},
    {"key": "rai:dataAnnotationPlatform", "label": "Annotation platform", "useCase": "Data labelling"},
    {"key": "rai:annotatorDemographics", "label": "Annotator demographics", "useCase": "Data labelling"},
    {"key": "rai:dataUseCases", "label": "Use cases", "useCase": "AI safety and fairness evaluation"},
    {"key": "rai:personalSensitiveInformation", "label": "Personal or sensitive information", "useCase": "Compliance"},
]


def _report_payload(report: validation.ValidationReport) -> dict:
    return json.loads(validation.report_to_json(report))


def _parse_failure_payload(exc: Exception) -> dict:
    """Parse/shape failures rendered as a report so the editor can show them."""
    issue = {
        "code": "MALFORMED_DOCUMENT",
        "severity": "error",
        "path": "dataset",
        "message": str(exc),
    }
    return {
        "passed": False,
        "counts": {"error": 1, "warning": 0, "info": 0},
        "issues": [issue],
    }


def _load_model(document: object):
    data = json.dumps(document)
    return model.from_graph(graph.load_document(data))


def create_app(
    *,
    static_dir: str | Path | None = None,
    cache: Cache | None = None,
    scratch_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="croissant-forge editor API")
    app.state.cache = cache if cache is not None else Cache()
    scratch = (
        Path(scratch_dir)
        if scratch_dir is not None
        else app.state.cache.root / "uploads"
    )
    scratch.mkdir(parents=True, exist_ok=True)

    @app.middleware("http")
    async def limit_upload_size(request: Request, call_next):
        length = request.headers.get("content-length")
        if length and int(length) > MAX_UPLOAD_BYTES:
            return JSONResponse({"error": "upload too large"}, status_code=413)
        return await call_next(request)

    @app.get("/api/schema")
    def api_schema() -> dict:
        return {
            "conformsTo": CONFORMS_TO_1_0,
            "required": list(DATASET_REQUIRED),
            "recommended": list(DATASET_RECOMMENDED),
            "datasetAttributes": DATASET_ATTRIBUTES,
            "raiAttributes": RAI_ATTRIBUTES,
            "raiKeys": sorted(RAI_KEYS),
        }

    @app.post("/api/validate")
    async def api_validate(request: Request) -> JSONResponse:
        try:
            document = json.loads(await request.body())
        except json.JSONDecodeError:
            return JSONResponse({"error": "body is not JSON"}, status_code=400)
        try:
            m = _load_model(document)
        except CroissantError as exc:
            return JSONResponse(_parse_failure_payload(exc))
        return JSONResponse(_report_payload(validation.validate(m)))

    @app.post("/api/canonicalize")
    async def api_canonicalize(request: Request) -> Response:
        try:
            document = json.loads(await request.body())
        except json.JSONDecodeError:
            return JSONResponse({"error": "body is not JSON"}, status_code=400)
        try:
            g = graph.load_document(json.dumps(document))
        except CroissantError as exc:
            return JSONResponse({"error": str(exc)}, status_code=422)
        return Response(
            content=graph.to_canonical_json(g), media_type="application/json"
        )

    @app.post("/api/infer")
    async def api_infer(request: Request, filename: str = "upload.bin") -> JSONResponse:
        data = await request.body()
        if len(data) > MAX_UPLOAD_BYTES:
            return JSONResponse({"error": "upload too large"}, status_code=413)
        if not data:
            return JSONResponse({"error": "empty upload"}, status_code=400)
        digest = hashlib.sha256(data).hexdigest()[:16]
        target_dir = scratch / digest
        target_dir.mkdir(parents=True, exist_ok=True)
        stored = target_dir / Path(filename).name
        stored.write_bytes(data)
        try:
            inferred = infer_from_upload(filename, data, str(stored))
        except UnsupportedUpload as exc:
            return JSONResponse({"error": str(exc)}, status_code=415)
        except Exception as exc:
            return JSONResponse(
                {"error": f"cannot read upload: {exc}"}, status_code=422
            )
        doc = json.loads(graph.to_canonical_json(model.to_graph(inferred)))
        return JSONResponse(
            {
                "suggestedName": inferred.metadata.name,
                "document": doc,
                "distribution": doc.get("distribution", []),
                "recordSet": doc.get("recordSet", []),
            }
        )

    @app.post("/api/records/preview")
    async def api_preview(request: Request) -> JSONResponse:
        try:
            body = json.loads(await request.body())
        except json.JSONDecodeError:
            return JSONResponse({"error": "body is not JSON"}, status_code=400)
        document = body.get("document")
        record_set = body.get("recordSet")
        limit = int(body.get("limit", 10))
        base = body.get("baseDir")
        if document is None or not record_set:
            return JSONResponse(
                {"error": "body needs document and recordSet"}, status_code=400
            )
        try:
            m = _load_model(document)
        except CroissantError as exc:
            return JSONResponse(_parse_failure_payload(exc), status_code=422)
        report = validation.validate(m)
        if not report.passed:
            return JSONResponse(_report_payload(report), status_code=422)
        stats = records.RecordStats()
        try:
            store = ResourceStore(m, base=base, cache=app.state.cache)
            rows = [
                {k: records.value_to_json(v) for k, v in record.items()}
                for record in records.iter_records(
                    m, record_set, store=store, limit=limit, stats=stats
                )
            ]
        except (PlanError, SliceSyntax) as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        except CroissantError as exc:
            return JSONResponse({"error": str(exc)}, status_code=422)
        return JSONResponse({"records": rows, "warnings": stats.warnings})

    index = None if static_dir is None else Path(static_dir) / "index.html"
    if static_dir is not None and Path(static_dir).is_dir():
        @app.get("/")
        def editor_index() -> FileResponse:
            return FileResponse(index)

        app.mount("/", StaticFiles(directory=str(static_dir)), name="static")
    else:
        @app.get("/")
        def no_editor() -> JSONResponse:
            return JSONResponse(
                {
                    "service": "croissant-forge editor API",
                    "editor": "not built; API endpoints available under /api/",
                }
            )

    return app
