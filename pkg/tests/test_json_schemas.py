"""Schema checks for the documented JSON output shapes."""

from __future__ import annotations

import json

import jsonschema
import pytest

from croissant_forge.cli import main

from conftest import FIXTURES

VALIDATION_REPORT_SCHEMA = {
    "type": "object",
    "required": ["passed", "counts", "issues"],
    "additionalProperties": False,
    "properties": {
        "passed": {"type": "boolean"},
        "counts": {
            "type": "object",
            "required": ["error", "warning", "info"],
            "additionalProperties": False,
            "properties": {
                "error": {"type": "integer", "minimum": 0},
                "warning": {"type": "integer", "minimum": 0},
                "info": {"type": "integer", "minimum": 0},
            },
        },
        "issues": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["code", "severity", "path", "message"],
                "additionalProperties": False,
                "properties": {
                    "code": {"type": "string"},
                    "severity": {"enum": ["error", "warning", "info"]},
                    "path": {"type": "string"},
                    "message": {"type": "string"},
                },
            },
        },
    },
}

HEALTH_REPORT_SCHEMA = {
    "type": "object",
    "required": [
        "schema", "total", "downloaded", "fetchFailed", "parseFailed",
        "invalid", "valid", "invalidRate", "aggregates", "perDoc",
    ],
    "properties": {
        "schema": {"const": 1},
        "total": {"type": "integer", "minimum": 0},
        "downloaded": {"type": "integer", "minimum": 0},
        "fetchFailed": {"type": "integer", "minimum": 0},
        "parseFailed": {"type": "integer", "minimum": 0},
        "invalid": {"type": "integer", "minimum": 0},
        "valid": {"type": "integer", "minimum": 0},
        "invalidRate": {"type": ["number", "null"]},
        "aggregates": {
            "type": ["object", "null"],
            "additionalProperties": {
                "type": "object",
                "required": ["mean", "stddev"],
                "properties": {
                    "mean": {"type": "number"},
                    "stddev": {"type": "number"},
                },
            },
        },
        "perDoc": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "status"],
                "properties": {
                    "id": {"type": "string"},
                    "status": {
                        "enum": ["valid", "invalid", "parseFailed", "fetchFailed"]
                    },
                },
            },
        },
    },
}

RECORD_LINE_SCHEMA = {
    "type": "object",
    "additionalProperties": {
        "anyOf": [
            {"type": ["string", "number", "boolean", "null", "array", "object"]},
        ]
    },
}


@pytest.mark.parametrize(
    "fixture", ["pass/pass.json", "faults/combo_ref_key_regex.json"]
)
def test_validate_json_matches_schema(capsys, fixture):
    main(["validate", str(FIXTURES / fixture), "--json"])
    payload = json.loads(capsys.readouterr().out)
    jsonschema.validate(payload, VALIDATION_REPORT_SCHEMA)


def test_health_json_matches_schema(capsys):
    main(["health", str(FIXTURES / "corpus"), "--json"])
    payload = json.loads(capsys.readouterr().out)
    jsonschema.validate(payload, HEALTH_REPORT_SCHEMA)


def test_records_jsonl_lines_are_json_objects(capsys):
    main([
        "records", str(FIXTURES / "slicing" / "rows.json"),
        "--record-set", "default", "--quiet",
    ])
    out = capsys.readouterr().out
    for line in out.splitlines():
        jsonschema.validate(json.loads(line), RECORD_LINE_SCHEMA)


def test_inspect_json_is_a_croissant_document(capsys):
    main(["inspect", str(FIXTURES / "pass" / "pass.json"), "--json"])
    payload = json.loads(capsys.readouterr().out)
    assert payload["@type"] == "sc:Dataset"
    assert payload["name"] == "PASS"
