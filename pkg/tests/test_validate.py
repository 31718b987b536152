from __future__ import annotations

import json

import pytest

from croissant_forge.graph import load_document
from croissant_forge.model import from_graph
from croissant_forge.validation import (
    ERROR_CODES,
    ValidationReport,
    report_to_json,
    validate,
)

from conftest import FIXTURES, load_fixture


def report_for(relpath: str):
    _g, m, _base = load_fixture(relpath)
    return validate(m)


def pairs(report) -> list[tuple[str, str]]:
    return [(i.code, i.path) for i in report.issues]


def test_pass_golden_one_warning_only():
    report = report_for("pass/pass.json")
    assert report.passed
    assert pairs(report) == [("RECOMMENDED_MISSING", "dataset.datePublished")]


def test_missing_name_fails():
    m = from_graph(load_document('{"@type":"sc:Dataset","description":"d"}'))
    report = validate(m)
    assert not report.passed
    assert ("REQUIRED_MISSING", "dataset.name") in pairs(report)


def test_conforms_to_other_version_is_warning():
    doc = '{"@type":"sc:Dataset","name":"x","description":"d","dct:conformsTo":"http://mlcommons.org/croissant/2.0"}'
    report = validate(from_graph(load_document(doc)))
    assert report.passed
    assert ("CONFORMS_TO_UNSUPPORTED", "dataset.conformsTo") in pairs(report)


# one fixture per seeded fault; expected error codes enumerated by hand
FAULT_EXPECTATIONS = {
    "clean.json": [],
    "required_missing_name.json": [("REQUIRED_MISSING", "dataset.name")],
    "required_missing_description.json": [("REQUIRED_MISSING", "dataset.description")],
    "required_missing_conformsto.json": [("REQUIRED_MISSING", "dataset.conformsTo")],
    "ref_unresolved_containedin.json": [("REF_UNRESOLVED", "image-files.containedIn")],
    "ref_unresolved_source.json": [
        ("REF_UNRESOLVED", "images/image_content.source")
    ],
    "key_not_a_field.json": [("KEY_NOT_A_FIELD", "images.key")],
    "sha256_malformed.json": [("SHA256_MALFORMED", "metadata.sha256")],
    "glob_invalid.json": [("GLOB_INVALID", "image-files.includes")],
    "regex_invalid.json": [("REGEX_INVALID", "images/hash.source.transform")],
    "jsonpath_invalid.json": [
        ("JSONPATH_INVALID", "images/image_content.source.extract")
    ],
    "combo_name_sha.json": [
        ("REQUIRED_MISSING", "dataset.name"),
        ("SHA256_MALFORMED", "metadata.sha256"),
    ],
    "combo_ref_key_regex.json": [
        ("REF_UNRESOLVED", "image-files.containedIn"),
        ("KEY_NOT_A_FIELD", "images.key"),
        ("REGEX_INVALID", "images/hash.source.transform"),
    ],
}


@pytest.mark.parametrize("name", sorted(FAULT_EXPECTATIONS))
def test_fault_matrix_exact_codes(name):
    report = report_for(f"faults/{name}")
    expected = FAULT_EXPECTATIONS[name]
    errors = [(i.code, i.path) for i in report.issues if i.severity == "error"]
    assert sorted(errors) == sorted(expected)
    # no stray warnings on these fixtures: every issue is a seeded error
    assert len(report.issues) == len(expected)
    assert report.passed == (not expected)


@pytest.mark.parametrize("name", sorted(FAULT_EXPECTATIONS))
def test_fault_reports_match_goldens_byte_for_byte(name):
    report = report_for(f"faults/{name}")
    golden = FIXTURES / "goldens" / "validate" / name
    assert report_to_json(report) == golden.read_bytes()


def test_report_json_empty_report_exact_bytes():
    out = report_to_json(ValidationReport(issues=[]))
    assert out == b'{"passed":true,"counts":{"error":0,"warning":0,"info":0},"issues":[]}'


def test_report_json_single_error_counts():
    report = report_for("faults/required_missing_name.json")
    payload = json.loads(report_to_json(report))
    assert payload["passed"] is False
    assert payload["counts"]["error"] == 1


def test_three_fault_report_ordering():
    report = report_for("faults/combo_ref_key_regex.json")
    payload = json.loads(report_to_json(report))
    assert len(payload["issues"]) == 3
    keys = [(i["path"].split(".")[0], i["path"], i["code"]) for i in payload["issues"]]
    assert keys == sorted(keys)


def test_severity_follows_code_table():
    for name in FAULT_EXPECTATIONS:
        report = report_for(f"faults/{name}")
        for issue in report.issues:
            assert (issue.severity == "error") == (issue.code in ERROR_CODES)


def test_monotonicity_of_required_missing():
    base = json.loads((FIXTURES / "faults" / "clean.json").read_text())
    base.pop("name")
    one = validate(from_graph(load_document(json.dumps(base))))
    base.pop("description")
    two = validate(from_graph(load_document(json.dumps(base))))
    assert ("REQUIRED_MISSING", "dataset.name") in pairs(one)
    assert ("REQUIRED_MISSING", "dataset.name") in pairs(two)
    assert ("REQUIRED_MISSING", "dataset.description") in pairs(two)


def test_validate_idempotent():
    _g, m, _base = load_fixture("pass/pass.json")
    assert validate(m) == validate(m)
    assert report_to_json(validate(m)) == report_to_json(validate(m))


def test_join_column_unknown_format_warning():
    doc = json.loads((FIXTURES / "pass" / "pass.json").read_text())
    doc["distribution"][0]["encodingFormat"] = "application/x-parquet"
    report = validate(from_graph(load_document(json.dumps(doc))))
    assert ("JOIN_COLUMN_UNKNOWN_FORMAT", "images/hash.references") in pairs(report)
    assert report.passed  # warning, not error


def test_unknown_rai_key_warning():
    doc = {
        "@type": "sc:Dataset",
        "name": "x",
        "description": "d",
        "dct:conformsTo": "http://mlcommons.org/croissant/1.0",
        "rai:notARealKey": "v",
    }
    report = validate(from_graph(load_document(json.dumps(doc))))
    assert ("UNKNOWN_PROPERTY", "dataset.rai:notARealKey") in pairs(report)
