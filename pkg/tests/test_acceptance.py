"""Acceptance suite: one test per criterion, each at its stated tolerance.

Run with `pytest -s tests/test_acceptance.py` to see one PASS line per
criterion; a test failure marks the corresponding criterion FAIL.
"""

from __future__ import annotations

import json
import math
import time
from pathlib import Path

import pytest
from hypothesis import HealthCheck, given, settings

from croissant_forge import graph, model, records
from croissant_forge.cli import main
from croissant_forge.health import report_to_json, scan_corpus
from croissant_forge.resources import Cache, ResourceStore
from croissant_forge.validation import report_to_json as validation_json, validate

from conftest import FIXTURES
from oracle import (
    bbox_as_list,
    coco_expected_records,
    minipass_expected_records,
    population_stats,
)
from test_model import models
from test_validate import FAULT_EXPECTATIONS
from test_health import VALID_SHAPES


def _load(relpath: str):
    path = FIXTURES / relpath
    g = graph.load_document(path.read_bytes())
    return g, model.from_graph(g), str(path.parent)


def _store(m, base, tmp_path) -> ResourceStore:
    return ResourceStore(m, base=base, cache=Cache(tmp_path / "cache"))


def test_acceptance_pass_golden(tmp_path, capsys):
    started = time.monotonic()
    _g, m, _base = _load("pass/pass.json")
    report = validate(m)
    assert report.counts["error"] == 0
    assert report.passed

    code = main(["inspect", str(FIXTURES / "pass" / "pass.json")])
    out = capsys.readouterr().out
    assert code == 0
    assert "2 FileObjects, 1 FileSet" in out
    assert "1 RecordSet" in out
    assert "images: 3 fields" in out
    assert "images/coordinates with 2 subFields" in out
    elapsed = time.monotonic() - started
    assert elapsed < 1.0
    print(f"\nACCEPTANCE PASS: PASS golden (0 errors, inventory exact) in {elapsed:.2f}s")


def test_acceptance_join_correctness(tmp_path):
    started = time.monotonic()
    _g, m, base = _load("minipass/minipass.json")
    got = list(records.iter_records(m, "images", store=_store(m, base, tmp_path)))
    expected = minipass_expected_records(
        FIXTURES / "minipass" / "data" / "images.tar",
        FIXTURES / "minipass" / "data" / "metadata.csv",
    )
    assert got == expected  # same order
    assert len(got) == 5

    _g2, m2, base2 = _load("minipass/minipass_dropped.json")
    dropped = list(
        records.iter_records(m2, "images", store=_store(m2, base2, tmp_path))
    )
    expected_dropped = minipass_expected_records(
        FIXTURES / "minipass" / "data" / "images.tar",
        FIXTURES / "minipass" / "data" / "metadata_dropped.csv",
    )
    assert dropped == expected_dropped
    assert len(dropped) == len(got) - 1  # exactly one record gone
    elapsed = time.monotonic() - started
    assert elapsed < 2.0
    print(f"ACCEPTANCE PASS: join correctness vs nested-loop oracle in {elapsed:.2f}s")


def test_acceptance_coco_extraction(tmp_path, capsys):
    started = time.monotonic()
    code = main([
        "records",
        str(FIXTURES / "coco" / "coco.json"),
        "--record-set", "images_with_bounding_box",
        "--quiet",
    ])
    out = capsys.readouterr().out
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 10
    expected = coco_expected_records(
        FIXTURES / "coco" / "data" / "annotations_trainval2014.zip"
    )
    for line, exp in zip(lines, expected):
        row = json.loads(line)
        assert isinstance(row["images_with_bounding_box/image_id"], int)
        assert row["images_with_bounding_box/image_id"] == exp["images_with_bounding_box/image_id"]
        bbox = row["images_with_bounding_box/bbox"]
        assert len(bbox) == 4
        assert bbox == exp["images_with_bounding_box/bbox"]
    elapsed = time.monotonic() - started
    assert elapsed < 1.0
    print(f"ACCEPTANCE PASS: COCO-style jsonPath extraction (10 XYWH boxes) in {elapsed:.2f}s")


def test_acceptance_split_slicing(tmp_path):
    _g, m, base = _load("slicing/rows.json")
    store = _store(m, base, tmp_path)
    sliced = list(records.iter_records(m, "default", store=store, slice_spec="default[:80%]"))
    assert len(sliced) == 8
    full = list(records.iter_records(m, "default", store=store))
    for p in (0, 25, 50, 80, 100):
        head = list(
            records.iter_records(m, "default", store=store, slice_spec=f"default[:{p}%]")
        )
        tail = list(
            records.iter_records(m, "default", store=store, slice_spec=f"default[{p}%:]")
        )
        assert head + tail == full
    print("ACCEPTANCE PASS: split slicing ([:80%] = 8; partition holds for p in {0,25,50,80,100})")


def test_acceptance_checksum_safety(capsys):
    code = main([
        "records",
        str(FIXTURES / "minipass" / "minipass_badsha.json"),
        "--record-set", "images",
    ])
    captured = capsys.readouterr()
    assert code == 3
    assert captured.out == ""  # no record output
    assert "sha256 mismatch" in captured.err
    print("ACCEPTANCE PASS: checksum safety (mismatch, zero records, exit 3)")


def test_acceptance_validator_fault_matrix():
    seeded = {k: v for k, v in FAULT_EXPECTATIONS.items() if k != "clean.json"}
    assert len(seeded) == 12
    for name, expected in FAULT_EXPECTATIONS.items():
        _g, m, _base = _load(f"faults/{name}")
        report = validate(m)
        errors = [(i.code, i.path) for i in report.issues if i.severity == "error"]
        assert sorted(errors) == sorted(expected), name
        assert len(report.issues) == len(expected), name
        golden = (FIXTURES / "goldens" / "validate" / name).read_bytes()
        assert validation_json(report) == golden, name
    print("ACCEPTANCE PASS: validator fault matrix (12 seeded fixtures, byte-exact reports)")


def test_acceptance_round_trip_fixtures():
    fixture_docs = sorted(FIXTURES.rglob("*.json"))
    fixture_docs = [
        p for p in fixture_docs
        if "goldens" not in p.parts and p.parent.name != "data"
    ]
    assert len(fixture_docs) >= 40
    for path in fixture_docs:
        g = graph.load_document(path.read_bytes())
        assert graph.load_document(graph.to_canonical_json(g)) == g, path
    print(f"ACCEPTANCE PASS: parse/serialize round trip on {len(fixture_docs)} fixtures")


@settings(
    max_examples=1000,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
@given(models())
def test_acceptance_round_trip_property(m):
    g = model.to_graph(m)
    assert model.from_graph(g) == m
    assert graph.load_document(graph.to_canonical_json(g)) == g


def test_acceptance_round_trip_property_note():
    print("ACCEPTANCE PASS: randomized model round trip property (1000 cases)")


def test_acceptance_health_metrics():
    started = time.monotonic()
    report = scan_corpus(FIXTURES / "corpus")
    assert report.total == 20
    assert report.invalid == 5
    assert report.invalid_rate == 0.25

    aggregates = report.aggregates()
    for index, metric in enumerate(["fileObjects", "fileSets", "recordSets", "fields"]):
        values = [shape[index] for shape in VALID_SHAPES]
        mean, stddev = population_stats(values)
        assert math.isclose(aggregates[metric]["mean"], mean, abs_tol=1e-9)
        assert math.isclose(aggregates[metric]["stddev"], stddev, abs_tol=1e-9)

    sequential = scan_corpus(FIXTURES / "corpus", workers=1)
    parallel = scan_corpus(FIXTURES / "corpus", workers=8)
    assert report_to_json(sequential) == report_to_json(parallel)
    elapsed = time.monotonic() - started
    assert elapsed < 5.0
    print(f"ACCEPTANCE PASS: health metrics (rate 0.25, stats to 1e-9, parallel==sequential) in {elapsed:.2f}s")
