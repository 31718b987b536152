from __future__ import annotations

import io
import json
from pathlib import Path

import pytest

from croissant_forge.cli import main

from conftest import FIXTURES


def run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_pass_golden(capsys):
    code, out, _err = run(capsys, "validate", str(FIXTURES / "pass" / "pass.json"))
    assert code == 0
    assert "passed (1 warning)" in out


def test_validate_bad_ref_json(capsys):
    code, out, _err = run(
        capsys,
        "validate",
        str(FIXTURES / "faults" / "ref_unresolved_containedin.json"),
        "--json",
    )
    assert code == 1
    payload = json.loads(out)
    assert payload["passed"] is False
    assert any(i["code"] == "REF_UNRESOLVED" for i in payload["issues"])


def test_validate_missing_file_exits_3(capsys):
    code, _out, err = run(capsys, "validate", "nosuch.json")
    assert code == 3
    assert "fetch error" in err


def test_validate_malformed_document_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    code, _out, err = run(capsys, "validate", str(bad))
    assert code == 1


def test_inspect_pass_summary(capsys):
    code, out, _err = run(capsys, "inspect", str(FIXTURES / "pass" / "pass.json"))
    assert code == 0
    assert "2 FileObjects, 1 FileSet" in out
    assert "1 RecordSet" in out
    assert "images: 3 fields" in out
    assert "with 2 subFields" in out


def test_inspect_minimal_dataset(tmp_path, capsys):
    doc = tmp_path / "min.json"
    doc.write_text('{"@type":"sc:Dataset","name":"tiny"}')
    code, out, _err = run(capsys, "inspect", str(doc))
    assert code == 0
    assert "0 FileObjects, 0 FileSets" in out


def test_inspect_json_revalidates_clean(tmp_path, capsys, monkeypatch):
    code, out, _err = run(
        capsys, "inspect", str(FIXTURES / "pass" / "pass.json"), "--json"
    )
    assert code == 0
    # the canonical output is itself a valid document
    stdin = io.BytesIO(out.encode("utf-8"))
    monkeypatch.setattr("sys.stdin", io.TextIOWrapper(stdin))
    code2, out2, _err2 = run(capsys, "validate", "-")
    assert code2 == 0
    assert "passed" in out2


def test_records_limit_matches_golden(capsys):
    code, out, _err = run(
        capsys,
        "records",
        str(FIXTURES / "minipass" / "minipass.json"),
        "--record-set", "images",
        "--limit", "2",
        "--quiet",
    )
    assert code == 0
    golden = (FIXTURES / "goldens" / "records" / "minipass.jsonl").read_text()
    assert out.splitlines() == golden.splitlines()[:2]


def test_records_slice_eight_lines(capsys):
    code, out, _err = run(
        capsys,
        "records",
        str(FIXTURES / "slicing" / "rows.json"),
        "--record-set", "default",
        "--slice", "default[:80%]",
        "--quiet",
    )
    assert code == 0
    assert len(out.splitlines()) == 8


def test_records_unknown_record_set_usage_error(capsys):
    code, _out, err = run(
        capsys,
        "records",
        str(FIXTURES / "minipass" / "minipass.json"),
        "--record-set", "nosuch",
    )
    assert code == 2
    assert "nosuch" in err


def test_records_checksum_mismatch_no_output_exit_3(capsys):
    code, out, err = run(
        capsys,
        "records",
        str(FIXTURES / "minipass" / "minipass_badsha.json"),
        "--record-set", "images",
    )
    assert code == 3
    assert out == ""
    assert "sha256 mismatch" in err


def test_records_summary_output(capsys):
    code, out, _err = run(
        capsys,
        "records",
        str(FIXTURES / "slicing" / "rows.json"),
        "--record-set", "default",
        "--output", "summary",
        "--quiet",
    )
    assert code == 0
    assert "10 records" in out
    assert '"default/word": "alpha"' in out


def test_records_split_filter(capsys):
    code, out, _err = run(
        capsys,
        "records",
        str(FIXTURES / "slicing" / "rows.json"),
        "--record-set", "default",
        "--split", "test",
        "--quiet",
    )
    assert code == 0
    assert len(out.splitlines()) == 4


def test_coco_records_golden(capsys):
    code, out, _err = run(
        capsys,
        "records",
        str(FIXTURES / "coco" / "coco.json"),
        "--record-set", "images_with_bounding_box",
        "--quiet",
    )
    assert code == 0
    golden = (FIXTURES / "goldens" / "records" / "coco.jsonl").read_text()
    assert out == golden


def test_health_table_golden(capsys):
    code, out, _err = run(capsys, "health", str(FIXTURES / "corpus"))
    assert code == 0
    assert out == (FIXTURES / "goldens" / "health" / "corpus.txt").read_text()


def test_health_json(capsys):
    code, out, _err = run(capsys, "health", str(FIXTURES / "corpus"), "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["invalidRate"] == 0.25


def test_usage_error_unknown_command():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
