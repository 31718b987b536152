"""Secondary acceptance: the editor workflows, driven headlessly.

These run the exact request sequence the editor issues against the real
serve API, then hand the exported bytes to the CLI. The editor's own unit
tests live in frontend/tests (vitest).
"""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from croissant_forge import server
from croissant_forge.cli import main
from croissant_forge.graph import load_document, to_canonical_json
from croissant_forge.resources import Cache

from conftest import FIXTURES


@pytest.fixture
def client(tmp_path) -> TestClient:
    app = server.create_app(
        cache=Cache(tmp_path / "cache"), scratch_dir=tmp_path / "scratch"
    )
    return TestClient(app)


def test_acceptance_editor_round_trip(client, tmp_path, capsys):
    doc = json.loads((FIXTURES / "minipass" / "minipass.json").read_text())

    # load mini-PASS, make no edits, export: bytes equal the canonical form
    exported = client.post("/api/canonicalize", content=json.dumps(doc)).content
    canonical = to_canonical_json(
        load_document((FIXTURES / "minipass" / "minipass.json").read_bytes())
    )
    assert exported == canonical

    # clear `name`: the validation report carries the inline marker's issue
    cleared = dict(doc)
    cleared.pop("name")
    report = client.post("/api/validate", content=json.dumps(cleared)).json()
    assert report["passed"] is False
    assert any(
        i["code"] == "REQUIRED_MISSING" and i["path"] == "dataset.name"
        for i in report["issues"]
    )

    # re-fill, export, and CLI validate exits 0
    cleared["name"] = "mini-PASS"
    refilled = client.post("/api/canonicalize", content=json.dumps(cleared)).content
    out_path = tmp_path / "exported.json"
    out_path.write_bytes(refilled)
    code = main(["validate", str(out_path)])
    captured = capsys.readouterr()
    assert code == 0
    assert "passed" in captured.out
    print("ACCEPTANCE PASS (secondary): editor round trip + required-field marker")


def test_acceptance_editor_inference_to_records(client, tmp_path, capsys):
    csv_body = b"city,population,founded\nparis,2100000,0250\nlyon,520000,0043\nnice,340000,0350\n"
    inferred = client.post("/api/infer?filename=cities.csv", content=csv_body).json()

    exported = client.post(
        "/api/canonicalize", content=json.dumps(inferred["document"])
    ).content
    out_path = tmp_path / "cities.json"
    out_path.write_bytes(exported)

    code = main([
        "records", str(out_path), "--record-set", "cities_records", "--quiet",
    ])
    captured = capsys.readouterr()
    assert code == 0
    lines = captured.out.splitlines()
    assert len(lines) == 3  # one record per CSV row
    first = json.loads(lines[0])
    assert first["cities_records/city"] == "paris"
    assert first["cities_records/population"] == 2100000
    print("ACCEPTANCE PASS (secondary): csv upload -> inference -> records round trip")
