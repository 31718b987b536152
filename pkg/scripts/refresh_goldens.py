#!/usr/bin/env python3
"""Regenerate the regression golden files under tests/fixtures/goldens/.

Run only after the semantic tests (hand-enumerated expectations and the
independent oracles) are green: these files pin the exact serialized bytes so
future changes that alter output are caught.
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from croissant_forge import graph, health, model, records, validation  # noqa: E402
from croissant_forge.resources import Cache, ResourceStore  # noqa: E402

FIXTURES = ROOT / "tests" / "fixtures"
GOLDENS = FIXTURES / "goldens"


def load_model(relpath: str):
    path = FIXTURES / relpath
    g = graph.load_document(path.read_bytes())
    return model.from_graph(g), str(path.parent)


def refresh_validate_goldens() -> None:
    out_dir = GOLDENS / "validate"
    out_dir.mkdir(parents=True, exist_ok=True)
    for fixture in sorted((FIXTURES / "faults").glob("*.json")):
        m, _ = load_model(f"faults/{fixture.name}")
        report = validation.validate(m)
        (out_dir / fixture.name).write_bytes(validation.report_to_json(report))
    m, _ = load_model("pass/pass.json")
    (out_dir / "pass.json").write_bytes(validation.report_to_json(validation.validate(m)))


def refresh_records_goldens(cache_dir: Path) -> None:
    out_dir = GOLDENS / "records"
    out_dir.mkdir(parents=True, exist_ok=True)
    jobs = [
        ("minipass/minipass.json", "images", "minipass.jsonl"),
        ("coco/coco.json", "images_with_bounding_box", "coco.jsonl"),
        ("slicing/rows.json", "default", "rows.jsonl"),
    ]
    for relpath, record_set, out_name in jobs:
        m, base = load_model(relpath)
        store = ResourceStore(m, base=base, cache=Cache(cache_dir))
        lines = [
            records.record_to_jsonl(r)
            for r in records.iter_records(m, record_set, store=store)
        ]
        (out_dir / out_name).write_text("\n".join(lines) + "\n", encoding="utf-8")


def refresh_health_goldens() -> None:
    out_dir = GOLDENS / "health"
    out_dir.mkdir(parents=True, exist_ok=True)
    report = health.scan_corpus(FIXTURES / "corpus")
    (out_dir / "corpus.json").write_bytes(health.report_to_json(report))
    (out_dir / "corpus.txt").write_text(health.report_to_table(report), encoding="utf-8")


def refresh_canonical_goldens() -> None:
    out_dir = GOLDENS / "canonical"
    out_dir.mkdir(parents=True, exist_ok=True)
    for relpath, out_name in [
        ("minipass/minipass.json", "minipass.json"),
        ("pass/pass.json", "pass.json"),
    ]:
        g = graph.load_document((FIXTURES / relpath).read_bytes())
        (out_dir / out_name).write_bytes(graph.to_canonical_json(g))


def main() -> None:
    import tempfile

    refresh_validate_goldens()
    with tempfile.TemporaryDirectory() as tmp:
        refresh_records_goldens(Path(tmp))
    refresh_health_goldens()
    refresh_canonical_goldens()
    print(f"goldens refreshed under {GOLDENS}")


if __name__ == "__main__":
    main()
