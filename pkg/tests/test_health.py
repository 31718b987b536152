from __future__ import annotations

import json
import math
from pathlib import Path

from croissant_forge.health import (
    ADAPTERS,
    check_document,
    report_to_json,
    report_to_table,
    scan_corpus,
)

from conftest import FIXTURES
from oracle import population_stats

# fixture design: (fileObjects, fileSets, recordSets, fields) of the 15 valid
# corpus docs -- keep in sync with scripts/build_fixtures.py VALID_SHAPES
VALID_SHAPES = [
    (2, 1, 2, 6),
    (3, 0, 1, 3),
    (1, 1, 2, 7),
    (2, 0, 1, 2),
    (3, 1, 2, 8),
    (1, 0, 1, 4),
    (2, 1, 2, 5),
    (3, 0, 1, 3),
    (1, 1, 2, 6),
    (2, 0, 1, 2),
    (3, 1, 2, 9),
    (1, 0, 1, 4),
    (2, 1, 2, 5),
    (3, 0, 1, 7),
    (1, 1, 1, 3),
]


def test_corpus_scan_counts_and_rate():
    report = scan_corpus(FIXTURES / "corpus")
    assert report.total == 20
    assert report.downloaded == 20
    assert report.fetch_failed == 0
    assert report.parse_failed == 0
    assert report.invalid == 5
    assert report.valid == 15
    assert report.invalid_rate == 0.25


def test_per_doc_counts_match_fixture_design():
    report = scan_corpus(FIXTURES / "corpus")
    valid_docs = [d for d in report.per_doc if d.status == "valid"]
    got = [
        (d.counts["fileObjects"], d.counts["fileSets"],
         d.counts["recordSets"], d.counts["fields"])
        for d in valid_docs
    ]
    assert got == VALID_SHAPES


def test_aggregates_match_hand_computed_oracle():
    report = scan_corpus(FIXTURES / "corpus")
    aggregates = report.aggregates()
    for index, metric in enumerate(["fileObjects", "fileSets", "recordSets", "fields"]):
        values = [shape[index] for shape in VALID_SHAPES]
        mean, stddev = population_stats(values)
        assert math.isclose(aggregates[metric]["mean"], mean, abs_tol=1e-9)
        assert math.isclose(aggregates[metric]["stddev"], stddev, abs_tol=1e-9)


def test_three_doc_example_statistics(tmp_path):
    # field counts {2, 4, 6} -> mean 4, population stddev 1.633
    for i, n_fields in enumerate([2, 4, 6]):
        fields = [
            {
                "@id": f"r/f{k}",
                "@type": "cr:Field",
                "dataType": "sc:Text",
                "source": {"fileObject": {"@id": "fo"}, "extract": {"column": f"c{k}"}},
            }
            for k in range(n_fields)
        ]
        doc = {
            "@type": "sc:Dataset",
            "name": f"doc{i}",
            "description": "d",
            "dct:conformsTo": "http://mlcommons.org/croissant/1.0",
            "distribution": [{
                "@id": "fo", "@type": "cr:FileObject",
                "contentUrl": "data/x.csv", "encodingFormat": "text/csv",
            }],
            "recordSet": [{"@id": "r", "@type": "cr:RecordSet", "field": fields}],
        }
        (tmp_path / f"doc{i}.json").write_text(json.dumps(doc))
    report = scan_corpus(tmp_path)
    stats = report.aggregates()["fields"]
    assert math.isclose(stats["mean"], 4.0, abs_tol=1e-9)
    assert math.isclose(stats["stddev"], 1.632993161855452, abs_tol=1e-9)


def test_empty_directory(tmp_path):
    report = scan_corpus(tmp_path)
    assert report.total == 0
    assert report.invalid_rate is None
    assert report.aggregates() is None
    payload = json.loads(report_to_json(report))
    assert payload["invalidRate"] is None


def test_parallel_equals_sequential():
    sequential = scan_corpus(FIXTURES / "corpus", workers=1)
    parallel = scan_corpus(FIXTURES / "corpus", workers=8)
    assert report_to_json(sequential) == report_to_json(parallel)


def test_restartability():
    assert report_to_json(scan_corpus(FIXTURES / "corpus")) == report_to_json(
        scan_corpus(FIXTURES / "corpus")
    )


def test_report_json_schema_and_golden():
    report = scan_corpus(FIXTURES / "corpus")
    payload = json.loads(report_to_json(report))
    assert payload["schema"] == 1
    assert payload["invalidRate"] == 0.25
    golden = (FIXTURES / "goldens" / "health" / "corpus.json").read_bytes()
    assert report_to_json(report) == golden


def test_report_table_golden():
    report = scan_corpus(FIXTURES / "corpus")
    golden = (FIXTURES / "goldens" / "health" / "corpus.txt").read_text()
    assert report_to_table(report) == golden


def test_parse_failed_documents_counted(tmp_path):
    (tmp_path / "bad.json").write_text("{broken")
    (tmp_path / "good.json").write_text(
        json.dumps({
            "@type": "sc:Dataset", "name": "g", "description": "d",
            "dct:conformsTo": "http://mlcommons.org/croissant/1.0",
        })
    )
    report = scan_corpus(tmp_path)
    assert report.total == 2
    assert report.parse_failed == 1
    assert report.valid == 1
    by_id = {d.id: d for d in report.per_doc}
    assert by_id["bad"].status == "parseFailed"
    assert by_id["bad"].counts is None


def test_limit_applies(tmp_path):
    report = scan_corpus(FIXTURES / "corpus", limit=7)
    assert report.total == 7


def test_check_document_invalid_detail():
    data = (FIXTURES / "corpus" / "doc16.json").read_bytes()
    result = check_document("doc16", data)
    assert result.status == "invalid"
    assert "REQUIRED_MISSING" in result.detail


def test_json_array_adapter():
    body = json.dumps(["https://a/x.json", {"url": "https://b/y.json"}, {"noise": 1}])
    urls = ADAPTERS["json-array"]("https://listing", body.encode())
    assert urls == ["https://a/x.json", "https://b/y.json"]


def test_hf_like_adapter():
    body = json.dumps(["user/squad", {"id": "org/glue"}])
    urls = ADAPTERS["hf-like"]("https://hub.example/api/datasets", body.encode())
    assert urls == [
        "https://hub.example/api/datasets/user/squad/croissant",
        "https://hub.example/api/datasets/org/glue/croissant",
    ]
