#!/usr/bin/env python3
"""Build the binary/data test fixtures under tests/fixtures/.

Run once and commit the output; fixtures must stay byte-stable because golden
files pin digests and serialized output. Checksums baked into the documents
are computed with the external sha256sum tool, independent of the library
being tested. Pure stdlib on purpose: this script never imports the package.
"""

from __future__ import annotations

import io
import json
import subprocess
import tarfile
import zipfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "tests" / "fixtures"

CONFORMS = "http://mlcommons.org/croissant/1.0"


def sha256sum(path: Path) -> str:
    out = subprocess.run(
        ["sha256sum", str(path)], check=True, capture_output=True, text=True
    )
    return out.stdout.split()[0]


def fake_jpeg(name: str) -> bytes:
    body = f"JFIF-payload-{name}-".encode("ascii") * 3
    return b"\xff\xd8\xff\xe0" + body + b"\xff\xd9"


def write_tar(path: Path, members: dict[str, bytes]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with tarfile.open(path, "w") as tar:
        for name in members:
            info = tarfile.TarInfo(name)
            data = members[name]
            info.size = len(data)
            info.mtime = 0
            info.uid = info.gid = 0
            info.uname = info.gname = ""
            tar.addfile(info, io.BytesIO(data))


def write_zip(path: Path, members: dict[str, bytes]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with zipfile.ZipFile(path, "w", zipfile.ZIP_DEFLATED) as zf:
        for name, data in members.items():
            info = zipfile.ZipInfo(name, date_time=(1980, 1, 1, 0, 0, 0))
            zf.writestr(info, data)


def write_json(path: Path, doc: object) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", "utf-8")


def write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


# --- remote-URL PASS description (graph/model tests only, never fetched) ------


def build_pass_remote_fixture() -> None:
    doc = {
        "@type": "sc:Dataset",
        "name": "PASS",
        "dct:conformsTo": CONFORMS,
        "description": "PASS is a large-scale image dataset...",
        "citeAs": "@Article{asano21pass, ...",
        "license": "cc-by-4.0",
        "url": "https://www.robots.ox.ac.uk/.../pass/",
        "distribution": [
            {
                "@id": "metadata",
                "@type": "cr:FileObject",
                "contentUrl": "https://zenodo.org/661...",
                "sha256": "0b033707ea49365a5ffdd1461...",
                "encodingFormat": "text/csv",
            },
            {
                "@id": "pass0",
                "@type": "cr:FileObject",
                "contentUrl": "https://zenodo.org/661...",
                "sha256": "0be3a104d6257d83296460b...",
                "encodingFormat": "application/x-tar",
            },
            {
                "@id": "image-files",
                "@type": "cr:FileSet",
                "containedIn": {"@id": "pass0"},
                "includes": "*.jpg",
                "encodingFormat": "image/jpeg",
            },
        ],
        "recordSet": [images_record_set()],
    }
    write_json(FIXTURES / "pass_remote.json", doc)


def images_record_set() -> dict:
    return {
        "@id": "images",
        "@type": "cr:RecordSet",
        "key": "images/hash",
        "field": [
            {
                "@id": "images/image_content",
                "@type": "cr:Field",
                "dataType": "sc:ImageObject",
                "source": {
                    "fileSet": {"@id": "image-files"},
                    "extract": {"fileProperty": "content"},
                },
            },
            {
                "@id": "images/hash",
                "@type": "cr:Field",
                "dataType": "sc:Text",
                "source": {
                    "fileSet": {"@id": "image-files"},
                    "extract": {"fileProperty": "filename"},
                    "transform": {"regex": "([^\\/]*)\\.jpg"},
                },
                "references": {
                    "fileObject": {"@id": "metadata"},
                    "column": "hash",
                },
            },
            {
                "@id": "images/coordinates",
                "@type": "cr:Field",
                "dataType": "sc:GeoCoordinates",
                "subField": [
                    {
                        "@id": "images/coordinates/latitude",
                        "@type": "cr:Field",
                        "source": {
                            "fileObject": {"@id": "metadata"},
                            "column": "latitude",
                        },
                    },
                    {
                        "@id": "images/coordinates/longitude",
                        "@type": "cr:Field",
                        "source": {
                            "fileObject": {"@id": "metadata"},
                            "column": "longitude",
                        },
                    },
                ],
            },
        ],
    }


# --- runnable PASS golden ------------------------------------------------------

PASS_ROWS = [
    ("aa", "48.85", "2.35"),
    ("bb", "51.51", "-0.13"),
    ("cc", "40.71", "-74.01"),
]

MINIPASS_ROWS = PASS_ROWS + [
    ("dd", "35.68", "139.69"),
    ("ee", "-33.87", "151.21"),
]


def csv_text(rows: list[tuple[str, str, str]]) -> str:
    lines = ["hash,latitude,longitude"]
    lines += [",".join(row) for row in rows]
    return "\n".join(lines) + "\n"


def pass_like_doc(
    *,
    name: str,
    tar_name: str,
    csv_name: str,
    tar_sha: str,
    csv_sha: str,
    rs_id: str = "images",
) -> dict:
    rs = images_record_set()
    if rs_id != "images":
        text = json.dumps(rs).replace("images/", f"{rs_id}/").replace(
            '"images"', f'"{rs_id}"'
        )
        rs = json.loads(text)
    return {
        "@type": "sc:Dataset",
        "name": name,
        "dct:conformsTo": CONFORMS,
        "description": "PASS is a large-scale image dataset...",
        "citeAs": "@Article{asano21pass, ...",
        "license": "cc-by-4.0",
        "url": "https://www.robots.ox.ac.uk/~vgg/research/pass/",
        "creator": [
            "Yuki M. Asano",
            "Christian Rupprecht",
            "Andrew Zisserman",
        ],
        "distribution": [
            {
                "@id": "metadata",
                "@type": "cr:FileObject",
                "contentUrl": csv_name,
                "sha256": csv_sha,
                "encodingFormat": "text/csv",
            },
            {
                "@id": "pass0",
                "@type": "cr:FileObject",
                "contentUrl": tar_name,
                "sha256": tar_sha,
                "encodingFormat": "application/x-tar",
            },
            {
                "@id": "image-files",
                "@type": "cr:FileSet",
                "containedIn": {"@id": "pass0"},
                "includes": "*.jpg",
                "encodingFormat": "image/jpeg",
            },
        ],
        "recordSet": [rs],
    }


def build_pass_golden() -> None:
    base = FIXTURES / "pass"
    tar_path = base / "data" / "pass0.tar"
    csv_path = base / "data" / "metadata.csv"
    write_tar(
        tar_path,
        {f"{h}.jpg": fake_jpeg(h) for h, _lat, _lon in PASS_ROWS},
    )
    write_text(csv_path, csv_text(PASS_ROWS))
    doc = pass_like_doc(
        name="PASS",
        tar_name="data/pass0.tar",
        csv_name="data/metadata.csv",
        tar_sha=sha256sum(tar_path),
        csv_sha=sha256sum(csv_path),
    )
    write_json(base / "pass.json", doc)


def build_minipass() -> None:
    base = FIXTURES / "minipass"
    tar_path = base / "data" / "images.tar"
    write_tar(
        tar_path,
        {f"{h}.jpg": fake_jpeg(h) for h, _lat, _lon in MINIPASS_ROWS},
    )
    tar_sha = sha256sum(tar_path)

    variants = {
        "metadata.csv": MINIPASS_ROWS,
        "metadata_dropped.csv": MINIPASS_ROWS[:-1],  # ee row removed
        "metadata_nomatch.csv": [("zz", "0.0", "0.0")],
    }
    shas = {}
    for filename, rows in variants.items():
        path = base / "data" / filename
        write_text(path, csv_text(rows))
        shas[filename] = sha256sum(path)

    def doc(csv_name: str, csv_sha: str) -> dict:
        return pass_like_doc(
            name="mini-PASS",
            tar_name="data/images.tar",
            csv_name=f"data/{csv_name}",
            tar_sha=tar_sha,
            csv_sha=csv_sha,
        )

    write_json(base / "minipass.json", doc("metadata.csv", shas["metadata.csv"]))
    write_json(
        base / "minipass_dropped.json",
        doc("metadata_dropped.csv", shas["metadata_dropped.csv"]),
    )
    write_json(
        base / "minipass_nomatch.json",
        doc("metadata_nomatch.csv", shas["metadata_nomatch.csv"]),
    )
    # checksum-safety fixture: first hex digit of the tar digest flipped
    flipped = ("0" if tar_sha[0] != "0" else "1") + tar_sha[1:]
    bad = doc("metadata.csv", shas["metadata.csv"])
    bad["distribution"][1]["sha256"] = flipped
    write_json(base / "minipass_badsha.json", bad)


# --- COCO-style bounding boxes ---------------------------------------------------

COCO_ANNOTATIONS = [
    {"image_id": 42, "bbox": [10.0, 20.0, 30.0, 40.0]},
    {"image_id": 7, "bbox": [0.0, 0.0, 5.0, 5.0]},
    {"image_id": 101, "bbox": [15.5, 22.25, 64.0, 48.0]},
    {"image_id": 101, "bbox": [80.0, 12.5, 24.0, 36.0]},
    {"image_id": 3, "bbox": [1.0, 2.0, 3.0, 4.0]},
    {"image_id": 55, "bbox": [200.0, 150.0, 32.0, 64.0]},
    {"image_id": 55, "bbox": [5.25, 9.75, 12.5, 8.0]},
    {"image_id": 90, "bbox": [33.0, 44.0, 55.0, 66.0]},
    {"image_id": 12, "bbox": [7.0, 8.0, 9.0, 10.0]},
    {"image_id": 68, "bbox": [120.0, 60.0, 40.0, 20.0]},
]


def build_coco() -> None:
    base = FIXTURES / "coco"
    payload = {
        "info": {"description": "fixture annotations"},
        "annotations": COCO_ANNOTATIONS,
    }
    zip_path = base / "data" / "annotations_trainval2014.zip"
    write_zip(
        zip_path,
        {
            "annotations/instances_val2014.json": json.dumps(payload, indent=1).encode(
                "utf-8"
            )
        },
    )
    doc = {
        "@type": "sc:Dataset",
        "name": "COCO2014",
        "dct:conformsTo": CONFORMS,
        "description": "Bounding box annotations fixture shaped like COCO 2014.",
        "license": "cc-by-4.0",
        "url": "https://cocodataset.org",
        "creator": ["COCO Consortium"],
        "citeAs": "@article{coco2014fixture}",
        "distribution": [
            {
                "@id": "annotations_trainval2014.zip",
                "@type": "cr:FileObject",
                "contentUrl": "data/annotations_trainval2014.zip",
                "sha256": sha256sum(zip_path),
                "encodingFormat": "application/zip",
            },
            {
                "@id": "annotations",
                "@type": "cr:FileObject",
                "containedIn": {"@id": "annotations_trainval2014.zip"},
                "contentUrl": "annotations/instances_val2014.json",
                "encodingFormat": "application/json",
            },
        ],
        "recordSet": [
            {
                "@id": "images_with_bounding_box",
                "@type": "cr:RecordSet",
                "field": [
                    {
                        "@id": "images_with_bounding_box/image_id",
                        "@type": "cr:Field",
                        "dataType": "sc:Integer",
                        "source": {
                            "fileObject": {"@id": "annotations"},
                            "extract": {"jsonPath": "$.annotations[*].image_id"},
                        },
                    },
                    {
                        "@id": "images_with_bounding_box/bbox",
                        "@type": "cr:Field",
                        "dataType": "cr:BoundingBox",
                        "source": {
                            "fileObject": {"@id": "annotations"},
                            "extract": {"jsonPath": "$.annotations[*].bbox"},
                        },
                    },
                ],
            }
        ],
    }
    write_json(base / "coco.json", doc)


# --- slicing / splits fixture ------------------------------------------------------


def build_slicing() -> None:
    base = FIXTURES / "slicing"
    rows = ["id,word,split"]
    splits = ["train"] * 6 + ["test"] * 4
    words = [
        "alpha", "bravo", "charlie", "delta", "echo",
        "foxtrot", "golf", "hotel", "india", "juliet",
    ]
    for i in range(10):
        rows.append(f"{i},{words[i]},{splits[i]}")
    csv_path = base / "data" / "rows.csv"
    write_text(csv_path, "\n".join(rows) + "\n")
    doc = {
        "@type": "sc:Dataset",
        "name": "rows",
        "dct:conformsTo": CONFORMS,
        "description": "Ten-row table for slicing tests.",
        "license": "cc0-1.0",
        "url": "https://example.org/rows",
        "creator": ["Fixture Factory"],
        "citeAs": "@misc{rows}",
        "datePublished": "2024-01-01",
        "distribution": [
            {
                "@id": "rows-file",
                "@type": "cr:FileObject",
                "contentUrl": "data/rows.csv",
                "sha256": sha256sum(csv_path),
                "encodingFormat": "text/csv",
            }
        ],
        "recordSet": [
            {
                "@id": "default",
                "@type": "cr:RecordSet",
                "key": "default/id",
                "field": [
                    {
                        "@id": "default/id",
                        "@type": "cr:Field",
                        "dataType": "sc:Integer",
                        "source": {
                            "fileObject": {"@id": "rows-file"},
                            "extract": {"column": "id"},
                        },
                    },
                    {
                        "@id": "default/word",
                        "@type": "cr:Field",
                        "dataType": "sc:Text",
                        "source": {
                            "fileObject": {"@id": "rows-file"},
                            "extract": {"column": "word"},
                        },
                    },
                    {
                        "@id": "default/split",
                        "@type": "cr:Field",
                        "dataType": ["sc:Text", "cr:Split"],
                        "source": {
                            "fileObject": {"@id": "rows-file"},
                            "extract": {"column": "split"},
                        },
                    },
                ],
            }
        ],
    }
    write_json(base / "rows.json", doc)


# --- validator fault matrix -----------------------------------------------------


def fault_base() -> dict:
    """A document that validates completely clean (no errors, no warnings)."""
    doc = pass_like_doc(
        name="fault-base",
        tar_name="data/pass0.tar",
        csv_name="data/metadata.csv",
        tar_sha="a" * 64,
        csv_sha="b" * 64,
    )
    doc["datePublished"] = "2024-03-01"
    return doc


def build_faults() -> None:
    base = FIXTURES / "faults"

    def emit(name: str, mutate) -> None:
        doc = fault_base()
        mutate(doc)
        write_json(base / f"{name}.json", doc)

    write_json(base / "clean.json", fault_base())

    emit("required_missing_name", lambda d: d.pop("name"))
    emit("required_missing_description", lambda d: d.pop("description"))
    emit("required_missing_conformsto", lambda d: d.pop("dct:conformsTo"))

    def bad_contained(d):
        d["distribution"][2]["containedIn"] = {"@id": "pass9"}

    emit("ref_unresolved_containedin", bad_contained)

    def bad_source(d):
        field = d["recordSet"][0]["field"][0]
        field["source"]["fileSet"] = {"@id": "image-files-x"}

    emit("ref_unresolved_source", bad_source)

    def bad_key(d):
        d["recordSet"][0]["key"] = "images/nope"

    emit("key_not_a_field", bad_key)

    def bad_sha(d):
        d["distribution"][0]["sha256"] = "UPPERCASE-and-short"

    emit("sha256_malformed", bad_sha)

    def bad_glob(d):
        d["distribution"][2]["includes"] = "[abc"

    emit("glob_invalid", bad_glob)

    def bad_regex(d):
        field = d["recordSet"][0]["field"][1]
        field["source"]["transform"] = {"regex": "([a-"}

    emit("regex_invalid", bad_regex)

    def bad_jsonpath(d):
        field = d["recordSet"][0]["field"][0]
        field["source"]["extract"] = {"jsonPath": "annotations[*]"}

    emit("jsonpath_invalid", bad_jsonpath)

    def combo_two(d):
        d.pop("name")
        d["distribution"][0]["sha256"] = "ff00"

    emit("combo_name_sha", combo_two)

    def combo_three(d):
        d["distribution"][2]["containedIn"] = {"@id": "pass9"}
        d["recordSet"][0]["key"] = "images/nope"
        field = d["recordSet"][0]["field"][1]
        field["source"]["transform"] = {"regex": "(no capture group oops"}

    emit("combo_ref_key_regex", combo_three)


# --- health corpus ----------------------------------------------------------------

# per-doc shape of the 15 valid corpus documents (fileObjects, fileSets,
# recordSets, fields) -- keep in sync with tests/test_health.py literals
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


def corpus_doc(index: int, shape: tuple[int, int, int, int]) -> dict:
    n_fo, n_fs, n_rs, n_fields = shape
    distribution = []
    for i in range(n_fo):
        fmt = "application/x-tar" if (n_fs and i == 0) else "text/csv"
        distribution.append(
            {
                "@id": f"fo{i + 1}",
                "@type": "cr:FileObject",
                "contentUrl": f"data/file{i + 1}",
                "encodingFormat": fmt,
            }
        )
    for i in range(n_fs):
        distribution.append(
            {
                "@id": f"fs{i + 1}",
                "@type": "cr:FileSet",
                "containedIn": {"@id": "fo1"},
                "includes": "*.txt",
                "encodingFormat": "text/plain",
            }
        )
    table_id = "fo1"
    record_sets = []
    remaining = n_fields
    for j in range(n_rs):
        take = remaining if j == n_rs - 1 else max(1, n_fields // n_rs)
        remaining -= take
        fields = []
        for k in range(take):
            fields.append(
                {
                    "@id": f"rs{j + 1}/f{k + 1}",
                    "@type": "cr:Field",
                    "dataType": "sc:Text",
                    "source": {
                        "fileObject": {"@id": table_id},
                        "extract": {"column": f"c{k + 1}"},
                    },
                }
            )
        record_sets.append(
            {"@id": f"rs{j + 1}", "@type": "cr:RecordSet", "field": fields}
        )
    return {
        "@type": "sc:Dataset",
        "name": f"corpus-doc-{index:02d}",
        "dct:conformsTo": CONFORMS,
        "description": f"Synthetic corpus document {index}.",
        "license": "cc0-1.0",
        "url": f"https://example.org/corpus/{index}",
        "creator": ["Fixture Factory"],
        "citeAs": f"@misc{{corpus{index}}}",
        "datePublished": "2024-02-02",
        "distribution": distribution,
        "recordSet": record_sets,
    }


def build_corpus() -> None:
    base = FIXTURES / "corpus"
    for index, shape in enumerate(VALID_SHAPES, start=1):
        write_json(base / f"doc{index:02d}.json", corpus_doc(index, shape))

    # five seeded-invalid documents
    invalid_mutations = {
        16: lambda d: d.pop("name"),
        17: lambda d: d.pop("description"),
        18: lambda d: d["distribution"][0].__setitem__("sha256", "zz"),
        19: lambda d: d["distribution"][0].__setitem__(
            "containedIn", {"@id": "missing-parent"}
        ),
        20: lambda d: d["recordSet"][0].__setitem__("key", "rs1/ghost"),
    }
    for index, mutate in invalid_mutations.items():
        doc = corpus_doc(index, (2, 0, 1, 3))
        mutate(doc)
        write_json(base / f"doc{index:02d}.json", doc)


def main() -> None:
    build_pass_remote_fixture()
    build_pass_golden()
    build_minipass()
    build_coco()
    build_slicing()
    build_faults()
    build_corpus()
    print(f"fixtures written under {FIXTURES}")


if __name__ == "__main__":
    main()
