"""Canonical Croissant 1.0 context tables.

Croissant fixes its JSON-LD context, so key resolution is a table lookup
rather than a general expansion algorithm. Keys live internally in compact
prefixed form (``sc:``, ``cr:``, ``rai:``, ``dct:``); the tables below map the
bare surface keys that appear in real documents onto that form and back.
"""

from __future__ import annotations

CONFORMS_TO_1_0 = "http://mlcommons.org/croissant/1.0"

PREFIXES: dict[str, str] = {
    "sc": "https://schema.org/",
    "cr": "http://mlcommons.org/croissant/",
    "rai": "http://mlcommons.org/croissant/RAI/",
    "dct": "http://purl.org/dc/terms/",
}

# schema.org also resolves over plain http; both spellings compact to sc:.
_ALT_PREFIX_IRIS: dict[str, str] = {
    "http://schema.org/": "sc",
    "https://schema.org/": "sc",
    "http://mlcommons.org/croissant/RAI/": "rai",
    "http://mlcommons.org/croissant/": "cr",
    "http://purl.org/dc/terms/": "dct",
}

# Bare property keys accepted on input and emitted on canonical output.
BARE_PROPERTIES: dict[str, str] = {
    # dataset metadata (schema.org)
    "name": "sc:name",
    "description": "sc:description",
    "license": "sc:license",
    "url": "sc:url",
    "version": "sc:version",
    "creator": "sc:creator",
    "publisher": "sc:publisher",
    "datePublished": "sc:datePublished",
    "dateModified": "sc:dateModified",
    "dateCreated": "sc:dateCreated",
    "inLanguage": "sc:inLanguage",
    "keywords": "sc:keywords",
    "sameAs": "sc:sameAs",
    "distribution": "sc:distribution",
    # resource layer (mixed schema.org / croissant)
    "contentUrl": "sc:contentUrl",
    "contentSize": "sc:contentSize",
    "encodingFormat": "sc:encodingFormat",
    "sha256": "cr:sha256",
    "md5": "cr:md5",
    "containedIn": "cr:containedIn",
    "includes": "cr:includes",
    "excludes": "cr:excludes",
    # structure layer (croissant)
    "recordSet": "cr:recordSet",
    "field": "cr:field",
    "subField": "cr:subField",
    "key": "cr:key",
    "dataType": "cr:dataType",
    "source": "cr:source",
    "extract": "cr:extract",
    "transform": "cr:transform",
    "references": "cr:references",
    "fileObject": "cr:fileObject",
    "fileSet": "cr:fileSet",
    "column": "cr:column",
    "fileProperty": "cr:fileProperty",
    "jsonPath": "cr:jsonPath",
    "regex": "cr:regex",
    "replace": "cr:replace",
    "separator": "cr:separator",
    "format": "cr:format",
    "repeated": "cr:repeated",
    # replace is an explicit two-field object in this toolkit
    "find": "cr:find",
    "with": "cr:with",
    # dataset-level croissant additions
    "citeAs": "cr:citeAs",
    "isLiveDataset": "cr:isLiveDataset",
    "conformsTo": "dct:conformsTo",
}

# Bare type names, for @type and dataType values.
BARE_TYPES: dict[str, str] = {
    "Dataset": "sc:Dataset",
    "FileObject": "cr:FileObject",
    "FileSet": "cr:FileSet",
    "RecordSet": "cr:RecordSet",
    "Field": "cr:Field",
    "Person": "sc:Person",
    "Organization": "sc:Organization",
    "Text": "sc:Text",
    "Integer": "sc:Integer",
    "Float": "sc:Float",
    "Boolean": "sc:Boolean",
    "Date": "sc:Date",
    "URL": "sc:URL",
    "ImageObject": "sc:ImageObject",
    "GeoCoordinates": "sc:GeoCoordinates",
    "BoundingBox": "cr:BoundingBox",
    "Label": "cr:Label",
    "Split": "cr:Split",
}

# Reverse map: canonical compact key -> preferred surface key on output.
SURFACE_KEYS: dict[str, str] = {v: k for k, v in BARE_PROPERTIES.items()}
# conformsTo stays prefixed on output, matching common Croissant documents.
SURFACE_KEYS.pop("dct:conformsTo", None)


def _compact_iri(iri: str) -> str | None:
    for base, prefix in _ALT_PREFIX_IRIS.items():
        if iri.startswith(base) and len(iri) > len(base):
            return f"{prefix}:{iri[len(base):]}"
    return None


def is_absolute_iri(text: str) -> bool:
    return "://" in text or text.startswith("urn:")


def has_known_prefix(key: str) -> bool:
    prefix, _, rest = key.partition(":")
    return bool(rest) and prefix in PREFIXES


def compact_key(key: str) -> tuple[str, bool]:
    """Compact one property key.

    Returns (compacted key, known). Unknown keys are returned verbatim with
    known=False so callers can preserve them and warn.
    """
    if key.startswith("@"):
        return key, True
    if has_known_prefix(key):
        return key, True
    if key in BARE_PROPERTIES:
        return BARE_PROPERTIES[key], True
    if is_absolute_iri(key):
        compacted = _compact_iri(key)
        if compacted is not None:
            return compacted, True
        return key, True  # foreign absolute IRI: legal, kept verbatim
    return key, False


def compact_type(value: str) -> tuple[str, bool]:
    """Compact one @type (or dataType) value. Same contract as compact_key."""
    if has_known_prefix(value):
        return value, True
    if value in BARE_TYPES:
        return BARE_TYPES[value], True
    if is_absolute_iri(value):
        compacted = _compact_iri(value)
        if compacted is not None:
            return compacted, True
        return value, True
    return value, False


def surface_key(compact: str) -> str:
    """Preferred output spelling for a canonical compact key."""
    return SURFACE_KEYS.get(compact, compact)
