from __future__ import annotations

from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    """Keep every test's download cache inside its tmp dir."""
    cache_dir = tmp_path / "cf-cache"
    monkeypatch.setenv("CROISSANT_FORGE_CACHE", str(cache_dir))
    return cache_dir


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


def load_fixture(relpath: str):
    """(graph, model, base_dir) for a fixture document."""
    from croissant_forge import graph as graph_mod
    from croissant_forge import model as model_mod

    path = FIXTURES / relpath
    g = graph_mod.load_document(path.read_bytes())
    return g, model_mod.from_graph(g), str(path.parent)
