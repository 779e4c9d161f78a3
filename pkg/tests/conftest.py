import sys
from pathlib import Path

import pytest

from astrolabe.store import STRUCTURAL, Store, load

TESTS_DIR = Path(__file__).parent
FIXTURES = TESTS_DIR / "fixtures"

sys.path.insert(0, str(TESTS_DIR))


@pytest.fixture
def layered_store() -> Store:
    """Fifteen nerves: four atoms, an edge ring, two middle tiers, a cycle."""
    return load(FIXTURES / "layered_store.json", mode=STRUCTURAL)


@pytest.fixture
def semantic_store() -> Store:
    """Four labeled atoms and five semantic edges, including a 2-cycle."""
    return load(FIXTURES / "semantic_edges.json", mode=STRUCTURAL)


@pytest.fixture
def change_pair_store() -> Store:
    """Two atoms joined by a single dependency edge D -> T."""
    return load(FIXTURES / "change_pair.json", mode=STRUCTURAL)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
