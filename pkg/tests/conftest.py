from pathlib import Path

import pytest

from kgsim import GraphStore, TrainConfig, build_taxonomy, train_complex, train_transe
from kgsim.embeddings import build_text_table

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURE_GRAPH = REPO_ROOT / "fixtures" / "mini_vehicles.tsv"

# Small but sufficient for the fixture graph; the acceptance suite trains
# with the full defaults.
FAST_TRAIN = dict(dim=8, epochs=40, seed=7)


@pytest.fixture(scope="session")
def fixture_store() -> GraphStore:
    store = GraphStore()
    store.ingest_edges(str(FIXTURE_GRAPH))
    return store.freeze()


@pytest.fixture(scope="session")
def fixture_taxonomy(fixture_store):
    return build_taxonomy(fixture_store)


@pytest.fixture(scope="session")
def fixture_transe(fixture_store):
    return train_transe(fixture_store, TrainConfig(**FAST_TRAIN))


@pytest.fixture(scope="session")
def fixture_complex(fixture_store):
    return train_complex(fixture_store, TrainConfig(**FAST_TRAIN))


@pytest.fixture(scope="session")
def fixture_text(fixture_store):
    return build_text_table(fixture_store)
