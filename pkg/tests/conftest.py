from pathlib import Path

import numpy as np
import pytest

from semlink.nn.rng import stream

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def toy_kb_path():
    return FIXTURES / "toy_kb.tsv"


@pytest.fixture
def toy_glove_16d():
    return FIXTURES / "toy_glove_16d.txt"


@pytest.fixture
def toy_glove_100d():
    return FIXTURES / "toy_glove_100d.txt"


@pytest.fixture
def labels_path():
    return FIXTURES / "labels.txt"


@pytest.fixture
def features_path():
    return FIXTURES / "features_small.jsonl"


@pytest.fixture
def detections_path():
    return FIXTURES / "detections_small.jsonl"


def make_embedding_clusters(seed, n=600, dim=100, n_classes=12, spread=0.3):
    """12 Gaussian clusters in R^dim with a fixed seed; labels are
    balanced and the row order is shuffled."""
    rng = stream(seed, 42)
    centers = rng.standard_normal((n_classes, dim))
    y = np.arange(n) % n_classes
    X = centers[y] + spread * rng.standard_normal((n, dim))
    perm = rng.permutation(n)
    return X[perm], y[perm]


def make_fusion_clusters(seed, n=600, n_classes=12, spread=0.3):
    """Analogous clusters over [4096-d image | 100-d embedding] rows."""
    rng = stream(seed, 43)
    img_centers = rng.standard_normal((n_classes, 4096))
    emb_centers = rng.standard_normal((n_classes, 100))
    y = np.arange(n) % n_classes
    Xi = img_centers[y] + spread * rng.standard_normal((n, 4096))
    Xe = emb_centers[y] + spread * rng.standard_normal((n, 100))
    X = np.concatenate([Xi, Xe], axis=1)
    perm = rng.permutation(n)
    return X[perm], y[perm]
