import numpy as np
import pytest

from qensemble import PredictionMatrix, make_rng


def build_matrix(seed=0, n=5, m=40, balance=0.4) -> PredictionMatrix:
    """Random valid prediction matrix with at least one example per class."""
    rng = make_rng(seed)
    scores = rng.random((n, m))
    labels = (rng.random(m) < balance).astype(np.int64)
    if labels.sum() == 0:
        labels[0] = 1
    if labels.sum() == m:
        labels[0] = 0
    return PredictionMatrix(scores, labels, tuple(f"p{i}" for i in range(n)))


@pytest.fixture
def rng():
    return make_rng(987654321)


@pytest.fixture
def matrix_factory():
    return build_matrix
