import numpy as np
import pytest


def random_prediction_set(rng, m, n, l, density=0.3):
    return (rng.random((m, n, l)) < density).astype(float)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def fig2_preds():
    # 2 instances, 3 labels; model 1 predicts {1} and {2,3}, model 2 {1,2} and {3}
    return np.array([
        [[1, 0, 0], [0, 1, 1]],
        [[1, 1, 0], [0, 0, 1]],
    ], dtype=float)


@pytest.fixture
def connected_preds():
    return np.array([
        [[1, 1, 0], [0, 1, 1], [1, 0, 0]],
        [[1, 0, 0], [0, 1, 1], [1, 1, 0]],
    ], dtype=float)
