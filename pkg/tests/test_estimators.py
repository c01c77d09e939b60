import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from mlcm import (
    BGCMBinaryRelevance,
    ConsensusConfig,
    MajorityVoting,
    MLCMa,
    MLCMr,
    average_predictions,
    bgcm_binary_relevance,
    mlcm_a,
    mlcm_r,
)
from mlcm.exceptions import ValidationError

from conftest import random_prediction_set

ESTIMATORS = [
    (MajorityVoting(), lambda X: average_predictions(X)),
    (MLCMr(alpha=2.0), lambda X: mlcm_r(X, ConsensusConfig(alpha=2.0))),
    (MLCMr(), lambda X: mlcm_r(X)),
    (BGCMBinaryRelevance(alpha=3.0), lambda X: bgcm_binary_relevance(X, ConsensusConfig(alpha=3.0))),
    (MLCMa(), lambda X: mlcm_a(X)),
    (MLCMa(iters=6, ridge=1e-4), lambda X: mlcm_a(X, ConsensusConfig(iters=6, ridge=1e-4))),
]
IDS = ["mv", "mlcm-r", "mlcm-r-auto", "bgcm-br", "mlcm-a", "mlcm-a-iter"]


@pytest.mark.parametrize("est,fn", ESTIMATORS, ids=IDS)
def test_fit_transform_matches_function(est, fn, rng):
    X = random_prediction_set(rng, 4, 30, 5)
    np.testing.assert_allclose(clone(est).fit_transform(X), fn(X), atol=1e-12)


@pytest.mark.parametrize("est,fn", ESTIMATORS, ids=IDS)
def test_clone_and_params(est, fn):
    params = est.get_params()
    twin = clone(est)
    assert twin.get_params() == params
    assert twin.set_params(**params) is twin


@pytest.mark.parametrize("est,fn", ESTIMATORS, ids=IDS)
def test_not_fitted(est, fn):
    with pytest.raises(NotFittedError):
        clone(est).transform(np.zeros((2, 3, 4)))


@pytest.mark.parametrize("est,fn", ESTIMATORS, ids=IDS)
def test_label_count_checked(est, fn, rng):
    fitted = clone(est).fit(random_prediction_set(rng, 3, 10, 4))
    with pytest.raises(ValidationError):
        fitted.transform(random_prediction_set(rng, 3, 10, 5))


def test_mlcmr_attributes(rng):
    X = random_prediction_set(rng, 3, 20, 4)
    est = MLCMr().fit(X)
    assert est.n_models_ == 3 and est.n_labels_in_ == 4
    assert est.group_distributions_.shape == (12, 4)
    assert est.label_affinity_.shape == (4, 4)
    assert est.alpha_ == pytest.approx(est.graph_.d_v[est.graph_.d_v > 0].mean())


def test_mlcmr_transform_new_instances(rng):
    X = random_prediction_set(rng, 3, 20, 4)
    est = MLCMr(alpha=2.0).fit(X)
    U = est.transform(X[:, :5])
    np.testing.assert_allclose(U, est.transform(X)[:5], atol=1e-14)
    with pytest.raises(ValidationError):
        est.transform(X[:2])


def test_mlcma_history(rng):
    X = random_prediction_set(rng, 4, 30, 5)
    est = MLCMa(iters=500, tol=1e-6).fit(X)
    assert len(est.history_) == est.n_iter_ < 500
    assert est.history_[-1] < 1e-6
    assert est.covariance_.shape == (5, 5)
