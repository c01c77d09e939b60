"""Simple averaging (majority voting) of base-model predictions."""

import numpy as np

from .base import BaseCombiner
from .validation import check_prediction_set


def average_predictions(pred_set):
    """Per-entry fraction of base models that predict the label.

    This is the least-squares consensus of the base models and also the
    starting point of MLCM-a.

    Parameters
    ----------
    pred_set : array-like of shape (m, n, l)

    Returns
    -------
    scores : ndarray of shape (n, l)
    """
    Y = check_prediction_set(pred_set)
    # integer vote count divided once: each entry is the correctly rounded k/m
    return Y.sum(axis=0) / Y.shape[0]


def row_normalized_voting(pred_set):
    """Vote counts divided by each instance's total vote count.

    Instances that receive no vote from any model get the uniform row
    ``1/l``. This is the ``alpha -> inf`` limit of MLCM-r.
    """
    Y = check_prediction_set(pred_set)
    votes = Y.sum(axis=0)
    totals = votes.sum(axis=1, keepdims=True)
    out = np.full_like(votes, 1.0 / votes.shape[1])
    np.divide(votes, totals, out=out, where=totals > 0)
    return out


def squared_consensus_loss(pred_set, Y):
    """Sum of squared Frobenius distances from ``Y`` to every base model."""
    P = check_prediction_set(pred_set)
    return float(((P - np.asarray(Y, dtype=np.float64)) ** 2).sum())


class MajorityVoting(BaseCombiner):
    """Average the base models' binary predictions.

    Examples
    --------
    >>> import numpy as np
    >>> from mlcm import MajorityVoting
    >>> X = np.array([[[1, 0]], [[0, 0]]])
    >>> MajorityVoting().fit_transform(X)
    array([[0.5, 0. ]])
    """

    def fit(self, X, y=None):
        self._validate_fit(X)
        return self

    def transform(self, X):
        Y = self._validate_transform(X)
        return self._as_output(average_predictions(Y))
