import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import DimensionMismatchError
from .validation import check_prediction_set


class BaseCombiner(TransformerMixin, BaseEstimator):
    """Common plumbing for prediction combiners.

    ``X`` is a prediction set: an array-like of shape ``(m, n, l)`` holding
    the binary output of ``m`` base models on ``n`` instances and ``l``
    labels. ``transform`` returns an ``(n, l)`` relevance-score matrix.
    ``y`` is accepted and ignored so combiners drop into pipelines.
    """

    def _validate_fit(self, X):
        Y = check_prediction_set(X)
        self.n_models_, _, self.n_labels_in_ = Y.shape
        return Y

    def _validate_transform(self, X):
        check_is_fitted(self)
        Y = check_prediction_set(X)
        if Y.shape[2] != self.n_labels_in_:
            raise DimensionMismatchError(
                None, (Y.shape[0], Y.shape[1], self.n_labels_in_), Y.shape
            )
        return Y

    def fit_transform(self, X, y=None, **fit_params):
        return self.fit(X, y, **fit_params).transform(X)

    def __sklearn_is_fitted__(self):
        return hasattr(self, "n_labels_in_")

    @staticmethod
    def _as_output(U):
        return np.ascontiguousarray(U, dtype=np.float64)
