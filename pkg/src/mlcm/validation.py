"""Input validation helpers.

A prediction set is carried around as a float array of shape ``(m, n, l)``:
``m`` base models, ``n`` instances, ``l`` labels, entries in {0, 1}. Model
indices in error messages are 1-based (they match ``pred_1.csv`` ...);
row/column indices are 0-based array positions.
"""

import numpy as np
from sklearn.utils import check_array

from .exceptions import DimensionMismatchError, NonBinaryEntryError, ValidationError

SCORE_ATOL = 1e-12


def _as_2d(Y, what):
    try:
        return check_array(
            Y,
            dtype=np.float64,
            ensure_all_finite=False,
            ensure_min_samples=0,
            ensure_min_features=0,
            input_name=what,
        )
    except ValueError as exc:
        raise ValidationError(f"{what}: {exc}") from exc


def _check_binary(Y, model):
    bad = ~((Y == 0) | (Y == 1))
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise NonBinaryEntryError(model, int(i), int(j), float(Y[i, j]))


def check_label_matrix(Z, shape=None):
    """Validate a binary ``(n, l)`` label matrix and return it as float64."""
    Z = _as_2d(Z, "label matrix")
    if Z.shape[0] < 1 or Z.shape[1] < 1:
        raise ValidationError(f"label matrix must be at least 1x1, got {Z.shape}")
    if shape is not None and Z.shape != tuple(shape):
        raise DimensionMismatchError(None, shape, Z.shape)
    _check_binary(Z, None)
    return Z


def check_prediction_set(X):
    """Validate base-model predictions and stack them into ``(m, n, l)``.

    Parameters
    ----------
    X : array-like of shape (m, n, l) or sequence of m (n, l) arrays
        Binary predictions of each base model.

    Returns
    -------
    Y : ndarray of shape (m, n, l), dtype float64

    Raises
    ------
    DimensionMismatchError
        If a model's matrix differs in shape from the first one.
    NonBinaryEntryError
        On the first entry that is not exactly 0 or 1.
    """
    if isinstance(X, np.ndarray) and X.ndim == 3:
        members = list(X)
    elif isinstance(X, np.ndarray) and X.ndim == 2:
        raise ValidationError(
            "expected a stack of prediction matrices of shape (m, n, l); "
            "wrap a single model as X[None]"
        )
    else:
        members = list(X)
    if len(members) < 1:
        raise ValidationError("a prediction set needs at least one base model")

    mats = []
    ref = None
    for k, Yk in enumerate(members, start=1):
        Yk = _as_2d(Yk, f"model {k}")
        if ref is None:
            ref = Yk.shape
            if ref[0] < 1 or ref[1] < 1:
                raise ValidationError(f"prediction matrices must be at least 1x1, got {ref}")
        elif Yk.shape != ref:
            raise DimensionMismatchError(k, ref, Yk.shape)
        _check_binary(Yk, k)
        mats.append(Yk)
    return np.stack(mats)


def validate(pred_set, truth=None):
    """Check a prediction set (and optionally the ground truth against it).

    Returns the stacked prediction set; the values are unchanged.
    """
    Y = check_prediction_set(pred_set)
    if truth is not None:
        check_label_matrix(truth, shape=Y.shape[1:])
    return Y


def check_scores(S, shape=None, bounded=False):
    """Validate a real ``(n, l)`` score matrix.

    ``bounded=True`` additionally enforces the [0, 1] range (up to
    ``SCORE_ATOL``) required of consolidated outputs; metrics only need
    finite values.
    """
    S = _as_2d(S, "scores")
    if S.shape[0] < 1 or S.shape[1] < 1:
        raise ValidationError(f"scores must be at least 1x1, got {S.shape}")
    if shape is not None and S.shape != tuple(shape):
        raise DimensionMismatchError(None, shape, S.shape)
    if not np.isfinite(S).all():
        raise ValidationError("scores contain NaN or infinite values")
    if bounded and (S.min() < -SCORE_ATOL or S.max() > 1 + SCORE_ATOL):
        raise ValidationError(
            f"scores must lie in [0, 1], got range [{S.min()}, {S.max()}]"
        )
    return S
