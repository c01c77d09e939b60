"""MLCM-a: covariance-regularized averaging (targets micro-averaged AUC).

Alternates between estimating the label covariance ``Omega = Y'Y / n`` from
the current scores and re-solving

    min_Y  m ||Ybar - Y||^2 + Tr(Y Omega^-1 Y')

for fixed ``Omega``, starting from ``Y = Ybar``. The first term is the sum
of squared distances to the ``m`` base models up to a constant, so for
``Omega -> inf`` the minimizer is plain averaging. The closed-form minimizer
``m Ybar (Omega^-1 + m I)^-1`` is evaluated as ``m Ybar Omega (I + m Omega)^-1``,
which only needs a Cholesky solve with the SPD matrix ``I + m Omega``.

Repeating the alternation is not harmless. Along an eigenvector of
``Omega`` with eigenvalue ``w`` the step scales ``Ybar`` by ``m w / (1 + m w)``;
if ``s`` is the energy of ``Ybar`` along that direction, a non-zero fixed
point needs ``(1 + m w)^2 = m^2 w s``, which has no solution when
``s < 4 / m``. Weak directions therefore decay towards zero with every
alternation and long runs collapse onto the few dominant directions (on
sparse label sets, mostly the label-frequency profile). The default is a
single alternation.
"""

import numpy as np
import scipy.linalg

from .base import BaseCombiner
from .config import ConsensusConfig
from .exceptions import SolverError, ValidationError
from .validation import check_prediction_set, check_scores
from .voting import average_predictions


def estimate_covariance(scores, ridge=1e-6, center=False):
    """Second-moment estimate ``Y'Y / n + ridge * I``.

    Parameters
    ----------
    scores : array-like of shape (n, l)
    ridge : float, default=1e-6
        Diagonal loading; keeps the estimate invertible when score columns
        are linearly dependent.
    center : bool, default=False
        Subtract column means first (ordinary covariance). The default is
        the uncentered zero-mean Gaussian estimate.

    Returns
    -------
    omega : ndarray of shape (l, l)
        Symmetric positive semi-definite (definite if ``ridge > 0``).
    """
    if ridge < 0:
        raise ValidationError(f"ridge must be >= 0, got {ridge}")
    Y = check_scores(scores)
    if center:
        Y = Y - Y.mean(axis=0)
    omega = (Y.T @ Y) / Y.shape[0]
    omega = 0.5 * (omega + omega.T)
    omega[np.diag_indices_from(omega)] += ridge
    return omega


def _spd_solve(M, rhs):
    try:
        return scipy.linalg.solve(M, rhs, assume_a="pos", check_finite=False)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise SolverError(f"matrix is not numerically SPD: {exc}") from exc


def mlcm_a_step(y_bar, omega, m):
    """Covariance-regularized consensus for a fixed label covariance.

    Computes ``Y = m * Ybar @ Omega @ inv(I + m * Omega)`` row by row.

    Parameters
    ----------
    y_bar : array-like of shape (n, l)
        Average of the base-model predictions.
    omega : array-like of shape (l, l)
        Label covariance, symmetric positive definite.
    m : int
        Number of base models.

    Returns
    -------
    Y : ndarray of shape (n, l)
    """
    y_bar = check_scores(y_bar)
    omega = np.asarray(omega, dtype=np.float64)
    l = y_bar.shape[1]
    if omega.shape != (l, l):
        raise ValidationError(f"omega must have shape {(l, l)}, got {omega.shape}")
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    # Omega and (I + m Omega)^-1 commute, so Y' = (I + m Omega)^-1 (m Omega Ybar')
    rhs = m * (omega @ y_bar.T)
    return _spd_solve(np.eye(l) + m * omega, rhs).T


def consensus_objective(Y, y_bar, omega, m):
    """``m ||Ybar - Y||_F^2 + Tr(Y Omega^-1 Y')``."""
    Y = np.asarray(Y, dtype=np.float64)
    R = np.asarray(y_bar, dtype=np.float64) - Y
    # Tr(Y W Y') = sum(Y * (Y W)), W = Omega^-1 applied through a solve
    YW = _spd_solve(np.asarray(omega, dtype=np.float64), Y.T).T
    return float(m * np.sum(R * R) + np.sum(Y * YW))


def consensus_objective_gradient(Y, y_bar, omega, m):
    """Gradient of :func:`consensus_objective` with respect to ``Y``."""
    Y = np.asarray(Y, dtype=np.float64)
    YW = _spd_solve(np.asarray(omega, dtype=np.float64), Y.T).T
    return 2.0 * m * (Y - np.asarray(y_bar, dtype=np.float64)) + 2.0 * YW


def minmax_rescale(Y):
    """Affine map of the whole matrix onto [0, 1]; order preserving."""
    lo, hi = Y.min(), Y.max()
    if hi <= lo:
        return np.zeros_like(Y)
    return np.clip((Y - lo) / (hi - lo), 0.0, 1.0)


def mlcm_a_path(pred_set, config=None):
    """Iterate MLCM-a and yield ``(t, omega, Y, change)`` after every step.

    ``change`` is the max-abs difference between ``Y`` and the previous
    iterate. Iteration stops after ``config.iters`` steps or as soon as
    ``change < config.tol``.
    """
    config = ConsensusConfig() if config is None else config
    P = check_prediction_set(pred_set)
    m = P.shape[0]
    y_bar = average_predictions(P)
    Y = y_bar
    for t in range(1, config.iters + 1):
        omega = estimate_covariance(Y, config.ridge, center=config.center)
        Y_next = mlcm_a_step(y_bar, omega, m)
        change = float(np.abs(Y_next - Y).max())
        Y = Y_next
        yield t, omega, Y, change
        if change < config.tol:
            return


def mlcm_a(pred_set, config=None, rescale=True):
    """Consolidate multilabel predictions with MLCM-a.

    Parameters
    ----------
    pred_set : array-like of shape (m, n, l)
    config : ConsensusConfig, optional
        Uses ``iters``, ``tol``, ``ridge`` and ``center``.
    rescale : bool, default=True
        Min-max rescale the final scores to [0, 1]. Rank-based metrics are
        unaffected.

    Returns
    -------
    scores : ndarray of shape (n, l)
    """
    Y = None
    for _, _, Y, _ in mlcm_a_path(pred_set, config):
        pass
    return minmax_rescale(Y) if rescale else Y


class MLCMa(BaseCombiner):
    """MLCM-a combiner (targets micro-averaged AUC).

    Parameters
    ----------
    iters : int, default=1
        Maximum number of covariance / score alternations.
    tol : float, default=1e-8
        Stop when successive score matrices differ by less than this
        (max-abs).
    ridge : float, default=1e-6
        Diagonal loading of the covariance estimate.
    center : bool, default=False
        Estimate a centered covariance instead of the second moment.
    rescale : bool, default=True
        Min-max rescale outputs to [0, 1].

    Attributes
    ----------
    covariance_ : ndarray of shape (l, l)
        Label covariance used in the last step.
    n_iter_ : int
    history_ : list of float
        Max-abs change of the scores after every iteration.
    """

    def __init__(self, iters=1, tol=1e-8, ridge=1e-6, center=False, rescale=True):
        self.iters = iters
        self.tol = tol
        self.ridge = ridge
        self.center = center
        self.rescale = rescale

    def fit(self, X, y=None):
        P = self._validate_fit(X)
        config = ConsensusConfig(
            iters=self.iters, tol=self.tol, ridge=self.ridge, center=self.center
        )
        self.history_ = []
        for t, omega, _, change in mlcm_a_path(P, config):
            self.history_.append(change)
        self.n_iter_ = t
        self.covariance_ = omega
        return self

    def transform(self, X):
        P = self._validate_transform(X)
        Y = mlcm_a_step(average_predictions(P), self.covariance_, P.shape[0])
        return self._as_output(minmax_rescale(Y) if self.rescale else Y)
