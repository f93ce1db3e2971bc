"""Gaussian-process regression mean predictor (Cholesky dual solve)."""

import numpy as np
from scipy.linalg import cho_factor, cho_solve, LinAlgError

from ..errors import DatasetError, NumericalError, ShapeError
from .kernels import kernel_from_distance, pairwise_distances

JITTER = 1e-10


def spd_factor(K):
    """Cholesky factor of ``K``; retries once with ``JITTER`` on the diagonal."""
    try:
        return cho_factor(K, lower=True, check_finite=True)
    except LinAlgError:
        pass
    try:
        return cho_factor(K + JITTER * np.eye(K.shape[0]), lower=True)
    except LinAlgError as exc:
        raise NumericalError("kernel system is singular even after jitter") from exc


class GaussianProcess:
    """Zero-mean GP on raw inputs with fixed hyperparameters.

    ``alpha_`` holds the dual coefficients ``(K + noise_variance I)^-1 y``.
    """

    def __init__(self, kind, length_scale, signal_variance, noise_variance, rq_alpha=1.0):
        if length_scale <= 0 or signal_variance <= 0 or noise_variance < 0:
            raise ValueError("need length_scale > 0, signal_variance > 0, noise_variance >= 0")
        self.kind = kind
        self.length_scale = float(length_scale)
        self.signal_variance = float(signal_variance)
        self.noise_variance = float(noise_variance)
        self.rq_alpha = float(rq_alpha)

    def _k(self, r):
        return kernel_from_distance(self.kind, r, self.length_scale, self.signal_variance, self.rq_alpha)

    def fit(self, X, y, distances=None):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        y = np.asarray(y, dtype=float).ravel()
        if X.shape[0] == 0:
            raise DatasetError("cannot fit a GP on zero points")
        if X.shape[0] != y.size:
            raise ShapeError("X and y disagree on the number of points")
        r = pairwise_distances(X) if distances is None else distances
        K = self._k(r)
        K[np.diag_indices_from(K)] += self.noise_variance
        self.factor_ = spd_factor(K)
        self.alpha_ = cho_solve(self.factor_, y)
        self.X_ = X
        return self

    def predict(self, Xs, return_var=False):
        Xs = np.atleast_2d(np.asarray(Xs, dtype=float))
        if Xs.shape[1] != self.X_.shape[1]:
            raise ShapeError(f"expected {self.X_.shape[1]} features, got {Xs.shape[1]}")
        Ks = self._k(pairwise_distances(Xs, self.X_))
        mean = Ks @ self.alpha_
        if not return_var:
            return mean
        v = cho_solve(self.factor_, Ks.T)
        var = self.signal_variance - np.einsum("ij,ji->i", Ks, v)
        return mean, np.maximum(var, 0.0)


def heldout_log_likelihood(gp, X_fit, y_fit, X_val, y_val, distances=None):
    """Gaussian log predictive density of a validation fold."""
    gp.fit(X_fit, y_fit, distances=distances)
    mu, var = gp.predict(X_val, return_var=True)
    var = var + gp.noise_variance
    var = np.maximum(var, 1e-300)
    return float(-0.5 * np.sum(np.log(2.0 * np.pi * var) + (y_val - mu) ** 2 / var))

