"""Stationary covariance functions on Euclidean distance."""

import numpy as np

KERNELS = ("gp-rational-quadratic", "gp-squared-exponential", "gp-matern-5/2", "gp-exponential")


def pairwise_distances(a, b=None):
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = a if b is None else np.atleast_2d(np.asarray(b, dtype=float))
    sq = (a * a).sum(1)[:, None] + (b * b).sum(1)[None, :] - 2.0 * a @ b.T
    d = np.sqrt(np.maximum(sq, 0.0))
    if b is a:
        # exact zeros and symmetry on the diagonal block
        np.fill_diagonal(d, 0.0)
        d = 0.5 * (d + d.T)
    return d


def kernel_from_distance(kind, r, length_scale, signal_variance, alpha=1.0):
    """Evaluate ``kind`` on a distance matrix ``r``."""
    s = np.asarray(r, dtype=float) / length_scale
    if kind == "gp-exponential":
        k = np.exp(-s)
    elif kind == "gp-squared-exponential":
        k = np.exp(-0.5 * s * s)
    elif kind == "gp-matern-5/2":
        t = np.sqrt(5.0) * s
        k = (1.0 + t + t * t / 3.0) * np.exp(-t)
    elif kind == "gp-rational-quadratic":
        k = (1.0 + s * s / (2.0 * alpha)) ** (-alpha)
    else:
        raise ValueError(f"unknown kernel {kind!r}")
    return signal_variance * k


def kernel_matrix(kind, a, b=None, length_scale=1.0, signal_variance=1.0, alpha=1.0):
    return kernel_from_distance(kind, pairwise_distances(a, b), length_scale, signal_variance, alpha)
