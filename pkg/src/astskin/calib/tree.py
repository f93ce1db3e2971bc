"""Greedy CART regression tree (variance reduction, no pruning)."""

import numpy as np


class RegressionTree:
    """Binary regression tree stored as flat node arrays.

    Each node is ``[feature, threshold, left, right, value]``; leaves have
    ``feature == -1``. Splits go left when ``x[feature] <= threshold``.
    """

    def __init__(self, max_depth=12, min_leaf=4):
        if max_depth < 1 or min_leaf < 1:
            raise ValueError("max_depth and min_leaf must be >= 1")
        self.max_depth = int(max_depth)
        self.min_leaf = int(min_leaf)

    def fit(self, X, y):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        y = np.asarray(y, dtype=float).ravel()
        self.n_features_ = X.shape[1]
        self.nodes_ = []
        self._grow(X, y, np.arange(y.size), 0)
        return self

    def _best_split(self, X, y):
        n = y.size
        best = (0.0, None, None)
        if n < 2 * self.min_leaf or y.max() == y.min():
            return best
        total_sse = np.sum((y - y.mean()) ** 2)
        for j in range(X.shape[1]):
            order = np.argsort(X[:, j], kind="stable")
            xs, ys = X[order, j], y[order]
            csum = np.cumsum(ys)
            csq = np.cumsum(ys * ys)
            left_n = np.arange(1, n)
            sse_left = csq[:-1] - csum[:-1] ** 2 / left_n
            right_n = n - left_n
            sse_right = (csq[-1] - csq[:-1]) - (csum[-1] - csum[:-1]) ** 2 / right_n
            gain = total_sse - sse_left - sse_right
            valid = (xs[1:] > xs[:-1]) & (left_n >= self.min_leaf) & (right_n >= self.min_leaf)
            if not valid.any():
                continue
            gain = np.where(valid, gain, -np.inf)
            i = int(np.argmax(gain))
            if gain[i] > best[0]:
                best = (gain[i], j, 0.5 * (xs[i] + xs[i + 1]))
        return best

    def _grow(self, X, y, idx, depth):
        node = len(self.nodes_)
        self.nodes_.append([-1, 0.0, -1, -1, float(y[idx].mean())])
        if depth >= self.max_depth:
            return node
        gain, j, thr = self._best_split(X[idx], y[idx])
        if j is None:
            return node
        mask = X[idx, j] <= thr
        self.nodes_[node][0] = int(j)
        self.nodes_[node][1] = float(thr)
        self.nodes_[node][2] = self._grow(X, y, idx[mask], depth + 1)
        self.nodes_[node][3] = self._grow(X, y, idx[~mask], depth + 1)
        return node

    def predict(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.empty(X.shape[0])
        for r, x in enumerate(X):
            k = 0
            while self.nodes_[k][0] >= 0:
                f, thr, left, right, _ = self.nodes_[k]
                k = left if x[f] <= thr else right
            out[r] = self.nodes_[k][4]
        return out

    @property
    def depth(self):
        def walk(k):
            f, _, left, right, _ = self.nodes_[k]
            return 0 if f < 0 else 1 + max(walk(left), walk(right))
        return walk(0)
