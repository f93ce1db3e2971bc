"""Regression model zoo: OLS, CART tree and four GP kernels behind one interface."""

from dataclasses import dataclass, field, replace
from typing import Mapping

import numpy as np
from scipy.linalg import cho_solve

from ..errors import ConfigError, DatasetError, NumericalError, ShapeError
from .gp import GaussianProcess, spd_factor
from .kernels import KERNELS, kernel_from_distance, pairwise_distances
from .tree import RegressionTree

LINEAR = "linear-least-squares"
TREE = "regression-tree"
MODEL_KINDS = (LINEAR, TREE) + KERNELS

# short names accepted on the command line
ALIASES = {
    "linear": LINEAR,
    "tree": TREE,
    "gp-rq": "gp-rational-quadratic",
    "gp-se": "gp-squared-exponential",
    "gp-matern52": "gp-matern-5/2",
    "gp-exp": "gp-exponential",
}

GP_PARAMS = ("signal_variance", "length_scale", "noise_variance")
TREE_DEFAULTS = {"max_depth": 12, "min_leaf": 4}

# grid for GP hyperparameter search; scales are relative to the data
LENGTH_SCALE_GRID = 10.0 ** np.linspace(-1.0, 2.0, 7)   # x median pairwise distance
SIGNAL_VARIANCE_GRID = (0.1, 1.0, 10.0)                # x var(y)
NOISE_VARIANCE_GRID = (1e-4, 1e-3, 1e-2)               # x var(y)


def resolve_kind(name):
    kind = ALIASES.get(name, name)
    if kind not in MODEL_KINDS:
        raise ConfigError(f"unknown model kind {name!r}; expected one of {', '.join(MODEL_KINDS)}")
    return kind


@dataclass(frozen=True)
class ModelSpec:
    """Model family plus hyperparameters.

    GP specs without all of ``signal_variance``, ``length_scale`` and
    ``noise_variance`` are tuned by grid search when trained.
    """

    kind: str
    hyperparameters: Mapping = field(default_factory=dict)
    standardize: bool = True

    def __post_init__(self):
        object.__setattr__(self, "kind", resolve_kind(self.kind))
        hp = dict(self.hyperparameters)
        if self.kind == TREE:
            hp = {**TREE_DEFAULTS, **hp}
            if int(hp["max_depth"]) < 1 or int(hp["min_leaf"]) < 1:
                raise ConfigError("tree needs max_depth >= 1 and min_leaf >= 1")
        elif self.is_gp:
            if hp.get("signal_variance", 1.0) <= 0 or hp.get("length_scale", 1.0) <= 0:
                raise ConfigError("GP needs signal_variance > 0 and length_scale > 0")
            if hp.get("noise_variance", 0.0) < 0:
                raise ConfigError("GP needs noise_variance >= 0")
            if self.kind == "gp-rational-quadratic":
                hp.setdefault("rq_alpha", 1.0)
        object.__setattr__(self, "hyperparameters", hp)

    @property
    def is_gp(self):
        return self.kind in KERNELS

    @property
    def is_resolved(self):
        return not self.is_gp or all(p in self.hyperparameters for p in GP_PARAMS)

    def to_dict(self):
        return {"kind": self.kind, "hyperparameters": dict(self.hyperparameters),
                "standardize": self.standardize}

    @classmethod
    def from_dict(cls, d):
        return cls(d["kind"], dict(d.get("hyperparameters", {})), bool(d.get("standardize", True)))


def default_specs():
    """The six model families compared during calibration, in ranking tie-break order."""
    return [ModelSpec(LINEAR), ModelSpec(TREE)] + [ModelSpec(k) for k in KERNELS]


@dataclass
class Standardization:
    x_mean: np.ndarray
    x_scale: np.ndarray
    y_mean: float = 0.0

    @classmethod
    def fit(cls, X, y, enabled=True, center_y=True):
        d = X.shape[1]
        if not enabled:
            return cls(np.zeros(d), np.ones(d), 0.0)
        scale = X.std(axis=0)
        scale[scale == 0] = 1.0
        return cls(X.mean(axis=0), scale, float(y.mean()) if center_y else 0.0)

    def transform(self, X):
        return (X - self.x_mean) / self.x_scale


class RegressionModel:
    """A trained, immutable force predictor."""

    def __init__(self, spec, standardization, state):
        self.spec = spec
        self.standardization = standardization
        self.state = state
        self._build()

    def _build(self):
        kind, hp, st = self.spec.kind, self.spec.hyperparameters, self.state
        if kind == TREE:
            tree = RegressionTree(hp["max_depth"], hp["min_leaf"])
            tree.nodes_ = [list(n) for n in st["nodes"]]
            tree.n_features_ = len(self.standardization.x_mean)
            self._impl = tree
        elif self.spec.is_gp:
            gp = GaussianProcess(kind, hp["length_scale"], hp["signal_variance"],
                                 hp["noise_variance"], hp.get("rq_alpha", 1.0))
            gp.X_ = np.asarray(st["X"], dtype=float)
            gp.alpha_ = np.asarray(st["alpha"], dtype=float)
            self._impl = gp

    @property
    def n_features(self):
        return len(self.standardization.x_mean)

    def predict_raw(self, X):
        """Model output before clamping to non-negative force."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.n_features:
            raise ShapeError(f"model expects {self.n_features} features, got {X.shape[1]}")
        Z = self.standardization.transform(X)
        if self.spec.kind == LINEAR:
            out = Z @ np.asarray(self.state["weights"]) + self.state["intercept"]
        else:
            out = self._impl.predict(Z)
        return out + self.standardization.y_mean

    def predict(self, X):
        return np.maximum(self.predict_raw(X), 0.0)

    def coefficients(self):
        """Linear weights and intercept in raw feature units."""
        if self.spec.kind != LINEAR:
            raise TypeError("coefficients() is only defined for linear models")
        s = self.standardization
        w = np.asarray(self.state["weights"]) / s.x_scale
        return w, float(self.state["intercept"] + s.y_mean - w @ s.x_mean)


def _as_arrays(train):
    if hasattr(train, "features"):
        X, y = train.features, train.force
    else:
        X, y = train
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    if y.size == 0:
        raise DatasetError("training set is empty")
    if X.shape[0] != y.size:
        raise ShapeError("features and labels disagree on the number of samples")
    return X, y


def _heldout_split(n, seed, fraction=0.1):
    perm = np.random.default_rng(seed).permutation(n)
    n_val = max(1, int(round(fraction * n)))
    return np.sort(perm[n_val:]), np.sort(perm[:n_val])


def tune_gp(kind, X, y, seed=0, rq_alpha=1.0):
    """Grid search of GP hyperparameters by held-out-fold log predictive density.

    ``X`` and ``y`` are already standardized / centred. Returns a dict with
    the winning ``signal_variance``, ``length_scale``, ``noise_variance``.
    """
    n = y.size
    var_y = float(y.var()) if n > 1 and y.var() > 0 else 1.0
    if n < 3:
        return {"signal_variance": var_y, "length_scale": 1.0, "noise_variance": 1e-4 * var_y}
    fit_idx, val_idx = _heldout_split(n, seed)
    Xf, yf, Xv, yv = X[fit_idx], y[fit_idx], X[val_idx], y[val_idx]
    r_ff = pairwise_distances(Xf)
    r_vf = pairwise_distances(Xv, Xf)
    pos = r_ff[np.triu_indices_from(r_ff, 1)]
    pos = pos[pos > 0]
    median = float(np.median(pos)) if pos.size else 1.0
    best, best_ll = None, -np.inf
    for ls in median * LENGTH_SCALE_GRID:
        base_ff = kernel_from_distance(kind, r_ff, ls, 1.0, rq_alpha)
        base_vf = kernel_from_distance(kind, r_vf, ls, 1.0, rq_alpha)
        for sf in SIGNAL_VARIANCE_GRID:
            for sn in NOISE_VARIANCE_GRID:
                sf2, sn2 = sf * var_y, sn * var_y
                K = sf2 * base_ff
                K[np.diag_indices_from(K)] += sn2
                try:
                    factor = spd_factor(K)
                except NumericalError:
                    continue
                Ks = sf2 * base_vf
                mu = Ks @ cho_solve(factor, yf)
                v = cho_solve(factor, Ks.T)
                var = np.maximum(sf2 - np.einsum("ij,ji->i", Ks, v), 0.0) + sn2
                ll = float(-0.5 * np.sum(np.log(2 * np.pi * var) + (yv - mu) ** 2 / var))
                if ll > best_ll:
                    best_ll = ll
                    best = {"signal_variance": sf2, "length_scale": float(ls), "noise_variance": sn2}
    if best is None:
        raise NumericalError(f"no grid point gave a factorisable kernel for {kind}")
    return best


def resolve_spec(spec, train, seed=0):
    """Fill in missing GP hyperparameters by grid search on ``train``."""
    if spec.is_resolved:
        return spec
    X, y = _as_arrays(train)
    std = Standardization.fit(X, y, spec.standardize)
    tuned = tune_gp(spec.kind, std.transform(X), y - std.y_mean, seed,
                    spec.hyperparameters.get("rq_alpha", 1.0))
    return replace(spec, hyperparameters={**tuned, **spec.hyperparameters})


def train_model(train, spec: ModelSpec, seed=0) -> RegressionModel:
    """Fit ``spec`` to a dataset (or an ``(X, y)`` pair)."""
    X, y = _as_arrays(train)
    spec = resolve_spec(spec, (X, y), seed)
    kind, hp = spec.kind, spec.hyperparameters
    if kind == LINEAR:
        std = Standardization.fit(X, y, spec.standardize, center_y=False)
        Z = std.transform(X)
        A = np.hstack([Z, np.ones((Z.shape[0], 1))])
        try:
            coef = np.linalg.solve(A.T @ A, A.T @ y)
        except np.linalg.LinAlgError as exc:
            raise NumericalError("normal equations are singular") from exc
        state = {"weights": coef[:-1].tolist(), "intercept": float(coef[-1])}
    elif kind == TREE:
        std = Standardization.fit(X, y, spec.standardize, center_y=False)
        tree = RegressionTree(hp["max_depth"], hp["min_leaf"]).fit(std.transform(X), y)
        state = {"nodes": tree.nodes_}
    else:
        std = Standardization.fit(X, y, spec.standardize)
        gp = GaussianProcess(kind, hp["length_scale"], hp["signal_variance"],
                             hp["noise_variance"], hp.get("rq_alpha", 1.0))
        gp.fit(std.transform(X), y - std.y_mean)
        state = {"X": gp.X_, "alpha": gp.alpha_}
    return RegressionModel(spec, std, state)


def predict(model: RegressionModel, features):
    """Force prediction for one feature vector (float) or a batch (array)."""
    bands = getattr(features, "bands", features)
    arr = np.asarray(bands, dtype=float)
    out = model.predict(arr)
    return float(out[0]) if arr.ndim == 1 else out
