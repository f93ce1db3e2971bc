"""Train/test splitting, k-fold cross-validation, model selection and tolerance reports."""

import logging
from dataclasses import dataclass, field

import numpy as np

from ..errors import DatasetError, FoldError, TrainingError, WorkbenchError
from .models import ModelSpec, resolve_spec, train_model

log = logging.getLogger(__name__)

THRESHOLDS = (0.5, 1.0, 1.5, 2.0)


def split_dataset(ds, train_fraction=0.9, seed=0):
    n = len(ds)
    if n < 10:
        raise DatasetError(f"need at least 10 samples to split, got {n}")
    perm = np.random.default_rng(seed).permutation(n)
    n_train = int(round(train_fraction * n))
    return ds.subset(perm[:n_train]), ds.subset(perm[n_train:])


def fold_assignment(n, k, seed=0):
    """Fold index per sample: a seeded shuffle dealt round-robin into ``k`` folds."""
    if k < 2:
        raise FoldError("need k >= 2 folds")
    if k > n:
        raise FoldError(f"cannot make {k} folds from {n} samples")
    folds = np.empty(n, dtype=int)
    folds[np.random.default_rng(seed).permutation(n)] = np.arange(n) % k
    return folds


def cross_validate(ds, spec, k=10, seed=0, trainer=train_model):
    """Pooled RMSE of held-out predictions over ``k`` folds.

    ``trainer(train_ds, spec)`` must return an object with ``predict(X)``.
    """
    folds = fold_assignment(len(ds), k, seed)
    pred = np.empty(len(ds))
    for f in range(k):
        test = folds == f
        model = trainer(ds.subset(np.flatnonzero(~test)), spec)
        pred[test] = model.predict(ds.features[test])
    return float(np.sqrt(np.mean((pred - ds.force) ** 2)))


@dataclass
class RankingRow:
    spec: ModelSpec
    rmse: float = float("nan")
    error: str = None

    @property
    def ok(self):
        return self.error is None


def select_model(ds, specs, k=10, seed=0):
    """Cross-validate every spec and return ``(best_spec, ranking)``.

    GP hyperparameters are resolved once on ``ds`` before the folds run.
    Failed specs are kept in the ranking with their error message and sorted
    last; ties in RMSE keep input order.
    """
    specs = list(specs)
    if not specs:
        raise TrainingError("no model specs given")
    rows = []
    for spec in specs:
        try:
            resolved = resolve_spec(spec, ds, seed)
            rows.append(RankingRow(resolved, cross_validate(ds, resolved, k, seed)))
        except (WorkbenchError, ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
            log.warning("model %s failed: %s", spec.kind, exc)
            rows.append(RankingRow(spec, error=f"{type(exc).__name__}: {exc}"))
    ok = [r for r in rows if r.ok]
    if not ok:
        raise TrainingError("every model spec failed: " + "; ".join(f"{r.spec.kind}: {r.error}" for r in rows))
    ranking = sorted(ok, key=lambda r: r.rmse) + [r for r in rows if not r.ok]
    return ranking[0].spec, ranking


def format_ranking(ranking):
    lines = [f"{'model':<26} {'CV RMSE (N)':>12}"]
    for r in ranking:
        lines.append(f"{r.spec.kind:<26} {r.rmse:>12.4f}" if r.ok else f"{r.spec.kind:<26} {'failed':>12}  {r.error}")
    return "\n".join(lines)


@dataclass
class ToleranceReport:
    thresholds: tuple
    pct_within: tuple
    mae: float
    mae_std: float
    rmse: float
    n: int = 0

    def to_dict(self):
        return {"thresholds": list(self.thresholds), "pct_within": list(self.pct_within),
                "mae": self.mae, "mae_std": self.mae_std, "rmse": self.rmse, "n": self.n}

    def format(self):
        lines = [f"{'abs error (N)':>14} {'% predictions':>14}"]
        lines += [f"{'+/-' + format(t, '.1f'):>14} {p:>14.5f}" for t, p in zip(self.thresholds, self.pct_within)]
        lines.append(f"MAE {self.mae:.4f} N (std {self.mae_std:.4f} N), RMSE {self.rmse:.4f} N, n = {self.n}")
        return "\n".join(lines)


def tolerance_from_errors(pred, truth, thresholds=THRESHOLDS):
    err = np.abs(np.asarray(pred, dtype=float) - np.asarray(truth, dtype=float))
    if err.size == 0:
        raise DatasetError("empty test set")
    pct = tuple(float(100.0 * np.mean(err <= t)) for t in thresholds)
    return ToleranceReport(tuple(thresholds), pct, float(err.mean()), float(err.std()),
                           float(np.sqrt(np.mean(err**2))), int(err.size))


def tolerance_report(model, test, thresholds=THRESHOLDS):
    return tolerance_from_errors(model.predict(test.features), test.force, thresholds)
