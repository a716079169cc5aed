"""L2-regularized binary logistic regression, trained by full-batch gradient
descent with backtracking line search.

Labels are in {-1, +1}. The objective is::

    mean_t log(1 + exp(-y_t (theta . x_t + b))) + reg / 2 * ||theta||^2

with the bias left unregularized.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.special import expit

__all__ = [
    "LogRegModel",
    "logreg_objective",
    "logreg_gradient",
    "fit_logreg",
    "train_logreg",
    "holdout_split",
]

logger = logging.getLogger(__name__)

DEFAULT_REG_GRID = (0.001, 0.01, 0.1, 1.0)


@dataclass
class LogRegModel:
    theta: np.ndarray
    bias: float
    reg: float
    n_iter: int = 0
    objective: float = float("nan")
    history: list = field(default_factory=list, repr=False)
    heldout_accuracy: float | None = None

    def decision_function(self, X):
        return np.asarray(_as_matrix(X) @ self.theta).ravel() + self.bias

    def predict(self, X):
        return np.where(self.decision_function(X) >= 0, 1, -1)


def _as_matrix(X):
    if sp.issparse(X):
        return X.tocsr()
    return np.atleast_2d(np.asarray(X, dtype=float))


def logreg_objective(theta, bias, X, y, reg):
    z = np.asarray(X @ theta).ravel() + bias
    return float(np.mean(np.logaddexp(0.0, -y * z)) + 0.5 * reg * theta @ theta)


def logreg_gradient(theta, bias, X, y, reg):
    """Analytic gradient of :func:`logreg_objective`; returns ``(d_theta, d_bias)``."""
    z = np.asarray(X @ theta).ravel() + bias
    s = -y * expit(-y * z)
    n = len(y)
    g_theta = np.asarray(X.T @ s).ravel() / n + reg * theta
    return g_theta, float(np.sum(s) / n)


def fit_logreg(X, y, reg, tol=1e-6, max_iter=500, armijo=1e-4, shrink=0.5):
    """Fit a single regularization value from zero initialization."""
    X = _as_matrix(X)
    y = np.asarray(y, dtype=float)
    theta = np.zeros(X.shape[1])
    bias = 0.0
    f = logreg_objective(theta, bias, X, y, reg)
    history = [f]
    step = 1.0
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        g_theta, g_bias = logreg_gradient(theta, bias, X, y, reg)
        gnorm2 = g_theta @ g_theta + g_bias * g_bias
        if np.sqrt(gnorm2) <= tol:
            n_iter -= 1
            break
        step = min(step * 2.0, 1e6)
        while True:
            cand_theta = theta - step * g_theta
            cand_bias = bias - step * g_bias
            f_new = logreg_objective(cand_theta, cand_bias, X, y, reg)
            if f_new <= f - armijo * step * gnorm2 or step < 1e-20:
                break
            step *= shrink
        if f_new > f:
            break
        theta, bias, f = cand_theta, cand_bias, f_new
        history.append(f)
    return LogRegModel(theta, bias, reg, n_iter=n_iter, objective=f, history=history)


def holdout_split(n, fraction, seed):
    """Seeded shuffle; returns ``(train_idx, heldout_idx)``."""
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    n_held = int(round(fraction * n))
    n_held = min(max(n_held, 1), n - 1)
    return np.sort(order[n_held:]), np.sort(order[:n_held])


def train_logreg(X, y, reg_grid=DEFAULT_REG_GRID, heldout_fraction=0.1, seed=0, **fit_kw):
    """Pick ``reg`` by held-out accuracy (ties -> larger reg), then refit on all data."""
    X = _as_matrix(X)
    y = np.asarray(y, dtype=float)
    if len(y) < 2 or len(np.unique(y)) < 2:
        raise ValueError("logistic regression needs >= 2 documents with both labels")
    if not set(np.unique(y)) <= {-1.0, 1.0}:
        raise ValueError("labels must be -1 or +1")
    reg_grid = list(reg_grid)
    if not reg_grid:
        raise ValueError("empty regularization grid")
    if not 0 < heldout_fraction <= 0.5:
        raise ValueError("heldout_fraction must be in (0, 0.5]")

    train_idx, held_idx = holdout_split(len(y), heldout_fraction, seed)
    best_reg, best_acc = None, -1.0
    for reg in sorted(reg_grid):
        model = fit_logreg(X[train_idx], y[train_idx], reg, **fit_kw)
        acc = float(np.mean(model.predict(X[held_idx]) == y[held_idx]))
        logger.debug("reg=%g heldout_acc=%.4f", reg, acc)
        if acc >= best_acc:
            best_reg, best_acc = reg, acc
    model = fit_logreg(X, y, best_reg, **fit_kw)
    model.heldout_accuracy = best_acc
    return model
