"""Input checks shared by the estimator wrappers."""

from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array, column_or_1d


def check_points(X, d=None, name="X"):
    """2-D finite float64 array, optionally with exactly ``d`` columns."""
    X = check_array(X, dtype=np.float64, ensure_2d=True, input_name=name)
    if d is not None and X.shape[1] != d:
        raise ValueError(f"{name} has {X.shape[1]} features but the model expects {d}")
    return X


def check_targets(y, n_rows, name="y"):
    y = column_or_1d(np.asarray(y, dtype=np.float64), warn=True)
    if y.shape[0] != n_rows:
        raise ValueError(f"{name} has {y.shape[0]} entries, expected {n_rows}")
    if not np.all(np.isfinite(y)):
        raise ValueError(f"{name} contains non-finite values")
    return y


def check_weights(w, n_rows, name="sample_weight"):
    if w is None:
        return np.ones(n_rows)
    w = check_targets(w, n_rows, name)
    if np.any(w < 0):
        raise ValueError(f"{name} must be nonnegative")
    return w


def function_values(f, X, name="f"):
    """Evaluate a callable on ``X`` or validate an array of values."""
    vals = f(X) if callable(f) else f
    return check_targets(vals, X.shape[0], name)
