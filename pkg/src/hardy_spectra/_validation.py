"""Input checks shared by the public functions and the estimator."""
import numbers

import numpy as np


class ConvergenceError(RuntimeError):
    """An iterative routine hit its refinement or size cap."""


class InconsistencyError(RuntimeError):
    """Two independent numerical routes disagree beyond tolerance."""


def check_alpha(alpha):
    """Return ``alpha`` as a float, raising ``ValueError`` unless it is a finite positive real."""
    if isinstance(alpha, bool) or not isinstance(alpha, numbers.Real):
        raise ValueError(f"alpha must be a positive real number, got {alpha!r}")
    alpha = float(alpha)
    if not np.isfinite(alpha) or alpha <= 0:
        raise ValueError(f"alpha must be a positive real number, got {alpha!r}")
    return alpha


def check_index(n, name="n", minimum=1):
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise ValueError(f"{name} must be an integer, got {n!r}")
    n = int(n)
    if n < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {n}")
    return n


def check_positive(value, name):
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be positive, got {value!r}")
    return value


def as_sequence(x):
    """Coerce a finitely supported sequence to a 1-D float array; position 0 holds x(1)."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("sequence must be one-dimensional")
    if not np.all(np.isfinite(x)):
        raise ValueError("sequence must contain only finite values")
    return x
