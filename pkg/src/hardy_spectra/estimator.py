"""A scikit-learn style front end to the spectral computations."""
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ._validation import check_alpha, check_index, check_positive
from .jacobi import TridiagonalWindow
from .kernel import MAX_TRUNCATION, kernel_matrix
from .spectrum import find_eigenvalues

__all__ = ["HardyKernelSpectrum"]


class HardyKernelSpectrum(TransformerMixin, BaseEstimator):
    """Eigenvalues of K_alpha above its band, plus the truncated operator as a transform.

    The operator is fixed by ``alpha`` alone, so ``fit`` takes no data: it
    locates the eigenvalues and stores them.  ``transform`` treats each row of
    ``X`` as a sequence ``x(1..N)`` and returns ``K_N x`` (the N x N
    truncation); ``inverse_transform`` applies the exact inverse of that
    truncation, which is tridiagonal.

    Parameters
    ----------
    alpha : float
        Kernel parameter, positive.
    tol : float
        Absolute tolerance on the eigenvalues.
    trunc_n : int
        Truncation size of the cross-check against the finite kernel matrix.
    oracle : {"dense", "tridiagonal", "sturm"} or None
        Method of that cross-check; ``None`` skips it.

    Attributes
    ----------
    eigenvalues_ : ndarray
        Eigenvalues of K_alpha above ``2/alpha``, in decreasing order.
    n_eigenvalues_ : int
    norm_ : float
        Operator norm, the largest eigenvalue or ``2/alpha``.
    ac_band_ : tuple
        The absolutely continuous band ``(0, 2/alpha)``.
    report_ : SpectrumReport
    """

    def __init__(self, alpha=1.0, tol=1e-10, trunc_n=4000, oracle="dense"):
        self.alpha = alpha
        self.tol = tol
        self.trunc_n = trunc_n
        self.oracle = oracle

    def _validate_params(self):
        check_alpha(self.alpha)
        check_positive(self.tol, "tol")
        check_index(self.trunc_n, "trunc_n", minimum=2)
        if self.oracle not in (None, "dense", "tridiagonal", "sturm"):
            raise ValueError(f"unknown oracle {self.oracle!r}")

    def fit(self, X=None, y=None):
        self._validate_params()
        report = find_eigenvalues(self.alpha, self.tol, trunc_n=self.trunc_n, oracle=self.oracle)
        self.report_ = report
        self.eigenvalues_ = np.array(report.lambda_K, dtype=float)
        self.n_eigenvalues_ = report.count
        self.norm_ = float(report.norm)
        self.ac_band_ = tuple(report.ac_band)
        return self

    def _rows(self, X):
        X = check_array(X, dtype=np.float64)
        if X.shape[1] > MAX_TRUNCATION:
            raise ValueError(f"at most {MAX_TRUNCATION} features are supported")
        return X

    def transform(self, X):
        check_is_fitted(self, "eigenvalues_")
        X = self._rows(X)
        return X @ kernel_matrix(self.alpha, X.shape[1])

    def inverse_transform(self, X):
        check_is_fitted(self, "eigenvalues_")
        X = self._rows(X)
        window = TridiagonalWindow.kernel_inverse(self.alpha, X.shape[1])
        return _tridiagonal_apply(window, X)

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        tags.requires_fit = True
        tags.input_tags.allow_nan = False
        return tags


def _tridiagonal_apply(window, X):
    out = X * window.b
    out[:, :-1] += X[:, 1:] * window.a
    out[:, 1:] += X[:, :-1] * window.a
    return out
