"""The Hardy kernel k_alpha, its truncations, and the diagonal limit K_infinity."""
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from ._validation import ConvergenceError, as_sequence, check_alpha, check_index
from .special import lorentz_integrate

__all__ = [
    "MAX_TRUNCATION",
    "KernelEntryRule",
    "TruncatedKernel",
    "DiagonalLimit",
    "kernel_entry",
    "kernel_matrix",
    "quadratic_form",
    "integral_form",
    "top_eigenvalues",
    "power_top_eigenvalues",
    "diff_norm_bound_check",
]

MAX_TRUNCATION = 20_000


def _log_entries(alpha, n, m):
    ln = np.log(n)
    lm = np.log(m)
    return (alpha - 0.5) * (ln + lm) - 2.0 * alpha * np.maximum(ln, lm)


def kernel_entry(alpha, n, m):
    """``(n*m)**(alpha - 1/2) / max(n, m)**(2*alpha)``, evaluated in log space."""
    alpha = check_alpha(alpha)
    n = check_index(n, "n")
    m = check_index(m, "m")
    return float(np.exp(_log_entries(alpha, float(n), float(m))))


@dataclass(frozen=True)
class KernelEntryRule:
    alpha: float

    def __post_init__(self):
        check_alpha(self.alpha)

    def __call__(self, n, m):
        n = np.asarray(n, dtype=float)
        m = np.asarray(m, dtype=float)
        if np.any(n < 1) or np.any(m < 1):
            raise ValueError("kernel indices start at 1")
        return np.exp(_log_entries(self.alpha, n, m))


def kernel_matrix(alpha, N):
    """Dense ``N x N`` principal truncation of K_alpha (indices 1..N)."""
    alpha = check_alpha(alpha)
    N = check_index(N, "N")
    if N > MAX_TRUNCATION:
        raise ValueError(f"truncation order capped at {MAX_TRUNCATION}, got {N}")
    idx = np.arange(1, N + 1, dtype=float)
    return np.exp(_log_entries(alpha, idx[:, None], idx[None, :]))


@dataclass(frozen=True)
class TruncatedKernel:
    """Immutable dense truncation of K_alpha."""

    alpha: float
    N: int
    matrix: np.ndarray = field(repr=False, compare=False)

    @classmethod
    def build(cls, alpha, N):
        mat = kernel_matrix(alpha, N)
        mat.setflags(write=False)
        return cls(check_alpha(alpha), int(N), mat)

    def top_eigenvalues(self, m=1):
        return top_eigenvalues(self.matrix, m)


@dataclass(frozen=True)
class DiagonalLimit:
    """Truncation of K_infinity = diag(1, 1/2, 1/3, ...)."""

    N: int

    @property
    def diagonal(self):
        return 1.0 / np.arange(1, self.N + 1, dtype=float)

    @property
    def matrix(self):
        return np.diag(self.diagonal)


def quadratic_form(alpha, x):
    """``sum_{n,m} k_alpha(n, m) x(n) conj(x(m))`` by direct double summation."""
    alpha = check_alpha(alpha)
    x = np.asarray(x)
    if x.ndim != 1:
        raise ValueError("x must be one-dimensional")
    support = np.flatnonzero(x)
    if support.size == 0:
        return 0.0
    idx = support + 1.0
    k = np.exp(_log_entries(alpha, idx[:, None], idx[None, :]))
    xs = x[support]
    return float(np.real(xs @ k @ np.conj(xs)))


def integral_form(alpha, x, tol=1e-10):
    """The same quadratic form from the Lorentzian integral of ``|sum x(n) n^(-1/2-it)|^2``."""
    alpha = check_alpha(alpha)
    x = np.asarray(x)
    if x.ndim != 1:
        raise ValueError("x must be one-dimensional")
    support = np.flatnonzero(x)
    if support.size == 0:
        return 0.0
    n = support + 1.0
    coef = x[support] / np.sqrt(n)
    logs = np.log(n)

    def dirichlet_sq(t):
        t = np.asarray(t, dtype=float)
        phase = np.exp(-1j * np.multiply.outer(t, logs))
        return np.abs(phase @ coef) ** 2

    return lorentz_integrate(alpha, dirichlet_sq, tol=tol)


def power_top_eigenvalues(matrix, m=1, rtol=1e-12, max_iter=100_000, seed=0):
    """Top ``m`` eigenvalues of a symmetric matrix by power iteration with deflation.

    Each eigenvalue is found in turn, restarting from a fresh random vector
    that is kept orthogonal to the converged eigenvectors; the run stops when
    successive Rayleigh quotients differ by less than ``rtol`` (relative).
    Convergence is slow when the requested eigenvalues are clustered.
    """
    a = np.asarray(matrix, dtype=float)
    rng = np.random.default_rng(seed)
    found = []
    vectors = []
    for _ in range(m):
        v = rng.standard_normal(a.shape[0])
        for u in vectors:
            v -= (u @ v) * u
        v /= np.linalg.norm(v)
        rq = v @ a @ v
        for _ in range(max_iter):
            w = a @ v
            for u in vectors:
                w -= (u @ w) * u
            nrm = np.linalg.norm(w)
            if nrm == 0.0:
                break
            v = w / nrm
            new_rq = v @ a @ v
            if abs(new_rq - rq) <= rtol * abs(new_rq):
                rq = new_rq
                break
            rq = new_rq
        else:
            raise ConvergenceError("power iteration did not converge")
        found.append(rq)
        vectors.append(v)
    return np.array(found)


def top_eigenvalues(matrix, m=1):
    """Largest ``m`` eigenvalues of a dense symmetric matrix, in decreasing order."""
    a = np.asarray(matrix, dtype=float)
    N = a.shape[0]
    if m > N:
        raise ValueError("cannot request more eigenvalues than the matrix order")
    if N <= 600 or m >= N - 1:
        vals = eigh(a, eigvals_only=True, subset_by_index=[N - m, N - 1])
    else:
        try:
            vals = eigsh(a, k=m, which="LA", tol=1e-14, return_eigenvectors=False,
                         ncv=max(2 * m + 1, 40))
        except ArpackNoConvergence as exc:
            raise ConvergenceError(str(exc)) from exc
    return np.sort(vals)[::-1]


def diff_norm_bound_check(alpha, N):
    """Largest eigenvalue of ``K_alpha^(N) - K_inf^(N)`` against the bound ``2/alpha``.

    Returns ``(value, bound, passed)``.
    """
    alpha = check_alpha(alpha)
    N = check_index(N, "N", minimum=2)
    diff = kernel_matrix(alpha, N)
    diff[np.diag_indices(N)] = 0.0  # diagonal of K_alpha is exactly 1/n
    value = float(top_eigenvalues(diff, 1)[0])
    bound = 2.0 / alpha
    return value, bound, value <= bound + 1e-10
