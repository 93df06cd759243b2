"""The Jacobi matrix J_alpha, the inverse of K_alpha.

Sequences are 1-D arrays with position 0 holding x(1).  Where an infinite
sequence is needed it may be passed as a callable ``n -> x(n)``.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from ._validation import as_sequence, check_alpha, check_index
from .kernel import kernel_matrix, top_eigenvalues

__all__ = [
    "JacobiParams",
    "TridiagonalWindow",
    "c_alpha",
    "jacobi_params",
    "jacobi_params_closed_form",
    "jacobi_arrays",
    "apply_jacobi",
    "jacobi_matvec",
    "apply_factorized",
    "kernel_column",
    "inverse_residual",
    "sturm_count",
    "sturm_counts",
    "bisect_eigenvalues",
    "truncated_top_eigs",
    "truncation_top",
]


def _neg_expm1_diff(alpha, n):
    # 1 - (1 - 1/n)**(2 alpha), i.e. (n^{2a} - (n-1)^{2a}) / n^{2a}, for n >= 2
    return -np.expm1(2.0 * alpha * np.log1p(-1.0 / n))


def c_alpha(alpha, n):
    """``1 / (n**(2 alpha) - (n-1)**(2 alpha))`` without cancellation for large n."""
    alpha = check_alpha(alpha)
    n = np.asarray(n, dtype=float)
    if np.any(n < 1):
        raise ValueError("c_alpha is defined for n >= 1")
    safe = np.where(n > 1, n, 2.0)
    out = np.where(n > 1, np.exp(-2.0 * alpha * np.log(safe)) / _neg_expm1_diff(alpha, safe), 1.0)
    return float(out) if out.ndim == 0 else out


def _ab(alpha, n):
    n = np.asarray(n, dtype=float)
    up = _neg_expm1_diff(alpha, n + 1.0)
    ratio = np.exp(2.0 * alpha * (np.log(n) - np.log1p(n)))  # (n/(n+1))^{2a}
    # a(n) = -n^{a+1/2} (n+1)^{a+1/2} c(n+1) = -sqrt(n (n+1)) (n/(n+1))^{a} / up
    a = -np.sqrt(n * (n + 1.0)) * np.exp(alpha * (np.log(n) - np.log1p(n))) / up
    safe = np.where(n > 1, n, 2.0)
    first = np.where(n > 1, safe / _neg_expm1_diff(alpha, safe), 1.0)  # n^{2a+1} c(n)
    b = first + n * ratio / up  # + n^{2a+1} c(n+1)
    return a, b


def jacobi_params(alpha, n):
    """Return ``(a_alpha(n), b_alpha(n), c_alpha(n))``.

    ``a`` is the (negative) off-diagonal entry coupling n and n+1 and ``b``
    the diagonal entry, both evaluated through ``c_alpha``.
    """
    alpha = check_alpha(alpha)
    n = check_index(n, "n")
    a, b = _ab(alpha, float(n))
    return float(a), float(b), c_alpha(alpha, n)


def jacobi_params_closed_form(alpha, n):
    """``(a, b)`` straight from the closed-form ratios, with naive power differences.

    Only used as an independent check of :func:`jacobi_params`; it loses
    relative accuracy like ``eps * n / alpha``.
    """
    alpha = check_alpha(alpha)
    n = float(check_index(n, "n"))
    p = 2.0 * alpha
    a = n ** (alpha + 0.5) * (n + 1) ** (alpha + 0.5) / (n**p - (n + 1) ** p)
    b = n ** (p + 1) * ((n + 1) ** p - (n - 1) ** p) / (((n + 1) ** p - n**p) * (n**p - (n - 1) ** p))
    return a, b


def jacobi_arrays(alpha, N):
    """Arrays ``a(1..N)`` and ``b(1..N)``."""
    alpha = check_alpha(alpha)
    n = np.arange(1, N + 1, dtype=float)
    return _ab(alpha, n)


@dataclass(frozen=True)
class JacobiParams:
    """Lazily evaluated Jacobi parameters of J_alpha."""

    alpha: float

    def __post_init__(self):
        check_alpha(self.alpha)

    def a(self, n):
        return _ab(self.alpha, n)[0]

    def b(self, n):
        return _ab(self.alpha, n)[1]

    def c(self, n):
        return c_alpha(self.alpha, n)

    def window(self, N):
        return TridiagonalWindow.jacobi(self.alpha, N)


@dataclass(frozen=True)
class TridiagonalWindow:
    """A symmetric tridiagonal ``N x N`` matrix: diagonal ``b``, off-diagonal ``a``.

    ``jacobi`` gives the principal truncation of J_alpha; ``kernel_inverse``
    gives the exact inverse of the kernel truncation ``K_alpha^(N)``, which
    differs from it only in the last diagonal entry.
    """

    alpha: float
    N: int
    a: np.ndarray = field(repr=False, compare=False)
    b: np.ndarray = field(repr=False, compare=False)
    kind: str = "jacobi"

    @classmethod
    def jacobi(cls, alpha, N):
        alpha = check_alpha(alpha)
        N = check_index(N, "N")
        a, b = jacobi_arrays(alpha, N)
        return cls._frozen(alpha, N, a[: N - 1], b, "jacobi")

    @classmethod
    def kernel_inverse(cls, alpha, N):
        alpha = check_alpha(alpha)
        N = check_index(N, "N")
        a, b = jacobi_arrays(alpha, N)
        nn = float(N)
        b = b.copy()
        b[-1] = nn / _neg_expm1_diff(alpha, nn) if N > 1 else 1.0  # N^{2a+1} c(N)
        return cls._frozen(alpha, N, a[: N - 1], b, "kernel_inverse")

    @classmethod
    def _frozen(cls, alpha, N, a, b, kind):
        a = np.array(a, dtype=float)
        b = np.array(b, dtype=float)
        a.setflags(write=False)
        b.setflags(write=False)
        return cls(alpha, N, a, b, kind)

    def dense(self):
        return np.diag(self.b) + np.diag(self.a, 1) + np.diag(self.a, -1)


def _value(x, n):
    # x(n) for a 1-indexed array (zero outside its support) or a callable
    if callable(x):
        return float(x(n))
    if 1 <= n <= len(x):
        return float(x[n - 1])
    return 0.0


def apply_jacobi(alpha, x, n):
    """Row ``n >= 2`` of J_alpha applied to ``x``: ``a(n-1)x(n-1) + b(n)x(n) + a(n)x(n+1)``."""
    alpha = check_alpha(alpha)
    n = check_index(n, "n", minimum=2)
    if not callable(x):
        x = as_sequence(x)
    a_prev, _ = _ab(alpha, float(n - 1))
    a_n, b_n = _ab(alpha, float(n))
    return float(a_prev * _value(x, n - 1) + b_n * _value(x, n) + a_n * _value(x, n + 1))


def jacobi_matvec(alpha, x, N_out=None):
    """Rows ``1..N_out`` of ``J_alpha x`` by the three-term rule.

    ``x`` is an array (zero beyond its length) or a callable.  For an array the
    default ``N_out`` is ``len(x) + 1``, which covers the whole image.
    """
    alpha = check_alpha(alpha)
    if callable(x):
        if N_out is None:
            raise ValueError("N_out is required for callable sequences")
        vals = np.array([x(n) for n in range(1, N_out + 2)], dtype=float)
    else:
        x = as_sequence(x)
        if N_out is None:
            N_out = len(x) + 1
        vals = np.zeros(N_out + 1)
        k = min(len(x), N_out + 1)
        vals[:k] = x[:k]
    a, b = jacobi_arrays(alpha, N_out)
    out = b * vals[:N_out] + a * vals[1: N_out + 1]
    out[1:] += a[: N_out - 1] * vals[: N_out - 1]
    return out


def apply_factorized(alpha, x, N_out):
    """Rows ``1..N_out`` of ``D(n^(a+1/2)) (I - S*) D(c) (I - S) D(n^(a+1/2)) x``."""
    alpha = check_alpha(alpha)
    N_out = check_index(N_out, "N_out")
    n = np.arange(1, N_out + 2, dtype=float)
    if callable(x):
        vals = np.array([x(k) for k in range(1, N_out + 2)], dtype=float)
    else:
        x = as_sequence(x)
        if len(x) > N_out - 1 and np.any(x[N_out - 1:] != 0):
            raise ValueError("x must be supported in [1, N_out - 1]")
        vals = np.zeros(N_out + 1)
        k = min(len(x), N_out + 1)
        vals[:k] = x[:k]
    scale = n ** (alpha + 0.5)
    y = scale * vals
    dy = y - np.concatenate([[0.0], y[:-1]])  # (I - S) y
    z = c_alpha(alpha, n) * dy
    w = z[:-1] - z[1:]  # (I - S*) z on rows 1..N_out
    return scale[:-1] * w


def kernel_column(alpha, j, n):
    """Entries ``k_alpha(n, j)`` of column ``j`` of K_alpha (array-valued in ``n``)."""
    alpha = check_alpha(alpha)
    j = float(check_index(j, "j"))
    n = np.asarray(n, dtype=float)
    ln, lj = np.log(n), np.log(j)
    return np.exp((alpha - 0.5) * (ln + lj) - 2.0 * alpha * np.maximum(ln, lj))


def inverse_residual(alpha, j, n_check=None):
    """``max_n |(J_alpha K_alpha e_j)(n) - e_j(n)|`` over rows ``1..n_check``.

    The column ``K_alpha e_j`` is known in closed form for every index, so each
    row of the three-term rule is evaluated exactly; no truncation enters.
    """
    alpha = check_alpha(alpha)
    j = check_index(j, "j")
    if n_check is None:
        n_check = 4 * j + 200
    n_check = check_index(n_check, "n_check")
    col = kernel_column(alpha, j, np.arange(1, n_check + 2))
    image = jacobi_matvec(alpha, col, n_check)
    target = np.zeros(n_check)
    if j <= n_check:
        target[j - 1] = 1.0
    return float(np.max(np.abs(image - target)))


_PIVMIN = 1e-300


def sturm_counts(window, lams):
    """Number of eigenvalues of ``window`` strictly below each value in ``lams``."""
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    a2 = window.a**2
    b = window.b
    d = b[0] - lams
    d = np.where(d == 0.0, _PIVMIN, d)
    count = (d < 0).astype(int)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        for k in range(1, window.N):
            d = b[k] - lams - a2[k - 1] / d
            d = np.where(d == 0.0, _PIVMIN, d)
            count += d < 0
    return count


def sturm_count(window, lam):
    """Eigenvalue count strictly below ``lam`` by the signed LDL^T recursion."""
    return int(sturm_counts(window, [lam])[0])


def bisect_eigenvalues(window, indices, lo=None, hi=None, rtol=1e-15, max_iter=200):
    """Eigenvalues of ``window`` with the given 0-based ascending ``indices``.

    Plain bisection on the Sturm count, all indices advanced together.
    """
    indices = np.atleast_1d(np.asarray(indices, dtype=int))
    b, a = window.b, np.abs(window.a)
    radius = np.zeros_like(b)
    radius[:-1] += a
    radius[1:] += a
    if lo is None:
        lo = float(np.min(b - radius))
    if hi is None:
        hi = float(np.max(b + radius))
    left = np.full(indices.shape, lo, dtype=float)
    right = np.full(indices.shape, hi, dtype=float)
    for _ in range(max_iter):
        mid = 0.5 * (left + right)
        below = sturm_counts(window, mid)
        go_left = below > indices
        right = np.where(go_left, mid, right)
        left = np.where(go_left, left, mid)
        if np.all(right - left <= rtol * np.maximum(np.abs(left), np.abs(right)) + 1e-300):
            break
    return 0.5 * (left + right)


def truncated_top_eigs(alpha, N, m=1, method="dense"):
    """Largest ``m`` eigenvalues of the truncation ``K_alpha^(N)``, decreasing.

    ``method="dense"`` diagonalises the dense matrix.  The other two methods
    use the exact inverse of the truncation, which is tridiagonal: its
    smallest eigenvalues are found by LAPACK bisection (``"tridiagonal"``) or
    by the Sturm bisection of this module (``"sturm"``, O(N) Python work per
    sweep).  Both allow far larger ``N`` than the dense route.
    """
    alpha = check_alpha(alpha)
    N = check_index(N, "N")
    if not 1 <= m <= min(10, N):
        raise ValueError("need 1 <= m <= min(10, N)")
    return truncation_top(alpha, N, m, method)


def truncation_top(alpha, N, m, method="dense"):
    """As :func:`truncated_top_eigs` without the ``m <= 10`` limit."""
    alpha = check_alpha(alpha)
    N = check_index(N, "N")
    m = check_index(m, "m")
    if m > N:
        raise ValueError("cannot request more eigenvalues than the truncation order")
    if method == "dense":
        return top_eigenvalues(kernel_matrix(alpha, N), m)
    if method == "tridiagonal":
        window = TridiagonalWindow.kernel_inverse(alpha, N)
        if N == 1:
            return np.array([1.0])
        mu = eigh_tridiagonal(window.b, window.a, eigvals_only=True, select="i",
                              select_range=(0, m - 1), lapack_driver="stebz", tol=1e-300)
        return 1.0 / mu
    if method == "sturm":
        window = TridiagonalWindow.kernel_inverse(alpha, N)
        mu = bisect_eigenvalues(window, np.arange(m), lo=0.0)
        return 1.0 / mu
    raise ValueError(f"unknown method {method!r}")
