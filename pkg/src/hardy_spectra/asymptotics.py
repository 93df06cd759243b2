"""Decaying solutions of the three-term recurrence for J_alpha.

For ``lam = (alpha**2 - s**2) / (2*alpha)`` the recurrence
``a(n-1)x(n-1) + b(n)x(n) + a(n)x(n+1) = lam*x(n)`` (n >= 2) has a unique
solution with ``x(n) ~ n**(-1/2-s)``.  Far out it is approximated by the
asymptotic expansion ``y_k = sum_j Y(j) n**(-1/2-s-2j)``; the solution is then
obtained by running the recurrence backwards from the expansion (Miller's
method: the wanted solution is the minimal one, so backward errors die out).
The first-row defect of that solution, the secular function ``W(s)``, vanishes
exactly at the eigenvalues of J_alpha below the band.
"""
from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np

from ._validation import ConvergenceError, check_alpha, check_index
from .jacobi import jacobi_arrays
from .series import TruncatedSeries

__all__ = [
    "AsymptoticExpansion",
    "GeneralizedSolution",
    "f_taylor",
    "choose_order",
    "build_expansion",
    "eval_tail",
    "backward_recurrence",
    "solve_generalized",
    "secular",
    "secular_grid",
]

MAX_SERIES_ORDER = 64
N_START = 64
N_CAP = 1_000_000


def f_taylor(alpha, beta, K):
    """Taylor series of ``f_{alpha,beta}(z)`` through ``z**(2K)``.

    ``f(z) = (A(z) - B(z)) / z`` with ``A = (1-(1-z)**(a-b)) / (1-(1-z)**(2a))``
    and ``B`` the same with ``1+z``.  Both quotients are formed from their own
    binomial series after cancelling the common factor ``z``.  ``f`` is even,
    so the coefficient of ``z**(2j)`` is the j-th expansion coefficient
    ``C_{alpha,beta}(j)``.  ``beta`` may be an array; the result is then a batch.
    """
    alpha = check_alpha(alpha)
    K = int(K)
    if not 0 <= K <= MAX_SERIES_ORDER:
        raise ValueError(f"K must lie in [0, {MAX_SERIES_ORDER}]")
    beta = np.asarray(beta, dtype=float)
    order = 2 * K + 2  # one order is lost to each division by z
    gamma = alpha - beta
    parts = []
    for sign in (-1.0, 1.0):
        num = (1.0 - TruncatedSeries.binomial(gamma, order, sign)).shift_down()
        parts.append(num * _reciprocal_denominator(alpha, order, sign))
    return (parts[0] - parts[1]).shift_down()


@lru_cache(maxsize=256)
def _reciprocal_denominator(alpha, order, sign):
    # 1 / [(1 - (1 + sign z)^(2 alpha)) / z]; it does not depend on beta
    den = (1.0 - TruncatedSeries.binomial(2.0 * alpha, order, sign)).shift_down()
    assert abs(den.coef[0]) > 0.0  # = -sign * 2 alpha
    return TruncatedSeries.constant(1.0, order - 1) / den


def choose_order(alpha, s):
    """Expansion order: both 2k > alpha + 1 + |lam| and 2k - 1 > s + 2, plus one spare."""
    lam = (alpha * alpha - s * s) / (2.0 * alpha)
    return max(math.ceil((alpha + 1.0 + abs(lam)) / 2.0) + 1, math.ceil((s + 3.0) / 2.0) + 1, 3)


@dataclass(frozen=True)
class AsymptoticExpansion:
    """``y_k = sum_{j<k} Y(j) n**(-1/2-s-2j)`` with residual coefficients.

    ``residual[i]`` is ``C_k(k+i)``: ``(J - lam) y_k`` equals
    ``sum_i residual[i] n**(-1/2-s-2(k+i))`` for n >= 2.
    """

    alpha: float
    s: float
    k: int
    Y: np.ndarray = field(repr=False, compare=False)
    residual: np.ndarray = field(repr=False, compare=False)

    @property
    def lam(self):
        return (self.alpha**2 - self.s**2) / (2.0 * self.alpha)

    @property
    def next_coefficient(self):
        """``Y(k)``, the first coefficient left out."""
        return self.alpha * self.residual[0] / (2.0 * self.k * (self.s + self.k))


def _expansion_arrays(alpha, s, k, extra=2):
    # vectorised over an array of s; returns Y (..., k) and C_k(k..k+extra)
    s = np.asarray(s, dtype=float)
    j_max = k + extra
    if j_max > MAX_SERIES_ORDER:
        raise ValueError(f"expansion order {k} exceeds the series cap")
    resid = f_taylor(alpha, s, j_max).coef[..., 0::2].copy()  # C_1(j), j = 0..j_max
    resid[..., 0] = 0.0  # the j = 0 term is lam itself
    Y = np.zeros(s.shape + (k,))
    Y[..., 0] = 1.0
    for m in range(1, k):
        if np.any(s + m == 0.0):
            raise ZeroDivisionError(f"pole of the expansion at s = {-m}")
        Y[..., m] = alpha * resid[..., m] / (2.0 * m * (s + m))
        shifted = f_taylor(alpha, s + 2.0 * m, j_max - m).coef[..., 0::2]
        resid[..., m + 1:] += Y[..., m, None] * shifted[..., 1:]
        resid[..., m] = 0.0
    return Y, resid[..., k:]


def build_expansion(alpha, s, k=None):
    """Coefficients ``Y(0..k-1)`` killing the residual of ``(J - lam) y`` through order k.

    ``Y(0) = 1`` and ``Y(m) = alpha C_m(m) / (2m(s+m))``; each step adds
    ``Y(m)`` times the expansion of ``(J - lam) n**(-1/2-s-2m)`` to the residual.
    That expansion starts with ``-2m(s+m)/alpha * n**(-1/2-s-2m)``, which is
    what fixes the sign of ``Y(m)``.
    """
    alpha = check_alpha(alpha)
    s = float(s)
    if not s > -1.0:
        raise ValueError("the expansion needs s > -1")
    if k is None:
        k = choose_order(alpha, s)
    k = check_index(k, "k")
    Y, resid = _expansion_arrays(alpha, s, k)
    Y.setflags(write=False)
    resid.setflags(write=False)
    return AsymptoticExpansion(alpha, s, k, Y, resid)


def _tail_values(Y, s, n):
    # sum_j Y(j) n^(-1/2-s-2j), broadcasting batch of (Y, s) against n
    n = np.asarray(n, dtype=float)
    inv2 = n**-2.0
    acc = np.zeros(np.broadcast_shapes(Y.shape[:-1], n.shape))
    for j in range(Y.shape[-1] - 1, -1, -1):
        acc = acc * inv2 + Y[..., j]
    return acc * np.exp(-(0.5 + s) * np.log(n))


def eval_tail(expansion, n):
    """``y_k(n)`` for the expansion (array-valued in ``n``)."""
    out = _tail_values(expansion.Y, expansion.s, n)
    return float(out) if np.ndim(out) == 0 else out


def _step_factors(alpha, N):
    # g(n) = (1 - (1-1/n)^(2a))/n, up(n) = (n/(n-1))^(a+1/2), down(n) = (n/(n+1))^(a+1/2),
    # each indexed by n = 0..N+1 (entries that are never used are left at 0)
    n = np.arange(N + 2, dtype=float)
    g = np.zeros(N + 2)
    up = np.zeros(N + 2)
    g[2:] = -np.expm1(2.0 * alpha * np.log1p(-1.0 / n[2:])) / n[2:]
    g[1] = 1.0
    up[2:] = np.exp(-(alpha + 0.5) * np.log1p(-1.0 / n[2:]))
    down = np.exp(-(alpha + 0.5) * np.log1p(1.0 / np.maximum(n, 1.0)))
    return g, up, down


def backward_recurrence(alpha, lam, seed_low, seed_high, N, slope=None):
    """Run the recurrence from ``x(N), x(N+1)`` down to ``x(1)``.

    The step uses the factorised form of J_alpha as a first-order system in
    ``x`` and the scaled difference ``v(n) = n^(a+1/2) c(n) (y(n) - y(n-1))``,
    ``y(n) = n^(a+1/2) x(n)``:

        v(n) = (n/(n+1))^(a+1/2) v(n+1) + lam x(n)
        x(n-1) = (n/(n-1))^(a+1/2) (x(n) - g(n) v(n))

    Carrying the difference explicitly keeps roundoff from feeding the
    second solution, which the plain three-term step does at a rate growing
    with n.  ``slope`` is ``v(N+1)``; when omitted it is formed from the seeds.
    ``lam`` and the seeds may be arrays of a common shape; returns ``x`` with
    shape ``(N + 1,) + lam.shape`` where row ``i`` holds ``x(i+1)``.
    """
    alpha = check_alpha(alpha)
    N = check_index(N, "N", minimum=2)
    lam = np.asarray(lam, dtype=float)
    g, up, down = _step_factors(alpha, N)
    shape = np.broadcast_shapes(lam.shape, np.shape(seed_low), np.shape(seed_high))
    x = np.empty((N + 1,) + shape)
    x[N] = seed_high
    x[N - 1] = seed_low
    if slope is None:
        slope = (x[N] - down[N] * x[N - 1]) / g[N + 1]
    v = np.broadcast_to(np.asarray(slope, dtype=float), shape)
    for n in range(N, 1, -1):
        v = down[n] * v + lam * x[n - 1]
        x[n - 2] = up[n] * (x[n - 1] - g[n] * v)
    return x


def _seed(alpha, Y, s, N):
    # x(N), x(N+1) and v(N+1) from the expansion, the last without cancellation
    s = np.asarray(s, dtype=float)
    low = _tail_values(Y, s, float(N))
    high = _tail_values(Y, s, float(N + 1))
    _, _, down = _step_factors(alpha, N)
    g_next = -np.expm1(2.0 * alpha * np.log1p(-1.0 / (N + 1.0))) / (N + 1.0)
    diff = np.zeros(np.broadcast_shapes(Y.shape[:-1], s.shape))
    lp = math.log1p(1.0 / N)
    for j in range(Y.shape[-1]):
        q = 0.5 + s + 2.0 * j
        diff = diff + Y[..., j] * np.exp(-q * math.log(N + 1.0)) * -np.expm1(-(alpha - s - 2.0 * j) * lp)
    return low, high, diff / g_next


@dataclass(frozen=True)
class GeneralizedSolution:
    """Samples ``x(1..N_start+1)`` of the decaying solution, normalised by
    ``x(n) n**(1/2+s) -> 1``.

    ``tail_residual`` estimates the relative seed error ``|Y(k)| N_start**(-2k)``;
    ``head_change`` is the change of ``x(1), x(2)`` over the last doubling.
    """

    alpha: float
    s: float
    lam: float
    x: np.ndarray = field(repr=False, compare=False)
    N_start: int
    k: int
    tail_residual: float
    head_change: float
    tol: float

    def interior_residual(self):
        """``max |(J - lam)x(n)| / scale`` over rows 2..N_start, scaled by the row magnitude."""
        N = self.N_start
        a, b = jacobi_arrays(self.alpha, N)
        x = self.x
        left = a[: N - 1] * x[: N - 1]
        mid = (b[1:N] - self.lam) * x[1:N]
        right = a[1:N] * x[2: N + 1]
        scale = np.abs(left) + np.abs(b[1:N] * x[1:N]) + abs(self.lam * x[1:N]) + np.abs(right)
        return float(np.max(np.abs(left + mid + right) / scale))


def _check_s(alpha, s):
    s = np.asarray(s, dtype=float)
    if np.any(~(s > 0.0)) or np.any(~(s < alpha)):
        raise ValueError("s must lie in the open interval (0, alpha)")
    return s


def _solve_batch(alpha, s, tol):
    # decaying solutions for an array of s sharing one N_start schedule
    k = max(choose_order(alpha, float(v)) for v in np.ravel(s))
    Y, resid = _expansion_arrays(alpha, s, k)
    lam = (alpha * alpha - s * s) / (2.0 * alpha)
    N = N_START
    previous = None
    last_change = np.inf
    while N <= N_CAP:
        if np.any((0.5 + s) * math.log(N + 1) > 650.0):
            break  # seeds would underflow
        low, high, slope = _seed(alpha, Y, s, N)
        x = backward_recurrence(alpha, lam, low, high, N, slope)
        head = x[:2]
        if previous is not None:
            # x(1), x(2) may both be small by cancellation; measure against
            # the size of the solution over its first few sites
            scale = np.maximum(np.max(np.abs(x[:16]), axis=0), 1e-300)
            change = float(np.max(np.max(np.abs(head - previous), axis=0) / scale))
            tail = np.abs(alpha * resid[..., 0] / (2.0 * k * (s + k))) * float(N) ** (-2 * k)
            # once the seed error is below tol, a change that stops shrinking is roundoff
            if change <= tol or (np.all(tail <= tol) and change > 0.5 * last_change):
                return x, N, k, tail, change
            last_change = change
        previous = head
        N *= 2
    raise ConvergenceError(f"backward recurrence did not settle below N_start = {N_CAP}")


def solve_generalized(alpha, s, tol=1e-11):
    """The decaying solution ``x_{alpha,s}`` of the recurrence, for ``0 < s < alpha``.

    ``N_start`` starts at 64 and doubles until ``x(1), x(2)`` of two successive
    runs agree to ``tol`` relative to ``max |x(n)|`` over the first 16 sites.
    Where the last recurrence steps amplify roundoff beyond ``tol`` the run is
    also accepted once the seed error estimate is below ``tol`` and the change
    has stopped shrinking.
    """
    alpha = check_alpha(alpha)
    s = float(_check_s(alpha, s))
    x, N, k, tail, change = _solve_batch(alpha, np.asarray(s), tol)
    x.setflags(write=False)
    lam = (alpha * alpha - s * s) / (2.0 * alpha)
    return GeneralizedSolution(alpha, s, lam, x, N, k, float(tail), change, tol)


def _first_row_defect(alpha, s, x1, x2):
    a1, b1 = jacobi_arrays(alpha, 1)
    lam = (alpha * alpha - s * s) / (2.0 * alpha)
    w = b1[0] * x1 + a1[0] * x2 - lam * x1
    return w / np.maximum(np.abs(x1), np.abs(x2))


def secular(alpha, s, tol=1e-11):
    """``W(s) = [b(1)x(1) + a(1)x(2) - lam x(1)] / max(|x(1)|, |x(2)|)``."""
    sol = solve_generalized(alpha, s, tol)
    return float(_first_row_defect(sol.alpha, sol.s, sol.x[0], sol.x[1]))


def secular_grid(alpha, s, tol=1e-11, chunk=256):
    """``W`` on an array of ``s`` values, evaluated in vectorised batches."""
    alpha = check_alpha(alpha)
    s = _check_s(alpha, np.atleast_1d(np.asarray(s, dtype=float)))
    out = np.empty_like(s)
    for start in range(0, s.size, chunk):
        part = s[start: start + chunk]
        x = _solve_batch(alpha, part, tol)[0]
        out[start: start + chunk] = _first_row_defect(alpha, part, x[0], x[1])
    return out
