"""Eigenvalues of K_alpha above the band [0, 2/alpha].

An eigenvalue ``lam_K`` of K_alpha above the band corresponds to an eigenvalue
``lam_J = 1/lam_K = (alpha**2 - s**2) / (2*alpha)`` of J_alpha with
``0 < s < alpha``, and these are exactly the zeros of the secular function.
Each report is cross-checked against the top eigenvalues of a large
truncation of K_alpha.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
import math
import os

import numpy as np

from ._validation import ConvergenceError, check_alpha, check_index, check_positive
from .asymptotics import secular_grid
from .jacobi import truncation_top

__all__ = [
    "Eigenvalue",
    "SpectrumReport",
    "SweepRow",
    "scan_grid",
    "find_eigenvalues",
    "count_eigenvalues",
    "counting_lower_bound",
    "operator_norm",
    "sweep",
    "sweep_grid",
    "threshold_alpha1",
    "worker_count",
]

ORACLE_WARN = 1e-3
SOLVER_TOL = 1e-11


@dataclass(frozen=True)
class Eigenvalue:
    s: float
    lambda_J: float
    lambda_K: float


@dataclass(frozen=True)
class SpectrumReport:
    """Point spectrum of K_alpha above the band, largest first.

    ``oracle`` holds the top eigenvalues of the truncation of order
    ``trunc_n`` (one more than the count, when enabled) and ``oracle_half``
    those of order ``trunc_n // 2``; ``oracle_gap`` compares against the
    former, ``oracle_gap_richardson`` against one Richardson step with the
    truncation rate ``N**(-2s)`` of each eigenvalue.
    """

    alpha: float
    eigenvalues: tuple
    trunc_n: int = 0
    oracle: tuple = ()
    oracle_half: tuple = ()
    oracle_gap: float = float("nan")
    oracle_gap_richardson: float = float("nan")
    warnings: tuple = field(default=())

    @property
    def ac_band(self):
        return (0.0, 2.0 / self.alpha)

    @property
    def count(self):
        return len(self.eigenvalues)

    @property
    def lambda_K(self):
        return np.array([e.lambda_K for e in self.eigenvalues])

    @property
    def norm(self):
        return self.eigenvalues[0].lambda_K if self.eigenvalues else 2.0 / self.alpha

    def to_dict(self):
        def num(v):
            return None if isinstance(v, float) and math.isnan(v) else v

        return {
            "alpha": self.alpha,
            "ac_band": list(self.ac_band),
            "eigenvalues": [asdict(e) for e in self.eigenvalues],
            "count": self.count,
            "oracle_gap": num(self.oracle_gap),
            "oracle_gap_richardson": num(self.oracle_gap_richardson),
            "trunc_n": self.trunc_n,
            "warnings": list(self.warnings),
        }


def scan_grid(alpha, step=None, eps=None):
    """Uniform grid over ``(eps, alpha - eps)`` with step ``min(alpha/400, 0.02)``."""
    alpha = check_alpha(alpha)
    if eps is None:
        eps = min(1e-4, alpha * 1e-4)
    if step is None:
        step = min(alpha / 400.0, 0.02)
    count = int(math.ceil((alpha - 2.0 * eps) / step))
    grid = eps + step * np.arange(count + 1)
    grid[-1] = alpha - eps
    return grid


def _bisect_roots(alpha, lo, hi, w_lo, tol, solver_tol):
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    sign_lo = np.sign(w_lo)
    for _ in range(200):
        if np.all(hi - lo <= tol):
            break
        mid = 0.5 * (lo + hi)
        w = secular_grid(alpha, mid, solver_tol)
        same = np.sign(w) == sign_lo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
        exact = w == 0.0
        lo = np.where(exact, mid, lo)
        hi = np.where(exact, mid, hi)
    return 0.5 * (lo + hi)


def _secular_roots(alpha, tol, solver_tol, eps=None):
    grid = scan_grid(alpha, eps=eps)
    w = secular_grid(alpha, grid, solver_tol)
    exact = grid[w == 0.0]
    idx = np.flatnonzero(np.sign(w[:-1]) * np.sign(w[1:]) < 0)
    roots = _bisect_roots(alpha, grid[idx], grid[idx + 1], w[idx], tol, solver_tol) if idx.size else np.array([])
    return np.sort(np.concatenate([roots, exact]))[::-1]


def find_eigenvalues(alpha, tol=1e-10, trunc_n=4000, oracle="dense", eps=None,
                     solver_tol=SOLVER_TOL):
    """Locate the eigenvalues of K_alpha above the band.

    ``W(s)`` is scanned on :func:`scan_grid`, sign changes are bisected to
    ``|ds| <= tol`` and each root gives ``lam_K = 2 alpha / (alpha**2 - s**2)``.
    With ``oracle`` set (``"dense"``, ``"tridiagonal"`` or ``"sturm"``) the
    result is compared with the truncations of order ``trunc_n`` and
    ``trunc_n // 2``; disagreements are reported as warnings, never raised.
    """
    alpha = check_alpha(alpha)
    tol = check_positive(tol, "tol")
    roots = _secular_roots(alpha, tol, solver_tol, eps)
    eigs = tuple(
        Eigenvalue(float(s), (alpha**2 - s**2) / (2.0 * alpha), 2.0 * alpha / (alpha**2 - s**2))
        for s in roots
    )
    if oracle is None:
        return SpectrumReport(alpha, eigs)
    trunc_n = check_index(trunc_n, "trunc_n", minimum=2)
    warnings = []
    m = min(len(eigs) + 1, trunc_n // 2)
    full = truncation_top(alpha, trunc_n, m, oracle)
    half = truncation_top(alpha, trunc_n // 2, m, oracle)
    band_top = 2.0 / alpha
    gap = rich_gap = float("nan")
    if eigs:
        lam = np.array([e.lambda_K for e in eigs])
        k = min(len(eigs), m)
        gap = float(np.max(np.abs(lam[:k] - full[:k])))
        # the eigenvector decays like n^(-1/2-s), so the truncation error
        # behaves like N^(-2s); one Richardson step with that exponent
        rate = 2.0 ** (2.0 * roots[:k]) - 1.0
        extrapolated = full[:k] + (full[:k] - half[:k]) / rate
        rich_gap = float(np.max(np.abs(lam[:k] - extrapolated)))
        if gap > ORACLE_WARN:
            s_min = float(roots[:k].min())
            warnings.append(f"oracle_gap {gap:.3e} exceeds {ORACLE_WARN:g} "
                            f"(s = {s_min:.3g}; truncations converge like N^(-2s))")
        if np.any(lam[:k] < full[:k] - 1e-8):
            warnings.append("a secular eigenvalue lies below its truncation estimate")
    if m > len(eigs) and full[len(eigs)] > band_top + 1e-9:
        warnings.append("the truncation has more eigenvalues above the band than the secular scan")
    if np.any(full < half - 1e-10):
        warnings.append("truncation eigenvalues decrease with N")
    return SpectrumReport(alpha, eigs, trunc_n, tuple(full), tuple(half), gap, rich_gap,
                          tuple(warnings))


def count_eigenvalues(alpha, tol=1e-10):
    """N(K_alpha), the number of eigenvalues above the band (from the secular scan)."""
    return find_eigenvalues(alpha, tol, oracle=None).count


def counting_lower_bound(alpha):
    """Number of integers k >= 1 with k < alpha/4.

    For such k the k-th eigenvalue of K_infinity, 1/k, lies more than 4/alpha
    above 0, and a perturbation of norm 2/alpha leaves it above the band.
    """
    alpha = check_alpha(alpha)
    return max(int(math.ceil(alpha / 4.0)) - 1, 0)


def operator_norm(alpha, tol=1e-10):
    """``||K_alpha||``: 2/alpha without eigenvalues, else the top eigenvalue."""
    return find_eigenvalues(alpha, tol, oracle=None).norm


@dataclass(frozen=True)
class SweepRow:
    """One row of the rescaled picture: ``alpha * lam_K_j`` above the band top 2."""

    alpha: float
    eigenvalues: tuple
    count: int
    warnings: tuple = ()
    band_top: float = 2.0


def sweep_grid(alpha_min, alpha_max, step):
    alpha_min = check_alpha(alpha_min)
    alpha_max = check_alpha(alpha_max)
    step = check_positive(step, "step")
    if not alpha_min < alpha_max:
        raise ValueError("need alpha_min < alpha_max")
    count = int(math.floor((alpha_max - alpha_min) / step + 1e-9))
    return [round(alpha_min + i * step, 12) for i in range(count + 1)]


def _row(args):
    alpha, tol, trunc_n, oracle = args
    try:
        report = find_eigenvalues(alpha, tol, trunc_n, oracle)
    except (ConvergenceError, ValueError, ZeroDivisionError) as exc:
        return SweepRow(alpha, (), 0, (f"alpha={alpha:g}: {exc}",))
    scaled = tuple(alpha * e.lambda_K for e in report.eigenvalues)
    notes = tuple(f"alpha={alpha:g}: {w}" for w in report.warnings)
    return SweepRow(alpha, scaled, report.count, notes)


def worker_count():
    """Process count for sweeps: the CPU count, capped by ``HARDY_SPECTRA_THREADS``."""
    n = os.cpu_count() or 1
    env = os.environ.get("HARDY_SPECTRA_THREADS")
    if env:
        try:
            n = min(n, max(int(env), 1))
        except ValueError:
            raise ValueError("HARDY_SPECTRA_THREADS must be a positive integer") from None
    return n


def sweep(alpha_min, alpha_max, step, tol=1e-10, trunc_n=4000, oracle="dense", workers=None):
    """Spectra of ``alpha K_alpha`` over an alpha grid, in grid order.

    Rows are independent and are computed in a process pool when more than
    one worker is available; a failing row carries its error as a warning.
    """
    grid = sweep_grid(alpha_min, alpha_max, step)
    jobs = [(a, tol, trunc_n, oracle) for a in grid]
    workers = worker_count() if workers is None else max(int(workers), 1)
    if workers == 1 or len(jobs) == 1:
        return [_row(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_row, jobs))


def threshold_alpha1(tol=1e-6, eps=1e-7):
    """Numerical estimate of the alpha where the first eigenvalue leaves the band.

    Bisection on the predicate ``N(K_alpha) >= 1`` over (1, 2); the scan
    starts at ``s = eps`` so that a root just emerging from the band edge
    ``s = 0`` is seen early.
    """
    tol = check_positive(tol, "tol")

    def has_eigenvalue(alpha):
        return _secular_roots(alpha, 1e-12, SOLVER_TOL, eps).size > 0

    lo, hi = 1.0, 2.0
    if has_eigenvalue(lo) or not has_eigenvalue(hi):
        raise ConvergenceError("first eigenvalue does not emerge inside (1, 2)")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if has_eigenvalue(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
