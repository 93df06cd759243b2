"""Cross-module invariant checks, bundled for the command line.

Each check records its measured value and the limit it is held to, so the
summary is machine readable.  The ``full`` level adds the comparison with
the truncated kernel and the reproducing kernel verdict.
"""
from dataclasses import asdict, dataclass

import numpy as np

from ._validation import InconsistencyError, check_alpha
from .jacobi import TridiagonalWindow, inverse_residual, sturm_count
from .kernel import integral_form, quadratic_form
from .rkt import rkt_decision
from .special import zeta
from .spectrum import find_eigenvalues

__all__ = ["Check", "run_verify", "LEVELS"]

LEVELS = ("quick", "full")


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: float
    limit: object  # None when the check is a verdict, not a threshold


def _leq(name, value, limit):
    value = float(value)
    return Check(name, bool(value <= limit), value, float(limit))


def _random_support(rng, size=6, top=40):
    x = np.zeros(top)
    idx = rng.choice(top, size=size, replace=False)
    x[idx] = rng.standard_normal(size)
    return x


def run_verify(alpha, level="quick", seed=0):
    """Run the suite for one alpha; returns ``{"alpha", "level", "passed", "checks"}``."""
    alpha = check_alpha(alpha)
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    checks = []
    for j in (1, 3, 10):
        checks.append(_leq(f"inverse_residual_j{j}", inverse_residual(alpha, j), 1e-9))

    pair = np.array([1.0, 1.0])
    exact = 1.5 + 2.0 ** (0.5 - alpha)
    checks.append(_leq("form_closed_e1_e2", abs(quadratic_form(alpha, pair) - exact), 1e-10))
    rng = np.random.default_rng(seed)
    trials = 3 if level == "quick" else 10
    worst = 0.0
    for x in [pair] + [_random_support(rng) for _ in range(trials)]:
        q = quadratic_form(alpha, x)
        worst = max(worst, abs(q - integral_form(alpha, x)) / abs(q))
    checks.append(_leq("form_integral_identity", worst, 1e-8))

    report = find_eigenvalues(alpha, oracle="dense" if level == "full" else None)
    norm = report.norm
    lower = max(2.0 / alpha, zeta(1.0 + 2.0 * alpha)) - 1e-6
    upper = max(2.0 / alpha, zeta(1.0 + alpha)) + 1e-6
    checks.append(Check("norm_sandwich", bool(lower <= norm <= upper), float(norm), float(upper)))

    window = TridiagonalWindow.kernel_inverse(alpha, 200)
    checks.append(_leq("sturm_positivity", sturm_count(window, 0.0), 0))

    if level == "full":
        if report.count:
            gap = report.oracle_gap_richardson
            checks.append(_leq("two_oracle_agreement", gap, 1e-4))
        try:
            rkt = rkt_decision(alpha)
            checks.append(Check("rkt_consistency", rkt.holds == (report.count == 0), rkt.gap, None))
        except InconsistencyError as exc:
            checks.append(Check("rkt_consistency", False, float(exc.report.gap), None))

    return {
        "alpha": alpha,
        "level": level,
        "passed": all(c.passed for c in checks),
        "checks": [asdict(c) for c in checks],
    }
