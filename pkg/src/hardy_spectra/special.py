"""Real-argument zeta sums, the Lorentzian symbol and integration against it.

Everything here is a pure function of its arguments.
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy.special import erfc

from ._validation import ConvergenceError, check_alpha

__all__ = [
    "PowerSequence",
    "LorentzianWeight",
    "zeta",
    "power_tail",
    "omega",
    "lorentz_integrate",
    "adaptive_gauss_kronrod",
]


@dataclass(frozen=True)
class PowerSequence:
    """The sequence n -> n**(-s) for integer n >= 1."""

    s: complex

    def __post_init__(self):
        if complex(self.s).real <= -1:
            raise ValueError("PowerSequence requires Re s > -1")

    def __call__(self, n):
        n = np.asarray(n, dtype=float)
        if np.any(n < 1):
            raise ValueError("PowerSequence is defined for n >= 1")
        s = complex(self.s)
        if s.imag == 0:
            return n ** (-s.real)
        return np.exp(-s * np.log(n))


@dataclass(frozen=True)
class LorentzianWeight:
    """t -> 2*alpha / (alpha**2 + t**2)."""

    alpha: float

    def __post_init__(self):
        check_alpha(self.alpha)

    def __call__(self, t):
        return omega(self.alpha, t)


def _em_tail(p, m):
    # sum_{k > m} k**-p by Euler-Maclaurin at the cut m, through the f''' term
    m = float(m)
    return (
        m ** (1.0 - p) / (p - 1.0)
        - 0.5 * m ** (-p)
        + p * m ** (-p - 1.0) / 12.0
        - p * (p + 1.0) * (p + 2.0) * m ** (-p - 3.0) / 720.0
    )


def zeta(sigma, tol=1e-12):
    """Riemann zeta function for real ``sigma > 1``.

    Direct partial sum below a cutoff ``M`` plus the Euler-Maclaurin remainder
    ``M**(1-s)/(s-1) + M**(-s)/2 + s*M**(-s-1)/12``; ``M`` is doubled until two
    successive values agree to relative ``tol``.
    """
    sigma = float(sigma)
    if not sigma > 1.0 + 1e-12:
        raise ValueError(f"zeta is only implemented for sigma > 1, got {sigma}")
    cut = 16
    previous = None
    while cut <= 2**24:
        n = np.arange(1, cut, dtype=float)
        head = math.fsum(n ** (-sigma))
        tail = (
            cut ** (1.0 - sigma) / (sigma - 1.0)
            + 0.5 * cut ** (-sigma)
            + sigma * cut ** (-sigma - 1.0) / 12.0
        )
        value = head + tail
        if previous is not None and abs(value - previous) <= tol * abs(value):
            return value
        previous = value
        cut *= 2
    raise ConvergenceError(f"zeta({sigma}) did not settle to relative tolerance {tol}")


def power_tail(p, n):
    """Return ``sum_{m > n} m**(-p)`` for real ``p > 1`` and integer ``n >= 0``."""
    p = float(p)
    if not p > 1.0:
        raise ValueError("power_tail needs p > 1")
    n = int(n)
    if n < 0:
        raise ValueError("power_tail needs n >= 0")
    cut = max(n, 64)
    head = 0.0
    if cut > n:
        m = np.arange(n + 1, cut + 1, dtype=float)
        head = math.fsum(m ** (-p))
    return head + _em_tail(p, cut)


def omega(alpha, t):
    """The Lorentzian symbol ``2*alpha / (alpha**2 + t**2)``."""
    alpha = check_alpha(alpha)
    t = np.asarray(t, dtype=float)
    out = 2.0 * alpha / (alpha * alpha + t * t)
    return float(out) if out.ndim == 0 else out


# Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KWEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GWEIGHTS = np.zeros(15)
_GWEIGHTS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


def _vectorized(g):
    def call(x):
        try:
            y = np.asarray(g(x), dtype=float)
        except (TypeError, ValueError):
            y = None
        if y is None or y.shape != x.shape:
            y = np.vectorize(lambda v: float(g(v)), otypes=[float])(x)
        return y

    return call


def adaptive_gauss_kronrod(f, a, b, tol=1e-10, max_depth=30, initial=8):
    """Integrate ``f`` over ``[a, b]`` by breadth-first G7/K15 bisection.

    ``f`` must accept numpy arrays.  An interval is accepted once its
    Kronrod-Gauss discrepancy drops below its share of ``tol`` (proportional
    to its width); intervals still open after ``max_depth`` bisections raise
    ``ConvergenceError``.  The first pass already splits ``[a, b]`` into
    ``initial`` pieces so that a feature missed by every node of a single
    15-point rule cannot be accepted as zero.  Returns ``(value, error_estimate)``.
    """
    a = float(a)
    b = float(b)
    if a == b:
        return 0.0, 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    total_width = b - a
    edges = np.linspace(a, b, initial + 1)
    lo = edges[:-1]
    hi = edges[1:]
    value = []
    error = []
    for depth in range(max_depth + 1):
        centre = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        x = centre[:, None] + half[:, None] * _NODES[None, :]
        fx = f(x.ravel()).reshape(x.shape)
        kron = half * (fx @ _KWEIGHTS)
        gauss = half * (fx @ _GWEIGHTS)
        err = np.abs(kron - gauss)
        done = err <= tol * (2.0 * half) / total_width
        value.append(kron[done])
        error.append(err[done])
        if np.all(done):
            break
        if depth == max_depth:
            raise ConvergenceError(
                f"adaptive quadrature exceeded depth cap {max_depth} on [{a}, {b}]"
            )
        lo_open, hi_open, mid = lo[~done], hi[~done], centre[~done]
        lo = np.concatenate([lo_open, mid])
        hi = np.concatenate([mid, hi_open])
    value = np.concatenate(value)
    error = np.concatenate(error)
    return sign * math.fsum(value), float(np.sum(error))


def _split_estimate(alpha, g, T, quad_tol, max_depth):
    # core integral under an erfc window of half-width ~1.5T, plus the two far
    # tails approximated by (local mean of g) * (tail mass)
    width = T / 6.0
    centre = 1.5 * T
    t_max = centre + 9.0 * width

    def window(t):
        return 0.5 * erfc((np.abs(t) - centre) / width)

    def inner(theta):
        t = alpha * np.tan(theta)
        return g(t) * window(t) / math.pi

    th_max = math.atan(t_max / alpha)
    # tan compresses oscillations of g near theta = +-pi/2, so past t_mid the
    # core is integrated in t itself, where their spacing is uniform
    t_mid = min(t_max, 8.0 * alpha)
    th_mid = math.atan(t_mid / alpha)
    core, _ = adaptive_gauss_kronrod(inner, -th_mid, th_mid, quad_tol, max_depth)

    def flanks(t):
        return (g(t) + g(-t)) * window(t) * alpha / (math.pi * (alpha * alpha + t * t))

    if t_mid < t_max:
        core += adaptive_gauss_kronrod(flanks, t_mid, t_max, quad_tol, max_depth)[0]

    def outer_mass(t):
        return (1.0 - window(t)) * alpha / (math.pi * (alpha * alpha + t * t))

    # the window transition is a thin sliver in theta, so integrate it in t
    mass, _ = adaptive_gauss_kronrod(
        outer_mass, max(centre - 9.0 * width, 0.0), t_max, quad_tol, max_depth
    )
    mass += (0.5 * math.pi - th_max) / math.pi

    mu, sigma = 3.0 * T, T / 3.0
    norm = sigma * math.sqrt(2.0 * math.pi)

    def bump(t, side):
        return g(side * t) * np.exp(-0.5 * ((t - mu) / sigma) ** 2)

    # the means only enter multiplied by the tail mass
    mean_tol = quad_tol * norm / max(mass, 1e-300)
    lo, hi = mu - 8.0 * sigma, mu + 8.0 * sigma
    upper, _ = adaptive_gauss_kronrod(lambda t: bump(t, 1.0), lo, hi, mean_tol, max_depth)
    lower, _ = adaptive_gauss_kronrod(lambda t: bump(t, -1.0), lo, hi, mean_tol, max_depth)
    return core + mass * (upper + lower) / norm


def lorentz_integrate(alpha, g, tol=1e-10, max_depth=30):
    """Return ``int g(t) * omega(alpha, t) dt / (2*pi)`` over the real line.

    ``g`` should be bounded and accept numpy arrays (scalar callables are
    wrapped).  After ``t = alpha*tan(theta)`` the measure becomes
    ``dtheta/pi`` on ``(-pi/2, pi/2)``; an oscillating ``g`` oscillates without
    bound near the end points, so the far tail ``|t| > ~1.5*T`` is split off
    with a smooth erfc window and replaced by the local mean of ``g`` (a
    Gaussian-weighted average) times the tail mass.  Oscillating components of
    ``g`` leave an error that decays like a Gaussian in ``T``, which is doubled
    until two successive results agree to ``tol``.
    """
    alpha = check_alpha(alpha)
    g = _vectorized(g)
    quad_tol = 0.1 * tol
    T = 16.0 * max(1.0, alpha)
    previous = _split_estimate(alpha, g, T, quad_tol, max_depth)
    while T < 1e7:
        T *= 2.0
        current = _split_estimate(alpha, g, T, quad_tol, max_depth)
        if abs(current - previous) <= tol:
            return current
        previous = current
    raise ConvergenceError("lorentz_integrate: tail splitting did not settle")
