"""Truncated power series in one variable.

Coefficients live on the last axis, so a ``TruncatedSeries`` may carry a batch
of series (for example one per value of a parameter) that are combined
elementwise.
"""
from dataclasses import dataclass, field

import numpy as np

__all__ = ["TruncatedSeries"]


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series ``sum_j coef[..., j] z**j`` known through ``z**order``."""

    coef: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coef, dtype=float)
        if c.ndim == 0:
            c = c[None]
        c.setflags(write=False)
        object.__setattr__(self, "coef", c)

    @property
    def order(self):
        return self.coef.shape[-1] - 1

    @classmethod
    def constant(cls, value, order):
        value = np.asarray(value, dtype=float)
        c = np.zeros(value.shape + (order + 1,))
        c[..., 0] = value
        return cls(c)

    @classmethod
    def binomial(cls, gamma, order, sign=1.0):
        """``(1 + sign*z)**gamma``; ``gamma`` may be an array (batch)."""
        gamma = np.asarray(gamma, dtype=float)
        c = np.empty(gamma.shape + (order + 1,))
        c[..., 0] = 1.0
        for j in range(1, order + 1):
            c[..., j] = c[..., j - 1] * (gamma - j + 1) / j * sign
        return cls(c)

    def _other(self, other):
        if isinstance(other, TruncatedSeries):
            if other.order != self.order:
                raise ValueError("series orders differ")
            return other.coef
        return None

    def __add__(self, other):
        oc = self._other(other)
        if oc is None:
            c = np.array(self.coef)
            c[..., 0] = c[..., 0] + other
            return TruncatedSeries(c)
        return TruncatedSeries(self.coef + oc)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.coef)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        oc = self._other(other)
        if oc is None:
            return TruncatedSeries(self.coef * np.asarray(other, dtype=float)[..., None])
        if self.coef.ndim == 1 and oc.ndim == 1:
            return TruncatedSeries(np.convolve(self.coef, oc)[: self.order + 1])
        a, b = np.broadcast_arrays(self.coef, oc)
        out = np.zeros(a.shape)
        for i in range(self.order + 1):
            out[..., i:] += a[..., i: i + 1] * b[..., : self.order + 1 - i]
        return TruncatedSeries(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        oc = self._other(other)
        if oc is None:
            return TruncatedSeries(self.coef / np.asarray(other, dtype=float)[..., None])
        lead = oc[..., 0]
        if np.any(lead == 0.0):
            raise ZeroDivisionError("series division needs a nonzero constant term")
        a, b = np.broadcast_arrays(self.coef, oc)
        q = np.zeros(a.shape)
        for j in range(self.order + 1):
            acc = a[..., j] - np.sum(b[..., 1: j + 1] * q[..., j - 1:: -1][..., :j], axis=-1)
            q[..., j] = acc / lead
        return TruncatedSeries(q)

    def shift_down(self, count=1):
        """Divide by ``z**count``; the dropped low coefficients must vanish (not checked)
        and the order shrinks by ``count``."""
        return TruncatedSeries(self.coef[..., count:])

    def truncate(self, order):
        return TruncatedSeries(self.coef[..., : order + 1])

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        out = np.zeros(np.broadcast_shapes(self.coef.shape[:-1], z.shape))
        for j in range(self.order, -1, -1):
            out = out * z + self.coef[..., j]
        return out
