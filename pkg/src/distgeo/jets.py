"""Truncated Taylor arithmetic over a batch of sample points.

A :class:`JetArray` stores, for every entry of a tensor and every sample
point ``t_p``, the normalized Taylor coefficients ``c_k = f^(k)(t_p) / k!``
for ``k = 0..order``.  Products are coefficient convolutions, so every
Leibniz identity holds to rounding error.  Differentiation with respect to
``t`` shifts the coefficients and costs one order.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Real

import numpy as np


class JetOrderError(ValueError):
    """Raised when a derivative is requested from an order-0 jet."""


class JetDomainError(ArithmeticError):
    """Raised by elementwise functions evaluated outside their domain.

    ``mask`` marks the offending entries (tensor shape x points).
    """

    def __init__(self, message, mask=None):
        super().__init__(message)
        self.mask = mask


def _factorials(order):
    return np.array([math.factorial(k) for k in range(order + 1)], dtype=float)


class JetArray:
    __slots__ = ("c",)
    __array_priority__ = 100

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=float)
        if c.ndim < 2:
            raise ValueError("JetArray needs at least (points, order+1) axes")
        self.c = c

    # -- construction -----------------------------------------------------
    @classmethod
    def zeros(cls, shape, npoints, order):
        return cls(np.zeros(tuple(shape) + (npoints, order + 1)))

    @classmethod
    def constant(cls, values, npoints, order):
        values = np.asarray(values, dtype=float)
        c = np.zeros(values.shape + (npoints, order + 1))
        c[..., 0] = values[..., None]
        return cls(c)

    @classmethod
    def variable(cls, points, order):
        """The jet of ``t`` itself at each point."""
        pts = np.asarray(points, dtype=float)
        c = np.zeros((pts.size, order + 1))
        c[:, 0] = pts
        if order >= 1:
            c[:, 1] = 1.0
        return cls(c)

    @classmethod
    def from_derivatives(cls, derivs):
        """Build from raw derivatives ``f^(k)`` along the last axis."""
        d = np.asarray(derivs, dtype=float)
        return cls(d / _factorials(d.shape[-1] - 1))

    @classmethod
    def stack(cls, items, axis=0):
        items = list(items)
        order = min(it.order for it in items)
        return cls(np.stack([it.truncate(order).c for it in items], axis=axis))

    # -- shape --------------------------------------------------------------
    @property
    def order(self):
        return self.c.shape[-1] - 1

    @property
    def npoints(self):
        return self.c.shape[-2]

    @property
    def shape(self):
        return self.c.shape[:-2]

    @property
    def ndim(self):
        return self.c.ndim - 2

    @property
    def values(self):
        return self.c[..., 0]

    def derivatives(self):
        """Raw derivatives ``f^(k)`` (not divided by ``k!``)."""
        return self.c * _factorials(self.order)

    def truncate(self, order):
        if order > self.order:
            raise JetOrderError(f"cannot raise jet order {self.order} to {order}")
        if order == self.order:
            return self
        return JetArray(self.c[..., : order + 1])

    def __getitem__(self, idx):
        return JetArray(self.c[idx])

    def __len__(self):
        return self.c.shape[0]

    def reshape(self, shape):
        return JetArray(self.c.reshape(tuple(shape) + self.c.shape[-2:]))

    def transpose(self, *axes):
        n = self.ndim
        return JetArray(self.c.transpose(tuple(axes) + (n, n + 1)))

    def broadcast_to(self, shape):
        return JetArray(np.broadcast_to(self.c, tuple(shape) + self.c.shape[-2:]))

    def sum(self, axis=None):
        if axis is None:
            axis = tuple(range(self.ndim))
        elif isinstance(axis, int):
            axis = (axis,)
        axis = tuple(a % self.ndim for a in axis) if self.ndim else ()
        return JetArray(self.c.sum(axis=axis))

    def copy(self):
        return JetArray(self.c.copy())

    def __repr__(self):
        return f"JetArray(shape={self.shape}, points={self.npoints}, order={self.order})"

    # -- arithmetic -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, JetArray):
            return other
        if isinstance(other, (Real, Fraction)):
            return None
        arr = np.asarray(other, dtype=float)
        return JetArray.constant(arr, self.npoints, self.order)

    def _pair(self, other):
        o = self._coerce(other)
        k = min(self.order, o.order)
        return self.truncate(k).c, o.truncate(k).c

    def __add__(self, other):
        if isinstance(other, (Real, Fraction)):
            c = self.c.copy()
            c[..., 0] += float(other)
            return JetArray(c)
        a, b = self._pair(other)
        return JetArray(a + b)

    __radd__ = __add__

    def __neg__(self):
        return JetArray(-self.c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (Real, Fraction)):
            return JetArray(self.c * float(other))
        a, b = self._pair(other)
        return JetArray(_convolve(a, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (Real, Fraction)):
            return JetArray(self.c / float(other))
        o = self._coerce(other)
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def reciprocal(self):
        b = self.c
        b0 = b[..., 0]
        bad = b0 == 0
        if np.any(bad):
            raise JetDomainError("division by zero", bad)
        r = np.zeros_like(b)
        r[..., 0] = 1.0 / b0
        for k in range(1, b.shape[-1]):
            acc = np.zeros_like(b0)
            for j in range(1, k + 1):
                acc += b[..., j] * r[..., k - j]
            r[..., k] = -acc / b0
        return JetArray(r)

    def d(self):
        """Derivative with respect to ``t``; the result has one order less."""
        if self.order == 0:
            raise JetOrderError("jet order exhausted; evaluate inputs at a higher order")
        k = np.arange(1, self.order + 1, dtype=float)
        return JetArray(self.c[..., 1:] * k)

    # -- elementwise functions --------------------------------------------------
    def exp(self):
        u = self.c
        w = np.zeros_like(u)
        w[..., 0] = np.exp(u[..., 0])
        for k in range(1, u.shape[-1]):
            acc = np.zeros_like(u[..., 0])
            for j in range(1, k + 1):
                acc += j * u[..., j] * w[..., k - j]
            w[..., k] = acc / k
        return JetArray(w)

    def sincos(self):
        u = self.c
        s = np.zeros_like(u)
        co = np.zeros_like(u)
        s[..., 0] = np.sin(u[..., 0])
        co[..., 0] = np.cos(u[..., 0])
        for k in range(1, u.shape[-1]):
            acc_s = np.zeros_like(u[..., 0])
            acc_c = np.zeros_like(u[..., 0])
            for j in range(1, k + 1):
                acc_s += j * u[..., j] * co[..., k - j]
                acc_c -= j * u[..., j] * s[..., k - j]
            s[..., k] = acc_s / k
            co[..., k] = acc_c / k
        return JetArray(s), JetArray(co)

    def sin(self):
        return self.sincos()[0]

    def cos(self):
        return self.sincos()[1]

    def sqrt(self):
        return self.power(Fraction(1, 2))

    def power(self, exponent):
        """Raise to a rational power.

        Integer powers are exact products (defined at zero).  A non-integer
        ``p/q`` with odd ``q`` takes the real root of negative bases; with even
        ``q`` the base must be positive.
        """
        r = Fraction(exponent)
        if r.denominator == 1:
            n = r.numerator
            if n == 0:
                return JetArray.constant(np.ones(self.shape), self.npoints, self.order)
            base = _int_power(self, abs(n))
            return base.reciprocal() if n < 0 else base
        u = self.c
        u0 = u[..., 0]
        if r.denominator % 2 == 0:
            bad = u0 <= 0
            if np.any(bad):
                raise JetDomainError("even root of a non-positive value", bad)
        else:
            bad = u0 == 0
            if np.any(bad):
                raise JetDomainError("fractional power of zero", bad)
        rf = float(r)
        w = np.zeros_like(u)
        w[..., 0] = np.sign(u0) ** r.numerator * np.abs(u0) ** rf
        for k in range(1, u.shape[-1]):
            acc = np.zeros_like(u0)
            for j in range(1, k + 1):
                acc += (rf * j - (k - j)) * u[..., j] * w[..., k - j]
            w[..., k] = acc / (k * u0)
        return JetArray(w)

    def max_abs(self):
        return float(np.max(np.abs(self.values))) if self.c.size else 0.0


def _int_power(x, n):
    result = None
    base = x
    while n:
        if n & 1:
            result = base if result is None else result * base
        n >>= 1
        if n:
            base = base * base
    return result


def _convolve(a, b):
    shape = np.broadcast_shapes(a.shape, b.shape)
    out = np.zeros(shape)
    n = shape[-1]
    for k in range(n):
        acc = out[..., k]
        for j in range(k + 1):
            acc += a[..., j] * b[..., k - j]
    return out


def jeinsum(subscripts, *operands):
    """``numpy.einsum`` over tensor axes with jet convolution along the order axis.

    Subscripts refer to tensor axes only (``...`` allowed at the front).
    Plain arrays are promoted to constant jets.
    """
    jets = [op for op in operands if isinstance(op, JetArray)]
    if not jets:
        raise TypeError("jeinsum needs at least one JetArray operand")
    npoints = jets[0].npoints
    order = min(op.order for op in jets)
    ops = [
        (op if isinstance(op, JetArray) else JetArray.constant(op, npoints, order)).truncate(order)
        for op in operands
    ]
    lhs, rhs = subscripts.replace(" ", "").split("->")
    terms = lhs.split(",")
    if len(terms) != len(ops):
        raise ValueError("subscript/operand count mismatch")
    # 'z' tags the sample-point axis
    spec = ",".join(t + "z" for t in terms) + "->" + rhs + "z"
    path = _einsum_path(spec, tuple(op.c.shape[:-1] for op in ops))
    out = None
    for k in range(order + 1):
        acc = None
        for combo in _compositions(k, len(ops)):
            val = np.einsum(spec, *[op.c[..., j] for op, j in zip(ops, combo)], optimize=path)
            acc = val if acc is None else acc + val
        if out is None:
            out = np.zeros(acc.shape + (order + 1,))
        out[..., k] = acc
    return JetArray(out)


_PATHS: dict = {}


def _einsum_path(spec, shapes):
    """Contraction order for ``spec``; cached since the same shapes recur constantly."""
    key = (spec, shapes)
    path = _PATHS.get(key)
    if path is None:
        size = sum(int(np.prod(s)) for s in shapes)
        if len(shapes) <= 2 or size < 20000:
            path = False
        else:
            path = np.einsum_path(spec, *[np.empty(s) for s in shapes], optimize="greedy")[0]
        if len(_PATHS) > 4096:
            _PATHS.clear()
        _PATHS[key] = path
    return path


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def compositions(total, parts):
    return list(_compositions(total, parts))


__all__ = ["JetArray", "JetDomainError", "JetOrderError", "jeinsum", "compositions"]
