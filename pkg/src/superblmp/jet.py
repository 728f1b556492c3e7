"""Truncated trivariate Taylor jets in (x, y, t).

A :class:`Jet` stores the normalized Taylor coefficients
``d^i_x d^j_y d^k_t f / (i! j! k!)`` of a function at one expansion point,
for ``i <= ox, j <= oy, k <= ot``. Arithmetic is closed under truncation,
so composite expressions built from :func:`var` deliver exact mixed partials
(up to floating point rounding) without finite differences.

Jets of different orders may be combined; the result carries the
componentwise minimum order. Differentiation lowers the order by the number
of derivatives taken.
"""
from __future__ import annotations

import cmath
import math
from typing import NamedTuple

import numpy as np

from ._backend import core
from .errors import BranchCutViolation, DivisionNearSingularity, OrderExceeded

DIV_FLOOR = 1e-12


class JetOrder(NamedTuple):
    ox: int
    oy: int
    ot: int

    @property
    def shape(self):
        return (self.ox + 1, self.oy + 1, self.ot + 1)

    def bump(self, dx=0, dy=0, dt=0):
        return JetOrder(self.ox + dx, self.oy + dy, self.ot + dt)


DEFAULT_ORDER = JetOrder(4, 2, 2)
_AXES = {"x": 0, "y": 1, "t": 2}


def _as_order(order) -> JetOrder:
    order = JetOrder(*order)
    if min(order) < 0:
        raise ValueError(f"negative jet order {order}")
    return order


class Jet:
    """Immutable truncated Taylor jet with complex coefficients."""

    __slots__ = ("coeffs",)
    __array_priority__ = 1000  # keep numpy scalars from broadcasting over us

    def __init__(self, coeffs):
        c = np.ascontiguousarray(coeffs, dtype=np.complex128)
        if c.ndim != 3:
            raise ValueError("jet coefficients must be a 3-d array")
        c.setflags(write=False)
        self.coeffs = c

    # -- construction -------------------------------------------------------
    @classmethod
    def constant(cls, value, order=DEFAULT_ORDER) -> Jet:
        c = np.zeros(_as_order(order).shape, dtype=np.complex128)
        c[0, 0, 0] = value
        return cls(c)

    @classmethod
    def var(cls, which, value, order=DEFAULT_ORDER) -> Jet:
        order = _as_order(order)
        c = np.zeros(order.shape, dtype=np.complex128)
        c[0, 0, 0] = value
        idx = [0, 0, 0]
        idx[_AXES[which]] = 1
        if order[_AXES[which]] >= 1:
            c[tuple(idx)] = 1.0
        return cls(c)

    # -- inspection ---------------------------------------------------------
    @property
    def order(self) -> JetOrder:
        nx, ny, nt = self.coeffs.shape
        return JetOrder(nx - 1, ny - 1, nt - 1)

    @property
    def value(self) -> complex:
        return complex(self.coeffs[0, 0, 0])

    def partial(self, i=0, j=0, k=0) -> complex:
        """Return ``d^i_x d^j_y d^k_t`` of the represented function."""
        o = self.order
        if i > o.ox or j > o.oy or k > o.ot or min(i, j, k) < 0:
            raise OrderExceeded(f"partial ({i},{j},{k}) beyond jet order {tuple(o)}")
        return complex(self.coeffs[i, j, k]) * (
            math.factorial(i) * math.factorial(j) * math.factorial(k))

    def deriv(self, i=0, j=0, k=0) -> Jet:
        """Jet of the derivative; order drops by ``(i, j, k)``."""
        if i == j == k == 0:
            return self
        o = self.order
        if i > o.ox or j > o.oy or k > o.ot:
            raise OrderExceeded(f"derivative ({i},{j},{k}) beyond jet order {tuple(o)}")
        c = self.coeffs[i:, j:, k:]
        return Jet(c * _falling_weights(c.shape, (i, j, k)))

    def truncate(self, order) -> Jet:
        nx, ny, nt = _as_order(order).shape
        if (nx, ny, nt) == self.coeffs.shape:
            return self
        return Jet(self.coeffs[:nx, :ny, :nt])

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Jet):
            a, b = _common(self, other)
            return Jet(a + b)
        c = self.coeffs.copy()
        c[0, 0, 0] += other
        return Jet(c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.coeffs)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            a, b = _common(self, other)
            return Jet(core.mul(a, b))
        return Jet(self.coeffs * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            _check_floor(other.value)
            a, b = _common(self, other)
            return Jet(core.div(a, b))
        _check_floor(other)
        return Jet(self.coeffs / other)

    def __rtruediv__(self, other):
        _check_floor(self.value)
        num = Jet.constant(other, self.order)
        return Jet(core.div(num.coeffs, self.coeffs))

    def __pow__(self, n):
        if isinstance(n, int) and n >= 0:
            out = Jet.constant(1.0, self.order)
            base = self
            while n:
                if n & 1:
                    out = out * base
                base = base * base
                n >>= 1
            return out
        return jet_func(self, "pow", n)

    def __repr__(self):
        return f"Jet(order={tuple(self.order)}, value={self.value!r})"


def _common(a: Jet, b: Jet):
    sa, sb = a.coeffs.shape, b.coeffs.shape
    if sa == sb:
        return a.coeffs, b.coeffs
    s = tuple(min(p, q) for p, q in zip(sa, sb))
    return (np.ascontiguousarray(a.coeffs[:s[0], :s[1], :s[2]]),
            np.ascontiguousarray(b.coeffs[:s[0], :s[1], :s[2]]))


def _check_floor(b0):
    if abs(b0) <= DIV_FLOOR:
        raise DivisionNearSingularity(f"|denominator| = {abs(b0):.3g} <= {DIV_FLOOR}")


_WEIGHT_CACHE: dict = {}


def _falling_weights(shape, shift):
    key = (shape, shift)
    w = _WEIGHT_CACHE.get(key)
    if w is None:
        axes = []
        for n, s in zip(shape, shift):
            # (p+s)!/p! turns normalized coefficient p+s into that of the derivative
            axes.append(np.array([math.perm(p + s, s) for p in range(n)], dtype=float))
        w = axes[0][:, None, None] * axes[1][None, :, None] * axes[2][None, None, :]
        _WEIGHT_CACHE[key] = w
    return w


# -- elementary functions ----------------------------------------------------

def _taylor_coeffs(name, a0, n, r=None):
    """Normalized derivatives f^(k)(a0)/k! for k < n."""
    fact = [1.0 / math.factorial(k) for k in range(n)]
    if name == "exp":
        e = cmath.exp(a0)
        return [e * f for f in fact]
    if name in ("sin", "cos", "sinh", "cosh"):
        if name == "sin":
            cyc = [cmath.sin(a0), cmath.cos(a0), -cmath.sin(a0), -cmath.cos(a0)]
        elif name == "cos":
            cyc = [cmath.cos(a0), -cmath.sin(a0), -cmath.cos(a0), cmath.sin(a0)]
        elif name == "sinh":
            cyc = [cmath.sinh(a0), cmath.cosh(a0)] * 2
        else:
            cyc = [cmath.cosh(a0), cmath.sinh(a0)] * 2
        return [cyc[k % 4] * fact[k] for k in range(n)]
    if name == "log":
        _check_cut(a0, "log")
        out = [cmath.log(a0)]
        for k in range(1, n):
            out.append((-1) ** (k - 1) / (k * a0 ** k))
        return out
    if name == "pow":
        if float(r).is_integer() and r >= 0:
            r = int(r)
        else:
            _check_cut(a0, "pow")
        out, binom = [], 1.0
        for k in range(n):
            out.append(binom * complex(a0) ** (r - k) if not (isinstance(r, int) and k > r) else 0.0)
            binom *= (r - k) / (k + 1)
        return out
    raise ValueError(f"unknown jet function {name!r}")


def _check_cut(a0, name):
    a0 = complex(a0)
    if a0.imag == 0.0 and a0.real <= 0.0:
        raise BranchCutViolation(f"{name} evaluated on its principal branch cut at {a0}")


def jet_func(a: Jet, name: str, r=None) -> Jet:
    """Compose an elementary function with a jet."""
    if name == "sqrt":
        return jet_func(a, "pow", 0.5)
    if name in ("tanh", "coth"):
        # factor out the dominant exponential so derivatives keep full precision
        s = 1.0 if complex(a.value).real >= 0 else -1.0
        e = jet_func(-2.0 * s * a, "exp")
        if name == "tanh":
            return s * (1.0 - e) / (1.0 + e)
        return s * (1.0 + e) / (1.0 - e)
    if name == "tan":
        return jet_func(a, "sin") / jet_func(a, "cos")
    a0 = a.value
    o = a.order
    n = o.ox + o.oy + o.ot + 1
    h = a.coeffs.copy()
    h[0, 0, 0] = 0.0
    coefs = np.array(_taylor_coeffs(name, a0, n, r), dtype=np.complex128)
    return Jet(core.horner(coefs, h))


def _dispatch(name):
    cfun = getattr(cmath, name)

    def f(a):
        if isinstance(a, Jet):
            return jet_func(a, name)
        return cfun(a)

    f.__name__ = name
    f.__doc__ = f"{name} of a jet or a scalar."
    return f


exp = _dispatch("exp")
sin = _dispatch("sin")
cos = _dispatch("cos")
tan = _dispatch("tan")
sinh = _dispatch("sinh")
cosh = _dispatch("cosh")
tanh = _dispatch("tanh")


def log(a):
    if isinstance(a, Jet):
        return jet_func(a, "log")
    _check_cut(a, "log")
    return cmath.log(a)


def sqrt(a):
    if isinstance(a, Jet):
        return jet_func(a, "sqrt")
    return cmath.sqrt(a)


def coth(a):
    if isinstance(a, Jet):
        return jet_func(a, "coth")
    s = cmath.sinh(a)
    _check_floor(s)
    return cmath.cosh(a) / s


def jet_var(which, value, order=DEFAULT_ORDER) -> Jet:
    return Jet.var(which, value, order)


def jet_partial(a: Jet, i: int, j: int, k: int) -> complex:
    return a.partial(i, j, k)


def jet_arith(a, b, op: str):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def point_jets(x, y, t, order=DEFAULT_ORDER):
    """Coordinate jets of x, y, t at one expansion point."""
    return (Jet.var("x", x, order), Jet.var("y", y, order), Jet.var("t", t, order))
