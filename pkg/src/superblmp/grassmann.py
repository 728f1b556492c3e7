"""Finite Grassmann algebra with jet or scalar coefficients.

Elements are sparse maps ``bitmask -> coefficient`` over an ordered
:class:`GeneratorSet`. A basis monomial is the product of its generators in
ascending index order, so products only need the transposition sign of
merging two sorted index lists.

Superfields put the expansion variable ``theta`` at index 0. Because theta
is then always leftmost, ``theta * m`` and ``d/dtheta (theta * m)`` carry
no sign, which keeps the supercovariant derivatives simple.
"""
from __future__ import annotations

import math
from functools import lru_cache

from .errors import GeneratorSetMismatch, ParityMismatch, ParityUndefined
from .jet import Jet

CAPACITY = 16
THETA = "theta"


class GeneratorSet:
    """Ordered, immutable list of anticommuting generator labels."""

    __slots__ = ("names", "_index")

    def __init__(self, names):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator labels in {names}")
        if len(names) > CAPACITY:
            raise ValueError(f"at most {CAPACITY} generators, got {len(names)}")
        self.names = names
        self._index = {n: i for i, n in enumerate(names)}

    @classmethod
    def superspace(cls, *odd_constants):
        """Generator set with theta first, followed by odd constants."""
        return cls((THETA,) + tuple(odd_constants))

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, GeneratorSet) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"GeneratorSet({list(self.names)})"

    def index(self, name):
        return self._index[name]

    def mask(self, *names):
        m = 0
        for n in names:
            m |= 1 << self._index[n]
        return m

    def labels(self, mask):
        return tuple(n for i, n in enumerate(self.names) if mask >> i & 1)

    def generator(self, name, coeff=1.0):
        return GrassmannElement(self, {1 << self._index[name]: coeff})

    def scalar(self, value):
        return GrassmannElement(self, {0: value})

    def zero(self):
        return GrassmannElement(self, {})

    @property
    def has_theta(self):
        return bool(self.names) and self.names[0] == THETA


@lru_cache(maxsize=None)
def merge_sign(m1: int, m2: int) -> int:
    """Sign of ``e_{m1} e_{m2}`` relative to the sorted monomial; 0 if they overlap."""
    if m1 & m2:
        return 0
    swaps = 0
    rest = m2
    while rest:
        low = rest & -rest
        swaps += bin(m1 & ~((low << 1) - 1)).count("1")
        rest ^= low
    return -1 if swaps & 1 else 1


def _is_zero(c):
    return not isinstance(c, Jet) and c == 0


class GrassmannElement:
    """Immutable element of the Grassmann algebra over ``gens``."""

    __slots__ = ("gens", "terms")

    def __init__(self, gens: GeneratorSet, terms=None):
        self.gens = gens
        self.terms = {m: c for m, c in (terms or {}).items() if not _is_zero(c)}

    # -- structure ----------------------------------------------------------
    def parity(self):
        """0 (even), 1 (odd) or None for mixed elements; zero counts as even."""
        ps = {bin(m).count("1") & 1 for m in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def require_parity(self):
        p = self.parity()
        if p is None:
            raise ParityUndefined("element mixes even and odd monomials")
        return p

    def body(self):
        return self.terms.get(0, 0.0)

    def component(self, *names):
        return self.terms.get(self.gens.mask(*names), 0.0)

    def is_zero(self):
        return not self.terms

    def _check(self, other):
        if other.gens != self.gens:
            raise GeneratorSetMismatch(f"{self.gens} vs {other.gens}")

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GrassmannElement):
            other = self.gens.scalar(other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return GrassmannElement(self.gens, out)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannElement(self.gens, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GrassmannElement):
            # even scalar or jet coefficient: commutes with everything
            return GrassmannElement(self.gens, {m: c * other for m, c in self.terms.items()})
        self._check(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                s = merge_sign(m1, m2)
                if not s:
                    continue
                m = m1 | m2
                v = c1 * c2 if s > 0 else -(c1 * c2)
                out[m] = out[m] + v if m in out else v
        return GrassmannElement(self.gens, out)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if isinstance(other, GrassmannElement):
            return self * ginv(other)
        return GrassmannElement(self.gens, {m: c / other for m, c in self.terms.items()})

    # -- coefficient maps ---------------------------------------------------
    def map(self, fn):
        return GrassmannElement(self.gens, {m: fn(c) for m, c in self.terms.items()})

    def deriv(self, i=0, j=0, k=0):
        """Differentiate every jet coefficient."""
        return GrassmannElement(
            self.gens,
            {m: c.deriv(i, j, k) for m, c in self.terms.items() if isinstance(c, Jet)})

    def partial(self, i=0, j=0, k=0):
        """Point value of ``d^i_x d^j_y d^k_t`` as a scalar-coefficient element."""
        zeroth = i == j == k == 0
        return GrassmannElement(
            self.gens,
            {m: (c.partial(i, j, k) if isinstance(c, Jet) else complex(c))
             for m, c in self.terms.items() if zeroth or isinstance(c, Jet)})

    def value(self):
        return GrassmannElement(
            self.gens,
            {m: (c.value if isinstance(c, Jet) else complex(c)) for m, c in self.terms.items()})

    def max_abs(self):
        return max((abs(c.value if isinstance(c, Jet) else c) for c in self.terms.values()),
                   default=0.0)

    def as_dict(self):
        """Scalar components keyed by generator labels joined with '*'."""
        v = self.value()
        return {"*".join(self.gens.labels(m)) or "1": c for m, c in sorted(v.terms.items())}

    def __repr__(self):
        parts = []
        for m, c in sorted(self.terms.items()):
            lab = "*".join(self.gens.labels(m))
            parts.append(f"{c!r}" + (f"*{lab}" if lab else ""))
        return "GrassmannElement(" + (" + ".join(parts) or "0") + ")"


def grassmann_mul(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    return a * b


# -- functions of elements with an invertible body ---------------------------

def _series(a: GrassmannElement, coeffs):
    """sum_k coeffs[k] * n**k with n the nilpotent part of ``a``."""
    nil = GrassmannElement(a.gens, {m: c for m, c in a.terms.items() if m})
    out = a.gens.scalar(coeffs(0))
    power = a.gens.scalar(1.0)
    k = 1
    while True:
        power = power * nil
        if power.is_zero():
            return out
        out = out + power * coeffs(k)
        k += 1


def gexp(a: GrassmannElement) -> GrassmannElement:
    from . import jet
    e = jet.exp(a.body())
    return _series(a, lambda k: e / math.factorial(k))


def glog(a: GrassmannElement) -> GrassmannElement:
    from . import jet
    b = a.body()
    return _series(a, lambda k: jet.log(b) if k == 0
                   else (-1) ** (k - 1) / (k * b ** k))


def ginv(a: GrassmannElement) -> GrassmannElement:
    b = a.body()
    return _series(a, lambda k: (-1) ** k / b ** (k + 1))


# -- superspace ----------------------------------------------------------------

_DERIV_AXIS = {"x": (1, 0, 0), "y": (0, 1, 0), "t": (0, 0, 1)}


def cov_derivative(e: GrassmannElement, which: str) -> GrassmannElement:
    """Supercovariant derivative ``d/dtheta + theta d/d(which)``; theta is index 0."""
    if not e.gens.has_theta:
        raise GeneratorSetMismatch("supercovariant derivative needs theta at index 0")
    which = which[-1] if which.startswith("D") else which
    axis = _DERIV_AXIS[which]
    out = {}
    for m, c in e.terms.items():
        if m & 1:
            out[m ^ 1] = c
        else:
            if not isinstance(c, Jet):
                continue
            out[m | 1] = c.deriv(*axis)
    return GrassmannElement(e.gens, out)


class Superfield:
    """Homogeneous superfield ``lower + theta * upper`` with jet coefficients.

    For the fermionic field of the SUSY BLMP equation ``lower`` is the odd
    component xi and ``upper`` the even component u.
    """

    __slots__ = ("elem",)

    def __init__(self, elem: GrassmannElement):
        if not elem.gens.has_theta:
            raise GeneratorSetMismatch("superfields need theta at generator index 0")
        elem.require_parity()
        self.elem = elem

    @classmethod
    def from_components(cls, gens, lower, upper, parity=None):
        """Build ``lower + theta*upper`` from theta-free elements (or jets)."""
        def lift(c):
            if isinstance(c, GrassmannElement):
                if any(m & 1 for m in c.terms):
                    raise InvalidComponent("theta inside a superfield component")
                return c
            return gens.scalar(c)

        lo, up = lift(lower), lift(upper)
        terms = dict(lo.terms)
        for m, c in up.terms.items():
            terms[m | 1] = c
        sf = cls(GrassmannElement(gens, terms))
        if parity is not None and not sf.elem.is_zero() and sf.parity != parity:
            raise ParityMismatch(f"expected parity {parity}, got {sf.parity}")
        if not lo.is_zero() and not up.is_zero():
            if lo.require_parity() == up.require_parity():
                raise ParityMismatch("superfield components must have opposite parity")
        return sf

    @classmethod
    def fermionic(cls, gens, xi, u):
        """Phi = xi + theta u with odd xi and even u."""
        return cls.from_components(gens, xi, u, parity=1)

    @property
    def gens(self):
        return self.elem.gens

    @property
    def parity(self):
        return self.elem.parity()

    @property
    def lower(self):
        return GrassmannElement(self.gens, {m: c for m, c in self.elem.terms.items() if not m & 1})

    @property
    def upper(self):
        return GrassmannElement(self.gens, {m ^ 1: c for m, c in self.elem.terms.items() if m & 1})

    xi = lower
    u = upper

    def D(self, which):
        return Superfield(cov_derivative(self.elem, which))

    def deriv(self, i=0, j=0, k=0):
        return Superfield(self.elem.deriv(i, j, k))

    def __repr__(self):
        return f"Superfield({self.elem!r})"


class InvalidComponent(ParityMismatch):
    pass
