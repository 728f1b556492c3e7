"""Super Bell polynomials, their binary form and P-polynomials.

A symbol ``D_x^nx D_y^ny d_x^sx d_y^sy d_t^st H`` (host ``H`` in A, v, w) is a
:class:`DerivSymbol`. Its Grassmann parity is ``nx + ny`` mod 2 (the hosts
are bosonic); its *order parity* ``sx+sy+st+nx+ny`` mod 2 only decides the
v/w split of the binary polynomial.

Monomials are kept in a normal form: symbols sorted by their tuple key,
odd symbols carrying the sign of the sort, repeated odd symbols vanishing.
"""
from __future__ import annotations

import re
from typing import NamedTuple

from .errors import MissingSymbol, OrderCapExceeded, ParityMismatch

ORDER_CAP = 6


class DerivSymbol(NamedTuple):
    host: str
    sx: int = 0
    sy: int = 0
    st: int = 0
    nx: int = 0
    ny: int = 0

    @property
    def odd(self):
        return bool((self.nx + self.ny) & 1)

    @property
    def order_parity(self):
        return (self.sx + self.sy + self.st + self.nx + self.ny) & 1

    def bump(self, sx=0, sy=0, st=0, nx=None, ny=None):
        return DerivSymbol(self.host, self.sx + sx, self.sy + sy, self.st + st,
                           self.nx if nx is None else nx, self.ny if ny is None else ny)

    def __str__(self):
        cl = "x" * self.sx + "y" * self.sy + "t" * self.st
        base = f"{self.host}_{cl}" if cl else self.host
        sup = "Dx" * self.nx + "Dy" * self.ny
        return f"{sup}({base})" if sup else base


def normalize(symbols):
    """Return (sign, sorted tuple); sign 0 when an odd symbol repeats."""
    syms = list(symbols)
    sign = 1
    for i in range(1, len(syms)):
        j = i
        while j > 0 and syms[j - 1] > syms[j]:
            if syms[j - 1].odd and syms[j].odd:
                sign = -sign
            syms[j - 1], syms[j] = syms[j], syms[j - 1]
            j -= 1
    for a, b in zip(syms, syms[1:]):
        if a == b and a.odd:
            return 0, ()
    return sign, tuple(syms)


class BellPolynomial:
    """Integer linear combination of normal-form monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def one(cls):
        return cls({(): 1})

    @classmethod
    def from_monomials(cls, pairs):
        """Build from ``(coef, [symbols...])`` in arbitrary factor order."""
        out = {}
        for c, syms in pairs:
            s, mono = normalize(syms)
            if s:
                out[mono] = out.get(mono, 0) + s * c
        return cls(out)

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return BellPolynomial(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, k):
        return BellPolynomial({m: k * c for m, c in self.terms.items()})

    def lmul(self, sym: DerivSymbol):
        """Multiply by a single symbol placed on the left."""
        return BellPolynomial.from_monomials((c, (sym,) + m) for m, c in self.terms.items())

    def __eq__(self, other):
        return isinstance(other, BellPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def symbols(self):
        return {s for m in self.terms for s in m}

    def map_symbols(self, fn):
        return BellPolynomial.from_monomials(
            (c, tuple(fn(s) for s in m)) for m, c in self.terms.items())

    def render(self):
        if not self.terms:
            return "0"
        out = []
        for mono in sorted(self.terms, key=lambda m: (len(m), m)):
            c = self.terms[mono]
            body = _render_monomial(mono)
            mag = abs(c)
            txt = body if mag == 1 and body else (f"{mag} {body}" if body else str(mag))
            if not out:
                out.append(txt if c > 0 else f"-{txt}")
            else:
                out.append(("+ " if c > 0 else "- ") + txt)
        return " ".join(out)

    __str__ = render

    def __repr__(self):
        return f"BellPolynomial({self.render()!r})"


def _render_monomial(mono):
    parts, i = [], 0
    while i < len(mono):
        j = i
        while j < len(mono) and mono[j] == mono[i]:
            j += 1
        n = j - i
        parts.append(str(mono[i]) + (f"^{n}" if n > 1 else ""))
        i = j
    return " ".join(parts)


# -- derivations -------------------------------------------------------------

def _d_classical(sym: DerivSymbol, axis: str):
    return [(1, sym.bump(**{"s" + axis: 1}))]


def _d_super(sym: DerivSymbol, which: str):
    """D_which applied to one symbol, as a list of (coef, symbol) in normal order."""
    nx, ny = sym.nx, sym.ny
    if which == "x":
        if nx == 0:
            return [(1, sym.bump(nx=1))]
        return [(1, sym.bump(sx=1, nx=0))]          # D_x D_x = d_x
    if ny == 1 and nx == 0:
        return [(1, sym.bump(sy=1, ny=0))]          # D_y D_y = d_y
    if nx == 0:
        return [(1, sym.bump(ny=1))]
    if ny == 0:
        # D_y D_x = d_x + d_y - D_x D_y
        return [(1, sym.bump(sx=1, nx=0)), (1, sym.bump(sy=1, nx=0)),
                (-1, sym.bump(ny=1))]
    # D_y D_x D_y = d_x D_y + d_y D_y - D_x d_y
    return [(1, sym.bump(sx=1, nx=0)), (1, sym.bump(sy=1, nx=0)),
            (-1, sym.bump(sy=1, ny=0))]


def derive(p: BellPolynomial, op: str) -> BellPolynomial:
    """Apply ``d_x, d_y, d_t`` (op 'x','y','t') or ``D_x, D_y`` ('Dx','Dy')."""
    is_super = op.startswith("D")
    axis = op[-1]
    pairs = []
    for mono, c in p.terms.items():
        sign = 1
        for i, s in enumerate(mono):
            images = _d_super(s, axis) if is_super else _d_classical(s, axis)
            for k, img in images:
                pairs.append((c * k * sign, mono[:i] + (img,) + mono[i + 1:]))
            if is_super and s.odd:
                sign = -sign
    return BellPolynomial.from_monomials(pairs)


def _check_orders(lx, ly, lt, kx, ky, cap):
    if min(lx, ly, lt, kx, ky) < 0 or kx > 1 or ky > 1:
        raise ValueError("orders must be non-negative with kx, ky in {0, 1}")
    if lx + ly + lt + kx + ky > cap:
        raise OrderCapExceeded(f"total order {lx + ly + lt + kx + ky} > cap {cap}")


def bell_generate(lx=0, ly=0, lt=0, kx=0, ky=0, host="A", cap=ORDER_CAP) -> BellPolynomial:
    """``Y = e^{-A} D_x^kx D_y^ky d_x^lx d_y^ly d_t^lt e^A`` expanded in A-symbols."""
    _check_orders(lx, ly, lt, kx, ky, cap)
    y = BellPolynomial.one()
    for axis, n in (("x", lx), ("y", ly), ("t", lt)):
        first = DerivSymbol(host).bump(**{"s" + axis: 1})
        for _ in range(n):
            y = derive(y, axis) + y.lmul(first)
    for op, n in (("Dy", ky), ("Dx", kx)):
        first = DerivSymbol(host, nx=int(op == "Dx"), ny=int(op == "Dy"))
        for _ in range(n):
            y = y.lmul(first) + derive(y, op)
    return y


def bell_binary(p: BellPolynomial) -> BellPolynomial:
    """Replace A-symbols by v (odd order) or w (even order)."""
    def rehost(s):
        if s.host != "A":
            return s
        return s._replace(host="v" if s.order_parity else "w")
    return p.map_symbols(rehost)


def bell_p_polynomial(lx=0, ly=0, lt=0, kx=0, ky=0, cap=ORDER_CAP) -> BellPolynomial:
    """Binary polynomial at v = 0: only w-symbols survive."""
    if (lx + ly + lt + kx + ky) & 1:
        _check_orders(lx, ly, lt, kx, ky, cap)
        return BellPolynomial()
    b = bell_binary(bell_generate(lx, ly, lt, kx, ky, cap=cap))
    return BellPolynomial({m: c for m, c in b.terms.items()
                           if all(s.host != "v" for s in m)})


def bell_evaluate(p: BellPolynomial, table):
    """Evaluate with ``table[symbol]`` -> GrassmannElement (or even scalar)."""
    total = None
    for mono, c in p.terms.items():
        prod = None
        for s in mono:
            try:
                val = table[s]
            except KeyError:
                raise MissingSymbol(str(s)) from None
            par = val.parity() if hasattr(val, "parity") else 0
            if par is None or (par != int(s.odd) and not _is_zero(val)):
                raise ParityMismatch(f"symbol {s} is {'odd' if s.odd else 'even'}, value is not")
            prod = val if prod is None else prod * val
        term = c if prod is None else prod * c
        total = term if total is None else total + term
    return 0 if total is None else total


def _is_zero(v):
    return v.is_zero() if hasattr(v, "is_zero") else v == 0


# -- order grammar -------------------------------------------------------------

_TOKEN = re.compile(r"^(\d*)(x|y|t)$")


def parse_orders(spec: str):
    """Parse '3x', '3x,Dy', '2x+t', 'Dx Dy', '0' into (lx, ly, lt, kx, ky)."""
    lx = ly = lt = kx = ky = 0
    for tok in re.split(r"[,+\s]+", spec.strip()):
        if tok in ("", "0"):
            continue
        if tok in ("Dx", "Sx"):
            kx += 1
            continue
        if tok in ("Dy", "Sy"):
            ky += 1
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad order token {tok!r}")
        n = int(m.group(1) or 1)
        if m.group(2) == "x":
            lx += n
        elif m.group(2) == "y":
            ly += n
        else:
            lt += n
    return lx, ly, lt, kx, ky


def label(kind, lx, ly, lt, kx, ky):
    """Bracket label such as ``Y[3x;(0,0)]``."""
    parts = [f"{n if n > 1 else ''}{a}" for a, n in (("x", lx), ("y", ly), ("t", lt)) if n]
    return f"{kind}[{'+'.join(parts) or '0'};({kx},{ky})]"
