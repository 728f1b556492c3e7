"""Classical Hirota derivatives and their super analogues.

Every operator is expanded by the Leibniz rule into a sum of products
``(op_f f) (op_g g)`` evaluated at a single point. The super factor
``S_mu (f . g) = (D_mu f) g - (-1)^|f| f (D_mu g)`` picks up the Koszul sign
when the primed derivative moves past ``f``.
"""
from __future__ import annotations

from math import comb
from typing import NamedTuple

from .grassmann import GrassmannElement, cov_derivative


class HirotaOrder(NamedTuple):
    lx: int = 0
    ly: int = 0
    lt: int = 0
    kx: int = 0
    ky: int = 0

    @property
    def total(self):
        return sum(self)


def _classical_terms(lx, ly, lt):
    for i in range(lx + 1):
        for j in range(ly + 1):
            for m in range(lt + 1):
                c = comb(lx, i) * comb(ly, j) * comb(lt, m)
                if (lx - i + ly - j + lt - m) & 1:
                    c = -c
                yield c, (i, j, m), (lx - i, ly - j, lt - m)


def hirota_products(order, f, g):
    """Individual Leibniz products whose sum is :func:`hirota_apply`."""
    order = HirotaOrder(*order)
    if order.kx or order.ky:
        raise ValueError("use super_hirota_apply for super orders")
    return [c * (f.partial(*a) * g.partial(*b))
            for c, a, b in _classical_terms(order.lx, order.ly, order.lt)]


def hirota_apply(order, f, g):
    """``D_x^lx D_y^ly D_t^lt (f . g)`` at the expansion point of two jets.

    Mirror terms are added pairwise first, so an odd-order ``D(f . f)`` is
    exactly zero.
    """
    p = hirota_products(order, f, g)
    n = len(p)
    acc = sum((p[k] + p[n - 1 - k] for k in range(n // 2)), 0j)
    return acc + p[n // 2] if n & 1 else acc


def _ops_value(f: GrassmannElement, ax, ay, cl, cache):
    key = (ax, ay, cl)
    v = cache.get(key)
    if v is None:
        e = f.deriv(*cl)
        for _ in range(ay):
            e = cov_derivative(e, "y")
        for _ in range(ax):
            e = cov_derivative(e, "x")
        v = cache[key] = e.value()
    return v


def super_terms(order, pf):
    """Leibniz expansion of ``S_x^kx S_y^ky D^l`` on ``f . g`` with ``|f| = pf``.

    Yields ``(coef, (ax, ay, cl_f), (bx, by, cl_g))`` where the operator on
    each side is ``D_x^a D_y^b d^cl``.
    """
    order = HirotaOrder(*order)
    terms = [(c, (0, 0, a), (0, 0, b))
             for c, a, b in _classical_terms(order.lx, order.ly, order.lt)]
    for which, n in (("y", order.ky), ("x", order.kx)):
        for _ in range(n):
            new = []
            for c, (ax, ay, ca), (bx, by, cb) in terms:
                pf_now = (pf + ax + ay) & 1
                if which == "y":
                    new.append((c, (ax, ay + 1, ca), (bx, by, cb)))
                    new.append((c if pf_now else -c, (ax, ay, ca), (bx, by + 1, cb)))
                else:
                    new.append((c, (ax + 1, ay, ca), (bx, by, cb)))
                    new.append((c if pf_now else -c, (ax, ay, ca), (bx + 1, by, cb)))
            terms = new
    return terms


def super_hirota_products(order, f: GrassmannElement, g: GrassmannElement):
    """Individual signed products whose sum is :func:`super_hirota_apply`."""
    pf = f.require_parity()
    g.require_parity()
    cf, cg = {}, {}
    return [_ops_value(f, ax, ay, ca, cf) * _ops_value(g, bx, by, cb, cg) * c
            for c, (ax, ay, ca), (bx, by, cb) in super_terms(order, pf)]


def super_hirota_apply(order, f: GrassmannElement, g: GrassmannElement) -> GrassmannElement:
    """``S_x^kx S_y^ky D_x^lx D_y^ly D_t^lt (f . g)`` for superfields with jet coefficients.

    Super factors act after (to the left of) the classical ones; ``D_x`` acts
    after ``D_y``.
    """
    out = f.gens.zero()
    for p in super_hirota_products(order, f, g):
        out = out + p
    return out
