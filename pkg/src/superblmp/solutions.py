"""Classical BLMP solution families.

Every constructor returns a :class:`SolutionField` whose ``u`` (and, when
available, ``tau``) is evaluated as a jet at a point. Families reduced to
KdV form depend on (x, y) only through ``z = x + q(y)``.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import jet
from .errors import (CapExceeded, DegenerateWronskian, InvalidKappa,
                     InvariantViolation, NonExactDivision, SingularPoint)
from .jet import DEFAULT_ORDER, Jet, JetOrder
from .library import IDENTITY, ZERO, NamedFunction, ReductionSpec

SING_FLOOR = 1e-8
YABLONSKII_CAP = 8
WRONSKIAN_CAP = 4


@dataclass(frozen=True)
class SolutionField:
    family: str
    params: dict
    u_fn: Callable = field(repr=False)
    tau_fn: Callable | None = field(default=None, repr=False)
    reduction: ReductionSpec = field(default_factory=ReductionSpec)

    @property
    def m(self) -> NamedFunction:
        return self.reduction.m

    def u(self, x, y, t, order=DEFAULT_ORDER) -> Jet:
        return self.u_fn(x, y, t, JetOrder(*order))

    def tau(self, x, y, t, order=DEFAULT_ORDER) -> Jet:
        if self.tau_fn is None:
            raise AttributeError(f"{self.family} carries no tau function")
        return self.tau_fn(x, y, t, JetOrder(*order))

    def descriptor(self) -> dict:
        d = {"family": self.family, "params": _plain(self.params)}
        d.update(self.reduction.to_dict())
        return d


def _plain(v):
    if isinstance(v, complex):
        return [v.real, v.imag] if v.imag else v.real
    if isinstance(v, (list, tuple)):
        return [_plain(w) for w in v]
    if isinstance(v, dict):
        return {k: _plain(w) for k, w in v.items()}
    return v


def _check_tau(tau: Jet):
    if abs(tau.value) <= SING_FLOOR:
        raise SingularPoint(f"|tau| = {abs(tau.value):.3g} at sample point")
    return tau


def z_t_jets(red: ReductionSpec, x, y, t, order):
    xj, yj, tj = jet.point_jets(x, y, t, order)
    return xj + red.q(yj), tj


def _from_tau(family, params, tau_zt, red: ReductionSpec):
    """Field with ``u = -2 d_x log tau(z, t) - m(y)``."""

    def tau_fn(x, y, t, order):
        z, tj = z_t_jets(red, x, y, t, order)
        return tau_zt(z, tj)

    def u_fn(x, y, t, order):
        tau = _check_tau(tau_fn(x, y, t, order.bump(dx=1)))
        u = -2.0 * tau.deriv(1, 0, 0) / tau.truncate(order)
        if red.m.name != "zero":
            u = u - red.m(Jet.var("y", y, order))
        return u

    return SolutionField(family, params, u_fn, tau_fn, red)


def _from_expsum(family, params, terms_of, red: ReductionSpec, w_of=None):
    """Field whose tau is ``sum_k c_k exp(phi_k)`` with phi_k linear in x.

    ``terms_of(a, t)`` returns ``[(c_k, phi_k, dphi_k/dx), ...]`` for the jet
    argument ``a`` (z, or w when ``w_of`` supplies it). The dominant
    exponential is factored out before the logarithmic derivative.
    """

    def arg(x, y, t, order):
        if w_of is not None:
            return w_of(x, y, t, order), None
        return z_t_jets(red, x, y, t, order)

    def tau_fn(x, y, t, order):
        a, tj = arg(x, y, t, order)
        acc = 0.0 * a
        for c, phi, _ in terms_of(a, tj):
            acc = acc + c * jet.exp(phi)
        return acc

    def u_fn(x, y, t, order):
        a, tj = arg(x, y, t, order.bump(dx=1))
        terms = terms_of(a, tj)
        k = max(range(len(terms)),
                key=lambda i: (complex(terms[i][1].value).real + math.log(abs(terms[i][0]) or 1e-300)))
        c0, phi0, rate0 = terms[k]
        acc = 0.0 * a
        for i, (c, phi, _) in enumerate(terms):
            acc = acc + (c / c0) * (jet.exp(phi - phi0) if i != k else 1.0)
        _check_tau(acc)
        u = -2.0 * (rate0 + acc.deriv(1, 0, 0) / acc.truncate(order))
        if red.m.name != "zero":
            u = u - red.m(Jet.var("y", y, order))
        return u

    return SolutionField(family, params, u_fn, tau_fn, red)


# -- Yablonskii-Vorob'ev polynomials --------------------------------------------

def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, p in enumerate(a):
        if p:
            for j, q in enumerate(b):
                out[i + j] += p * q
    return out


def _padd(a, b, sb=1):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + sb * (b[i] if i < len(b) else 0) for i in range(n)]


def _pder(a):
    return [i * a[i] for i in range(1, len(a))] or [0]


def _ptrim(a):
    while len(a) > 1 and a[-1] == 0:
        a = a[:-1]
    return a


def _pdiv_exact(num, den):
    num, den = _ptrim(list(num)), _ptrim(list(den))
    quot = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    rem = [Fraction(c) for c in num]
    for i in range(len(num) - len(den), -1, -1):
        q = rem[i + len(den) - 1] / den[-1]
        quot[i] = q
        for j, d in enumerate(den):
            rem[i + j] -= q * d
    if any(rem) or any(q.denominator != 1 for q in quot):
        raise NonExactDivision("Yablonskii-Vorob'ev recursion left a remainder")
    return _ptrim([int(q) for q in quot])


def yablonskii(n: int, cap: int = YABLONSKII_CAP) -> list[int]:
    """Integer coefficients (ascending powers of z) of Q_n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > cap:
        raise CapExceeded(f"n = {n} exceeds cap {cap}")
    q_prev, q = [1], [0, 1]
    if n == 0:
        return q_prev
    for _ in range(1, n):
        qz, qzz = _pder(q), _pder(_pder(q))
        rhs = _padd(_pmul([0, 1], _pmul(q, q)),
                    _pmul([4], _padd(_pmul(q, qzz), _pmul(qz, qz), -1)), -1)
        q_prev, q = q, _pdiv_exact(rhs, q_prev)
    return q


def yablonskii_tau(n: int):
    """Q_n(z (3t)^(-1/3)) times (3t)^(deg/3), as {(z power, t power): coefficient}."""
    coeffs = yablonskii(n)
    deg = len(coeffs) - 1
    out = {}
    for k, c in enumerate(coeffs):
        if not c:
            continue
        if (deg - k) % 3:
            raise InvariantViolation("Q_n is not of the form z^r P(z^3)")
        j = (deg - k) // 3
        out[(k, j)] = c * 3 ** j
    return out


def rational_similarity(n: int, red: ReductionSpec = ReductionSpec()) -> SolutionField:
    terms = yablonskii_tau(n)

    def tau(z, t):
        acc = 0.0 * z
        for (k, j), c in terms.items():
            acc = acc + c * (z ** k) * (t ** j)
        return acc

    return _from_tau("rational_similarity", {"n": n}, tau, red)


# -- N-soliton ------------------------------------------------------------------

def coupling(ki, kj):
    """e^{a_ij} = ((k_i - k_j)/(k_i + k_j))^2."""
    if ki + kj == 0:
        raise InvalidKappa(f"kappa_i + kappa_j = 0 for ({ki}, {kj})")
    return ((ki - kj) / (ki + kj)) ** 2


def n_soliton(kappa, red: ReductionSpec = ReductionSpec()) -> SolutionField:
    kappa = [complex(k) if isinstance(k, complex) else float(k) for k in kappa]
    n = len(kappa)
    amp = {}
    for i, j in itertools.combinations(range(n), 2):
        amp[i, j] = coupling(kappa[i], kappa[j])

    def terms(z, t):
        out = []
        for mu in itertools.product((0, 1), repeat=n):
            c = 1.0
            for (i, j), a in amp.items():
                if mu[i] and mu[j]:
                    c *= a
            if c == 0:
                continue
            phase = 0.0 * z
            rate = 0.0
            for i in range(n):
                if mu[i]:
                    phase = phase + (kappa[i] * z - kappa[i] ** 3 * t)
                    rate += kappa[i]
            out.append((c, phase, rate))
        return out

    return _from_expsum("n_soliton", {"kappa": list(kappa)}, terms, red)


# -- Wronskian solutions ----------------------------------------------------------

@dataclass(frozen=True)
class BasisFunction:
    """One Wronskian column generator h(z, t).

    ``kind`` fixes the eigenvalue sign: rational (lambda = 0, h = z + shift),
    negaton (lambda = -gamma^2, h = cosh(gamma(z - 4 gamma^2 t) + shift)),
    positon (lambda = gamma^2, h = cos(gamma(z + 4 gamma^2 t) + shift)),
    complexiton (lambda = -eta, h = cosh(sqrt(eta)(z - 4 eta t) + shift)).
    ``d_gamma = 1`` takes the gamma-derivative (Jordan-chain partner).
    """

    kind: str
    gamma: complex = 0.0
    d_gamma: int = 0
    shift: complex = 0.0

    def __post_init__(self):
        g = complex(self.gamma)
        if self.kind == "rational":
            if self.d_gamma:
                raise InvariantViolation("rational basis has no gamma-derivative")
        elif self.kind in ("negaton", "positon"):
            if g.imag != 0 or g.real == 0:
                raise InvariantViolation(f"{self.kind} needs real nonzero gamma")
        elif self.kind == "complexiton":
            if g.imag == 0:
                raise InvariantViolation("complexiton needs a non-real eta")
            if self.d_gamma:
                raise InvariantViolation("complexiton chains are not supported")
        else:
            raise InvariantViolation(f"unknown basis kind {self.kind!r}")

    @property
    def eigenvalue(self) -> complex:
        g = self.gamma
        return {"rational": 0.0, "negaton": -g * g, "positon": g * g,
                "complexiton": -g}[self.kind]

    @property
    def eigenvalue_dgamma(self) -> complex:
        return {"negaton": -2 * self.gamma, "positon": 2 * self.gamma}.get(self.kind, 0.0)

    def __call__(self, z, t):
        g = self.gamma
        if self.kind == "rational":
            return z + self.shift
        if self.kind == "negaton":
            xi = g * (z - 4 * g * g * t) + self.shift
            if self.d_gamma:
                return jet.sinh(xi) * (z - 12 * g * g * t)
            return jet.cosh(xi)
        if self.kind == "positon":
            xi = g * (z + 4 * g * g * t) + self.shift
            if self.d_gamma:
                return -jet.sin(xi) * (z + 12 * g * g * t)
            return jet.cos(xi)
        s = cmath.sqrt(g)
        return jet.cosh(s * (z - 4 * g * t) + self.shift)

    def scaled(self, z, t):
        """(hhat, rho, rate) with h = exp(rho) * hhat, rho linear and rate = d rho / dz.

        Hyperbolic columns drop their dominant exponential so that hhat stays
        of order one; trigonometric and rational columns are returned as is.
        """
        g = self.gamma
        if self.kind in ("rational", "positon"):
            return self(z, t), None, 0.0
        if self.kind == "negaton":
            xi = g * (z - 4 * g * g * t) + self.shift
            speed = g
        else:
            sq = cmath.sqrt(g)
            xi = sq * (z - 4 * g * t) + self.shift
            speed = sq
        s = 1.0 if complex(xi.value).real >= 0 else -1.0
        e = jet.exp(-2 * s * xi)
        if self.d_gamma:
            hhat = s * (1.0 - e) / 2 * (z - 12 * g * g * t)
        else:
            hhat = (1.0 + e) / 2
        return hhat, s * xi, s * speed

    def to_dict(self):
        return _plain({"kind": self.kind, "gamma": self.gamma, "d_gamma": self.d_gamma,
                       "shift": self.shift})


def wronskian(columns):
    """det(H, H_x, ..., H_x^(N-1)) by permutation expansion."""
    n = len(columns)
    if n == 0:
        return None
    rows = [[h.deriv(k, 0, 0) if k else h for k in range(n)] for h in columns]
    total = None
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        term = rows[0][perm[0]]
        for i in range(1, n):
            term = term * rows[i][perm[i]]
        term = -term if inv & 1 else term
        total = term if total is None else total + term
    return total


def _shifted_wronskian(cols, rates):
    n = len(cols)
    rows = []
    for h, r in zip(cols, rates):
        row = [h]
        for _ in range(1, n):
            prev = row[-1]
            row.append(prev.deriv(1, 0, 0) + r * prev.truncate(prev.order.bump(dx=-1)))
        rows.append(row)
    total = None
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        term = rows[0][perm[0]]
        for i in range(1, n):
            term = term * rows[i][perm[i]]
        term = -term if inv & 1 else term
        total = term if total is None else total + term
    return total


def wronskian_solution(basis, red: ReductionSpec = ReductionSpec(),
                       family="wronskian", params=None) -> SolutionField:
    basis = [b if isinstance(b, BasisFunction) else BasisFunction(**b) for b in basis]
    n = len(basis)
    if n > WRONSKIAN_CAP:
        raise CapExceeded(f"Wronskian order {n} > {WRONSKIAN_CAP}")

    def tau_fn(x, y, t, order):
        if n == 0:
            return Jet.constant(1.0, order)
        z, tj = z_t_jets(red, x, y, t, order.bump(dx=n - 1))
        w = wronskian([h(z, tj) for h in basis])
        if abs(w.value) <= SING_FLOOR:
            raise DegenerateWronskian(f"|W| = {abs(w.value):.3g}")
        return w.truncate(order)

    def u_fn(x, y, t, order):
        # W = exp(sum rho_i) * What with columns (d + rate_i)^k hhat_i
        if n == 0:
            return Jet.constant(0.0, order) - (red.m(Jet.var("y", y, order))
                                               if red.m.name != "zero" else 0.0)
        z, tj = z_t_jets(red, x, y, t, order.bump(dx=n))
        cols, total_rate = [], 0.0
        for h in basis:
            hhat, _, rate = h.scaled(z, tj)
            total_rate += rate
            cols.append(hhat)
        what = _shifted_wronskian(cols, [h.scaled(z, tj)[2] for h in basis])
        if abs(what.value) <= SING_FLOOR * 1e-8:
            raise DegenerateWronskian(f"|W| = {abs(what.value):.3g}")
        what = what.truncate(order.bump(dx=1))
        u = -2.0 * (total_rate + what.deriv(1, 0, 0) / what.truncate(order))
        if red.m.name != "zero":
            u = u - red.m(Jet.var("y", y, order))
        return u

    if params is None:
        params = {"basis": [b.to_dict() for b in basis]}
    return SolutionField(family, params, u_fn, tau_fn, red)


def wronskian_basis(name, gamma=1.0, eta=1 + 1j):
    """Bases of the named second-order Wronskian solutions."""
    if name == "negaton2":
        return [BasisFunction("negaton", gamma), BasisFunction("negaton", gamma, 1)]
    if name == "positon2":
        return [BasisFunction("positon", gamma), BasisFunction("positon", gamma, 1)]
    if name == "rational_soliton":
        return [BasisFunction("rational"), BasisFunction("negaton", gamma)]
    if name == "rational_positon":
        return [BasisFunction("rational"), BasisFunction("positon", gamma)]
    if name == "complexiton":
        eta = complex(eta)
        return [BasisFunction("complexiton", eta), BasisFunction("complexiton", eta.conjugate())]
    raise ValueError(f"no Wronskian basis named {name!r}")


# -- closed forms -------------------------------------------------------------------

def _div(num, den):
    if abs(den.value if isinstance(den, Jet) else den) <= SING_FLOOR:
        raise SingularPoint("closed-form denominator vanishes")
    return num / den


def _scaled_cosh_sinh(xi):
    """cosh(xi) e^{-s xi}, sinh(xi) e^{-s xi}, e^{-s xi} and the sign s."""
    s = 1.0 if complex(xi.value).real >= 0 else -1.0
    e = jet.exp(-2 * s * xi)
    return (1.0 + e) / 2, s * (1.0 - e) / 2, jet.exp(-s * xi), s


def _negaton2(g):
    # numerator and denominator both multiplied by e^{-2 s xi}
    def u(z, t):
        xi = g * (z - 4 * g * g * t)
        ch, sh, em, _ = _scaled_cosh_sinh(xi)
        return _div(8 * g * ch * ch, 2 * g * (12 * g * g * t - z) * em * em - 2 * sh * ch)
    return u


def _positon2(g):
    def u(z, t):
        xi = g * (z + 4 * g * g * t)
        return _div(-8 * g * jet.cos(xi) ** 2, 2 * g * (12 * g * g * t + z) + jet.sin(2 * xi))
    return u


def _rational_soliton(g):
    def u(z, t):
        return _div(-2 * g * g * z, g * z * jet.tanh(g * (z - 4 * g * g * t)) - 1)
    return u


def _rational_positon(g):
    # multiplied through by cos so that no tan pole is evaluated
    def u(z, t):
        xi = g * (z + 4 * g * g * t)
        c = jet.cos(xi)
        return _div(-2 * g * g * z * c, g * z * jet.sin(xi) + c)
    return u


def complexiton_printed(eta):
    """The complexiton exactly as typeset, 4i Im(eta) cosh(chib) cosh(chi) / (...).

    This expression is minus the Wronskian complexiton and does not solve
    BLMP; :func:`closed_form` uses the sign-corrected version.
    """
    eta = complex(eta)
    se, seb = cmath.sqrt(eta), cmath.sqrt(eta.conjugate())

    def u(z, t):
        chi = se * (z - 4 * eta * t)
        chib = seb * (z - 4 * eta.conjugate() * t)
        num = 4j * eta.imag * jet.cosh(chib) * jet.cosh(chi)
        den = se * jet.cosh(chib) * jet.sinh(chi) - seb * jet.cosh(chi) * jet.sinh(chib)
        return _div(num, den)
    return u


def _complexiton(eta):
    """Minus the typeset expression, evaluated with e^{-s chi - s chib} scaled out."""
    eta = complex(eta)
    se, seb = cmath.sqrt(eta), cmath.sqrt(eta.conjugate())

    def u(z, t):
        ch, sh, _, _ = _scaled_cosh_sinh(se * (z - 4 * eta * t))
        chb, shb, _, _ = _scaled_cosh_sinh(seb * (z - 4 * eta.conjugate() * t))
        num = 4j * eta.imag * chb * ch
        den = se * chb * sh - seb * ch * shb
        return -_div(num, den)
    return u


_CLOSED = {
    "negaton2": _negaton2,
    "positon2": _positon2,
    "rational_soliton": _rational_soliton,
    "rational_positon": _rational_positon,
    "complexiton": _complexiton,
}


def closed_form(name, params=None, red: ReductionSpec = ReductionSpec()) -> SolutionField:
    """Direct evaluation of a displayed closed-form solution in z = x + q(y)."""
    params = dict(params or {})
    if name == "complexiton":
        eta = params.get("eta")
        if eta is None:
            eta = complex(params.get("alpha", 1.0), params.get("beta", 1.0))
        eta = complex(eta)
        if eta.imag == 0:
            raise InvariantViolation("complexiton needs beta != 0")
        ufun = _complexiton(eta)
        basis = wronskian_basis(name, eta=eta)
        params = {"alpha": eta.real, "beta": eta.imag}
    else:
        if name not in _CLOSED:
            raise ValueError(f"unknown closed form {name!r}")
        g = float(params.get("gamma", 1.0))
        if g == 0:
            raise InvariantViolation("gamma must be nonzero")
        ufun = _CLOSED[name](g)
        basis = wronskian_basis(name, gamma=g)
        params = {"gamma": g}
    wr = wronskian_solution(basis, red)

    def u_fn(x, y, t, order):
        z, tj = z_t_jets(red, x, y, t, order)
        try:
            u = ufun(z, tj)
        except ZeroDivisionError as exc:
            raise SingularPoint(str(exc)) from None
        if red.m.name != "zero":
            u = u - red.m(Jet.var("y", y, order))
        return u

    return SolutionField(name, params, u_fn, wr.tau_fn, red)


# -- traveling wave -------------------------------------------------------------------

def traveling_wave(a=1.0, alpha=0.0, c1=1.0, c2=1.0, m: NamedFunction = ZERO,
                   q: NamedFunction = IDENTITY, family="traveling_wave") -> SolutionField:
    """u = -2 a d_w log(c1 e^{(1+alpha)w/2} + c2 e^{(alpha-1)w/2}) - m(y)."""
    if a == 0:
        raise InvariantViolation("a must be nonzero")
    if c1 == 0 and c2 == 0:
        raise InvariantViolation("(c1, c2) must not both vanish")
    red = ReductionSpec(q, m)

    def w_of(x, y, t, order):
        xj, yj, tj = jet.point_jets(x, y, t, order)
        return a * xj + m(yj) / a - 4 * a ** 3 * tj

    def terms(w, _):
        out = []
        if c1:
            out.append((c1, (1 + alpha) * w / 2, a * (1 + alpha) / 2))
        if c2:
            out.append((c2, (alpha - 1) * w / 2, a * (alpha - 1) / 2))
        return out

    params = {"a": a, "alpha": alpha, "c1": c1, "c2": c2}
    return _from_expsum(family, params, terms, red, w_of=w_of)


def kink(a=1.0, m: NamedFunction = ZERO) -> SolutionField:
    """u = -a tanh(w/2) - m(y), the alpha = 0, c1 = c2 = 1 traveling wave."""
    tw = traveling_wave(a, 0.0, 1.0, 1.0, m)

    def u_fn(x, y, t, order):
        xj, yj, tj = jet.point_jets(x, y, t, order)
        w = a * xj + m(yj) / a - 4 * a ** 3 * tj
        return -a * jet.tanh(w / 2) - m(yj)

    return SolutionField("kink", {"a": a}, u_fn, tw.tau_fn, tw.reduction)


def constant(value=0.0) -> SolutionField:
    return SolutionField("constant", {"value": value},
                         lambda x, y, t, order: Jet.constant(value, order),
                         lambda x, y, t, order: Jet.constant(1.0, order))
