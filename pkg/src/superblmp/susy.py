"""Super solitons, superpartners of the traveling wave and their checks."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from . import jet
from .errors import InvariantViolation, NegativeQPrime, DescriptorError
from .grassmann import GeneratorSet, GrassmannElement, Superfield, cov_derivative, glog
from .jet import Jet, JetOrder, point_jets
from .library import NamedFunction, ZERO, IDENTITY
from .residual import ResidualReport, _scan, susy_component_terms
from .solutions import _div, _plain

OMEGA_TOL = 1e-12


# -- super solitons --------------------------------------------------------------

@dataclass(frozen=True)
class SuperSolitonParams:
    """Wave data of an N = 1 or N = 2 super soliton.

    ``omega`` defaults to the dispersion value -kappa^3. Passing anything else
    raises unless ``off_shell`` is set, which the necessity checks use.
    """
    kappa: tuple
    rho: tuple
    omega: tuple | None = None
    zeta: tuple = ("zeta1", "zeta2")
    off_shell: bool = False

    def __post_init__(self):
        k = tuple(complex(v) for v in self.kappa)
        r = tuple(complex(v) for v in self.rho)
        n = len(k)
        if n not in (1, 2) or len(r) != n:
            raise InvariantViolation("need one or two (kappa, rho) pairs")
        om = (tuple(-v ** 3 for v in k) if self.omega is None
              else tuple(complex(v) for v in self.omega))
        if len(om) != n:
            raise InvariantViolation("omega length differs from kappa")
        if not self.off_shell:
            for kk, w in zip(k, om):
                if abs(w + kk ** 3) > OMEGA_TOL * max(1.0, abs(kk) ** 3):
                    raise InvariantViolation(f"omega={w} violates omega=-kappa^3")
        if n == 2:
            if r[0] == r[1] or r[0] + r[1] == 0 or k[0] + k[1] == 0:
                raise InvariantViolation("need rho1 != rho2, rho1+rho2 != 0, kappa1+kappa2 != 0")
        zeta = tuple(self.zeta)[:n]
        if len(zeta) < n or len(set(zeta)) != n:
            raise InvariantViolation("one distinct odd generator per soliton")
        object.__setattr__(self, "kappa", k)
        object.__setattr__(self, "rho", r)
        object.__setattr__(self, "omega", om)
        object.__setattr__(self, "zeta", zeta)

    @property
    def N(self):
        return len(self.kappa)

    @property
    def A12(self):
        (k1, k2), (r1, r2) = self.kappa, self.rho
        return (k1 - k2) * (r1 - r2) / ((k1 + k2) * (r1 + r2))

    def alpha(self, i, j):
        r = self.rho
        return (r[i] + r[j]) / (r[i] - r[j])

    def to_dict(self):
        return _plain({"N": self.N, "kappa": list(self.kappa), "rho": list(self.rho),
                       "omega": list(self.omega), "zeta": list(self.zeta),
                       "off_shell": self.off_shell})

    @classmethod
    def from_dict(cls, d):
        try:
            def c(v):
                return complex(*v) if isinstance(v, (list, tuple)) else complex(v)
            kw = {"kappa": tuple(c(v) for v in d["kappa"]), "rho": tuple(c(v) for v in d["rho"])}
            if d.get("omega") is not None:
                kw["omega"] = tuple(c(v) for v in d["omega"])
            if "zeta" in d:
                kw["zeta"] = tuple(d["zeta"])
            kw["off_shell"] = bool(d.get("off_shell", False))
        except (KeyError, TypeError, ValueError) as exc:
            raise DescriptorError(f"bad super soliton descriptor: {exc}") from exc
        return cls(**kw)


class SuperSoliton:
    """Super tau ``g`` and the field ``Phi = D_x F + Lambda`` with ``F = -2 ln g``.

    g is kept as a sum ``sum_k C_k exp(varphi_k)`` with constant Grassmann
    prefactors C_k (epsilon set to 1, the theta parts of the exponents
    expanded exactly since they square to zero).
    """

    def __init__(self, params: SuperSolitonParams, lam=None):
        self.params = params
        self.gens = GeneratorSet.superspace(*params.zeta)
        self.lam = lam
        self.family = f"super_soliton{params.N}"
        G, p = self.gens, params
        th = G.generator("theta")
        z = [G.generator(n) for n in p.zeta]
        one = G.scalar(1.0)
        # (prefactor, index set of the varphi's in the exponent)
        self.terms = [(one, ())]
        for i in range(p.N):
            self.terms.append((one + th * z[i], (i,)))
        if p.N == 2:
            pref = (one + (z[0] * z[1]) * (2.0 / (p.rho[1] - p.rho[0]))) * p.A12
            odd = th * (z[0] * p.alpha(0, 1) + z[1] * p.alpha(1, 0))
            self.terms.append((pref * (one + odd), (0, 1)))
        self.terms = [(c, ix) for c, ix in self.terms if not c.is_zero()]

    def _phases(self, x, y, t, order):
        xj, yj, tj = point_jets(x, y, t, order)
        p = self.params
        return [p.kappa[i] * xj + p.rho[i] * yj + p.omega[i] * tj for i in range(p.N)]

    def g(self, x, y, t, order=JetOrder(3, 1, 1)) -> GrassmannElement:
        order = JetOrder(*order)
        ph = self._phases(x, y, t, order)
        out = self.gens.zero()
        for c, ix in self.terms:
            e = jet.exp(sum((ph[i] for i in ix), Jet.constant(0.0, order)))
            out = out + c * e
        return out

    __call__ = g
    tau = g

    def g_scaled(self, x, y, t, order):
        """(ghat, varphi0) with g = exp(varphi0) * ghat and ghat of order one."""
        ph = self._phases(x, y, t, order)
        zero = Jet.constant(0.0, order)
        exps = [sum((ph[i] for i in ix), zero) for _, ix in self.terms]
        score = [complex(e.value).real + math.log(abs(c.body()) or 1e-300)
                 for e, (c, _) in zip(exps, self.terms)]
        k0 = int(np.argmax(score))
        out = self.gens.zero()
        for e, (c, _) in zip(exps, self.terms):
            out = out + c * jet.exp(e - exps[k0])
        return out, exps[k0]

    def F(self, x, y, t, order):
        ghat, p0 = self.g_scaled(x, y, t, order)
        return (glog(ghat) + p0) * (-2.0)

    def phi(self, x, y, t, order=JetOrder(3, 1, 1)) -> Superfield:
        order = JetOrder(*order)
        F = self.F(x, y, t, order.bump(dx=1))
        out = cov_derivative(F, "x")
        if self.lam is not None:
            out = out + self.lam(x, y, t, order)
        out = GrassmannElement(self.gens, {m: (c.truncate(order) if isinstance(c, Jet) else c)
                                           for m, c in out.terms.items()})
        return Superfield(out)

    def descriptor(self):
        return {"family": self.family, "params": self.params.to_dict()}


def super_soliton(N, params: SuperSolitonParams = None, lam=None, **kw) -> SuperSoliton:
    """N = 1 or 2 super soliton; ``kw`` are forwarded to SuperSolitonParams."""
    if params is None:
        params = SuperSolitonParams(**kw)
    if params.N != N:
        raise InvariantViolation(f"params describe N={params.N}, asked for N={N}")
    return SuperSoliton(params, lam)


def theta_lambda(c: NamedFunction, gens: GeneratorSet):
    """Lambda = theta c(y), so that D_y D_x Lambda = theta c'(y)."""
    th = gens.generator("theta")

    def lam(x, y, t, order):
        return th * c(Jet.var("y", y, order))
    return lam


def dispersion_polynomials(kappa, rho, omega, cprime):
    """(Q1, Q2) of the component system with Lambda = theta c(y)."""
    q2 = omega + kappa ** 3
    return rho * q2 - 3 * cprime * kappa ** 2, q2


def dispersion_obstruction(cprime=1.0, n=41, lim=3.0, kmin=0.1):
    """Smallest max(|Q1|, |Q2|) over a (kappa, rho, omega) grid with |kappa|, |rho| >= kmin."""
    ax = np.linspace(-lim, lim, n)
    K, R, W = np.meshgrid(ax, ax, np.concatenate([ax ** 3, -ax ** 3]), indexing="ij")
    q1, q2 = dispersion_polynomials(K, R, W, cprime)
    keep = (np.abs(K) >= kmin) & (np.abs(R) >= kmin)
    return float(np.min(np.maximum(np.abs(q1), np.abs(q2))[keep]))


# -- superpartners -----------------------------------------------------------------

@dataclass(frozen=True)
class SuperpartnerParams:
    d1: float = 1.0
    d2: float = 0.0
    a: float = 1.0
    alpha: float = 0.0
    beta1: float = 1.0
    beta2: float = 0.0
    beta3: float = 0.0
    m: NamedFunction = ZERO
    zeta: str = "zeta"

    def __post_init__(self):
        if self.d1 == 0 and self.d2 == 0:
            raise InvariantViolation("(d1, d2) = (0, 0)")
        if self.a == 0:
            raise InvariantViolation("a = 0")

    @classmethod
    def from_c(cls, c1, c2, **kw):
        return cls(d1=c1 + c2, d2=c1 - c2, **kw)

    def to_dict(self):
        d = {k: getattr(self, k) for k in ("d1", "d2", "a", "alpha", "beta1", "beta2",
                                           "beta3", "zeta")}
        d["m"] = self.m.to_dict()
        return _plain(d)

    @classmethod
    def from_dict(cls, d):
        try:
            kw = {k: d[k] for k in ("d1", "d2", "a", "alpha", "beta1", "beta2", "beta3", "zeta")
                  if k in d}
            for k, v in list(kw.items()):
                if isinstance(v, (list, tuple)):
                    kw[k] = complex(*v)
            if "m" in d:
                kw["m"] = NamedFunction.from_dict(d["m"])
        except (TypeError, ValueError) as exc:
            raise DescriptorError(f"bad superpartner descriptor: {exc}") from exc
        return cls(**kw)


def _den(p, w):
    return p.d1 * jet.cosh(w / 2) + p.d2 * jet.sinh(w / 2)


def profile_u(p: SuperpartnerParams, w):
    """u_(d1,d2) without the -m(y) shift, as a function of w."""
    d1, d2, a = p.d1, p.d2, p.a
    return -a * (1 + p.alpha) + _div(2 * a * (d1 - d2), d1 - d2 + (d1 + d2) * jet.exp(w))


def profile_k(p: SuperpartnerParams, w):
    d1, d2 = p.d1, p.d2
    if d1 * d1 == d2 * d2:
        # d2 = +-d1: both fractions collapse to constants, psi = 0
        return 0.0 * w + (48 * d1 * d1 * d2 * p.beta1 + 32 * d1 ** 4 * p.beta2 + p.beta3)
    ch = lambda n: jet.cosh(n * w / 2)
    sh = lambda n: jet.sinh(n * w / 2)
    e = d1 * d1 - d2 * d2
    num1 = (4 * d1 * d2 * (11 * d1 ** 2 + d2 ** 2) * ch(1) + 15 * d1 * d2 * e * ch(3)
            - 5 * d1 * d2 * e * ch(5) + 4 * d2 ** 2 * (11 * d1 ** 2 + d2 ** 2) * sh(1)
            - 5 * e * (4 * d1 ** 2 - d2 ** 2) * sh(3) - e * (4 * d1 ** 2 + d2 ** 2) * sh(5))
    num2 = (4 * d1 * (5 * d1 ** 2 - d2 ** 2) * (d1 ** 2 + d2 ** 2) * ch(1)
            + 5 * d1 * e * (5 * d1 ** 2 - 3 * d2 ** 2) * ch(3)
            + 5 * d1 * (d1 ** 4 - d2 ** 4) * ch(5)
            + 4 * d2 * (5 * d1 ** 2 - d2 ** 2) * (d1 ** 2 + d2 ** 2) * sh(1)
            + 5 * d2 * (d2 ** 4 - d1 ** 4) * sh(3)
            + d2 * e * (9 * d1 ** 2 + d2 ** 2) * sh(5))
    den = _den(p, w)
    return _div(p.beta1 * num1 + p.beta2 * num2, den) + p.beta3


def k_special(d, p: SuperpartnerParams, w):
    """The displayed special cases (d1, d2) = (1, 0) and (0, 1)."""
    b1, b2, b3 = p.beta1, p.beta2, p.beta3
    if tuple(d) == (1, 0):
        return (b3 - 8 * b1 * (4 * jet.sinh(w) + jet.sinh(2 * w) - 2 * jet.tanh(w / 2))
                + 10 * b2 * (4 * jet.cosh(w) + jet.cosh(2 * w)))
    if tuple(d) == (0, 1):
        return b3 + 2 * (b1 - b2) * (-4 * jet.cosh(w) + jet.cosh(2 * w))
    raise ValueError(f"no displayed special case {d}")


def u_special(d, p: SuperpartnerParams, w):
    a = p.a
    if tuple(d) == (1, 0):
        return -a * jet.tanh(w / 2) - a * p.alpha
    if tuple(d) == (0, 1):
        return -a * jet.coth(w / 2) - a * p.alpha
    raise ValueError(f"no displayed special case {d}")


class Superpartner:
    """Phi = zeta k(w) + theta u_(d1,d2) with w = a x + m(y)/a - 4 a^3 t."""

    def __init__(self, params: SuperpartnerParams):
        self.params = params
        self.gens = GeneratorSet.superspace(params.zeta)
        self.family = "superpartner"

    def w(self, x, y, t, order):
        p = self.params
        xj, yj, tj = point_jets(x, y, t, order)
        return p.a * xj + p.m(yj) / p.a - 4 * p.a ** 3 * tj

    def u(self, x, y, t, order=JetOrder(3, 1, 1)) -> Jet:
        w = self.w(x, y, t, order)
        out = profile_u(self.params, w)
        if self.params.m.name != "zero":
            out = out - self.params.m(Jet.var("y", y, order))
        return out

    def k(self, x, y, t, order=JetOrder(3, 1, 1)) -> Jet:
        return profile_k(self.params, self.w(x, y, t, order))

    def phi(self, x, y, t, order=JetOrder(3, 1, 1)) -> Superfield:
        xi = self.gens.generator(self.params.zeta) * self.k(x, y, t, order)
        return Superfield.fermionic(self.gens, xi, self.u(x, y, t, order))

    __call__ = phi

    def descriptor(self):
        return {"family": self.family, "params": self.params.to_dict()}


def superpartner(params: SuperpartnerParams = None, **kw) -> Superpartner:
    return Superpartner(params if params is not None else SuperpartnerParams(**kw))


def w_points(n=100, lo=-2.0, hi=2.0, seed=0):
    s = qmc.Halton(d=1, scramble=True, seed=seed).random(n)[:, 0]
    return list(lo + (hi - lo) * s)


def _w_jet(w, n):
    return Jet.var("x", w, JetOrder(n, 0, 0))


def schroedinger_terms(p: SuperpartnerParams, w, extra=0):
    """Terms of psi_ww - (4 - 3(d1^2-d2^2)/(2 den^2)) psi with psi = k_w.

    With ``extra`` > 0 the terms are returned as jets of that order in w.
    """
    wj = _w_jet(w, 3 + extra)
    k = profile_k(p, wj)
    psi = k.deriv(1, 0, 0)
    den = _den(p, wj.truncate(JetOrder(2 + extra, 0, 0)))
    pot = 1.5 * (p.d1 ** 2 - p.d2 ** 2) * _div(psi, den * den)
    out = [psi.deriv(2, 0, 0), -4 * psi.truncate(psi.order.bump(dx=-2)),
           pot.truncate(pot.order.bump(dx=-2))]
    if extra:
        return out
    return [v.value for v in out]


def schroedinger_check(p: SuperpartnerParams, pts=None) -> ResidualReport:
    """Schroedinger residual at w points (scalars or tuples whose first entry is w)."""
    if pts is None:
        pts = w_points()
    pts = [(float(np.real(q[0] if isinstance(q, (tuple, list, np.ndarray)) else q)),)
           for q in pts]
    return _scan("schroedinger", pts, lambda q: schroedinger_terms(p, q[0]),
                 meta={"params": p.to_dict()})


def linearization_gap(p: SuperpartnerParams, pts) -> float:
    """max |xi_eq - a^2 m'(y) d/dw S(w)| with S the Schroedinger residual.

    Both sides are normalised by the term-magnitude sum of xi_eq at the point.
    """
    sp = Superpartner(p)
    gap = 0.0
    for x, y, t in pts:
        phi = sp.phi(x, y, t, JetOrder(3, 1, 1))
        terms = susy_component_terms(phi.xi, phi.u)["xi_eq"]
        lhs = sum(v.component(p.zeta) for v in terms)
        scale = sum(abs(v.component(p.zeta)) for v in terms) or 1.0
        w = complex(sp.w(x, y, t, JetOrder(0, 0, 0)).value).real
        S = sum(schroedinger_terms(p, w, extra=1), Jet.constant(0.0, JetOrder(1, 0, 0)))
        rhs = p.a ** 2 * p.m.derivative_at(y) * S.partial(1, 0, 0)
        gap = max(gap, abs(lhs - rhs) / scale)
    return gap


# -- SUSY KdV reduction --------------------------------------------------------------

def soliton_kdv_pair(kappa=1.0, beta=(0.5, 1.0), zeta="zeta"):
    """(chi, v) with v = -2 d_z log(1 + e^{kappa z - kappa^3 t}) and chi = zeta (b0 + b1 v).

    v solves the potential KdV equation v_t + v_zzz - 3 v_z^2 = 0, so chi is a
    solution of the linear odd equation whenever it is affine in v.
    """
    gens = GeneratorSet.superspace(zeta)
    zg = gens.generator(zeta)
    b0, b1 = beta

    def v(z, t):
        return -kappa * (1 + jet.tanh((kappa * z - kappa ** 3 * t) / 2))

    def chi(z, t):
        return zg * (b0 + b1 * v(z, t))
    return chi, v


def _zt(z, t, order):
    zj = Jet.var("x", z, order)
    tj = Jet.var("t", t, order)
    return zj, tj


def kdv_reduction_terms(chi, v, z, t):
    order = JetOrder(4, 0, 1)
    zj, tj = _zt(z, t, order)
    C = chi(zj, tj)
    V = v(zj, tj)
    G = C.gens
    Vg = G.scalar(V)
    Cp, Vp = C.partial, Vg.partial
    eq1 = [Vp(1, 0, 1), Vp(4, 0, 0), Vp(1, 0, 0) * Vp(2, 0, 0) * (-6),
           Cp(1, 0, 0) * Cp(3, 0, 0) * 3]
    eq2 = [Cp(0, 0, 1), Cp(3, 0, 0), Cp(1, 0, 0) * Vp(1, 0, 0) * (-3)]
    return {"eq_v": eq1, "eq_chi": eq2}


def susy_kdv_reduction_check(chi, v, pts, q: NamedFunction = IDENTITY) -> ResidualReport:
    """Reduced SUSY system at (x, y, t) points mapped to z = x + q(y).

    ``chi(z, t)`` and ``v(z, t)`` take jets and return an odd Grassmann element
    (``gens.zero()`` for the fermionic limit) and a jet. xi = sqrt(q'(y)) chi needs q' > 0 at every point.
    """
    mapped = []
    for x, y, t in pts:
        if q.derivative_at(y).real <= 0:
            raise NegativeQPrime(f"q'({y}) = {q.derivative_at(y)}")
        mapped.append((x + complex(q(y)).real, t))
    return _scan("susy_kdv_reduction", mapped, lambda p: kdv_reduction_terms(chi, v, *p),
                 meta={"q": q.to_dict()})


def lift_reduced(chi, v, q: NamedFunction = IDENTITY):
    """Phi(x, y, t) = sqrt(q'(y)) chi(z, t) + theta v(z, t) with z = x + q(y)."""
    def phi(x, y, t, order):
        xj, yj, tj = point_jets(x, y, t, order)
        qp = q.derivative_at(y)
        if qp.real <= 0:
            raise NegativeQPrime(f"q'({y}) = {qp}")
        z = xj + q(yj)
        qd = _q_prime_jet(q, yj)
        C = chi(z, tj) * jet.sqrt(qd)
        return Superfield.fermionic(C.gens, C, v(z, tj))
    return phi


def _q_prime_jet(q: NamedFunction, yj: Jet):
    """q'(y) as a jet: differentiate q on a jet one order higher in y."""
    o = yj.order
    y0 = complex(yj.value).real
    hi = q(Jet.var("y", y0, o.bump(dy=1)))
    return hi.deriv(0, 1, 0).truncate(o)
