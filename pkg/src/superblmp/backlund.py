"""Bilinear transformation system of the SUSY BLMP equation and its Baecklund step."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from . import jet
from .errors import GeneratorSetMismatch, InvariantViolation, NoConvergence, ParityMismatch
from .grassmann import GeneratorSet, GrassmannElement
from .hirota import hirota_products, super_hirota_products
from .jet import Jet, JetOrder, point_jets
from .residual import ResidualReport, _scan, lambda_coupling, sample_points

ORDER = JetOrder(3, 1, 1)
SEARCH_TOL = 1e-6


@dataclass
class BilinearPair:
    """tau and mu as callables ``(x, y, t, order) -> GrassmannElement`` over ``gens``."""
    tau: object
    mu: object
    gens: GeneratorSet

    def at(self, p, order=ORDER):
        t, m = self.tau(*p, order), self.mu(*p, order)
        for e in (t, m):
            if e.gens != self.gens:
                raise GeneratorSetMismatch(f"{e.gens} vs {self.gens}")
        return t, m

    @classmethod
    def classical(cls, f, g, gens=None):
        """Embed jet-valued f, g with zero odd parts."""
        gens = gens or GeneratorSet.superspace()
        return cls(lambda *a: gens.scalar(f(*a)), lambda *a: gens.scalar(g(*a)), gens)


@dataclass(frozen=True)
class BacklundParams:
    alpha: complex = 1.0
    beta: complex = 0.0
    gamma: GrassmannElement | None = None

    def __post_init__(self):
        g = self.gamma
        if g is not None and not g.is_zero():
            if g.require_parity() != 1:
                raise ParityMismatch("gamma must be odd")
            if not (g * g).is_zero():
                raise InvariantViolation("gamma * gamma != 0")

    def gamma_in(self, gens):
        return self.gamma if self.gamma is not None else gens.zero()


def constant_field(gens, value=1.0):
    return lambda x, y, t, order: gens.scalar(Jet.constant(value, order))


def expsum_field(gens, terms):
    """sum_k C_k exp(kappa_k x + rho_k y + omega_k t + theta s_k).

    ``terms`` holds ``(C, kappa, rho, omega, s)`` with C a constant (number or
    Grassmann element) and s an odd Grassmann constant or None.
    """
    th = gens.generator("theta")

    def f(x, y, t, order):
        xj, yj, tj = point_jets(x, y, t, order)
        out = gens.zero()
        for c, k, r, w, s in terms:
            e = jet.exp(k * xj + r * yj + w * tj)
            pref = gens.scalar(1.0) if s is None else gens.scalar(1.0) + th * s
            if isinstance(c, GrassmannElement):
                pref = c * pref
            else:
                pref = pref * c
            out = out + pref * e
        return out
    return f


def _lam_term(lam, p, order, gens):
    return lambda_coupling(lam, p, order) if lam is not None else gens.zero()


def _prod(a, b):
    return (a * b).value()


def bilinear_terms(tau, mu, p, lam=None, order=ORDER):
    """Terms of (S_y D_x - D_y D_x Lambda)(tau.mu) and (D_t + D_x^3)(tau.mu)."""
    dd = _lam_term(lam, p, order, tau.gens)
    r1 = super_hirota_products((1, 0, 0, 0, 1), tau, mu) + [-(dd * _prod(tau, mu))]
    r2 = super_hirota_products((0, 0, 1), tau, mu) + super_hirota_products((3, 0, 0), tau, mu)
    return {"bil1": r1, "bil2": r2}


def check_bilinear_system(pair: BilinearPair, lam=None, pts=None, order=ORDER) -> ResidualReport:
    """Both relations of the bilinear transformation system, per Grassmann component."""
    pts = sample_points() if pts is None else pts

    def ev(p):
        tau, mu = pair.at(p, order)
        return bilinear_terms(tau, mu, p, lam, order)
    return _scan("bilinear_system", pts, ev)


def classical_system_terms(f: Jet, g: Jet, cprime=0.0):
    """(D_y D_x - c'(y))(f.g) and (D_t + D_x^3)(f.g) on plain jets."""
    r1 = hirota_products((1, 1, 0), f, g) + [-cprime * f.value * g.value]
    r2 = hirota_products((0, 0, 1), f, g) + hirota_products((3, 0, 0), f, g)
    return {"bil1": r1, "bil2": r2}


def check_classical_system(f, g, c=None, pts=None, order=ORDER) -> ResidualReport:
    """Classical transformation with ``c`` a NamedFunction (c' enters) or None."""
    pts = sample_points() if pts is None else pts

    def ev(p):
        cp = c.derivative_at(p[1]) if c is not None else 0.0
        return classical_system_terms(f(*p, order), g(*p, order), cp)
    return _scan("classical_system", pts, ev)


def _dispersion_terms(f, g, beta):
    out = super_hirota_products((0, 0, 1), f, g) + super_hirota_products((3, 0, 0), f, g)
    out += [v * (-3 * beta) for v in super_hirota_products((2, 0, 0), f, g)]
    out += [v * (3 * beta * beta) for v in super_hirota_products((1, 0, 0), f, g)]
    return out


def proposition_terms(tau, mu, taup, mup, prm: BacklundParams):
    a, b = prm.alpha, prm.beta
    gam = prm.gamma_in(tau.gens)
    x_rel = (super_hirota_products((1, 0, 0), tau, mup)
           + [v * (-a) for v in super_hirota_products((1, 0, 0), mu, taup)]
           + [_prod(tau, mup) * (-b), _prod(taup, mu) * (a * b)])
    y_rel = (super_hirota_products((0, 0, 0, 0, 1), tau, mup)
           + [v * a for v in super_hirota_products((0, 0, 0, 0, 1), mu, taup)]
           + [-(gam * _prod(tau, mup)), -(gam * _prod(taup, mu)) * a])
    tau_rel = _dispersion_terms(tau, taup, b)
    mu_rel = _dispersion_terms(mu, mup, b)
    return {"x_rel": x_rel, "y_rel": y_rel, "tau_rel": tau_rel, "mu_rel": mu_rel}


def _total(terms, gens):
    out = gens.zero()
    for v in terms:
        out = out + v
    return out


def p_identities(tau, mu, taup, mup, p, lam=None, order=ORDER):
    """(P1 by definition, P1 rewritten without Lambda, P2) at one point."""
    G = tau.gens
    dd = _lam_term(lam, p, order, G)
    sd = lambda f, g: _total(super_hirota_products((1, 0, 0, 0, 1), f, g), G)
    kd = lambda f, g: _total(super_hirota_products((0, 0, 1), f, g)
                             + super_hirota_products((3, 0, 0), f, g), G)
    tm, tmp = _prod(tau, mu), _prod(taup, mup)
    p1 = (tmp * (sd(tau, mu) - dd * tm) - tm * (sd(taup, mup) - dd * tmp)) * 2.0
    p1_rw = (tmp * sd(tau, mu) - tm * sd(taup, mup)) * 2.0
    p2 = tmp * kd(tau, mu) + tm * kd(taup, mup)
    return p1, p1_rw, p2


@dataclass
class PropositionReport:
    relations: ResidualReport
    p_identities: ResidualReport
    p1_rewrite_gap: float
    even_leakage_y: float
    candidate_system: ResidualReport
    meta: dict = field(default_factory=dict)

    def to_dict(self):
        return {"relations": self.relations.to_dict(),
                "p_identities": self.p_identities.to_dict(),
                "p1_rewrite_gap": self.p1_rewrite_gap,
                "even_leakage_y": self.even_leakage_y,
                "candidate_system": self.candidate_system.to_dict(),
                "meta": self.meta}


def _even_part_abs(elem: GrassmannElement):
    return max((abs(c) for m, c in elem.value().terms.items()
                if not bin(m).count("1") & 1), default=0.0)


def check_proposition(seed: BilinearPair, cand: BilinearPair, prm: BacklundParams,
                      pts=None, lam=None, order=ORDER) -> PropositionReport:
    """Four relations, the P1/P2 identities and the candidate's own bilinear system.

    The y relation is graded odd: its even components must vanish exactly, which is
    audited before the odd components are measured.
    """
    if seed.gens != cand.gens:
        raise GeneratorSetMismatch("seed and candidate over different generator sets")
    pts = sample_points() if pts is None else pts
    gap = leak = 0.0

    def ev_rel(p):
        nonlocal leak
        tau, mu = seed.at(p, order)
        taup, mup = cand.at(p, order)
        terms = proposition_terms(tau, mu, taup, mup, prm)
        for v in terms["y_rel"]:
            leak = max(leak, _even_part_abs(v))
        return terms

    def ev_p(p):
        nonlocal gap
        tau, mu = seed.at(p, order)
        taup, mup = cand.at(p, order)
        p1, p1_rw, p2 = p_identities(tau, mu, taup, mup, p, lam, order)
        d = (p1 - p1_rw).value()
        scale = max(p1.max_abs(), p1_rw.max_abs(), 1.0)
        gap = max(gap, max((abs(c) for c in d.terms.values()), default=0.0) / scale)
        return {"P1": [p1], "P2": [p2]}

    rel = _scan("proposition", pts, ev_rel)
    pid = _scan("p_identities", pts, ev_p)
    cand_sys = check_bilinear_system(cand, lam, pts, order)
    return PropositionReport(rel, pid, gap, leak, cand_sys,
                             meta={"alpha": prm.alpha, "beta": prm.beta})


# -- constructive search ----------------------------------------------------------

@dataclass
class SearchResult:
    x: np.ndarray
    names: tuple
    cost: float
    candidate: BilinearPair
    params: BacklundParams
    system: ResidualReport
    converged: bool

    def as_dict(self):
        return {"unknowns": dict(zip(self.names, map(float, self.x))), "cost": self.cost,
                "converged": self.converged, "system_max_rel": self.system.max_rel}


def _residual_vector(seed, cand, prm, pts, order):
    out = []
    for p in pts:
        tau, mu = seed.at(p, order)
        taup, mup = cand.at(p, order)
        for terms in proposition_terms(tau, mu, taup, mup, prm).values():
            vals = _total(terms, tau.gens).value().terms
            for m in range(1 << len(tau.gens)):
                c = complex(vals.get(m, 0.0))
                out.extend((c.real, c.imag))
    return np.asarray(out or [0.0])


def backlund_search(seed: BilinearPair, ansatz, x0, names, pts=None, restarts=4,
                    rng_seed=0, tol=SEARCH_TOL, lam=None, raise_on_fail=True,
                    order=ORDER) -> SearchResult:
    """Least-squares fit of real unknowns of ``ansatz(x) -> (cand, BacklundParams)``.

    The four proposition relations are sampled at ``pts`` (default: 12 points in
    [-1, 1]^3) and every Grassmann component contributes its real and imaginary
    parts. Restarts perturb ``x0``; the best fit is kept.
    """
    pts = sample_points(12, box=((-1.0, 1.0),) * 3, seed=rng_seed) if pts is None else pts
    rng = np.random.default_rng(rng_seed)
    x0 = np.asarray(x0, dtype=float)

    def fun(x):
        cand, prm = ansatz(x)
        return _residual_vector(seed, cand, prm, pts, order)

    best = None
    for k in range(max(1, restarts)):
        start = x0 if k == 0 else x0 + rng.normal(scale=0.5, size=x0.shape)
        sol = least_squares(fun, start, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
        if best is None or sol.cost < best.cost:
            best = sol
        if best.cost < tol ** 2:
            break
    cand, prm = ansatz(best.x)
    rms = float(np.sqrt(2 * best.cost / max(1, best.fun.size)))
    system = check_bilinear_system(cand, lam, sample_points(), order)
    res = SearchResult(best.x, tuple(names), rms, cand, prm, system, rms <= tol)
    if not res.converged and raise_on_fail:
        raise NoConvergence(f"residual plateau {rms:.3g} > {tol:g}")
    return res


def vacuum_pair(gens):
    one = constant_field(gens)
    return BilinearPair(one, one, gens)


def soliton_ansatz(gens, kappa, rho, sigma=None):
    """tau' = 1 + e^{phi}, mu' = 1 + b e^{phi} with phi = kappa x + rho y + omega t + theta sigma.

    Unknowns (omega, beta, b, g) with gamma = g * sigma_gen when ``sigma`` names an
    odd generator; alpha = 1.
    """
    s_elem = gens.generator(sigma) if sigma else None

    def ansatz(x):
        omega, beta, b, g = x
        taup = expsum_field(gens, [(1.0, 0, 0, 0, None), (1.0, kappa, rho, omega, s_elem)])
        mup = expsum_field(gens, [(1.0, 0, 0, 0, None), (b, kappa, rho, omega, s_elem)])
        gamma = s_elem * g if s_elem is not None else None
        return BilinearPair(taup, mup, gens), BacklundParams(1.0, beta, gamma)
    return ansatz, ("omega", "beta", "b", "gamma")


def two_soliton_ansatz(gens, k1, r1, k2, r2):
    """Classical step from the pair (1 + e^{phi1}, 1 - e^{phi1}) with alpha = 1, gamma = 0.

    tau' = 1 + p1 e^{phi1} + e^{phi2} + p3 e^{phi1+phi2},
    mu'  = 1 + q1 e^{phi1} + q2 e^{phi2} + q3 e^{phi1+phi2};
    unknowns (omega2, beta, p1, p3, q1, q2, q3).
    """
    w1 = -k1 ** 3

    def ansatz(x):
        w2, beta, p1, p3, q1, q2, q3 = x
        taup = expsum_field(gens, [(1.0, 0, 0, 0, None), (p1, k1, r1, w1, None),
                                   (1.0, k2, r2, w2, None),
                                   (p3, k1 + k2, r1 + r2, w1 + w2, None)])
        mup = expsum_field(gens, [(1.0, 0, 0, 0, None), (q1, k1, r1, w1, None),
                                  (q2, k2, r2, w2, None),
                                  (q3, k1 + k2, r1 + r2, w1 + w2, None)])
        return BilinearPair(taup, mup, gens), BacklundParams(1.0, beta, None)
    return ansatz, ("omega2", "beta", "p1", "p3", "q1", "q2", "q3")


def soliton_pair(gens, kappa, rho, sigma=None):
    """(1 + e^{phi}, 1 - e^{phi}) with omega = -kappa^3: the vacuum step's output."""
    s_elem = gens.generator(sigma) if sigma else None
    w = -kappa ** 3
    return BilinearPair(expsum_field(gens, [(1.0, 0, 0, 0, None), (1.0, kappa, rho, w, s_elem)]),
                        expsum_field(gens, [(1.0, 0, 0, 0, None), (-1.0, kappa, rho, w, s_elem)]),
                        gens)
