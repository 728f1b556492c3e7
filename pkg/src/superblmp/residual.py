"""Substitution checks: evaluate governing equations on candidate solutions.

Each check evaluates a list of *terms* per sample point; the residual is their
sum and the relative residual divides by the sum of term magnitudes. For
Grassmann-valued equations this is done per basis monomial ("component").
Points where a denominator collapses are skipped and counted.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.stats import qmc

from .errors import DivisionNearSingularity
from .grassmann import GrassmannElement, cov_derivative
from .hirota import hirota_products, super_hirota_products
from .jet import Jet, JetOrder, point_jets

TERM_FLOOR = 1e-14
BLMP_ORDER = JetOrder(3, 1, 1)
DEFAULT_BOX = ((-3.0, 3.0),) * 3
TOL_CLOSED = 1e-9
TOL_GRASSMANN = 1e-8


def sample_points(n=100, box=DEFAULT_BOX, seed=0):
    """Fixed-seed scrambled Halton points in a box (one tuple per point)."""
    box = [tuple(map(float, b)) for b in box]
    sampler = qmc.Halton(d=len(box), scramble=True, seed=seed)
    u = sampler.random(n)
    lo = np.array([b[0] for b in box])
    hi = np.array([b[1] for b in box])
    return [tuple(float(v) for v in row) for row in qmc.scale(u, lo, hi)] if n else []


@dataclass
class ResidualReport:
    equation: str
    points: list = field(default_factory=list)
    max_abs: float = 0.0
    max_rel: float = 0.0
    skipped: int = 0
    components: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    @property
    def evaluated(self):
        return len(self.points) - self.skipped

    def passed(self, tol, min_fraction=0.0):
        ok = self.max_rel <= tol
        if min_fraction and self.points:
            ok = ok and self.evaluated >= min_fraction * len(self.points)
        return ok

    def to_dict(self):
        d = asdict(self)
        d["points"] = [list(p) for p in self.points]
        return d

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), default=_json_default, **kw)


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(type(o))


def _components(terms):
    """Map component label -> list of scalar terms."""
    out = {}
    for term in terms:
        if isinstance(term, GrassmannElement):
            for lab, v in term.as_dict().items():
                out.setdefault(lab, []).append(v)
        else:
            out.setdefault("1", []).append(complex(term))
    return out


def _scan(equation, pts, evaluate, meta=None, prefix_terms=False):
    """Run ``evaluate(point) -> {name: [terms]}`` (or a term list) over points."""
    rep = ResidualReport(equation, points=list(pts), meta=dict(meta or {}))
    for p in rep.points:
        try:
            groups = evaluate(p)
        except DivisionNearSingularity:
            rep.skipped += 1
            continue
        if not isinstance(groups, dict):
            groups = {"": groups}
        for gname, terms in groups.items():
            for lab, vals in _components(terms).items():
                key = f"{gname}[{lab}]" if gname else lab
                res = abs(sum(vals))
                scale = sum(abs(v) for v in vals)
                rel = res / scale if scale > TERM_FLOOR else 0.0
                if not math.isfinite(res) or not math.isfinite(scale):
                    rel = res = math.inf
                comp = rep.components.setdefault(key, {"max_abs": 0.0, "max_rel": 0.0})
                comp["max_abs"] = max(comp["max_abs"], res)
                comp["max_rel"] = max(comp["max_rel"], rel)
                rep.max_abs = max(rep.max_abs, res)
                rep.max_rel = max(rep.max_rel, rel)
    return rep


def _u_jet(u, p, order):
    if hasattr(u, "u"):
        return u.u(*p, order)
    return u(*p, order)


def blmp_terms(uj: Jet):
    d = uj.partial
    return [d(0, 1, 1), d(3, 1, 0),
            -3 * d(1, 0, 0) * d(1, 1, 0),
            -3 * d(0, 1, 0) * d(2, 0, 0)]


def residual_blmp(u, pts, order=BLMP_ORDER) -> ResidualReport:
    """u_yt + u_xxxy - 3 u_x u_xy - 3 u_y u_xx at each point."""
    meta = {"family": getattr(u, "family", None)}
    return _scan("blmp", pts, lambda p: blmp_terms(_u_jet(u, p, order)), meta)


def reduced_profile(field):
    """p(z, t) of a z = x + q(y) field as a callable (z, t, order) -> jet in x."""
    q0 = field.reduction.q(0.0) if field.reduction is not None else 0.0

    def p(z, t, order):
        return field.u(z - q0, 0.0, t, order)

    return p


def residual_kdv_reduction(p, pts, equation="kdv_reduction") -> ResidualReport:
    """p_zt + p_zzzz - 6 p_z p_zz (``equation='kdv'``: h_t + h_zzz - 6 h h_z with h = p_z).

    ``p`` maps ``(z, t, order)`` to a jet whose x-direction is z; points are (z, t).
    """
    if hasattr(p, "u"):
        p = reduced_profile(p)

    def ev(pt):
        z, t = pt[0], pt[-1]
        pj = p(z, t, JetOrder(4, 0, 1))
        d = pj.partial
        # identical term lists: h = p_z turns one equation into the other
        return [d(1, 0, 1), d(4, 0, 0), -6 * d(1, 0, 0) * d(2, 0, 0)]

    return _scan(equation, pts, ev)


def _tau_jet(tau, p, order):
    if hasattr(tau, "tau"):
        return tau.tau(*p, order)
    return tau(*p, order)


def lambda_coupling(lam, p, order):
    """D_y D_x Lambda at a point as a scalar-coefficient Grassmann element."""
    e = lam(*p, order)
    return cov_derivative(cov_derivative(e, "x"), "y").value()


def residual_bilinear(form, tau, aux=None, pts=(), order=None) -> ResidualReport:
    """Evaluate one of the bilinear forms on a tau function or super tau.

    form: ``kdv_bilinear`` D_z(D_t + D_z^3)(f.f); ``blmp_bilinear``
    (D_y(D_t + D_x^3) + 3 m'(y) D_x^2)(f.f) with ``aux`` = m (NamedFunction);
    ``super_bilinear`` S_y(D_t + D_x^3)(g.g); ``super_bilinear_lambda`` adds
    -3 (D_y D_x Lambda) D_x^2 (g.g) with ``aux`` = Lambda(x, y, t, order).
    """
    if form == "kdv_bilinear":
        order = order or JetOrder(4, 0, 1)

        def ev(p):
            f = _tau_jet(tau, p, order)
            return hirota_products((1, 0, 1), f, f) + hirota_products((4, 0, 0), f, f)
    elif form == "blmp_bilinear":
        order = order or JetOrder(3, 1, 1)
        m = aux if aux is not None else getattr(tau, "m", None)

        def ev(p):
            f = _tau_jet(tau, p, order)
            mp = m.derivative_at(p[1]) if m is not None else 0.0
            terms = hirota_products((0, 1, 1), f, f) + hirota_products((3, 1, 0), f, f)
            return terms + [3 * mp * v for v in hirota_products((2, 0, 0), f, f)]
    elif form in ("super_bilinear", "super_bilinear_lambda"):
        order = order or JetOrder(3, 1, 1)

        def ev(p):
            g = tau(*p, order)
            terms = (super_hirota_products((0, 0, 1, 0, 1), g, g)
                     + super_hirota_products((3, 0, 0, 0, 1), g, g))
            if form == "super_bilinear_lambda" and aux is not None:
                dd = lambda_coupling(aux, p, order)
                terms += [dd * v * (-3) for v in super_hirota_products((2, 0, 0), g, g)]
            return terms
    else:
        raise ValueError(f"unknown bilinear form {form!r}")
    meta = {"family": getattr(tau, "family", None)}
    return _scan(form, pts, ev, meta)


def susy_component_terms(xi: GrassmannElement, u: GrassmannElement):
    """Terms of both component equations from theta-free xi, u with jet coefficients."""
    U, X = u.partial, xi.partial
    u_eq = [U(0, 1, 1), U(3, 1, 0), U(2, 0, 0) * U(0, 1, 0) * (-3),
            U(1, 0, 0) * U(1, 1, 0) * (-3), X(1, 0, 0) * X(3, 0, 0) * 3]
    xi_eq = [X(0, 1, 1), X(3, 1, 0), U(1, 1, 0) * X(1, 0, 0) * (-3),
            U(1, 0, 0) * X(1, 1, 0) * (-3)]
    return {"u_eq": u_eq, "xi_eq": xi_eq}


def residual_susy_components(phi, pts, order=BLMP_ORDER) -> ResidualReport:
    """Both component equations of the SUSY BLMP equation.

    ``phi(x, y, t, order)`` returns a Superfield (odd) or a ``(xi, u)`` pair of
    theta-free Grassmann elements with jet coefficients.
    """
    def ev(p):
        v = phi(*p, order)
        if hasattr(v, "xi"):
            xi, u = v.xi, v.u
        else:
            xi, u = v
        return susy_component_terms(xi, u)

    return _scan("susy_components", pts, ev)
