import cmath

import numpy as np
import pytest

from superblmp import jet
from superblmp.errors import DescriptorError, InvariantViolation, NegativeQPrime
from superblmp.jet import Jet, JetOrder, point_jets
from superblmp.library import NamedFunction
from superblmp.residual import residual_bilinear, residual_susy_components, sample_points
from superblmp.susy import (SuperSolitonParams, SuperpartnerParams, dispersion_obstruction,
                            dispersion_polynomials, k_special, kdv_reduction_terms, lift_reduced,
                            linearization_gap, profile_k, profile_u, schroedinger_check,
                            schroedinger_terms, soliton_kdv_pair, super_soliton, superpartner,
                            susy_kdv_reduction_check, theta_lambda, u_special, w_points)

PTS = sample_points(100)


# -- super solitons -------------------------------------------------------------------

@pytest.mark.parametrize("kappa,rho", [(0.8, 1.3), (-1.1, 0.4), (0.5, -2.0)])
def test_one_super_soliton_solves_super_bilinear_form(kappa, rho):
    s = super_soliton(1, kappa=(kappa,), rho=(rho,), zeta=("z1",))
    rep = residual_bilinear("super_bilinear", s, pts=PTS)
    assert rep.max_rel <= 1e-10 and rep.skipped == 0


def test_two_super_soliton_every_component_vanishes():
    s = super_soliton(2, kappa=(0.7, 1.3), rho=(0.5, 2.0))
    rep = residual_bilinear("super_bilinear", s, pts=PTS)
    # the zeta1 zeta2 sector is present and vanishes on its own: no fermionic constraint
    assert "theta*zeta1*zeta2" in rep.components
    for lab, c in rep.components.items():
        assert c["max_rel"] <= 1e-9, lab


def test_a12_displayed_example():
    p = SuperSolitonParams(kappa=(1, 2), rho=(1, 3))
    assert p.A12 == pytest.approx(1 / 6, rel=1e-15)
    assert p.alpha(0, 1) == pytest.approx(-2.0)


def test_vanishing_odd_generators_give_classical_tau():
    k, r = (0.7, 1.3), (0.5, 2.0)
    s = super_soliton(2, kappa=k, rho=r)
    A = SuperSolitonParams(kappa=k, rho=r).A12
    for x, y, t in PTS[:10]:
        g = s.g(x, y, t, JetOrder(0, 0, 0))
        e = [cmath.exp(k[i] * x + r[i] * y - k[i] ** 3 * t) for i in range(2)]
        assert complex(g.body().value) == pytest.approx(1 + e[0] + e[1] + A * e[0] * e[1], rel=1e-13)


def test_dispersion_is_necessary():
    p = SuperSolitonParams(kappa=(0.8,), rho=(1.3,), omega=(-0.8 ** 3 + 0.1,), zeta=("z1",),
                           off_shell=True)
    rep = residual_bilinear("super_bilinear", super_soliton(1, p), pts=PTS)
    assert rep.max_rel > 1e-3


def test_parameter_validation():
    with pytest.raises(InvariantViolation):
        SuperSolitonParams(kappa=(1.0,), rho=(1.0,), omega=(0.5,), zeta=("z",))
    with pytest.raises(InvariantViolation):
        SuperSolitonParams(kappa=(1.0, 2.0), rho=(1.0, 1.0))
    with pytest.raises(InvariantViolation):
        SuperSolitonParams(kappa=(1.0, 2.0), rho=(1.0, -1.0))
    with pytest.raises(InvariantViolation):
        SuperSolitonParams(kappa=(1.0, -1.0), rho=(1.0, 2.0))
    with pytest.raises(InvariantViolation):
        SuperSolitonParams(kappa=(1.0, 2.0), rho=(1.0, 2.0), zeta=("z", "z"))
    with pytest.raises(InvariantViolation):
        super_soliton(1, SuperSolitonParams(kappa=(1.0, 2.0), rho=(1.0, 2.0)))


def test_params_json_roundtrip():
    p = SuperSolitonParams(kappa=(0.7, 1.3j), rho=(0.5, 2.0))
    assert SuperSolitonParams.from_dict(p.to_dict()) == p
    with pytest.raises(DescriptorError):
        SuperSolitonParams.from_dict({"rho": [1]})
    q = SuperpartnerParams(d1=2, d2=1, beta1=0.3, m=NamedFunction("sin", 0.7))
    assert SuperpartnerParams.from_dict(q.to_dict()) == q


def test_reconstructed_field_solves_component_equations():
    for s in (super_soliton(1, kappa=(0.8,), rho=(1.3,), zeta=("z1",)),
              super_soliton(2, kappa=(0.7, 1.3), rho=(0.5, 2.0))):
        rep = residual_susy_components(s.phi, PTS)
        assert rep.max_rel <= 1e-9 and rep.skipped == 0


def test_scaled_tau_matches_direct_tau():
    s = super_soliton(2, kappa=(0.7, 1.3), rho=(0.5, 2.0))
    order = JetOrder(2, 1, 1)
    for p in sample_points(10, box=((-1, 1),) * 3):
        ghat, p0 = s.g_scaled(*p, order)
        g = s.g(*p, order)
        diff = g - ghat * jet.exp(p0)
        assert diff.max_abs() <= 1e-12 * g.max_abs()


def test_lambda_modified_form():
    # Lambda = theta c(y): the modified bilinear form picks up -3 c'(y) D_x^2 (g.g)
    s = super_soliton(1, kappa=(0.8,), rho=(1.3,), zeta=("z1",))
    lam = theta_lambda(NamedFunction("identity"), s.gens)
    plain = residual_bilinear("super_bilinear_lambda", s, aux=None, pts=PTS[:20])
    modified = residual_bilinear("super_bilinear_lambda", s, aux=lam, pts=PTS[:20])
    assert plain.max_rel <= 1e-10
    assert modified.max_rel > 1e-3


def test_c_prime_obstruction():
    # no common root of both dispersion conditions with kappa, rho away from zero
    assert dispersion_obstruction(1.0) > 1e-3
    q1, q2 = dispersion_polynomials(1.0, 2.0, -1.0, 0.0)
    assert q1 == 0 and q2 == 0


# -- superpartners -----------------------------------------------------------------------

def _params(d, rng, m=NamedFunction("sin", 0.7)):
    b = rng.normal(size=3)
    return SuperpartnerParams(d1=d[0], d2=d[1], a=0.9, alpha=0.2, beta1=b[0], beta2=b[1],
                              beta3=b[2], m=m)


@pytest.mark.parametrize("d", [(1, 0), (0, 1)])
def test_special_cases_match_displayed_forms(d):
    rng = np.random.default_rng(2)
    p = _params(d, rng)
    for w in (0.3, -1.2, 1.7):
        wj = Jet.var("x", w, JetOrder(2, 0, 0))
        assert np.allclose(profile_k(p, wj).coeffs, k_special(d, p, wj).coeffs, rtol=1e-12, atol=1e-11)
        assert np.allclose(profile_u(p, wj).coeffs, u_special(d, p, wj).coeffs, rtol=1e-12, atol=1e-12)


def test_superpartner_field_shift_and_generator():
    p = SuperpartnerParams(d1=1, d2=0, a=1.3, alpha=0.0, m=NamedFunction("sin", 0.5))
    sp = superpartner(p)
    x, y, t = 0.2, 0.7, -0.1
    w = 1.3 * x + np.sin(0.5 * y) / 1.3 - 4 * 1.3 ** 3 * t
    assert complex(sp.u(x, y, t, (0, 0, 0)).value) == pytest.approx(
        -1.3 * np.tanh(w / 2) - np.sin(0.5 * y), rel=1e-13)
    phi = sp.phi(x, y, t, JetOrder(0, 0, 0))
    assert phi.parity == 1
    assert set(phi.xi.as_dict()) <= {"zeta"}


@pytest.mark.parametrize("d", [(1, 0), (0, 1), (2, 1)])
def test_schroedinger_and_components(d):
    rng = np.random.default_rng(sum(d))
    p = _params(d, rng)
    assert schroedinger_check(p).max_rel <= 1e-8
    rep = residual_susy_components(superpartner(p).phi, PTS)
    assert rep.max_rel <= 1e-8
    assert rep.evaluated >= 95


def test_poeschl_teller_potential_for_kink_case():
    p = SuperpartnerParams(d1=1, d2=0, beta1=0.4, beta2=-0.3)
    for w in (0.0, 0.8, -1.5):
        wj = Jet.var("x", w, JetOrder(3, 0, 0))
        psi = profile_k(p, wj).deriv(1, 0, 0)
        pot = 4 - 1.5 / np.cosh(w / 2) ** 2
        res = psi.partial(2, 0, 0) - pot * psi.value
        assert abs(res) <= 1e-9 * max(1.0, abs(psi.partial(2, 0, 0)))


def test_free_equation_when_d1_squared_equals_d2_squared():
    p = SuperpartnerParams(d1=1, d2=1, beta1=0.5, beta2=0.2, beta3=0.1)
    for w in w_points(10):
        terms = schroedinger_terms(p, w)
        assert terms[2] == 0
    assert schroedinger_check(p).max_abs == 0


def test_constant_k_gives_trivial_psi():
    p = SuperpartnerParams(d1=2, d2=1, beta1=0.0, beta2=0.0, beta3=1.0)
    assert schroedinger_check(p).max_abs <= 1e-15


def test_linearization_matches_schroedinger():
    rng = np.random.default_rng(4)
    for d in [(1, 0), (2, 1)]:
        p = _params(d, rng)
        assert linearization_gap(p, PTS[:30]) <= 1e-9
    # with constant m the odd equation is satisfied identically
    p = _params((2, 1), rng, m=NamedFunction("zero"))
    rep = residual_susy_components(superpartner(p).phi, PTS[:20])
    assert all(c["max_abs"] <= 1e-12 for k, c in rep.components.items() if k.startswith("xi_eq"))


def test_superpartner_errors():
    with pytest.raises(InvariantViolation):
        SuperpartnerParams(d1=0, d2=0)
    with pytest.raises(InvariantViolation):
        SuperpartnerParams(a=0)
    with pytest.raises(ValueError):
        k_special((2, 1), SuperpartnerParams(), 0.1)


# -- SUSY KdV reduction -----------------------------------------------------------------

def test_fermionic_limit_of_reduction():
    chi0, _ = soliton_kdv_pair()
    zero = lambda z, t: chi0(z, t) * 0.0

    def vz(z, t):
        return -0.9 * (1 + jet.tanh((0.9 * z - 0.9 ** 3 * t) / 2))
    rep = susy_kdv_reduction_check(zero, vz, PTS)
    assert rep.components["eq_v[1]"]["max_rel"] <= 1e-9
    assert all(c["max_abs"] == 0 for k, c in rep.components.items() if k.startswith("eq_chi"))


def test_soliton_pair_passes_and_lifts():
    chi, v = soliton_kdv_pair(kappa=1.1, beta=(0.5, -1.0))
    assert susy_kdv_reduction_check(chi, v, PTS).max_rel <= 1e-9
    for q in (NamedFunction("identity"), NamedFunction("exp", 0.5),
              NamedFunction("poly", coeffs=(0.0, 1.0, 0.2))):
        box = [p for p in PTS if q.derivative_at(p[1]).real > 0]
        lifted = residual_susy_components(lift_reduced(chi, v, q), box)
        assert lifted.max_rel <= 1e-9, q
        assert susy_kdv_reduction_check(chi, v, box, q).max_rel <= 1e-9


def test_identity_q_matches_components_directly():
    chi, v = soliton_kdv_pair()
    phi = lift_reduced(chi, v)
    x, y, t = 0.3, 0.5, 0.2
    sf = phi(x, y, t, JetOrder(0, 0, 0))
    z, _, tj = point_jets(x + y, 0.0, t, JetOrder(0, 0, 0))
    assert complex(sf.u.body().value) == complex(v(z, tj).value)
    ref = chi(z, tj)
    assert abs(sf.xi.component("zeta").value - ref.component("zeta").value) <= 1e-15


def test_negative_q_prime_is_rejected():
    chi, v = soliton_kdv_pair()
    q = NamedFunction("sin", 1.0)
    with pytest.raises(NegativeQPrime):
        susy_kdv_reduction_check(chi, v, [(0.0, 3.0, 0.0)], q)
    with pytest.raises(NegativeQPrime):
        lift_reduced(chi, v, q)(0.0, 3.0, 0.0, JetOrder(1, 1, 1))


def test_reduction_terms_are_grouped():
    chi, v = soliton_kdv_pair()
    out = kdv_reduction_terms(chi, v, 0.1, 0.2)
    assert set(out) == {"eq_v", "eq_chi"}
    assert len(out["eq_v"]) == 4 and len(out["eq_chi"]) == 3
