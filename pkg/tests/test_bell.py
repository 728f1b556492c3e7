import numpy as np
import pytest

from superblmp.bell import (BellPolynomial, DerivSymbol, bell_binary, bell_evaluate,
                            bell_generate, bell_p_polynomial, derive, label, normalize,
                            parse_orders)
from superblmp.errors import MissingSymbol, OrderCapExceeded, ParityMismatch
from superblmp.grassmann import GeneratorSet
from superblmp.jet import JetOrder

from _oracles import bell_identity_errors, classical_bell_coefficients, orders_up_to

G = GeneratorSet.superspace("z1", "z2")
ORDER = JetOrder(4, 4, 4)


def test_displayed_examples_render_term_for_term():
    assert bell_generate(3).render() == "A_xxx + 3 A_x A_xx + A_x^3"
    assert bell_p_polynomial(3, 0, 0, 0, 1).render() == "Dy(w_xxx) + 3 Dy(w_x) w_xx"
    assert bell_p_polynomial(0, 0, 1, 0, 1).render() == "Dy(w_t)"
    assert bell_p_polynomial(2).render() == "w_xx"


def test_trivial_cases():
    assert bell_generate().render() == "1"
    assert bell_p_polynomial(1).render() == "0"


def test_binary_form_of_y3():
    assert bell_binary(bell_generate(3)).render() == "v_xxx + 3 v_x w_xx + v_x^3"


@pytest.mark.parametrize("n", range(1, 6))
def test_pure_x_polynomials_match_classical_complete_bell(n):
    ref = classical_bell_coefficients(n)
    got = {}
    for mono, c in bell_generate(n).terms.items():
        got[tuple(sorted(s.sx for s in mono))] = c
    assert got == ref


def test_p_polynomials_vanish_for_odd_total_order():
    for o in orders_up_to(5):
        if sum(o) & 1:
            assert bell_p_polynomial(*o).is_zero(), o


def test_bell_identities_on_random_superfields():
    rng = np.random.default_rng(11)
    orders = list(orders_up_to(4))
    for _ in range(3):
        errs = bell_identity_errors(rng, G, ORDER, orders)
        assert max(errs) <= 1e-9, errs


def test_evaluate_errors():
    p = bell_generate(2)
    with pytest.raises(MissingSymbol):
        bell_evaluate(p, {})
    odd = bell_generate(0, 0, 0, 0, 1)
    even_val = G.scalar(1.0)
    with pytest.raises(ParityMismatch):
        bell_evaluate(odd, {DerivSymbol("A", 0, 0, 0, 0, 1): even_val})


def test_order_cap():
    with pytest.raises(OrderCapExceeded):
        bell_generate(7)
    with pytest.raises(ValueError):
        bell_generate(0, 0, 0, 2, 0)


def test_normalize_sign_and_nilpotency():
    a = DerivSymbol("A", 0, 0, 0, 1, 0)
    b = DerivSymbol("A", 0, 0, 0, 0, 1)
    s1, m1 = normalize([a, b])
    s2, m2 = normalize([b, a])
    assert m1 == m2 and s1 == -s2
    assert normalize([a, a])[0] == 0


def test_derive_graded_leibniz_on_odd_times_even():
    a = DerivSymbol("A", 0, 0, 0, 1, 0)
    c = DerivSymbol("A", 1, 0, 0, 0, 0)
    p = BellPolynomial.from_monomials([(1, [a, c])])
    # D_y(a c) = D_y(a) c - a D_y(c) for odd a, with D_y D_x = d_x + d_y - D_x D_y
    out = derive(p, "Dy")
    ax, ay = DerivSymbol("A", 1), DerivSymbol("A", 0, 1)
    dxdy = DerivSymbol("A", 0, 0, 0, 1, 1)
    dyc = DerivSymbol("A", 1, 0, 0, 0, 1)
    ref = BellPolynomial.from_monomials([(1, [ax, c]), (1, [ay, c]), (-1, [dxdy, c]),
                                         (-1, [a, dyc])])
    assert out == ref


def test_parse_and_label():
    assert parse_orders("3x,Dy") == (3, 0, 0, 0, 1)
    assert parse_orders("0") == (0, 0, 0, 0, 0)
    assert parse_orders("2x+t") == (2, 0, 1, 0, 0)
    assert label("Y", 3, 0, 0, 0, 0) == "Y[3x;(0,0)]"
    assert label("P", 0, 0, 0, 0, 0) == "P[0;(0,0)]"
    with pytest.raises(ValueError):
        parse_orders("3q")
