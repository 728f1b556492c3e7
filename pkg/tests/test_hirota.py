import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from superblmp import jet
from superblmp.grassmann import GeneratorSet, cov_derivative
from superblmp.hirota import hirota_apply, super_hirota_apply
from superblmp.jet import Jet, JetOrder, point_jets

from _oracles import random_even_superfield, random_jet

reals = st.floats(-1, 1, allow_nan=False)


@settings(max_examples=30, deadline=None)
@given(reals, reals, reals, reals, st.integers(0, 4))
def test_exponential_oracle(a, b, x0, y0, n):
    # D_x^n (e^{ax} . e^{bx}) = (a - b)^n e^{(a+b)x}
    x, y, _ = point_jets(x0, y0, 0.0, JetOrder(4, 1, 1))
    f, g = jet.exp(a * x + y), jet.exp(b * x - y)
    got = hirota_apply((n, 0, 0), f, g)
    ref = (a - b) ** n * np.exp((a + b) * x0)
    assert got == pytest.approx(ref, rel=1e-11, abs=1e-12)


def test_odd_order_self_product_vanishes():
    rng = np.random.default_rng(4)
    order = JetOrder(5, 3, 3)
    for _ in range(10):
        f = random_jet(rng, order, body=1.0)
        for lx, ly, lt in itertools.product(range(4), range(3), range(2)):
            if (lx + ly + lt) & 1:
                assert hirota_apply((lx, ly, lt), f, f) == 0


def test_odd_order_super_self_product_vanishes():
    rng = np.random.default_rng(5)
    G = GeneratorSet.superspace("z1", "z2")
    order = JetOrder(4, 3, 2)
    for _ in range(3):
        g = random_even_superfield(rng, G, order)
        for o in itertools.product(range(3), range(2), range(2), range(2), range(2)):
            if sum(o) & 1:
                assert super_hirota_apply(o, g, g).max_abs() < 1e-12, o


def test_antisymmetry_for_odd_orders():
    rng = np.random.default_rng(6)
    order = JetOrder(4, 2, 2)
    f, g = random_jet(rng, order, 1.0), random_jet(rng, order, 1.0)
    for o in [(1, 0, 0), (3, 0, 0), (1, 1, 1), (0, 0, 1)]:
        assert hirota_apply(o, f, g) == pytest.approx(-hirota_apply(o, g, f), abs=1e-13)


def test_classical_definition_by_leibniz():
    rng = np.random.default_rng(7)
    order = JetOrder(4, 2, 2)
    f, g = random_jet(rng, order, 1.0), random_jet(rng, order, 1.0)
    # D_x^2 D_y (f.g) by explicit expansion
    ref = 0
    for i in range(3):
        for j in range(2):
            sgn = (-1) ** ((2 - i) + (1 - j))
            ref += sgn * comb(2, i) * f.partial(i, j, 0) * g.partial(2 - i, 1 - j, 0)
    assert hirota_apply((2, 1, 0), f, g) == pytest.approx(ref, rel=1e-13)


def test_super_operator_reduces_to_classical_on_theta_free_fields():
    # S_y D_x (f.g) = theta D_y D_x (f.g) when f, g carry no odd parts
    rng = np.random.default_rng(8)
    G = GeneratorSet.superspace()
    order = JetOrder(3, 2, 2)
    f, g = random_jet(rng, order, 1.0), random_jet(rng, order, 1.0)
    s = super_hirota_apply((1, 0, 0, 0, 1), G.scalar(f), G.scalar(g))
    assert s.component("theta") == pytest.approx(hirota_apply((1, 1, 0), f, g), rel=1e-13)
    assert s.body() == 0


def test_super_factor_definition():
    # S_y (f.g) = (D_y f) g - f (D_y g) for even f
    rng = np.random.default_rng(9)
    G = GeneratorSet.superspace("z")
    order = JetOrder(2, 2, 1)
    f = random_even_superfield(rng, G, order)
    g = random_even_superfield(rng, G, order)
    ref = (cov_derivative(f, "y") * g - f * cov_derivative(g, "y")).value()
    got = super_hirota_apply((0, 0, 0, 0, 1), f, g)
    assert (got - ref).max_abs() < 1e-13
