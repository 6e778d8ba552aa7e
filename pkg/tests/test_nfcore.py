import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from eiscong import presets
from eiscong.linalg import hnf
from eiscong.nfcore import (CMQuadExt, IdealLattice, element_valuation,
                            enumerate_totally_positive,
                            factor_rational_prime, ideal_valuation, is_unit,
                            unit_quotient)

Z9 = presets.field("zeta9_plus").order
S5 = presets.field("sqrt5").order

coords3 = st.lists(st.integers(-30, 30), min_size=3, max_size=3)
coords2 = st.lists(st.integers(-30, 30), min_size=2, max_size=2)


@settings(max_examples=100, deadline=None)
@given(coords3, coords3)
def test_norm_multiplicative_trace_additive(u, v):
    x, y = Z9.el(u), Z9.el(v)
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x + y).trace() == x.trace() + y.trace()


@settings(max_examples=100, deadline=None)
@given(coords2, coords2)
def test_norm_trace_quadratic(u, v):
    x, y = S5.el(u), S5.el(v)
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x + y).trace() == x.trace() + y.trace()


def test_field_constants():
    assert Z9.n == 3
    assert Z9.disc == 81
    assert S5.disc == 5
    c = Z9.gen()
    # c = zeta9 + zeta9^-1 satisfies x^3 - 3x + 1
    assert (c ** 3 - c * 3 + Z9.one()).is_zero()


def test_inverse_and_division():
    x = Z9.el([2, 1, 0])
    y = x / x
    assert y == Z9.one()
    with pytest.raises(ZeroDivisionError):
        Z9.one() / Z9.zero()


@settings(max_examples=60, deadline=None)
@given(st.lists(coords3, min_size=3, max_size=5))
def test_hnf_idempotent(rows):
    H = hnf(rows, 3)
    assert hnf(H, 3) == H


@settings(max_examples=40, deadline=None)
@given(coords3)
def test_principal_ideal_norm(u):
    x = Z9.el(u)
    if x.is_zero():
        return
    assert IdealLattice.principal(x).norm() == abs(x.norm())


def test_ideal_arithmetic():
    o = IdealLattice.unit_ideal(Z9)
    three = IdealLattice.from_integer(Z9, 3)
    assert three.norm() == 27
    assert three.mul(three) == IdealLattice.from_integer(Z9, 9)
    assert three.pow(0) == o
    assert three.pow(-1).mul(three) == o
    assert o.contains_lattice(three)
    assert not three.contains_lattice(o)


def test_ideal_hnf_canonical():
    # the same lattice from different spanning sets canonicalizes equally
    x = Z9.el([1, 2, 0])
    a = IdealLattice.principal(x)
    b = IdealLattice.from_elements(Z9, [x, x * Z9.el([3, 1, 1])])
    assert a == b
    assert hash(a) == hash(b)


def test_prime_factorization_shapes():
    # 3 is totally ramified in the degree-9 cubic subfield
    ps = factor_rational_prime(Z9, 3)
    assert len(ps) == 1 and ps[0].e == 3 and ps[0].f == 1
    prod = ps[0].ideal.pow(3)
    assert prod == IdealLattice.from_integer(Z9, 3)
    # 2 stays inert, 17 splits completely
    assert [(P.e, P.f) for P in factor_rational_prime(Z9, 2)] == [(1, 3)]
    ps17 = factor_rational_prime(Z9, 17)
    assert len(ps17) == 3 and all(P.f == 1 for P in ps17)


def test_ideal_valuation():
    lam = factor_rational_prime(Z9, 3)[0]
    assert ideal_valuation(IdealLattice.from_integer(Z9, 3), lam) == 3
    assert ideal_valuation(IdealLattice.from_integer(Z9, 9), lam) == 6
    assert element_valuation(Z9.from_int(3), lam) == 3


def test_unit_quotient():
    u = presets.field("zeta9_plus").units.gens[0]
    x = Z9.el([1, 1, 0])
    assert is_unit(u)
    q = unit_quotient(x * u, x)
    assert q == u
    assert unit_quotient(x, x + Z9.one()) is None


@pytest.mark.parametrize("b1,b2", [(4, 7), (7, 11), (3, 12)])
def test_enumerate_monotone(b1, b2):
    o = IdealLattice.unit_ideal(Z9)
    small = {z.canonical_key() for z in enumerate_totally_positive(o, b1)}
    big = {z.canonical_key() for z in enumerate_totally_positive(o, b2)}
    assert small <= big


def test_enumerate_exact_count_quadratic():
    # totally positive a+b*w, w=(1+sqrt5)/2, trace a*2+b <= 6: direct count
    o = IdealLattice.unit_ideal(S5)
    got = {tuple(z.coords) for z in enumerate_totally_positive(o, 6)}
    want = set()
    for a in range(-20, 21):
        for b in range(-20, 21):
            x = S5.el([a, b])
            if x.is_totally_positive() and x.trace() <= 6:
                want.add((a, b))
    assert got == want


def test_signs_certified():
    w = S5.gen()
    assert tuple(S5.signs(w.coords)) in ((1, -1), (-1, 1))
    assert (w * w).is_totally_positive()
    assert not (-w * w).is_totally_positive()


def test_cm_extension_basics():
    cm = CMQuadExt(Z9, -11)
    th = cm.omega()
    assert th.conj() + th == cm.coerce(1)
    z = cm.coerce(Z9.el([1, 1, 0])) + th
    n = (z * z.conj()).a
    assert (z * z.conj()).b.is_zero()
    assert n == z.norm_to_base()
    with pytest.raises(AssertionError):
        CMQuadExt(Z9, -4)  # not squarefree
    with pytest.raises(ValueError):
        CMQuadExt(Z9, -3)  # discriminant not coprime to the base


def test_cm_absolute_order():
    cm = CMQuadExt(presets.field("Q").order, -11)
    K = cm.absolute_order()
    assert K.n == 2
    assert K.disc == -11
