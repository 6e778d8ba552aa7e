from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from eiscong import presets
from eiscong.nfcore import IdealLattice, ideal_valuation

coords3 = st.lists(st.integers(-20, 20), min_size=3, max_size=3)


@pytest.fixture(scope="module", params=["zeta9", "zeta7"])
def pre(request):
    return presets.tower(request.param)


def test_galois_has_order_p(pre):
    t = pre.tower
    c = t.top.gen()
    x = c * c + c
    y = x
    for _ in range(t.p):
        y = t.galois(y)
    assert y == x
    assert t.galois(x) != x


@settings(max_examples=50, deadline=None)
@given(coords3, coords3)
def test_galois_is_a_ring_map(u, v):
    t = presets.tower("zeta9").tower
    x, y = t.top.el(u), t.top.el(v)
    assert t.galois(x * y) == t.galois(x) * t.galois(y)
    assert t.galois(x + y) == t.galois(x) + t.galois(y)


def test_relative_trace_and_norm(pre):
    t = pre.tower
    c = t.top.gen()
    x = c + t.top.one()
    tr = x
    for i in range(1, t.p):
        tr = tr + t.galois(x, i)
    lo = t.in_base(tr)
    assert lo is not None and t.rel_trace(x) == lo
    # over Q the relative trace is the absolute one
    if t.base.n == 1:
        assert t.rel_trace(x).coords[0] == x.trace()


def test_in_base_roundtrip(pre):
    t = pre.tower
    for k in (1, 2, 5):
        z = t.top.from_int(k)
        lo = t.in_base(z)
        assert lo is not None and lo.coords[0] == k
    assert t.in_base(t.top.gen()) is None


def test_extend_ideal_norm(pre):
    t = pre.tower
    for k in (2, 3, 5):
        ext = t.extend_ideal(IdealLattice.from_integer(t.base, k))
        assert ext == IdealLattice.from_integer(t.top, k)
        assert ext.norm() == k ** t.top.n


def test_rel_different_valuation_matches_preset(pre):
    d = pre.tower.rel_different()
    assert ideal_valuation(d, pre.theta_prime()) == pre.theta_valuation
    assert d == pre.theta_ideal()


def test_different_generator_totally_positive(pre):
    _, xi, found = pre.tower.rel_different_with_xi(pre.top_units)
    assert xi is not None
    assert xi.is_totally_positive()
    assert IdealLattice.principal(xi) == pre.tower.rel_different()
    assert found


def test_trace_image(pre):
    t = pre.tower
    o = IdealLattice.unit_ideal(t.top)
    img = t.trace_image(o)
    assert img.order is t.base
    for b in o.basis_elements():
        assert img.contains(t.rel_trace(b))


def test_level_ideal_gamma_stable(pre):
    from eiscong.locfun import is_gamma_stable
    assert is_gamma_stable(pre.tower, pre.level_ideal())


def test_preset_catalogue_lists():
    assert set(presets.tower_names()) >= {"zeta9", "zeta7"}
    assert set(presets.field_names()) >= {"Q", "sqrt5", "zeta9_plus",
                                          "zeta7_plus"}
    with pytest.raises(KeyError):
        presets.tower("no-such-tower")
