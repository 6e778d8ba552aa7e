from fractions import Fraction

import pytest

from eiscong import cyclotomic as cy
from eiscong import localfactors as lf
from eiscong import presets
from eiscong.localfactors import DirichletChar


def primitive_chars(bound):
    for m in range(1, bound + 1):
        for chi in DirichletChar.all_characters(m):
            if chi.is_primitive():
                yield chi


def test_quadratic_gauss_square_is_five():
    chi = DirichletChar.quadratic(5)
    g = lf.gauss_sum(chi)
    sq = g * g
    assert sq.is_rational() == 5
    assert lf.gauss_norm_squared(chi) == 5


def test_quadratic_gauss_squares_sign():
    # G^2 = chi(-1) * p for the Legendre symbol
    for p in (3, 5, 7, 11, 13):
        chi = DirichletChar.quadratic(p)
        want = p if p % 4 == 1 else -p
        g = lf.gauss_sum(chi)
        assert (g * g).is_rational() == want


def test_gauss_norm_sweep_small():
    rep = lf.gauss_conductor_sweep(30)
    assert rep["ok"] and rep["failures"] == []
    assert rep["checked"] > 50


def test_gauss_conjugate_symmetry():
    # G(bar chi) = chi(-1) conj(G(chi))
    for chi in primitive_chars(16):
        bar = DirichletChar(chi.modulus,
                            tuple(-e for e in chi.exps))
        g = lf.gauss_sum(chi)
        gb = lf.gauss_sum(bar)
        sign = chi.value_root(chi.modulus - 1) if chi.modulus > 1 else None
        gc = g.conj()
        if sign is not None and not sign.is_one():
            gc = -gc
        a, b = cy.common_ambient(gb, gc)
        assert (a - b).is_zero()


def _find_product_char(c1, c2):
    m = c1.modulus * c2.modulus
    for chi in DirichletChar.all_characters(m):
        if all(chi.value_root(n) is None
               or _roots_equal(chi.value_root(n),
                               _root_mul(c1.value_root(n),
                                         c2.value_root(n)))
               for n in range(1, m + 1)):
            return chi
    raise AssertionError("missing product character")


def _root_mul(a, b):
    M = a.order * b.order
    za = cy.zeta(M, a.k * (M // a.order))
    zb = cy.zeta(M, b.k * (M // b.order))
    return za * zb


def _roots_equal(r, z):
    zr = cy.zeta(r.order, r.k)
    a, b = cy.common_ambient(zr, z)
    return (a - b).is_zero()


def test_gauss_multiplicative_coprime():
    # G(chi1 chi2) = chi1(m2) chi2(m1) G(chi1) G(chi2)
    pairs = [(DirichletChar.quadratic(3), DirichletChar.quadratic(5)),
             (DirichletChar.quadratic(3), DirichletChar.quadratic(7))]
    for c1, c2 in pairs:
        chi = _find_product_char(c1, c2)
        lhs = lf.gauss_sum(chi)
        a1, a2 = cy.common_ambient(lf.gauss_sum(c1), lf.gauss_sum(c2))
        s = 1
        if not c1.value_root(c2.modulus).is_one():
            s = -s
        if not c2.value_root(c1.modulus).is_one():
            s = -s
        rhs = a1 * a2 if s == 1 else -(a1 * a2)
        a, b = cy.common_ambient(lhs, rhs)
        assert (a - b).is_zero()


def test_conductor_divides_modulus():
    for chi in DirichletChar.all_characters(24):
        f = chi.conductor()
        assert 24 % f == 0
        assert chi.is_primitive() == (f == 24)


def test_katz_deligne_single_exact():
    chi = DirichletChar.quadratic(7)
    rep = lf.check_katz_deligne(chi, 7)
    assert rep["equal"]
    # the comparison is independent of the auxiliary shift
    for d in (Fraction(2), Fraction(1, 2), Fraction(5, 3)):
        assert lf.check_katz_deligne(chi, 7, d)["equal"]


def test_katz_deligne_sweep_small():
    rep = lf.katz_deligne_sweep(15)
    assert rep["ok"] and rep["failures"] == []
    assert rep["checked"] > 20


@pytest.fixture(scope="module", params=["zeta9", "zeta7"])
def pre(request):
    return presets.tower(request.param)


def test_tower_characters_shape(pre):
    chars = lf.tower_characters(pre)
    p = pre.tower.p
    assert len(chars) == p
    assert sorted(max(c.order, 1) for c in chars) == [1] + [p] * (p - 1)
    conds = sorted(c.conductor() for c in chars)
    q = pre.ramified_rational
    level = {"zeta9": 9, "zeta7": 7}[pre.name]
    assert conds == [1] + [level] * (p - 1)
    assert q == {"zeta9": 3, "zeta7": 7}[pre.name]


def test_character_product_is_trivial(pre):
    # odd-order cyclic block: characters pair off with their inverses
    chars = lf.tower_characters(pre)
    m = max(c.modulus for c in chars)
    for x in (2, 4, 5):
        if m % x == 0:
            continue
        prod = None
        for c in chars:
            r = c.value_root(x % c.modulus if c.modulus > 1 else 0)
            z = cy.zeta(max(r.order, 1), r.k)
            prod = z if prod is None else _root_ambient_mul(prod, z)
        assert prod.is_rational() == 1


def _root_ambient_mul(a, b):
    a2, b2 = cy.common_ambient(a, b)
    return a2 * b2


def test_conductor_discriminant(pre):
    rep = lf.conductor_discriminant(pre)
    assert rep["ok"]
    want = {"zeta9": (81, [1, 9, 9]), "zeta7": (49, [1, 7, 7])}[pre.name]
    assert rep["disc_abs"] == want[0]
    assert sorted(rep["char_conductors"]) == want[1]
    assert rep["v_different_trace"] == rep["v_different_ideal"]
    assert rep["v_different_trace"] == sum(rep["local_exponents"])


def test_degree_zero_inductivity(pre):
    for chi in (DirichletChar.trivial(1),
                DirichletChar.quadratic(13),
                DirichletChar.quadratic(pre.ramified_rational)
                if pre.ramified_rational % 2 else None):
        if chi is None:
            continue
        rep = lf.inductivity_degree_zero(chi, pre)
        assert rep["equal"], rep


def test_epsilon_inductivity_quick(pre):
    nontrivial = {"zeta9": DirichletChar.quadratic(5),
                  "zeta7": DirichletChar.quadratic(13)}[pre.name]
    for chi in (DirichletChar.trivial(1), nontrivial):
        rep = lf.epsilon_inductivity(chi, pre)
        assert rep["abs_sq_equal"], rep
        assert rep["equal"], rep


def test_euler_identity_small():
    for e in range(4):
        rep = lf.verify_euler_identity(e, trunc=15)
        assert rep["identity_ok"] and rep["telescoping_ok"]


def test_diff_valuations_demo():
    pre = presets.tower("zeta9")
    rep = lf.diff_valuations(pre)
    assert rep["split_primes"] == 2
    pc = rep["preconditions"]
    assert pc["delta_anticonjugates"]
    assert pc["delta_prime_anticonjugates"]
    assert pc["different_valuation_matches"]
    for row in rep["valuations"]:
        assert row["ord_delta_pow"] == 0
        assert row["ord_norm"] == 4
        assert row["difference"] == 4
