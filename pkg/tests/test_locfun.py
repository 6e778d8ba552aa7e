from fractions import Fraction

import pytest

from eiscong import cyclotomic as cy
from eiscong import locfun, presets
from eiscong.locfun import LocFnError
from eiscong.nfcore import IdealLattice
from eiscong.residue import ResidueRing


@pytest.fixture(scope="module")
def z9():
    pre = presets.tower("zeta9")
    ring = ResidueRing(pre.tower.top, pre.level_ideal())
    return pre, ring


def test_homogeneity_violation_reports_witness(z9):
    pre, ring = z9
    x = ring.reduce_int([1, 0, 0])
    with pytest.raises(LocFnError, match="eps="):
        locfun.make_locfun(ring, {(x, x): 1}, 2, pre.top_units)


def test_homogenized_is_homogeneous(z9):
    pre, ring = z9
    x = ring.reduce_int([1, 0, 0])
    for k in (1, 2, 3):
        phi = locfun.homogenized(ring, pre.top_units, {(x, x): 1}, k)
        assert phi is not None
        # construction succeeded, so make_locfun's check passed; verify a
        # random instance of the relation anyway
        u = ring.reduce_element(pre.top_units.gens[0])
        w = 1 if k % 2 == 0 else locfun.unit_sign_map(
            ring, pre.top_units)[u]
        a = ring.reduce_int([2, 1, 0])
        b = ring.reduce_int([1, 1, 1])
        assert phi(ring.mul(ring.inverse(u), a), ring.mul(u, b)) \
            == w * phi(a, b)


def test_odd_weight_needs_mixed_signs():
    # modulo (1) every unit is 1, so odd weights collapse to zero
    fq = presets.field("Q")
    ring = ResidueRing(fq.order, IdealLattice.from_integer(fq.order, 1))
    x = ring.reduce_int([0])
    assert locfun.homogenized(ring, fq.units, {(x, x): 1}, 1) is None
    assert locfun.homogenized(ring, fq.units, {(x, x): 1}, 2) is not None


def test_gamma_symmetrized_invariant(z9):
    pre, ring = z9
    phi = locfun.symmetrized_indicator(ring, pre.tower, pre.top_units,
                                       [0, 0, 1], [1, 0, 0], 1)
    assert phi is not None
    assert locfun.gamma_invariant(phi, pre.tower)


def test_base_residue_seed_invariant(z9):
    # rational residues are Gamma-fixed, so no symmetrization is needed
    pre, ring = z9
    x = ring.reduce_int([2, 0, 0])
    phi = locfun.homogenized(ring, pre.top_units, {(x, x): 1}, 1)
    assert phi is not None
    assert locfun.gamma_invariant(phi, pre.tower)


def test_non_invariant_indicator_detected(z9):
    pre, ring = z9
    c2 = ring.reduce_int([0, 0, 1])
    one = ring.reduce_int([1, 0, 0])
    phi = locfun.homogenized(ring, pre.top_units, {(c2, one): 1}, 1)
    assert phi is not None
    assert not locfun.gamma_invariant(phi, pre.tower)


def test_algebra_operations(z9):
    pre, ring = z9
    a = locfun.homogenized(ring, pre.top_units,
                           {(ring.reduce_int([1, 0, 0]),
                             ring.reduce_int([1, 0, 0])): 1}, 2)
    b = locfun.homogenized(ring, pre.top_units,
                           {(ring.reduce_int([2, 0, 0]),
                             ring.reduce_int([1, 0, 0])): 1}, 2)
    s = locfun.add_locfun(a, b, pre.top_units)
    x = ring.reduce_int([1, 0, 0])
    y = ring.reduce_int([1, 0, 0])
    assert s(x, y) == a(x, y) + b(x, y)
    m = locfun.mul_locfun(a, b, pre.top_units)
    assert m.weight == 4
    assert m(x, y) == a(x, y) * b(x, y)


def test_pullback_ver_values(z9):
    pre, ring = z9
    t = pre.tower
    x = ring.reduce_int([1, 0, 0])
    phi = locfun.homogenized(ring, pre.top_units, {(x, x): 1}, 2)
    m = IdealLattice.from_integer(
        t.base, int(ring.modulus.smallest_rational()))
    down = locfun.pullback_ver(phi, t, m, pre.base_units)
    rb = down.ring
    # phi_ver(a, b) = phi(a up, b up): spot-check rational pairs
    for av, bv in ((1, 1), (2, 5), (4, 7)):
        a = rb.reduce_int([av])
        b = rb.reduce_int([bv])
        assert down(a, b) == phi(ring.reduce_int([av, 0, 0]),
                                 ring.reduce_int([bv, 0, 0]))


def _brute_fourier(phi, x, y):
    ring = phi.ring
    m = int(ring.modulus.smallest_rational())
    acc = cy.zero(m)
    lx = ring.lift(x)
    for a in ring.residues():
        v = phi(a, y)
        if v:
            tr = (ring.lift(a) * lx).trace()
            acc = acc + cy.zeta(m, int(tr) % m) * v
    return acc


def test_partial_fourier_small_modulus():
    # exhaustive against the defining sum at level (3) over the cubic field
    pre = presets.tower("zeta9")
    ring = ResidueRing(pre.tower.top,
                       IdealLattice.from_integer(pre.tower.top, 3))
    x = ring.reduce_int([1, 0, 0])
    phi = locfun.homogenized(ring, pre.top_units, {(x, x): 2}, 2)
    tab = locfun.partial_fourier(phi)
    assert tab.prefactor == 1
    ys = {y for (_x, y) in phi.table}
    for xr in ring.residues():
        for y in ys:
            assert tab(xr, y) == _brute_fourier(phi, xr, y)


def test_partial_fourier_prefactors():
    pre = presets.tower("zeta9")
    ring = ResidueRing(pre.tower.top,
                       IdealLattice.from_integer(pre.tower.top, 3))
    x = ring.reduce_int([1, 0, 0])
    phi = locfun.homogenized(ring, pre.top_units, {(x, x): 1}, 1)
    inv = locfun.partial_fourier(phi, mode="inverse-cardinality")
    assert inv.prefactor == Fraction(1, len(ring))
    # level (3) = 3^1 with trivial prime-to-p part in a cubic field
    pm = locfun.partial_fourier(phi, mode="p-mass", p=3)
    assert pm.prefactor == Fraction(3 ** 3)
    with pytest.raises(LocFnError):
        locfun.partial_fourier(phi, mode="p-mass")
    with pytest.raises(LocFnError):
        locfun.partial_fourier(phi, mode="bogus")
