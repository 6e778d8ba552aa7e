import pytest

from eiscong import classgroups as cg
from eiscong import presets
from eiscong.nfcore import CMQuadExt, FieldOrder, IdealLattice
from eiscong.residue import ResidueRing

# fundamental discriminant -> class number, from the reduced-form count
FORM_PINS = {-3: 1, -4: 1, -7: 1, -8: 1, -11: 1, -15: 2, -19: 1, -20: 2,
             -23: 3, -24: 2, -31: 3, -35: 2, -39: 4, -40: 2}


def test_form_class_numbers():
    for D, h in FORM_PINS.items():
        assert cg.form_class_number(D) == h
    assert cg.form_class_number(-47) == 5
    assert cg.form_class_number(-59) == 3


def _squarefree_part(disc):
    return disc // 4 if disc % 4 == 0 else disc


def test_imaginary_quadratic_matches_forms():
    q = presets.field("Q").order
    for disc, h in FORM_PINS.items():
        g = cg.class_group(CMQuadExt(q, _squarefree_part(disc)))
        assert g.status == "exact", disc
        assert g.order() == h, disc


def test_class_group_z2_structure():
    g = cg.class_group(CMQuadExt(presets.field("Q").order, -5))
    assert g.status == "exact"
    assert g.divisors == (2,)
    assert g.describe() == "Z/2"
    assert not g.is_trivial()


def test_z4_at_minus_39():
    # h = 4 and the group is cyclic, not Z/2 x Z/2
    g = cg.class_group(CMQuadExt(presets.field("Q").order, -39))
    assert g.status == "exact"
    assert g.divisors == (4,)


def test_preset_fields_trivial():
    for name in ("Q", "sqrt5", "zeta9_plus", "zeta7_plus"):
        g = cg.class_group(presets.field(name).order)
        assert g.status == "exact" and g.is_trivial(), name


def test_narrow_groups():
    for name in ("sqrt5", "zeta9_plus", "zeta7_plus"):
        g = cg.narrow_class_group(presets.field(name).order)
        assert g.status == "exact" and g.is_trivial(), name


def test_narrow_inconclusive_when_signs_short():
    # Q(sqrt 3): all units are totally positive up to sign, so the sign
    # kernel cannot be certified trivial from a unit box
    order = FieldOrder.from_min_poly("sqrt3", [-3, 0, 1])
    g = cg.narrow_class_group(order)
    assert g.status == "inconclusive"
    assert g.divisors == (2,)
    assert g.cap is not None


def test_relative_cm_is_inconclusive():
    pre = presets.tower("zeta9")
    g = cg.class_group(pre.cm_top(), cap=200)
    assert g.status == "inconclusive"
    assert g.cap == 200
    assert "no direct enumeration" in g.note


def test_serialize_roundtrip_fields():
    g = cg.class_group(CMQuadExt(presets.field("Q").order, -23))
    d = g.serialize()
    assert d["divisors"] == [3]
    assert d["status"] == "exact"
    assert d["order"] == 3


def test_describe_marks_inconclusive():
    g = cg.narrow_class_group(FieldOrder.from_min_poly("sqrt3",
                                                       [-3, 0, 1]))
    assert "inconclusive" in g.describe()
    assert "Z/2" in g.describe()


def test_ray_minus_trivial_conductor():
    q = presets.field("Q").order
    for D, want in ((-11, ()), (-59, (3,))):
        cm = CMQuadExt(q, D)
        g = cg.ray_class_minus(cm, IdealLattice.unit_ideal(q))
        assert g.status == "exact"
        assert g.divisors == want


def test_ray_minus_mod_five_over_gauss_field():
    # (F5 x F5)^* / <i, rational units> has index 2
    q = presets.field("Q").order
    cm = CMQuadExt(q, -1)
    g = cg.ray_class_minus(cm, IdealLattice.from_integer(q, 5))
    assert g.status == "exact"
    assert g.divisors == (2,)


def test_abelian_divisors_on_unit_groups():
    q = presets.field("Q").order
    for m, want in ((7, (6,)), (8, (2, 2)), (15, (2, 4)), (16, (2, 4))):
        ring = ResidueRing(q, IdealLattice.from_integer(q, m))
        elems = ring.units()
        got = cg._abelian_divisors(elems, ring.mul, ring.one())
        assert got == want, m


def test_minkowski_scale():
    assert cg._minkowski_bound(presets.field("Q").order) < 2
    assert cg._minkowski_bound(presets.field("zeta9_plus").order) < 3


@pytest.fixture(scope="module")
def assumptions_z9():
    return cg.check_main_assumptions(presets.tower("zeta9"))


def test_assumptions_statuses(assumptions_z9):
    rep = assumptions_z9
    assert rep["h2"]["status"] == "holds"
    assert rep["h3"]["status"] == "holds"
    assert rep["h1"]["status"] == "inconclusive"
    assert rep["side_conditions"] == {"p_split_in_cm": True,
                                      "theta_split_in_cm": True}


def test_assumptions_h1_sides(assumptions_z9):
    h1 = assumptions_z9["h1"]
    assert h1["lhs"].status == "exact" and h1["lhs"].is_trivial()
    assert h1["rhs"].status == "inconclusive"
    assert h1["cap"] == cg.DEFAULT_CAP


def test_assumptions_zeta7_nontrivial_lhs():
    rep = cg.check_main_assumptions(presets.tower("zeta7"))
    assert rep["h2"]["status"] == "holds"
    assert rep["h3"]["status"] == "holds"
    h1 = rep["h1"]
    assert h1["status"] == "inconclusive"
    assert h1["lhs"].divisors == (3,)
    assert h1["generator_images_gamma_fixed"]
    assert all(ok for _label, ok in h1["generator_images_gamma_fixed"])


def test_assumptions_reject_bad_cm():
    pre = presets.tower("zeta9")
    with pytest.raises(ValueError, match="ramifies"):
        cg.check_main_assumptions(pre, cm_disc=-3)
    with pytest.raises(ValueError, match="inert"):
        cg.check_main_assumptions(pre, cm_disc=-7)
