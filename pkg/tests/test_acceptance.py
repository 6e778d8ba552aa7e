"""Acceptance suite: one test (and one printed pass/fail line) per
criterion.  The expensive battery runs are shared through a session
fixture so the orbit criterion reuses the congruence reports.
"""
import json
import random
import time
from fractions import Fraction

import pytest

from eiscong import batteries, classgroups, cli, congruence
from eiscong import cyclotomic as cy
from eiscong import eisenstein as eis
from eiscong import localfactors as lf
from eiscong import locfun, presets
from eiscong.cli import _eps_catalogue
from eiscong.linalg import hnf
from eiscong.localfactors import DirichletChar
from eiscong.nfcore import (CMQuadExt, IdealLattice,
                            enumerate_totally_positive)
from eiscong.residue import ResidueRing

BOUND = 30
PER_PRESET_LIMIT = 300.0


def _conclude(num, label, ok, detail=""):
    line = f"criterion {num:2d} [{label}]: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, line


@pytest.fixture(scope="session")
def battery_runs():
    out = {}
    for name in ("zeta9", "zeta7"):
        pre = presets.tower(name)
        o = IdealLattice.unit_ideal(pre.tower.base)
        t0 = time.time()
        checks = []
        for k in (1, 2):
            for phi in batteries.battery(pre, k):
                checks.append(congruence.check_congruence(
                    phi, pre, o, o, k, BOUND, with_orbits=True))
        out[name] = {"checks": checks, "seconds": time.time() - t0,
                     "p": pre.tower.p}
    return out


def test_criterion_01_central_congruence(battery_runs):
    ok = True
    details = []
    for name, run in battery_runs.items():
        per_k = {1: 0, 2: 0}
        for rep in run["checks"]:
            ok &= rep["status"] == "ok"
            ok &= rep["mismatches"] == []
            ok &= rep["precondition_failures"] == []
            per_k[rep["k"]] += 1
        ok &= per_k[1] >= 5 and per_k[2] >= 5
        ok &= run["seconds"] < PER_PRESET_LIMIT
        details.append(f"{name}: {len(run['checks'])} checks in "
                       f"{run['seconds']:.0f}s")
    # weight-1 members must vanish on (a, 0), which unit support forces
    for name in ("zeta9", "zeta7"):
        pre = presets.tower(name)
        for phi in batteries.battery(pre, 1):
            ok &= phi.units_second and phi.units_first
            ok &= locfun.gamma_invariant(phi, pre.tower)
    _conclude(1, "central congruence", ok, "; ".join(details))


def test_criterion_02_negative_control():
    pre = presets.tower("zeta9")
    o = IdealLattice.unit_ideal(pre.tower.base)
    ok = True
    for k in (1, 2):
        phi = batteries.negative_control(pre, k)
        ok &= not locfun.gamma_invariant(phi, pre.tower)
        plain = congruence.check_congruence(phi, pre, o, o, k, 18,
                                            with_orbits=False)
        ok &= plain["status"] == "refused"
        forced = congruence.check_congruence(phi, pre, o, o, k, 18,
                                             force=True, with_orbits=False)
        ok &= len(forced["mismatches"]) >= 1
    _conclude(2, "negative control", ok)


def test_criterion_03_rational_sigma():
    fq = presets.field("Q")
    ring = ResidueRing(fq.order, IdealLattice.from_integer(fq.order, 1))
    phi = locfun.constant_one(ring, 2, fq.units)
    o = IdealLattice.unit_ideal(fq.order)
    e = eis.expand(o, o, phi, 2, Fraction(100), fq.units)
    ok = all(e.coefficient(fq.order.el([n]))
             == sum(d for d in range(1, n + 1) if n % d == 0)
             for n in range(1, 101))
    _conclude(3, "sigma_1 sanity", ok)


def test_criterion_04_orbit_structure(battery_runs):
    ok = True
    total = {}
    for name, run in battery_runs.items():
        p = str(run["p"])
        for rep in run["checks"]:
            st = rep["orbit_stats"]
            ok &= set(st["orbit_sizes"]) <= {"1", p}
            ok &= st["bad_orbits"] == 0
            ok &= st["free_subtotal_bad"] == 0
            ok &= st["fixed_exponent_bad"] == 0
            for k, v in st["orbit_sizes"].items():
                total[k] = total.get(k, 0) + v
    ok &= sum(total.values()) > 0
    _conclude(4, "orbit structure", ok,
              "sizes " + ",".join(f"{k}:{v}" for k, v in sorted(total.items())))


def test_criterion_05_gauss_conductor():
    t0 = time.time()
    chi5 = DirichletChar.quadratic(5)
    g = lf.gauss_sum(chi5)
    ok = (g * g).is_rational() == 5
    sweep = lf.gauss_conductor_sweep(50)
    ok &= sweep["ok"]
    dt = time.time() - t0
    ok &= dt < 60
    _conclude(5, "gauss conductors", ok,
              f"{sweep['checked']} chars in {dt:.1f}s")


def test_criterion_06_half_integral_comparison():
    t0 = time.time()
    sweep = lf.katz_deligne_sweep(25)
    dt = time.time() - t0
    ok = sweep["ok"] and dt < 60
    _conclude(6, "half-integral epsilon", ok,
              f"{sweep['checked']} pairs in {dt:.1f}s")


def test_criterion_07_conductor_discriminant():
    ok = True
    for name, disc, conds in (("zeta9", 81, [1, 9, 9]),
                              ("zeta7", 49, [1, 7, 7])):
        rep = lf.conductor_discriminant(presets.tower(name))
        ok &= rep["ok"]
        ok &= rep["disc_abs"] == disc
        ok &= sorted(rep["char_conductors"]) == conds
        ok &= rep["v_different_trace"] == sum(rep["local_exponents"])
        ok &= rep["v_different_trace"] == rep["v_different_ideal"]
    _conclude(7, "conductor-discriminant", ok)


def test_criterion_08_degree_zero_inductivity():
    ok = True
    counts = []
    for name in ("zeta9", "zeta7"):
        pre = presets.tower(name)
        cat = _eps_catalogue(pre)
        ok &= len(cat) >= 3
        for _label, chi in cat:
            ok &= lf.inductivity_degree_zero(chi, pre)["equal"]
        counts.append(f"{name}:{len(cat)}")
    _conclude(8, "degree-zero inductivity", ok, " ".join(counts))


def test_criterion_09_epsilon_inductivity():
    ok = True
    notes = []
    for name in ("zeta9", "zeta7"):
        pre = presets.tower(name)
        exact_nontrivial = 0
        for _label, chi in _eps_catalogue(pre):
            rep = lf.epsilon_inductivity(chi, pre)
            ok &= rep["abs_sq_equal"]
            if rep["equal"] and chi.order > 1:
                exact_nontrivial += 1
        ok &= exact_nontrivial >= 1
        notes.append(f"{name}: {exact_nontrivial} nontrivial exact")
    _conclude(9, "epsilon inductivity", ok, "; ".join(notes))


def test_criterion_10_euler_identity():
    ok = all(lf.verify_euler_identity(e, trunc=30)["ok"]
             for e in range(6))
    _conclude(10, "euler identity", ok, "e <= 5, t^30")


def test_criterion_11_hypothesis_checks():
    rep = classgroups.check_main_assumptions(presets.tower("zeta9"))
    ok = rep["h2"]["status"] == "holds"
    ok &= rep["h3"]["status"] == "holds"
    ok &= rep["h1"]["status"] in ("holds", "inconclusive")
    ok &= rep["h1"]["cap"] == classgroups.DEFAULT_CAP
    # imaginary quadratic side against the reduced-form oracle
    q = presets.field("Q").order
    for D in (-11, -59):
        g = classgroups.class_group(CMQuadExt(q, D))
        ok &= g.status == "exact"
        ok &= g.order() == classgroups.form_class_number(D)
    rep7 = classgroups.check_main_assumptions(presets.tower("zeta7"))
    ok &= rep7["h1"]["status"] in ("holds", "inconclusive")
    ok &= rep7["h1"]["lhs"].divisors == (3,)
    _conclude(11, "tower hypotheses", ok,
              f"h1 {rep['h1']['status']}, cap {rep['h1']['cap']}")


def test_criterion_12_infrastructure(tmp_path, capsys, monkeypatch):
    rng = random.Random(20260823)
    order = presets.field("zeta9_plus").order
    ok = True
    for _ in range(100):
        x = order.el([rng.randint(-40, 40) for _ in range(3)])
        y = order.el([rng.randint(-40, 40) for _ in range(3)])
        ok &= (x * y).norm() == x.norm() * y.norm()
        ok &= (x + y).trace() == x.trace() + y.trace()
    for _ in range(20):
        rows = [[rng.randint(-9, 9) for _ in range(3)] for _ in range(4)]
        try:
            H = hnf(rows, 3)
        except Exception:
            continue
        ok &= hnf(H, 3) == H
    o = IdealLattice.unit_ideal(order)
    pts5 = {z.canonical_key() for z in enumerate_totally_positive(o, 5)}
    pts9 = {z.canonical_key() for z in enumerate_totally_positive(o, 9)}
    ok &= pts5 <= pts9
    pts = enumerate_totally_positive(o, 8)
    coeffs = {pts[i]: rng.randint(-99, 99) or 1 for i in (0, 2, 5)}
    e = eis.QExpansion(order, o, coeffs, Fraction(8),
                       {"k": "2", "level": "9", "phi": "x"})
    ok &= eis.parse(eis.serialize(e), order).coeffs == e.coeffs
    d1, d2 = tmp_path / "r1", tmp_path / "r2"
    outs = []
    for d in (d1, d2):
        monkeypatch.setenv(cli.REPORT_DIR_ENV, str(d))
        assert cli.main(["epsilon", "gauss", "--modulus", "5",
                         "--char", "quadratic"]) == 0
        outs.append(capsys.readouterr().out)
    ok &= outs[0] == outs[1]
    ok &= (d1 / "epsilon-gauss.json").read_bytes() \
        == (d2 / "epsilon-gauss.json").read_bytes()
    _conclude(12, "infrastructure properties", ok)


# keep the explicit criterion lines visible in the -v run summary
@pytest.fixture(autouse=True)
def _show_criterion_lines(capsys, request):
    yield
    out = capsys.readouterr().out
    for line in out.splitlines():
        if line.startswith("criterion"):
            with capsys.disabled():
                print(line)
