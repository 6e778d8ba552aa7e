"""Diagonal restriction, Frobenius twist, the coefficientwise mod-p
congruence checker, and Gamma-orbit diagnostics.

The checked statement: res_Delta(E_k(phi', c theta)) == Frob_p(E_pk(phi, c))
mod p coefficientwise, phi = phi' o ver, for Gamma-invariant phi' supported
on units in both variables, with b prime to p and every theta-prime
dividing the level.
"""
import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import eisenstein as eis
from . import locfun
from .eisenstein import QExpansion
from .locfun import LocFn
from .nfcore import Element, IdealLattice, UnitGroupData, unit_quotient
from .presets import TowerPreset
from .towers import TowerData, is_gamma_stable


class CongruenceError(ValueError):
    pass


def restrict_diagonal(e: QExpansion, t: TowerData,
                      trace_bound) -> QExpansion:
    """Push q^xi' to q^{tr(xi')}; complete because the relative trace
    preserves the absolute trace."""
    trace_bound = Fraction(trace_bound)
    if e.trace_bound < trace_bound:
        raise CongruenceError("input expansion bound too small for the "
                              "requested restriction")
    assert e.order_ref is t.top
    acc = {}
    for xi, c in e.coeffs.items():
        lo = t.rel_trace(xi)
        if lo.trace() <= trace_bound:
            acc[lo] = acc.get(lo, 0) + c
    acc = {k: v for k, v in acc.items() if v}
    meta = dict(e.meta)
    meta["restricted"] = "diagonal"
    return QExpansion(t.base, t.trace_image(e.exponent_ideal), acc,
                      trace_bound, meta)


def frobenius_twist(e: QExpansion, p: int) -> QExpansion:
    acc = {}
    for xi, c in e.coeffs.items():
        acc[xi * p] = c
    meta = dict(e.meta)
    meta["frobenius"] = p
    return QExpansion(e.order_ref, e.exponent_ideal.scale(p), acc,
                      e.trace_bound * p, meta)


def _divides_power(d: IdealLattice, base: IdealLattice) -> bool:
    """True iff every prime of the integral ideal d divides base."""
    power = base
    for _ in range(max(1, int(d.norm()).bit_length())):
        if d.contains_lattice(power):
            return True
        power = power.mul(base)
    return False


def check_preconditions(phi_top: LocFn, preset: TowerPreset,
                        b_base: IdealLattice):
    """List of (name, witness) pairs; empty means the hypotheses of the
    congruence hold."""
    t = preset.tower
    fails = []
    if not is_gamma_stable(t, phi_top.ring.modulus):
        fails.append(("level-gamma-stable", "level ideal moves under gamma"))
    elif not locfun.gamma_invariant(phi_top, t):
        fails.append(("gamma-invariant", phi_top.label))
    if not phi_top.units_first:
        fails.append(("units-supported-first", phi_top.label))
    if not phi_top.units_second:
        fails.append(("units-supported-second", phi_top.label))
    o = t.base
    pb = IdealLattice.from_integer(o, t.p)
    if b_base.denom != 1:
        fails.append(("b-integral", repr(b_base)))
    elif b_base.add(pb) != IdealLattice.unit_ideal(o):
        fails.append(("b-prime-to-p", repr(b_base)))
    theta = t.rel_different()
    if not _divides_power(theta, phi_top.ring.modulus):
        fails.append(("theta-divides-level",
                      "a ramified prime misses the level"))
    b_top = t.extend_ideal(b_base)
    if b_top.add(theta) != IdealLattice.unit_ideal(t.top):
        fails.append(("b-prime-to-theta", repr(b_base)))
    return fails


def _exponent_str(xi: Element) -> str:
    return ",".join(eis._frac_str(c) for c in xi.coords)


def check_congruence(phi_top: LocFn, preset: TowerPreset,
                     a_base: IdealLattice, b_base: IdealLattice,
                     k: int, trace_bound, force: bool = False,
                     explore_mod_sq: bool = False,
                     with_orbits: bool = True) -> dict:
    t = preset.tower
    p = t.p
    trace_bound = Fraction(trace_bound)
    report = {
        "preset": preset.name,
        "phi": phi_top.label,
        "k": k,
        "p": p,
        "bound": str(trace_bound),
        "forced": force,
    }
    fails = check_preconditions(phi_top, preset, b_base)
    report["precondition_failures"] = [list(f) for f in fails]
    if fails and not force:
        report["status"] = "refused"
        return report
    theta = t.rel_different()
    a_top = t.extend_ideal(a_base)
    b_top = t.extend_ideal(b_base).mul(theta.inverse())
    e_top = eis.expand(a_top, b_top, phi_top, k, trace_bound,
                       preset.top_units,
                       force_omit_constant=force)
    lhs = restrict_diagonal(e_top, t, trace_bound)
    m_base = IdealLattice.from_integer(
        t.base, int(phi_top.ring.modulus.smallest_rational()))
    phi = locfun.pullback_ver(phi_top, t, m_base, preset.base_units)
    e_base = eis.expand(a_base, b_base, phi, p * k, trace_bound / p,
                        preset.base_units,
                        force_omit_constant=force)
    rhs = frobenius_twist(e_base, p)
    lhs.meta["phi"] = phi_top.label
    rhs.meta["phi"] = phi_top.label
    report["lhs_hash"] = eis.digest(lhs)
    report["rhs_hash"] = eis.digest(rhs)
    support_union = set(lhs.coeffs) | set(rhs.coeffs)
    mismatches = []
    mism_sq = []
    for xi in sorted(support_union, key=lambda z: z.canonical_key()):
        lv = lhs.coefficient(xi)
        rv = rhs.coefficient(xi)
        if (lv - rv) % p:
            mismatches.append([_exponent_str(xi), lv % p, rv % p])
        if explore_mod_sq and (lv - rv) % (p * p):
            mism_sq.append([_exponent_str(xi), lv % (p * p), rv % (p * p)])
    report["mismatches"] = mismatches
    if explore_mod_sq:
        report["mod_p2_nontheorem"] = mism_sq
    _d, xi_gen, _found = t.rel_different_with_xi(preset.top_units)
    report["theta_generator_note"] = (
        None if xi_gen is not None
        else "no totally positive different generator found; "
             "hypothesis unverified")
    if with_orbits:
        stats = {"orbit_sizes": {}, "bad_orbits": 0, "free_subtotal_bad": 0,
                 "fixed": 0, "fixed_exponent_bad": 0,
                 "fixed_descent_unverified": 0}
        b_eff = _effective_b(b_top, phi_top)
        fibers = _fiber_map(t, a_top.mul(b_eff), trace_bound)
        for xi in sorted(support_union, key=lambda z: z.canonical_key()):
            rec = orbit_diagnostics(xi, preset, a_base, b_base, phi_top, k,
                                    fiber=fibers.get(xi, []))
            for s in rec["sizes"]:
                key = str(s)
                stats["orbit_sizes"][key] = \
                    stats["orbit_sizes"].get(key, 0) + 1
                if s not in (1, p):
                    stats["bad_orbits"] += 1
            if not rec["free_subtotals_ok"]:
                stats["free_subtotal_bad"] += 1
            stats["fixed"] += len(rec["fixed"])
            for f in rec["fixed"]:
                if not f["exponent_in_pb"]:
                    stats["fixed_exponent_bad"] += 1
                if not f["descends"]:
                    stats["fixed_descent_unverified"] += 1
        report["orbit_stats"] = stats
    report["status"] = "mismatch" if mismatches else "ok"
    return report


def _effective_b(b_lat: IdealLattice, phi: LocFn) -> IdealLattice:
    if phi.units_second:
        return b_lat.intersect(IdealLattice.unit_ideal(b_lat.order))
    return b_lat


def _fiber_map(t: TowerData, exps: IdealLattice, trace_bound):
    """All totally positive lattice points grouped by relative trace."""
    out = {}
    for z in eis.enumerate_totally_positive(exps, trace_bound):
        out.setdefault(t.rel_trace(z), []).append(z)
    return out


def _unit_box(units: UnitGroupData, depth: int):
    o = units.order
    out = [o.one(), -o.one()]
    r = len(units.gens)
    if r == 0:
        return out
    for exps in itertools.product(range(-depth, depth + 1), repeat=r):
        if not any(exps):
            continue
        u = o.one()
        for e, g in zip(exps, units.gens):
            if e:
                u = u * g ** e
        out.append(u)
        out.append(-u)
    return out


def orbit_diagnostics(xi_base: Element, preset: TowerPreset,
                      a_base: IdealLattice, b_base: IdealLattice,
                      phi_top: LocFn, k: int,
                      descent_depth: int = 4, fiber=None) -> dict:
    """Gamma-orbit partition of the triples (xi', a, b) contributing to
    the diagonal-restriction coefficient at xi_base.

    fiber, when given, must list every totally positive lattice point of
    a'b' with relative trace xi_base; callers doing many exponents share
    one enumeration that way.
    """
    t = preset.tower
    p = t.p
    theta = t.rel_different()
    a_top = t.extend_ideal(a_base)
    b_eff = _effective_b(t.extend_ideal(b_base).mul(theta.inverse()),
                         phi_top)
    if fiber is None:
        exps = a_top.mul(b_eff)
        fiber = [z for z in eis.enumerate_totally_positive(exps,
                                                           xi_base.trace())
                 if t.rel_trace(z) == xi_base]
    triples = []
    by_xi = {}
    for z in fiber:
        for a, b in eis.factorization_orbits(z, a_top, b_eff,
                                             preset.top_units):
            by_xi.setdefault(z, []).append(len(triples))
            triples.append((z, a, b))
    ring = phi_top.ring

    def summand(a, b):
        ra = ring.reduce_element(a)
        rb = ring.reduce_element(b)
        v = phi_top(ra, rb) if ra is not None and rb is not None else 0
        if not v:
            return 0
        na = a.norm()
        sgn = 1 if na > 0 else -1
        val = Fraction(v * sgn) * na ** (k - 1)
        assert val.denominator == 1
        return int(val)

    gal = [(t.galois(z), t.galois(a), t.galois(b)) for z, a, b in triples]

    def image(i):
        gz, ga, gb = gal[i]
        for j in by_xi.get(gz, ()):
            a2, b2 = triples[j][1], triples[j][2]
            epsv = unit_quotient(ga, a2)
            if epsv is not None and b2 == epsv * gb:
                return j
        return None

    seen = set()
    sizes = []
    free_ok = True
    fixed = []
    box = None
    for i in range(len(triples)):
        if i in seen:
            continue
        orbit = [i]
        j = image(i)
        while j is not None and j != i and j not in orbit:
            orbit.append(j)
            j = image(j)
        seen.update(orbit)
        if j is None:
            sizes.append(-1)
            continue
        sizes.append(len(orbit))
        if len(orbit) == p:
            sub = sum(summand(triples[m][1], triples[m][2]) for m in orbit)
            if sub % p:
                free_ok = False
        elif len(orbit) == 1:
            z, a, b = triples[i]
            xi0 = t.in_base(z)
            rec = {"xi0": None if xi0 is None else _exponent_str(xi0),
                   "exponent_in_pb": False, "descends": False}
            if xi0 is not None:
                rec["exponent_in_pb"] = b_base.contains(xi0) \
                    and xi_base == xi0 * p
            if box is None:
                box = _unit_box(preset.top_units, descent_depth)
            for u in box:
                if t.in_base(a * u) is not None:
                    rec["descends"] = True
                    break
            fixed.append(rec)
    total = sum(summand(a, b) for (_z, a, b) in triples)
    return {
        "xi": _exponent_str(xi_base),
        "triples": len(triples),
        "sizes": sorted(sizes),
        "free_subtotals_ok": free_ok,
        "fixed": fixed,
        "total_mod_p": total % p,
    }
