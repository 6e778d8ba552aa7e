"""Eisenstein q-expansions at a cusp (a, b): coefficients over totally
positive exponents xi in ab, each a unit-orbit sum of
phi(a, b) sgn(N(a)) N(a)^(k-1) over factorizations ab = xi.

Constant terms are out of scope; expansions therefore require phi to be
units-supported in a way that kills them (see expand).
"""
import hashlib
from dataclasses import dataclass, field
from fractions import Fraction

from .locfun import LocFn, LocFnError
from .nfcore import (Element, FieldOrder, IdealLattice, UnitGroupData,
                     canonical_orbit_rep, enumerate_norm_orbit_reps,
                     enumerate_totally_positive)


class ExpandError(ValueError):
    pass


@dataclass
class QExpansion:
    order_ref: FieldOrder
    exponent_ideal: IdealLattice
    coeffs: dict
    trace_bound: Fraction
    meta: dict = field(default_factory=dict)

    def coefficient(self, xi: Element) -> int:
        return self.coeffs.get(xi, 0)

    def support(self):
        return sorted(self.coeffs, key=lambda z: z.canonical_key())

    def __repr__(self):
        return (f"<QExpansion {self.order_ref.label} "
                f"bound={self.trace_bound} terms={len(self.coeffs)}>")


def _frac_str(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def serialize(e: QExpansion) -> str:
    m = e.meta
    lines = [
        "qexp field={} k={} level={} phi={} bound={}".format(
            e.order_ref.label, m.get("k", "?"), m.get("level", "?"),
            m.get("phi", "?"), _frac_str(e.trace_bound)),
        f"lattice denom={e.exponent_ideal.denom}",
    ]
    for row in e.exponent_ideal.mat:
        lines.append("row " + " ".join(str(v) for v in row))
    for xi in e.support():
        lines.append("coef " + " ".join(_frac_str(c) for c in xi.coords)
                     + " : " + str(e.coeffs[xi]))
    return "\n".join(lines) + "\n"


def parse(text: str, order: FieldOrder) -> QExpansion:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    assert head[0] == "qexp"
    meta = {}
    for tok in head[1:]:
        key, _, val = tok.partition("=")
        meta[key] = val
    assert meta.pop("field") == order.label, "field label mismatch"
    bound = Fraction(meta.pop("bound"))
    denom = int(lines[1].split("denom=")[1])
    rows = []
    idx = 2
    while idx < len(lines) and lines[idx].startswith("row "):
        rows.append(tuple(int(v) for v in lines[idx].split()[1:]))
        idx += 1
    lattice = IdealLattice(order, tuple(rows), denom)
    coeffs = {}
    for ln in lines[idx:]:
        body = ln[len("coef "):]
        coord_part, _, cpart = body.partition(" : ")
        coords = [Fraction(v) for v in coord_part.split()]
        coeffs[order.el(coords)] = int(cpart)
    return QExpansion(order, lattice, coeffs, bound, meta)


def digest(e: QExpansion) -> str:
    return hashlib.sha256(serialize(e).encode()).hexdigest()


def check_signatures_full(units: UnitGroupData) -> bool:
    """Unit signs must generate all of {+-1}^n for orbit enumeration by
    totally positive representatives to be complete."""
    o = units.order
    vecs = {(-1,) * o.n}
    for u in units.gens:
        vecs.add(tuple(o.signs(u.coords)))
    span = {(1,) * o.n}
    frontier = list(span)
    while frontier:
        cur = frontier.pop()
        for v in vecs:
            nxt = tuple(a * b for a, b in zip(cur, v))
            if nxt not in span:
                span.add(nxt)
                frontier.append(nxt)
    return len(span) == 2 ** o.n


_AREP_CACHE = {}


def _orbit_reps(lattice: IdealLattice, norm_bound: Fraction,
                units: UnitGroupData):
    """Monotone cache: one list per (lattice, units) at the largest bound
    requested so far; smaller bounds are served as prefixes."""
    key = (lattice, units.gens)
    got = _AREP_CACHE.get(key)
    if got is None or got[0] < norm_bound:
        reps = enumerate_norm_orbit_reps(lattice, norm_bound, units)
        got = (norm_bound, [(abs(r.norm()), r) for r in reps])
        _AREP_CACHE[key] = got
    bound, pairs = got
    if bound == norm_bound:
        return pairs
    return [pr for pr in pairs if pr[0] <= norm_bound]


def _pairs_from_reps(xi: Element, reps, b_lat: IdealLattice):
    nxi = abs(xi.norm())
    nb = b_lat.norm()
    out = []
    for nrm, a in reps:
        if nrm * nb > nxi:
            break
        if ((nxi / nrm) / nb).denominator != 1:
            continue
        b = xi / a
        if b_lat.contains(b):
            out.append((a, b))
    out.sort(key=lambda ab: ab[0].canonical_key())
    return out


def factorization_orbits(xi: Element, a_lat: IdealLattice,
                         b_lat: IdealLattice, units: UnitGroupData):
    """One representative pair per unit orbit of {(a, b) in a_lat x b_lat,
    ab = xi}, the action being eps.(a, b) = (eps^-1 a, eps b).  The a-side
    carries the canonical orbit representative."""
    if not check_signatures_full(units):
        raise ExpandError("unit signatures do not cover {+-1}^n; orbit "
                          "enumeration by totally positive reps incomplete")
    assert xi.is_totally_positive(), "exponents are totally positive"
    reps = _orbit_reps(a_lat, abs(xi.norm()) / b_lat.norm(), units)
    return _pairs_from_reps(xi, reps, b_lat)


def coefficient(xi: Element, a_lat: IdealLattice, b_lat: IdealLattice,
                phi: LocFn, k: int, units: UnitGroupData) -> int:
    """N(a_lat)-scaled orbit sum; refuses non-integral output."""
    _check_k(phi, k)
    pairs = factorization_orbits(xi, a_lat, b_lat, units)
    total = _orbit_sum(pairs, phi, k) * a_lat.norm()
    if total.denominator != 1:
        raise ExpandError(f"coefficient at {xi} is not integral: {total}")
    return int(total)


def _orbit_sum(pairs, phi: LocFn, k: int) -> Fraction:
    ring = phi.ring
    total = Fraction(0)
    for a, b in pairs:
        ra = ring.reduce_element(a)
        rb = ring.reduce_element(b)
        if ra is None or rb is None:
            raise ExpandError(
                "factor not integral at the level; cusp ideals must be "
                "prime to the level")
        v = phi(ra, rb)
        if v:
            na = a.norm()
            sgn = 1 if na > 0 else -1
            total += v * sgn * na ** (k - 1)
    return total


def _check_k(phi: LocFn, k: int):
    if k < 1:
        raise ExpandError("weight k must be >= 1")
    if k == 1:
        zero = tuple([0] * phi.ring.order.n)
        for (_x, y) in phi.table:
            if y == zero:
                raise ExpandError("k = 1 needs phi(a, 0) = 0")


def expand(a_lat: IdealLattice, b_lat: IdealLattice, phi: LocFn, k: int,
           trace_bound, units: UnitGroupData,
           force_omit_constant: bool = False,
           meta: dict = None) -> QExpansion:
    """Expansion at the cusp (a_lat, b_lat) through the given trace bound.

    phi must be units-supported in the second variable so the constant
    term L(1-k, phi, a) vanishes; force_omit_constant drops the term
    regardless (sanity/oracle modes only).  With second-variable unit
    support the effective b lattice is b_lat meet the ring, since any b
    contributing a nonzero phi value is integral at every prime of the
    level; b_lat denominators supported at level primes are therefore
    harmless, anything else is refused.
    """
    _check_k(phi, k)
    if not phi.units_second and not force_omit_constant:
        raise ExpandError(
            "phi is not units-supported in the second variable; its "
            "constant term does not vanish and is out of scope")
    o = a_lat.order
    assert phi.ring.order is o
    if not check_signatures_full(units):
        raise ExpandError("unit signatures do not cover {+-1}^n; orbit "
                          "enumeration by totally positive reps incomplete")
    if phi.units_second:
        b_eff = b_lat.intersect(IdealLattice.unit_ideal(o))
        if b_eff != b_lat:
            # dropping non-integral b is sound only when every denominator
            # prime of b_lat divides the level, where unit support forces
            # contributing b to be integral
            denom_part = b_eff.mul(b_lat.inverse())
            level = phi.ring.modulus
            power = level
            tmax = max(1, int(denom_part.norm()).bit_length())
            for _ in range(tmax):
                if denom_part.contains_lattice(power):
                    break
                power = power.mul(level)
            else:
                raise ExpandError("b lattice has denominator primes away "
                                  "from the level")
    else:
        if b_lat.denom != 1:
            raise ExpandError("non-integral b lattice needs second-"
                              "variable unit support")
        b_eff = b_lat
    exps = a_lat.mul(b_eff)
    coeffs = {}
    na = a_lat.norm()
    xi_list = enumerate_totally_positive(exps, trace_bound)
    if xi_list:
        m_max = max(abs(xi.norm()) for xi in xi_list) / b_eff.norm()
        reps = _orbit_reps(a_lat, m_max, units)
        for xi in xi_list:
            pairs = _pairs_from_reps(xi, reps, b_eff)
            total = _orbit_sum(pairs, phi, k) * na
            if total.denominator != 1:
                raise ExpandError(f"coefficient at {xi} is not integral")
            if total:
                coeffs[xi] = int(total)
    m = dict(meta or {})
    m.setdefault("k", k)
    m.setdefault("phi", phi.label)
    m.setdefault("level", int(phi.ring.modulus.smallest_rational()))
    return QExpansion(o, exps, coeffs, Fraction(trace_bound), m)
