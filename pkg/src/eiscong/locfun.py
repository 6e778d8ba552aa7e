"""Locally constant functions on pairs of residue classes at finite level.

A LocFn is a sparse integer-valued table on (r/m) x (r/m) together with a
weight k; validity means unit-homogeneity phi(e^-1 x, e y) = N(e)^k phi(x,y)
for every global unit residue e.  Values stay in Z; reduction mod p happens
only in the congruence checker.
"""
from dataclasses import dataclass
from fractions import Fraction

from . import cyclotomic as cy
from .nfcore import IdealLattice, UnitGroupData
from .residue import ResidueRing, global_unit_residues
from .towers import TowerData, gamma_on_residue, is_gamma_stable


class LocFnError(ValueError):
    pass


@dataclass
class LocFn:
    ring: ResidueRing
    table: dict
    weight: int
    units_first: bool
    units_second: bool
    label: str

    def __call__(self, x, y) -> int:
        return self.table.get((x, y), 0)

    def support(self):
        return sorted(self.table)

    def __repr__(self):
        return (f"<LocFn {self.label}: k={self.weight} "
                f"|supp|={len(self.table)}>")


def _clean_table(ring: ResidueRing, table: dict) -> dict:
    out = {}
    for (x, y), v in table.items():
        x = ring.reduce_int(list(x))
        y = ring.reduce_int(list(y))
        v = int(v)
        if v:
            out[(x, y)] = v
    return out


_SIGN_CACHE = {}


def unit_sign_map(ring: ResidueRing, units: UnitGroupData) -> dict:
    key = (ring.order.label, ring.modulus, units.gens)
    if key not in _SIGN_CACHE:
        _SIGN_CACHE[key] = global_unit_residues(ring, units.gens)
    return _SIGN_CACHE[key]


def _support_flags(ring: ResidueRing, table: dict):
    uf = all(ring.is_unit(x) for (x, _y) in table)
    us = all(ring.is_unit(y) for (_x, y) in table)
    return uf, us


def check_homogeneity(ring: ResidueRing, table: dict, k: int,
                      units: UnitGroupData):
    """None if homogeneous of weight k, else a witness (eps, x, y).

    Checking the unit generators suffices: the relation for a product of
    units follows from the relation for each factor.
    """
    signs = unit_sign_map(ring, units)
    collapsed = any(s == 0 for s in signs.values())
    gens = [ring.reduce_element(u) for u in units.gens]
    gens.append(ring.reduce_element(-ring.order.one()))
    for (x, y), v in table.items():
        if collapsed and k % 2 == 1:
            # a norm -1 unit is congruent to a norm +1 unit at this
            # level, so odd weights force the zero function
            return (gens[-1], x, y)
        for eps in gens:
            w = 1 if k % 2 == 0 else signs[eps]
            lhs = table.get((ring.mul(ring.inverse(eps), x),
                             ring.mul(eps, y)), 0)
            if lhs != w * v:
                return (eps, x, y)
    return None


def make_locfun(ring: ResidueRing, table: dict, k: int,
                units: UnitGroupData, label: str = "phi",
                enforce: bool = True) -> LocFn:
    assert k >= 0
    table = _clean_table(ring, table)
    if enforce:
        witness = check_homogeneity(ring, table, k, units)
        if witness is not None:
            eps, x, y = witness
            raise LocFnError(
                f"homogeneity of weight {k} fails at eps={eps}, x={x}, "
                f"y={y}")
    uf, us = _support_flags(ring, table)
    return LocFn(ring, table, k, uf, us, label)


# -- constructors

def indicator_pair(ring, x, y, k, units, label=None, enforce=True):
    x = ring.reduce_int(list(x))
    y = ring.reduce_int(list(y))
    return make_locfun(ring, {(x, y): 1}, k, units,
                       label or f"ind{x}{y}", enforce=enforce)


def homogenized(ring, units, seed_table, k, label="phi"):
    """Spread a seed table over the global unit orbit with weight-k signs;
    None when the level collapses unit norm signs at odd k, or when the
    symmetrization cancels to zero."""
    signs = unit_sign_map(ring, units)
    if k % 2 == 1 and any(s == 0 for s in signs.values()):
        return None
    seed = _clean_table(ring, seed_table)
    acc = {}
    for (x, y), v in seed.items():
        for eps, s in signs.items():
            w = 1 if k % 2 == 0 else s
            key = (ring.mul(eps, x), ring.mul(ring.inverse(eps), y))
            acc[key] = acc.get(key, 0) + w * v
    acc = {kk: vv for kk, vv in acc.items() if vv}
    if not acc:
        return None
    return make_locfun(ring, acc, k, units, label)


def gamma_symmetrized(phi: LocFn, tower: TowerData, units,
                      label=None) -> LocFn:
    assert phi.ring.order is tower.top
    acc = {}
    for (x, y), v in phi.table.items():
        for i in range(tower.p):
            key = (gamma_on_residue(tower, phi.ring, x, i),
                   gamma_on_residue(tower, phi.ring, y, i))
            acc[key] = acc.get(key, 0) + v
    return make_locfun(phi.ring, acc, phi.weight, units,
                       label or phi.label + "-gamma")


def symmetrized_indicator(ring, tower, units, x, y, k, label=None):
    """Unit-homogenized, Gamma-symmetrized indicator of one residue pair;
    None if the seed collapses."""
    x = ring.reduce_int(list(x))
    y = ring.reduce_int(list(y))
    base = homogenized(ring, units, {(x, y): 1}, k,
                       label or f"sym{x}{y}k{k}")
    if base is None:
        return None
    return gamma_symmetrized(base, tower, units, base.label)


def constant_on_units(ring, k, units, label="unitconst"):
    assert k % 2 == 0, "unit-constant functions need even weight"
    table = {(u, v): 1 for u in ring.units() for v in ring.units()}
    return make_locfun(ring, table, k, units, label)


def constant_one(ring, k, units, label="one"):
    """1 on every residue pair; homogeneous only in even weight."""
    table = {(u, v): 1 for u in ring.residues() for v in ring.residues()}
    return make_locfun(ring, table, k, units, label)


# -- operations

def gamma_invariant(phi: LocFn, tower: TowerData) -> bool:
    assert phi.ring.order is tower.top
    if not is_gamma_stable(tower, phi.ring.modulus):
        raise LocFnError("level ideal is not Gamma-stable")
    for (x, y), v in phi.table.items():
        for i in range(1, tower.p):
            if phi(gamma_on_residue(tower, phi.ring, x, i),
                   gamma_on_residue(tower, phi.ring, y, i)) != v:
                return False
    return True


def pullback_ver(phi_top: LocFn, tower: TowerData,
                 m_base: IdealLattice, units_base: UnitGroupData,
                 label=None) -> LocFn:
    """phi(x, y) = phi_top(ver x, ver y) on base residues; the extended
    modulus must match phi_top's level.  Weight carries over unchanged
    (unit norm parity is preserved because [F':F] is odd)."""
    ring_f, ring_top, table = tower.residue_ver(m_base)
    assert ring_top.modulus == phi_top.ring.modulus, \
        "pullback level mismatch"
    acc = {}
    for r in ring_f.residues():
        for s in ring_f.residues():
            v = phi_top(table[r], table[s])
            if v:
                acc[(r, s)] = v
    return make_locfun(ring_f, acc, phi_top.weight, units_base,
                       label or phi_top.label + "-ver")


def add_locfun(a: LocFn, b: LocFn, units, label=None) -> LocFn:
    assert a.ring is b.ring and a.weight == b.weight
    acc = dict(a.table)
    for key, v in b.table.items():
        acc[key] = acc.get(key, 0) + v
    return make_locfun(a.ring, acc, a.weight, units,
                       label or f"({a.label}+{b.label})")


def mul_locfun(a: LocFn, b: LocFn, units, label=None) -> LocFn:
    assert a.ring is b.ring
    acc = {}
    for key, v in a.table.items():
        w = b.table.get(key, 0)
        if w:
            acc[key] = v * w
    return make_locfun(a.ring, acc, a.weight + b.weight, units,
                       label or f"({a.label}*{b.label})")


@dataclass
class FourierTable:
    ring: ResidueRing
    m: int
    values: dict
    prefactor: Fraction
    mode: str

    def __call__(self, x, y):
        return self.values.get((x, y), cy.zero(self.m))


def partial_fourier(phi: LocFn, mode: str = "none",
                    p: int = None) -> FourierTable:
    """First-variable finite Fourier transform
    P(x, y) = sum_a phi(a, y) zeta_m^{Tr(a x)}, m the rational level.

    The prefactor is bookkept separately per mode and never folded into
    the cyclotomic values.
    """
    ring = phi.ring
    m = int(ring.modulus.smallest_rational())
    if mode == "none":
        pre = Fraction(1)
    elif mode == "inverse-cardinality":
        pre = Fraction(1, len(ring))
    elif mode == "p-mass":
        if p is None:
            raise LocFnError("p-mass mode needs the prime p")
        alpha = 0
        pl = IdealLattice.from_integer(ring.order, p)
        probe = ring.modulus
        while pl.contains_lattice(probe):
            probe = probe.mul(pl.inverse())
            alpha += 1
        f_part = probe
        if f_part.add(pl) != IdealLattice.unit_ideal(ring.order):
            raise LocFnError("level is not of the form p^a f with f "
                             "prime to p")
        pre = Fraction(p ** (alpha * ring.order.n), int(f_part.norm()))
    else:
        raise LocFnError(f"unknown normalization mode {mode!r}")
    ys = sorted({y for (_x, y) in phi.table})
    values = {}
    for x in ring.residues():
        lx = ring.lift(x)
        for y in ys:
            acc = cy.zero(m)
            for a in ring.residues():
                v = phi(a, y)
                if v:
                    t = (ring.lift(a) * lx).trace()
                    assert t.denominator == 1
                    acc = acc + cy.zeta(m, int(t) % m) * v
            if not acc.is_zero():
                values[(x, y)] = acc
    return FourierTable(ring, m, values, pre, mode)
