"""Cyclic relative extensions F'/F of odd prime degree.

A tower is described by presets: the two orders, the degree p, the image of
the top generator under a generator gamma of Gal(F'/F), and (for base
fields other than Q) the image of the base generator inside the top field.
Everything else (embedding matrix, Galois matrices, relative trace/norm,
transfer map on residues, relative different) is derived here.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import exactpoly as xp
from . import linalg
from .nfcore import (Element, FieldOrder, IdealLattice, UnitGroupData,
                     canonical_orbit_rep, different_ideal, is_unit)
from .residue import ResidueRing


class TowerError(ValueError):
    pass


def _frac_eval_poly(coeffs, x: Element):
    acc = x.order.zero()
    for c in reversed(coeffs):
        acc = acc * x + Fraction(c)
    return acc


@dataclass
class TowerData:
    label: str
    base: FieldOrder
    top: FieldOrder
    p: int
    gamma_gen_image: Element
    base_gen_image: Element
    _gal_mats: list = field(default=None, repr=False)
    _embed_rows: list = field(default=None, repr=False)

    def __post_init__(self):
        if self.p < 3 or any(self.p % q == 0 for q in range(2, self.p)):
            raise TowerError("tower degree must be an odd prime >= 3")
        if self.top.n != self.p * self.base.n:
            raise TowerError("degree mismatch between orders and p")
        if self.base.min_poly is None:
            raise TowerError("base order must carry a power basis")
        self._embed_rows = [[Fraction(c) for c in
                             (self.base_gen_image ** i).coords]
                            for i in range(self.base.n)]
        g = self.gamma_gen_image
        if not _frac_eval_poly(self.top.min_poly, g).is_zero():
            raise TowerError("gamma image is not a conjugate of the generator")
        mats = [[[Fraction(int(i == j)) for j in range(self.top.n)]
                 for i in range(self.top.n)]]
        pow_rows = [self.top.one().coords]
        for _ in range(1, self.top.n):
            pow_rows.append((self.top.el(pow_rows[-1]) * g).coords)
        G = [[Fraction(c) for c in row] for row in pow_rows]
        for _ in range(1, self.p):
            mats.append(linalg.mat_mul(mats[-1], G))
        self._gal_mats = mats
        if self.galois(self.top.gen(), self.p) != self.top.gen():
            raise TowerError("gamma does not have order dividing p")
        if self.galois(self.top.gen()) == self.top.gen():
            raise TowerError("gamma is the identity")
        if self.base.n > 1:
            eb = self.embed(self.base.gen())
            if self.galois(eb) != eb:
                raise TowerError("gamma moves the embedded base field")
            if not _frac_eval_poly(self.base.min_poly, eb).is_zero():
                raise TowerError("base generator image violates its minimal polynomial")

    def embed(self, x) -> Element:
        if isinstance(x, Element):
            if x.order is self.top:
                return x
            assert x.order is self.base
            coords = x.coords
        else:
            coords = (Fraction(x),) + (Fraction(0),) * (self.base.n - 1)
        out = [Fraction(0)] * self.top.n
        for c, row in zip(coords, self._embed_rows):
            if c:
                for j in range(self.top.n):
                    out[j] += Fraction(c) * row[j]
        return self.top.el(out)

    def galois(self, x: Element, i: int = 1) -> Element:
        M = self._gal_mats[i % self.p]
        out = [Fraction(0)] * self.top.n
        for c, row in zip(x.coords, M):
            if c:
                for j in range(self.top.n):
                    out[j] += Fraction(c) * row[j]
        return self.top.el(out)

    def conjugates(self, x: Element):
        return [self.galois(x, i) for i in range(self.p)]

    def in_base(self, y: Element):
        """Exact descent along the embedding, or None."""
        sol = linalg.solve_fraction_rect(self._embed_rows, list(y.coords))
        if sol is None:
            return None
        return self.base.el(sol)

    def rel_trace(self, y: Element) -> Element:
        acc = self.top.zero()
        for c in self.conjugates(y):
            acc = acc + c
        down = self.in_base(acc)
        if down is None:
            raise TowerError("relative trace left the base field")
        return down

    def rel_norm(self, y: Element) -> Element:
        acc = self.top.one()
        for c in self.conjugates(y):
            acc = acc * c
        down = self.in_base(acc)
        if down is None:
            raise TowerError("relative norm left the base field")
        return down

    def extend_ideal(self, I: IdealLattice) -> IdealLattice:
        assert I.order is self.base
        elems = []
        for b in I.basis_elements():
            eb = self.embed(b)
            for j in range(self.top.n):
                elems.append(eb * self.top.el(self.top._unit_vec(j)))
        return IdealLattice.from_elements(self.top, elems)

    def trace_image(self, I: IdealLattice) -> IdealLattice:
        assert I.order is self.top
        return IdealLattice.from_elements(
            self.base, [self.rel_trace(b) for b in I.basis_elements()])

    def rel_different(self) -> IdealLattice:
        d_top = different_ideal(self.top)
        d_base = self.extend_ideal(different_ideal(self.base))
        return d_top.mul(d_base.inverse())

    def residue_ver(self, m: IdealLattice):
        """Transfer map at finite level m: (r/m) -> (r'/mr') residue table."""
        ring_f = ResidueRing(self.base, m)
        ring_top = ResidueRing(self.top, self.extend_ideal(m))
        table = {}
        for r in ring_f.residues():
            img = self.embed(self.base.el(r))
            table[r] = ring_top.reduce_element(img)
        return ring_f, ring_top, table

    def rel_different_with_xi(self, units: UnitGroupData, depth: int = 6):
        """The relative different plus a totally positive generator search.

        Returns (ideal, xi or None, all_found).  The generator search only
        runs when the ideal is visibly principal: over Q with a power basis
        it is generated by f'(gen).
        """
        D = self.rel_different()
        gen = None
        if self.base.n == 1 and self.top.min_poly is not None:
            f = self.top.min_poly
            gen = _frac_eval_poly(xp.deriv([Fraction(c) for c in f]),
                                  self.top.gen())
            if IdealLattice.principal(gen) != D:
                gen = None
        if gen is None:
            return D, None, []
        rank = len(units.gens)
        found = []
        for exps in product(range(-depth, depth + 1), repeat=rank):
            u = self.top.one()
            for e, ug in zip(exps, units.gens):
                if e:
                    u = u * ug ** e
            for cand in (gen * u, -(gen * u)):
                if cand.is_totally_positive():
                    found.append(cand)
        found = sorted(set(found), key=lambda z: z.canonical_key())
        xi = found[0] if found else None
        return D, xi, found


def gamma_on_residue(tower: TowerData, ring: ResidueRing, r, i: int = 1):
    """Image of a top-order residue under gamma^i; None if the lift's image
    does not reduce (cannot happen for gamma-stable moduli)."""
    lift = ring.lift(r)
    return ring.reduce_element(tower.galois(lift, i))


def is_gamma_stable(tower: TowerData, I: IdealLattice) -> bool:
    moved = IdealLattice.from_elements(
        tower.top, [tower.galois(b) for b in I.basis_elements()])
    return moved == I
