"""Finite quotient rings O/M for an integral full-rank ideal M.

Residues are canonical integer coordinate tuples: the unique coset
representative with i-th coordinate in [0, H[i][i]) for the HNF basis H of
M.  Reduction of non-integral field elements is supported when the
denominator is invertible modulo M after clearing primes shared with the
level; see reduce_element for the exact contract.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .linalg import hnf, solve_in_rowspan
from .nfcore import Element, IdealLattice


class ResidueRing:

    def __init__(self, order, modulus: IdealLattice):
        assert modulus.is_integral(), "modulus must be an integral ideal"
        self.order = order
        self.modulus = modulus
        self.H = [list(r) for r in modulus.mat]
        n = order.n
        # full-rank HNF of size n x n is upper triangular with positive diagonal
        for i in range(n):
            assert self.H[i][i] > 0 and all(self.H[i][j] == 0 for j in range(i))
        self.m0 = int(modulus.smallest_rational())
        self.size = 1
        for i in range(n):
            self.size *= self.H[i][i]
        self._unit_cache = None
        self._inv_cache = {}

    def reduce_int(self, v):
        """Canonical representative of an integer coordinate vector."""
        v = list(v)
        n = self.order.n
        for i in range(n):
            q = v[i] // self.H[i][i]
            if q:
                row = self.H[i]
                for j in range(i, n):
                    v[j] -= q * row[j]
        return tuple(v)

    def reduce_element(self, x: Element):
        """Residue of a field element, or None when x is not integral at the
        level.

        Exactness caveat: a denominator prime q with gcd(q, m0) > 1 is
        handled by exact coordinate division, which decides integrality
        correctly whenever every prime of q above the field divides the
        modulus (true for all shipped presets).  Configurations violating
        that are refused at expansion setup, not here.
        """
        d = 1
        for c in x.coords:
            d = d * c.denominator // math.gcd(d, c.denominator)
        y = [int(c * d) for c in x.coords]
        if d == 1:
            return self.reduce_int(y)
        # split d into the part sharing primes with m0 and the rest
        d2, rest = 1, d
        g = math.gcd(rest, self.m0)
        while g > 1:
            d2 *= g
            rest //= g
            g = math.gcd(rest, self.m0)
        d1 = rest
        if d2 > 1:
            if any(c % d2 for c in y):
                return None
            y = [c // d2 for c in y]
        if d1 > 1:
            k = pow(d1, -1, self.m0)
            y = [k * c for c in y]
        return self.reduce_int(y)

    def zero(self):
        return tuple(0 for _ in range(self.order.n))

    def one(self):
        return self.reduce_int([1] + [0] * (self.order.n - 1))

    def add(self, u, v):
        return self.reduce_int([a + b for a, b in zip(u, v)])

    def neg(self, u):
        return self.reduce_int([-a for a in u])

    def mul(self, u, v):
        return self.reduce_int(self.order.mul_int(u, v))

    def pow(self, u, k):
        out = self.one()
        base = u
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def residues(self):
        """All canonical representatives (the HNF box)."""
        ranges = [range(self.H[i][i]) for i in range(self.order.n)]
        return itertools.product(*ranges)

    def is_unit(self, v):
        """v generates, with M, the whole order."""
        rows = self.order.mult_matrix_int(v) + self.H
        G = hnf(rows, self.order.n)
        return all(G[i][i] == 1 for i in range(self.order.n))

    def inverse(self, v):
        v = tuple(v)
        if v in self._inv_cache:
            return self._inv_cache[v]
        n = self.order.n
        rows = self.order.mult_matrix_int(v) + self.H
        target = [1] + [0] * (n - 1)
        sol = solve_in_rowspan(rows, target)
        if sol is None:
            raise ZeroDivisionError("residue is not a unit")
        w = self.reduce_int(sol[:n])
        self._inv_cache[v] = w
        return w

    def units(self):
        if self._unit_cache is None:
            self._unit_cache = [r for r in self.residues() if self.is_unit(r)]
        return self._unit_cache

    def lift(self, v) -> Element:
        return self.order.el(list(v))

    def __len__(self):
        return self.size


def global_unit_residues(ring: ResidueRing, unit_gens):
    """Closure of the images of the global units (and -1) in (O/M)^x.

    Returns a dict residue -> norm sign.  When some global unit of norm -1
    reduces to 1 mod M the sign is not a function of the residue; every
    value is then 0 and odd-weight symmetrizations must treat the seed as
    collapsing.
    """
    o = ring.order
    minus_one = ring.reduce_int([-1] + [0] * (o.n - 1))
    gens = [(ring.one(), 1), (minus_one, (-1) ** o.n)]
    for u in unit_gens:
        r = ring.reduce_element(u)
        assert r is not None and ring.is_unit(r)
        s = 1 if u.norm() > 0 else -1
        gens.append((r, s))
        gens.append((ring.inverse(r), s))
    pairs = set()
    frontier = [(ring.one(), 1)]
    while frontier:
        pr = frontier.pop()
        if pr in pairs:
            continue
        pairs.add(pr)
        for g, sg in gens:
            frontier.append((ring.mul(pr[0], g), pr[1] * sg))
    if (ring.one(), -1) in pairs:
        return {r: 0 for r, _ in pairs}
    return {r: s for r, s in pairs}
