"""Orders in totally real number fields: exact elements, HNF ideal lattices,
certified real embeddings, unit data, and bounded enumeration.

Elements are exact rational coordinate vectors with respect to a fixed
integral basis.  Ideals are full-rank row lattices in Hermite normal form
over a minimal denominator, so equality of ideals is equality of the stored
data.  Signs at real embeddings are certified by refining rational isolating
intervals of the defining root; floats appear only in search-box sizing,
never in an accepted value.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from . import exactpoly as xp
from .linalg import (hnf, lattice_intersect, mat_det, mat_inv_fraction,
                     mat_mul, kernel_rows, solve_fraction, solve_in_rowspan)

_SIGN_PREC_CAP = 1 << 16


class FieldOrder:
    """An order in a number field, given by a monic defining polynomial or a
    raw multiplication table.

    Monogenic construction uses the power basis of a root; embeddings are
    then available and ordered by ascending root value.  Table construction
    (used for CM quadratic extensions) carries no real embeddings.
    """

    def __init__(self, label, table, basis_traces, min_poly=None,
                 totally_real=False):
        self.label = label
        self.n = len(table)
        self.table = table  # table[i][j] = integer coords of e_i * e_j
        self.basis_traces = tuple(basis_traces)
        self.min_poly = min_poly
        self.totally_real = totally_real
        self.gram = tuple(
            tuple(self.trace_int(self.mul_int(self._unit_vec(i),
                                              self._unit_vec(j)))
                  for j in range(self.n))
            for i in range(self.n))
        self.disc = mat_det([list(r) for r in self.gram])
        self._roots = None
        self._root_width_exp = 0
        self._caches = {}

    # -- constructors

    @staticmethod
    def from_min_poly(label, coeffs, totally_real=True):
        """Order Z[x]/(f) for monic irreducible f with integer coefficients,
        coeffs listed low degree first."""
        import sympy

        f = tuple(int(c) for c in coeffs)
        n = len(f) - 1
        assert f[-1] == 1, "defining polynomial must be monic"
        if n > 1:
            X = sympy.Symbol("x")
            poly = sympy.Poly(sum(c * X**i for i, c in enumerate(f)), X)
            assert poly.is_irreducible, "defining polynomial must be irreducible"
        # powers of the root up to degree 2n-2, reduced mod f
        powers = [[0] * n for _ in range(2 * n - 1)]
        for k in range(min(n, 2 * n - 1)):
            powers[k][k] = 1
        for k in range(n, 2 * n - 1):
            prev = powers[k - 1]
            shifted = [0] + prev[:]
            lead, shifted = shifted[n], shifted[:n]
            if lead:
                for i in range(n):
                    shifted[i] -= lead * f[i]
            powers[k] = shifted
        table = tuple(tuple(tuple(powers[i + j]) for j in range(n))
                      for i in range(n))
        traces = xp.power_sums([Fraction(c) for c in f], 2 * n - 1)
        assert all(t.denominator == 1 for t in traces)
        order = FieldOrder(label, table, [int(t) for t in traces[:n]],
                           min_poly=f, totally_real=totally_real)
        if totally_real and n > 1:
            assert len(xp.isolate_real_roots([Fraction(c) for c in f])) == n, \
                "not totally real"
        return order

    @staticmethod
    def from_mult_table(label, table):
        n = len(table)
        traces = []
        for i in range(n):
            m = [table[i][j] for j in range(n)]
            traces.append(sum(m[j][j] for j in range(n)))
        return FieldOrder(label, table, traces, totally_real=False)

    # -- raw integer-vector arithmetic (hot paths)

    def _unit_vec(self, i):
        return tuple(1 if j == i else 0 for j in range(self.n))

    def mul_int(self, xv, yv):
        n = self.n
        out = [0] * n
        T = self.table
        for i in range(n):
            a = xv[i]
            if a:
                Ti = T[i]
                for j in range(n):
                    b = yv[j]
                    if b:
                        ab = a * b
                        row = Ti[j]
                        for k in range(n):
                            out[k] += ab * row[k]
        return tuple(out)

    def trace_int(self, xv):
        return sum(a * t for a, t in zip(xv, self.basis_traces))

    def mult_matrix_int(self, xv):
        """Rows are integer coords of x * e_i."""
        return [list(self.mul_int(xv, self._unit_vec(i))) for i in range(self.n)]

    def norm_int(self, xv):
        return mat_det(self.mult_matrix_int(xv))

    # -- element API

    def el(self, coords):
        return Element(self, tuple(Fraction(c) for c in coords))

    def zero(self):
        return self.el([0] * self.n)

    def one(self):
        return self.el([1] + [0] * (self.n - 1))

    def gen(self):
        assert self.n > 1
        return self.el([0, 1] + [0] * (self.n - 2))

    def from_int(self, k):
        return self.el([k] + [0] * (self.n - 1))

    def add(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def mul(self, x, y):
        d = 1
        for c in itertools.chain(x, y):
            d = d * c.denominator // math.gcd(d, c.denominator)
        xi = tuple(int(c * d) for c in x)
        yi = tuple(int(c * d) for c in y)
        return tuple(Fraction(c, d * d) for c in self.mul_int(xi, yi))

    def inverse(self, x):
        rows = [[Fraction(c) for c in row]
                for row in self._mult_matrix_frac(x)]
        e0 = [Fraction(1)] + [Fraction(0)] * (self.n - 1)
        return tuple(solve_fraction(rows, e0))

    def _mult_matrix_frac(self, x):
        return [[sum(x[j] * Fraction(self.table[j][i][k])
                     for j in range(self.n)) for k in range(self.n)]
                for i in range(self.n)]

    def norm(self, x):
        d = 1
        for c in x:
            d = d * c.denominator // math.gcd(d, c.denominator)
        xi = tuple(int(c * d) for c in x)
        return Fraction(self.norm_int(xi), d ** self.n)

    def trace(self, x):
        return sum(a * t for a, t in zip(x, self.basis_traces))

    # -- embeddings

    def root_intervals(self, width_exp=64):
        """Isolating intervals of the defining root at width 2^-width_exp,
        ascending.  Only for monogenic totally real orders."""
        assert self.min_poly is not None and self.n > 1
        f = [Fraction(c) for c in self.min_poly]
        if self._roots is None:
            self._roots = xp.isolate_real_roots(f)
            self._root_width_exp = 0
        if self._root_width_exp < width_exp:
            w = Fraction(1, 1 << width_exp)
            self._roots = [xp.refine_root(f, lo, hi, w)
                           for lo, hi in self._roots]
            self._root_width_exp = width_exp
        return self._roots

    def embed_intervals(self, x, width_exp=64):
        if self.n == 1:
            return [(x[0], x[0])]
        out = []
        for box in self.root_intervals(width_exp):
            out.append(xp.eval_interval(list(x), box))
        return out

    def embed_floats(self, x):
        return [float((lo + hi) / 2) for lo, hi in self.embed_intervals(x)]

    def sign_at(self, x, i):
        """Certified sign of the i-th real embedding of x."""
        if all(c == 0 for c in x):
            return 0
        if self.n == 1:
            return 1 if x[0] > 0 else -1
        prec = 64
        while True:
            lo, hi = self.embed_intervals(x, prec)[i]
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            prec *= 2
            # terminates: x != 0 and the defining polynomial is irreducible,
            # so no coordinate polynomial of lower degree vanishes at the root
            if prec > _SIGN_PREC_CAP:
                raise RuntimeError("sign certification exceeded precision cap")

    def signs(self, x):
        return tuple(self.sign_at(x, i) for i in range(self.n))

    def is_totally_positive(self, x):
        if self.trace(x) <= 0:
            return False
        return all(self.sign_at(x, i) > 0 for i in range(self.n))

    def canonical_key(self, x):
        return (self.trace(x), tuple(x))

    def __repr__(self):
        return f"FieldOrder({self.label}, n={self.n})"


@dataclass(frozen=True)
class Element:
    """Field element as exact coordinates over its order's basis."""
    order: FieldOrder
    coords: tuple

    def __add__(self, other):
        other = self._co(other)
        return Element(self.order, self.order.add(self.coords, other.coords))

    def __sub__(self, other):
        other = self._co(other)
        return Element(self.order, tuple(a - b for a, b in
                                         zip(self.coords, other.coords)))

    def __mul__(self, other):
        other = self._co(other)
        return Element(self.order, self.order.mul(self.coords, other.coords))

    def __truediv__(self, other):
        other = self._co(other)
        inv = self.order.inverse(other.coords)
        return Element(self.order, self.order.mul(self.coords, inv))

    def __neg__(self):
        return Element(self.order, tuple(-c for c in self.coords))

    def __pow__(self, k):
        if k < 0:
            return (self.order.el(self.order.inverse(self.coords))) ** (-k)
        out = self.order.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def _co(self, other):
        if isinstance(other, Element):
            assert other.order is self.order
            return other
        return self.order.from_int(other) if isinstance(other, int) \
            else self.order.el([other] + [0] * (self.order.n - 1))

    def norm(self):
        return self.order.norm(self.coords)

    def trace(self):
        return self.order.trace(self.coords)

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def is_integral(self):
        return all(c.denominator == 1 for c in self.coords)

    def int_coords(self):
        assert self.is_integral()
        return tuple(int(c) for c in self.coords)

    def is_totally_positive(self):
        return self.order.is_totally_positive(self.coords)

    def canonical_key(self):
        return self.order.canonical_key(self.coords)

    def __repr__(self):
        return f"<{self.order.label}: {list(self.coords)}>"


def is_unit(x: Element) -> bool:
    if x.is_zero() or not x.is_integral():
        return False
    return abs(x.norm()) == 1


def unit_quotient(a: Element, b: Element):
    """a/b if it is a unit of the order, else None."""
    if b.is_zero():
        return None
    q = a / b
    return q if is_unit(q) else None


class IdealLattice:
    """Full-rank fractional ideal: integer HNF basis over a minimal positive
    denominator.  Equal ideals have identical stored data."""

    __slots__ = ("order", "mat", "denom", "_hash")

    def __init__(self, order, mat, denom):
        self.order = order
        self.mat = tuple(tuple(r) for r in mat)
        self.denom = denom
        self._hash = hash((order.label, self.mat, denom))

    @staticmethod
    def from_rows(order, rows):
        """Canonicalize a spanning set of rational coordinate rows."""
        d = 1
        for row in rows:
            for c in row:
                c = Fraction(c)
                d = d * c.denominator // math.gcd(d, c.denominator)
        ints = [[int(Fraction(c) * d) for c in row] for row in rows]
        H = hnf(ints, order.n)
        if len(H) != order.n:
            raise ValueError("lattice is not full rank")
        g = d
        for row in H:
            for c in row:
                g = math.gcd(g, c)
        if g > 1:
            H = [[c // g for c in row] for row in H]
            d //= g
        return IdealLattice(order, H, d)

    @staticmethod
    def unit_ideal(order):
        eye = [[1 if i == j else 0 for j in range(order.n)]
               for i in range(order.n)]
        return IdealLattice(order, eye, 1)

    @staticmethod
    def from_elements(order, elems):
        rows = []
        for e in elems:
            coords = e.coords if isinstance(e, Element) else tuple(
                Fraction(c) for c in e)
            for i in range(order.n):
                rows.append(order.mul(coords,
                                      tuple(Fraction(v) for v in
                                            order._unit_vec(i))))
        return IdealLattice.from_rows(order, rows)

    @staticmethod
    def principal(x: Element):
        return IdealLattice.from_elements(x.order, [x])

    @staticmethod
    def from_integer(order, k):
        return IdealLattice.principal(order.from_int(k))

    def __eq__(self, other):
        return (isinstance(other, IdealLattice) and self.order is other.order
                and self.mat == other.mat and self.denom == other.denom)

    def __hash__(self):
        return self._hash

    def basis_elements(self):
        return [self.order.el([Fraction(c, self.denom) for c in row])
                for row in self.mat]

    def norm(self):
        """Ideal norm as a positive rational: covolume relative to the order."""
        return abs(Fraction(mat_det([list(r) for r in self.mat]),
                            self.denom ** self.order.n))

    def is_integral(self):
        return self.denom == 1

    def contains(self, x: Element):
        v = [c * self.denom for c in x.coords]
        if any(c.denominator != 1 for c in v):
            return False
        return solve_in_rowspan([list(r) for r in self.mat],
                                [int(c) for c in v]) is not None

    def contains_lattice(self, other):
        return all(self.contains(b) for b in other.basis_elements())

    def mul(self, other):
        assert self.order is other.order
        o = self.order
        rows = []
        for r1 in self.mat:
            for r2 in other.mat:
                rows.append(o.mul_int(r1, r2))
        d = self.denom * other.denom
        return IdealLattice.from_rows(
            o, [[Fraction(c, d) for c in row] for row in rows])

    def __mul__(self, other):
        if isinstance(other, Element):
            other = IdealLattice.principal(other)
        return self.mul(other)

    def add(self, other):
        rows = ([[Fraction(c, self.denom) for c in r] for r in self.mat]
                + [[Fraction(c, other.denom) for c in r] for r in other.mat])
        return IdealLattice.from_rows(self.order, rows)

    def intersect(self, other):
        d = self.denom * other.denom
        A = [[c * other.denom for c in r] for r in self.mat]
        B = [[c * self.denom for c in r] for r in other.mat]
        inter = lattice_intersect(A, B, self.order.n)
        return IdealLattice.from_rows(
            self.order, [[Fraction(c, d) for c in row] for row in inter])

    def scale(self, q):
        q = Fraction(q)
        return IdealLattice.from_rows(
            self.order,
            [[Fraction(c, self.denom) * q for c in r] for r in self.mat])

    def colon(self, other):
        """(self : other) = {x : x * other inside self}."""
        o = self.order
        n = o.n
        mat_inv = mat_inv_fraction([list(r) for r in self.mat])
        blocks = []
        for row in other.mat:
            mg = o.mult_matrix_int(row)  # rows: coords of g * e_i
            # condition: v * mg / other.denom lands in self
            blocks.append(mat_mul([[Fraction(c, other.denom) for c in r]
                                   for r in mg],
                                  [[Fraction(c) * self.denom for c in r]
                                   for r in mat_inv]))
        # stack all conditions: v * P integral, P rational n x (n*k)
        P = [[blk[i][j] for blk in blocks for j in range(n)] for i in range(n)]
        dd = 1
        for row in P:
            for c in row:
                dd = dd * c.denominator // math.gcd(dd, c.denominator)
        Pi = [[int(c * dd) for c in row] for row in P]
        m = len(Pi[0])
        # solution denominators divide the det of any nonsingular n x n minor
        D = None
        for cols in itertools.combinations(range(m), n):
            sub = [[Pi[i][c] for c in cols] for i in range(n)]
            det = mat_det(sub)
            if det != 0:
                D = abs(det)
                break
        assert D is not None, "condition matrix lost rank"
        # substitute v = u / D: then u * Pi must lie in (D * dd) Z^m
        big = [[Pi[i][j] for j in range(m)] for i in range(n)]
        for i in range(m):
            big.append([D * dd if j == i else 0 for j in range(m)])
        rows = []
        for v in kernel_rows(big, m):
            u = v[:n]
            if any(u):
                rows.append([Fraction(c, D) for c in u])
        if not rows:
            raise ValueError("colon ideal computation found empty lattice")
        return IdealLattice.from_rows(o, rows)

    def inverse(self):
        """Inverse fractional ideal (order must be maximal at all divisors)."""
        return IdealLattice.unit_ideal(self.order).colon(self)

    def dual(self):
        """Trace-form dual lattice {x : Tr(x * self) integral}."""
        o = self.order
        G = [list(r) for r in o.gram]
        M = [[Fraction(c, self.denom) for c in r] for r in self.mat]
        GMt = mat_mul(G, [[M[j][i] for j in range(o.n)] for i in range(o.n)])
        W = mat_inv_fraction(GMt)
        return IdealLattice.from_rows(o, W)

    def pow(self, k):
        if k == 0:
            return IdealLattice.unit_ideal(self.order)
        if k < 0:
            return self.inverse().pow(-k)
        out = None
        base = self
        while k:
            if k & 1:
                out = base if out is None else out.mul(base)
            base = base.mul(base)
            k >>= 1
        return out

    def smallest_rational(self):
        """Least positive rational in the ideal (generator of self cap Q)."""
        one_row = [[1] + [0] * (self.order.n - 1)]
        inter = lattice_intersect(one_row,
                                  [list(r) for r in self.mat], self.order.n)
        assert len(inter) >= 1 and inter[0][0] != 0
        return Fraction(abs(inter[0][0]), self.denom)

    def __repr__(self):
        return f"Ideal({self.order.label}, {self.mat}, /{self.denom})"


def different_ideal(order) -> IdealLattice:
    """The different: inverse of the trace dual of the maximal order."""
    return IdealLattice.unit_ideal(order).dual().inverse()


@dataclass(frozen=True)
class PrimeIdeal:
    ideal: IdealLattice
    p: int
    e: int
    f: int

    @property
    def order(self):
        return self.ideal.order

    def residue_size(self):
        return self.p ** self.f


def factor_rational_prime(order, q):
    """Prime ideals above q in a monogenic order of index one, via the
    factorization of the defining polynomial mod q.  Returns PrimeIdeals
    sorted by their ideal data."""
    assert order.min_poly is not None
    if order.n == 1:
        return [PrimeIdeal(IdealLattice.from_integer(order, q), q, 1, 1)]
    import sympy

    X = sympy.Symbol("x")
    poly = sympy.Poly(sum(c * X**i for i, c in enumerate(order.min_poly)),
                      X, modulus=q, symmetric=False)
    out = []
    for fac, mult in poly.factor_list()[1]:
        coeffs = [int(c) % q for c in reversed(fac.all_coeffs())]
        g_theta = order.el(coeffs + [0] * (order.n - len(coeffs)))
        P = IdealLattice.from_elements(order, [order.from_int(q), g_theta])
        out.append(PrimeIdeal(P, q, mult, fac.degree()))
    out.sort(key=lambda P: (P.f, P.ideal.mat))
    assert sum(P.e * P.f for P in out) == order.n
    return out


_inv_cache = {}


def _prime_inverse(P: PrimeIdeal):
    key = (id(P.ideal.order), P.ideal.mat, P.ideal.denom)
    if key not in _inv_cache:
        _inv_cache[key] = P.ideal.inverse()
    return _inv_cache[key]


def ideal_valuation(I: IdealLattice, P: PrimeIdeal):
    """Exact valuation of a fractional ideal at a prime."""
    v = -P.e * _int_valuation(I.denom, P.p)
    A = IdealLattice(I.order, I.mat, 1)
    Pinv = _prime_inverse(P)
    while True:
        B = A.mul(Pinv)
        if not B.is_integral():
            return v
        A = B
        v += 1


def _int_valuation(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def element_valuation(x: Element, P: PrimeIdeal):
    assert not x.is_zero()
    return ideal_valuation(IdealLattice.principal(x), P)


# -- units


@dataclass
class UnitGroupData:
    """Independent units of infinite order (need not be fundamental); orbit
    deduplication merges by exact quotient tests, so finite index is fine."""
    order: FieldOrder
    gens: tuple

    def validate(self):
        o = self.order
        for u in self.gens:
            assert u.is_integral() and abs(u.norm()) == 1, "not a unit"
        r = len(self.gens)
        assert r == max(o.n - 1, 0), "wrong unit rank for a totally real field"
        if r == 0:
            return True
        rows = _unit_log_rows(o, self.gens)
        # certify independence with interval arithmetic on the logs
        from mpmath import iv
        iv.prec = 80
        best = None
        for cols in itertools.combinations(range(o.n), r):
            sub = [[rows[j][i] for i in cols] for j in range(r)]
            d = _iv_det(sub)
            if d.a > 0 or d.b < 0:
                best = cols
                break
        assert best is not None, "unit logs not provably independent"
        return True

    def inverses(self):
        return tuple(u ** (-1) for u in self.gens)


def _unit_log_rows(order, gens, width_exp=96):
    from mpmath import iv
    iv.prec = 96
    rows = []
    for u in gens:
        row = []
        for lo, hi in order.embed_intervals(u.coords, width_exp):
            # widen the float endpoints one ulp outward so the interval
            # provably contains the exact rational endpoints
            a = math.nextafter(float(lo), -math.inf)
            b = math.nextafter(float(hi), math.inf)
            row.append(iv.log(abs(iv.mpf([a, b]))))
        rows.append(row)
    return rows


def _iv_det(M):
    from mpmath import iv
    n = len(M)
    if n == 1:
        return M[0][0]
    acc = iv.mpf(0)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _iv_det(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def unit_cover_radius(order, units: UnitGroupData):
    """Upper bound r such that every unit orbit of a norm-m element meets
    {x : |sigma_i(x)| <= m^(1/n) * exp(r)}."""
    if not units.gens:
        return 0.0
    total = 0.0
    for u in units.gens:
        worst = 0.0
        for lo, hi in order.embed_intervals(u.coords, 64):
            worst = max(worst, abs(math.log(abs(float(lo)))),
                        abs(math.log(abs(float(hi)))))
        total += worst
    return 0.5 * total * (1 + 1e-9) + 1e-9


def canonical_orbit_rep(x: Element, units: UnitGroupData):
    """Deterministic representative of the orbit of x under the full unit
    action (including sign): totally positive preferred, then least trace,
    then lexicographically least coordinates.

    Floats only choose the reduction neighborhood; candidates are compared
    exactly, and offsets cover rounding ambiguity at domain boundaries.
    """
    o = x.order
    cands = []
    if not units.gens:
        cands = [x, -x]
    else:
        r = len(units.gens)
        logs_x = [math.log(abs(v)) for v in o.embed_floats(x.coords)]
        mean = sum(logs_x) / o.n
        t = [v - mean for v in logs_x]
        rows = [[math.log(abs(v)) for v in o.embed_floats(u.coords)]
                for u in units.gens]
        # least squares for t ~ sum c_j rows[j]
        A = [[sum(rows[i][k] * rows[j][k] for k in range(o.n))
              for j in range(r)] for i in range(r)]
        b = [sum(rows[i][k] * t[k] for k in range(o.n)) for i in range(r)]
        c = _solve_float(A, b)
        base = [round(v) for v in c]
        invs = units.inverses()
        for offs in itertools.product((-1, 0, 1), repeat=r):
            y = x
            for j, (k, dj) in enumerate(zip(base, offs)):
                e = k + dj
                if e > 0:
                    y = y * (invs[j] ** e)
                elif e < 0:
                    y = y * (units.gens[j] ** (-e))
            cands.append(y)
            cands.append(-y)
    cands.sort(key=lambda z: (z.trace(), z.coords))
    # first totally positive candidate in (trace, coords) order is the key
    # minimum; the trace prefilter inside is_totally_positive makes the
    # negative-trace prefix cheap to skip
    for z in cands:
        if z.is_totally_positive():
            return z
    return cands[0]


def _solve_float(A, b):
    n = len(A)
    M = [row[:] + [b[i]] for i, row in enumerate(A)]
    for col in range(n):
        piv = max(range(col, n), key=lambda i: abs(M[i][col]))
        if abs(M[piv][col]) < 1e-12:
            raise ZeroDivisionError("degenerate unit log system")
        M[col], M[piv] = M[piv], M[col]
        M[col] = [v / M[col][col] for v in M[col]]
        for i in range(n):
            if i != col:
                f = M[i][col]
                M[i] = [v - f * w for v, w in zip(M[i], M[col])]
    return [M[i][n] for i in range(n)]


# -- bounded enumeration


def enumerate_totally_positive(lattice: IdealLattice, bound):
    """All totally positive lattice elements with trace <= bound, sorted by
    (trace, lexicographic coordinates).

    The search box comes from float corner bounds with a safety margin;
    candidates inside are then filtered by exact trace and certified signs,
    so the output is exact.
    """
    o = lattice.order
    bound = Fraction(bound)
    if bound <= 0:
        return []
    if o.n == 1:
        g = Fraction(lattice.mat[0][0], lattice.denom)
        out = []
        k = 1
        while k * g <= bound:
            out.append(o.el([k * g]))
            k += 1
        return out
    d = lattice.denom
    M = [list(r) for r in lattice.mat]
    roots = [float((lo + hi) / 2) for lo, hi in o.root_intervals(64)]
    emb = [[rt ** j for rt in roots] for j in range(o.n)]  # emb[j][i]
    Minv = mat_inv_fraction(M)
    # embedding values y relate to coords by y = c * E with E[j][i] = root_i^j,
    # so c = y * E^{-1} and the search box is u = c * (d * M^{-1})
    Einv = _float_inv([[emb[j][i] for i in range(o.n)] for j in range(o.n)])
    Minv_f = [[float(Minv[i][j]) * d for j in range(o.n)] for i in range(o.n)]
    B = float(bound)
    lo_u = [math.inf] * o.n
    hi_u = [-math.inf] * o.n
    for corner in itertools.product((0.0, B), repeat=o.n):
        c = [sum(corner[i] * Einv[i][j] for i in range(o.n))
             for j in range(o.n)]
        u = [sum(c[i] * Minv_f[i][j] for i in range(o.n)) for j in range(o.n)]
        for j in range(o.n):
            lo_u[j] = min(lo_u[j], u[j])
            hi_u[j] = max(hi_u[j], u[j])
    margin = [1.0 + 0.01 * (hi_u[j] - lo_u[j]) for j in range(o.n)]
    ranges = [range(math.floor(lo_u[j] - margin[j]),
                    math.ceil(hi_u[j] + margin[j]) + 1) for j in range(o.n)]
    tvec = [sum(M[i][j] * o.basis_traces[j] for j in range(o.n))
            for i in range(o.n)]
    emb_rows = [[sum(M[i][j] * emb[j][k] for j in range(o.n)) / d
                 for k in range(o.n)] for i in range(o.n)]
    out = []
    tol_base = 1e-6
    for u in itertools.product(*ranges):
        tr = sum(ui * ti for ui, ti in zip(u, tvec))
        if tr <= 0 or tr > bound * d:
            continue
        ok = True
        scale = 1.0
        vals = [0.0] * o.n
        for k in range(o.n):
            v = sum(u[i] * emb_rows[i][k] for i in range(o.n))
            vals[k] = v
            scale = max(scale, abs(v))
        tol = tol_base * scale
        if any(v < -tol for v in vals):
            continue
        coords = tuple(Fraction(sum(u[i] * M[i][j] for i in range(o.n)), d)
                       for j in range(o.n))
        if o.is_totally_positive(coords):
            out.append(o.el(coords))
    out.sort(key=lambda z: z.canonical_key())
    return out


def enumerate_norm_orbit_reps(lattice: IdealLattice, norm_bound,
                              units: UnitGroupData):
    """Representatives of the unit orbits of totally positive lattice
    elements with |norm| <= norm_bound, as canonical_orbit_rep values
    sorted by (|norm|, canonical key).

    Complete only when the unit signatures cover {+-1}^n, which every
    caller must have checked; each orbit then meets the box
    (0, norm_bound^(1/n) * e^cover] in all embeddings.
    """
    o = lattice.order
    M = Fraction(norm_bound)
    if M < lattice.norm():
        return []
    if o.n == 1:
        g = Fraction(lattice.mat[0][0], lattice.denom)
        out = []
        k = 1
        while k * g <= M:
            out.append(o.el([k * g]))
            k += 1
        return out
    side = float(M) ** (1.0 / o.n) * math.exp(
        unit_cover_radius(o, units)) * (1 + 1e-6)
    d = lattice.denom
    Lm = [list(r) for r in lattice.mat]
    roots = [float((lo + hi) / 2) for lo, hi in o.root_intervals(64)]
    emb = [[rt ** j for rt in roots] for j in range(o.n)]
    Einv = _float_inv([[emb[j][i] for i in range(o.n)] for j in range(o.n)])
    Minv = mat_inv_fraction(Lm)
    Minv_f = [[float(Minv[i][j]) * d for j in range(o.n)] for i in range(o.n)]
    lo_u = [math.inf] * o.n
    hi_u = [-math.inf] * o.n
    for corner in itertools.product((0.0, side), repeat=o.n):
        c = [sum(corner[i] * Einv[i][j] for i in range(o.n))
             for j in range(o.n)]
        u = [sum(c[i] * Minv_f[i][j] for i in range(o.n)) for j in range(o.n)]
        for j in range(o.n):
            lo_u[j] = min(lo_u[j], u[j])
            hi_u[j] = max(hi_u[j], u[j])
    margin = [1.0 + 0.01 * (hi_u[j] - lo_u[j]) for j in range(o.n)]
    ranges = [range(math.floor(lo_u[j] - margin[j]),
                    math.ceil(hi_u[j] + margin[j]) + 1) for j in range(o.n)]
    emb_rows = [[sum(Lm[i][j] * emb[j][k] for j in range(o.n)) / d
                 for k in range(o.n)] for i in range(o.n)]
    seen = {}
    fside = side * (1 + 1e-6)
    for u in itertools.product(*ranges):
        if not any(u):
            continue
        ok = True
        for k in range(o.n):
            v = sum(u[i] * emb_rows[i][k] for i in range(o.n))
            if v < -1e-9 or v > fside:
                ok = False
                break
        if not ok:
            continue
        coords = tuple(Fraction(sum(u[i] * Lm[i][j] for i in range(o.n)), d)
                       for j in range(o.n))
        x = o.el(coords)
        nrm = x.norm()
        if nrm == 0 or abs(nrm) > M:
            continue
        if not x.is_totally_positive():
            continue
        rep = canonical_orbit_rep(x, units)
        seen.setdefault(rep.canonical_key(), rep)
    return sorted(seen.values(),
                  key=lambda z: (abs(z.norm()), z.canonical_key()))


def _float_inv(M):
    n = len(M)
    A = [row[:] + [1.0 if i == j else 0.0 for j in range(n)]
         for i, row in enumerate(M)]
    for col in range(n):
        piv = max(range(col, n), key=lambda i: abs(A[i][col]))
        A[col], A[piv] = A[piv], A[col]
        A[col] = [v / A[col][col] for v in A[col]]
        for i in range(n):
            if i != col:
                f = A[i][col]
                A[i] = [v - f * w for v, w in zip(A[i], A[col])]
    return [row[n:] for row in A]

# -- quadratic CM extensions


@dataclass(frozen=True)
class CMElement:
    """a + b*omega with a, b in the base order of `ext`."""
    ext: "CMQuadExt"
    a: Element
    b: Element

    def __add__(self, other):
        other = self.ext.coerce(other)
        return CMElement(self.ext, self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        other = self.ext.coerce(other)
        return CMElement(self.ext, self.a - other.a, self.b - other.b)

    def __mul__(self, other):
        other = self.ext.coerce(other)
        t, nm = self.ext.t, self.ext.nm
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        cross = a1 * b2 + a2 * b1
        bb = b1 * b2
        return CMElement(self.ext, a1 * a2 - bb * nm, cross + bb * t)

    def __neg__(self):
        return CMElement(self.ext, -self.a, -self.b)

    def conj(self):
        return CMElement(self.ext, self.a + self.b * self.ext.t, -self.b)

    def norm_to_base(self) -> Element:
        t, nm = self.ext.t, self.ext.nm
        return self.a * self.a + self.a * self.b * t + self.b * self.b * nm

    def trace_to_base(self) -> Element:
        return self.a + self.a + self.b * self.ext.t

    def is_zero(self):
        return self.a.is_zero() and self.b.is_zero()

    def __repr__(self):
        return f"<{self.ext.label}: {list(self.a.coords)} + {list(self.b.coords)}*w>"


class CMQuadExt:
    """Totally imaginary quadratic extension K = F(sqrt(D)) of a totally
    real order, D a negative squarefree rational integer.

    Elements are pairs over the module basis {1, omega}, omega = sqrt(D) or
    (1+sqrt(D))/2 as D demands.  This basis generates the maximal order
    exactly when the base and Q(sqrt(D)) ramify at disjoint primes, which
    is required at construction.
    """

    def __init__(self, base: FieldOrder, D: int, label=None):
        D = int(D)
        assert D < 0, "CM extension needs a negative D"
        for q in range(2, 60):
            assert D % (q * q) != 0, "D must be squarefree"
        self.base = base
        self.D = D
        if D % 4 == 1:
            self.t, self.nm = 1, (1 - D) // 4
            self.disc0 = D
        else:
            self.t, self.nm = 0, -D
            self.disc0 = 4 * D
        if math.gcd(int(base.disc), self.disc0) not in (1,):
            raise ValueError(
                "base and quadratic discriminants share a prime; the pair "
                "basis would not span the maximal order")
        self.label = label or f"{base.label}(sqrt({D}))"

    def coerce(self, x):
        if isinstance(x, CMElement):
            assert x.ext is self
            return x
        if isinstance(x, Element):
            assert x.order is self.base
            return CMElement(self, x, self.base.zero())
        return CMElement(self, self.base.from_int(0) + x, self.base.zero())

    def zero(self):
        return CMElement(self, self.base.zero(), self.base.zero())

    def one(self):
        return CMElement(self, self.base.one(), self.base.zero())

    def omega(self):
        return CMElement(self, self.base.zero(), self.base.one())

    def sqrt_d(self):
        """The element with square D and conj-negation: 2*omega - t."""
        return CMElement(self, self.base.from_int(-self.t),
                         self.base.from_int(2))

    def absolute_order(self) -> FieldOrder:
        """Degree-2 absolute order; only over Q."""
        assert self.base.n == 1
        return FieldOrder.from_min_poly(self.label, (self.nm, -self.t, 1),
                                        totally_real=False)

    def to_absolute(self, x: CMElement, order: FieldOrder) -> Element:
        assert self.base.n == 1
        return order.el([x.a.coords[0], x.b.coords[0]])

    def split_type(self, residues) -> str:
        """Splitting of a base prime from the quadratic's reduction.

        `residues` is the ResidueRing of the prime ideal; counts the roots
        of x^2 - t x + nm in the residue field.
        """
        ring = residues
        t = ring.reduce_int([self.t] + [0] * (self.base.n - 1))
        nm = ring.reduce_int([self.nm] + [0] * (self.base.n - 1))
        roots = 0
        for r in ring.residues():
            val = ring.add(ring.mul(r, ring.add(r, ring.neg(t))), nm)
            if all(c == 0 for c in val):
                roots += 1
        if roots == 2:
            return "split"
        if roots == 1:
            return "ramified"
        assert roots == 0
        return "inert"
