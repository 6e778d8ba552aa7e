"""Exact arithmetic in rings of cyclotomic integers Z[zeta_m].

Elements are integer vectors over the power basis of Z[x]/Phi_m(x); all
reductions use the monic cyclotomic polynomial, so equality of reduced
vectors is equality in the ring.
"""
import math
from dataclasses import dataclass
from functools import lru_cache


@lru_cache(maxsize=None)
def cyclo_coeffs(m: int):
    """Coefficients of Phi_m, low degree first, monic."""
    import sympy
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.cyclotomic_poly(m, x), x)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


@lru_cache(maxsize=None)
def _power_table(m: int):
    """x^k mod Phi_m for 0 <= k < m, as reduced coefficient rows."""
    phi = cyclo_coeffs(m)
    d = len(phi) - 1
    rows = []
    cur = [0] * d
    cur[0] = 1
    for _ in range(m):
        rows.append(tuple(cur))
        top = cur[d - 1]
        nxt = [0] + cur[:d - 1]
        if top:
            for i in range(d):
                nxt[i] -= top * phi[i]
        cur = nxt
    return tuple(rows)


def degree(m: int) -> int:
    return len(cyclo_coeffs(m)) - 1


@dataclass(frozen=True)
class CycInt:
    """An element of Z[zeta_m] in reduced power-basis coordinates."""
    m: int
    vec: tuple

    def _co(self, other):
        if isinstance(other, int):
            other = from_int(self.m, other)
        assert isinstance(other, CycInt) and other.m == self.m, \
            "mixed conductors; lift with to_ambient first"
        return other

    def __add__(self, other):
        other = self._co(other)
        return CycInt(self.m, tuple(a + b for a, b in
                                    zip(self.vec, other.vec)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._co(other)
        return CycInt(self.m, tuple(a - b for a, b in
                                    zip(self.vec, other.vec)))

    def __neg__(self):
        return CycInt(self.m, tuple(-a for a in self.vec))

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(self.m, tuple(v * other for v in self.vec))
        other = self._co(other)
        d = len(self.vec)
        conv = [0] * (2 * d - 1)
        for i, a in enumerate(self.vec):
            if a:
                for j, b in enumerate(other.vec):
                    if b:
                        conv[i + j] += a * b
        out = conv[:d] + [0] * (d - min(d, len(conv)))
        tab = _power_table(self.m)
        for e in range(d, 2 * d - 1):
            ce = conv[e]
            if ce:
                row = tab[e % self.m]
                for i in range(d):
                    out[i] += ce * row[i]
        return CycInt(self.m, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        assert k >= 0
        acc = one(self.m)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def galois(self, t: int) -> "CycInt":
        """Apply zeta -> zeta^t for t prime to m."""
        t %= self.m
        assert math.gcd(t, self.m) == 1, "not an automorphism"
        tab = _power_table(self.m)
        d = len(self.vec)
        out = [0] * d
        for j, a in enumerate(self.vec):
            if a:
                row = tab[(j * t) % self.m]
                for i in range(d):
                    out[i] += a * row[i]
        return CycInt(self.m, tuple(out))

    def conj(self) -> "CycInt":
        """Complex conjugation zeta -> zeta^{-1}."""
        if self.m <= 2:
            return self
        return self.galois(self.m - 1)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.vec)

    def is_rational(self):
        """The integer value if the element lies in Z, else None."""
        if any(v for v in self.vec[1:]):
            return None
        return self.vec[0]

    def to_ambient(self, M: int) -> "CycInt":
        """Image under zeta_m = zeta_M^{M/m} for m | M."""
        assert M % self.m == 0
        if M == self.m:
            return self
        step = M // self.m
        tab = _power_table(M)
        d = degree(M)
        out = [0] * d
        for j, a in enumerate(self.vec):
            if a:
                row = tab[(j * step) % M]
                for i in range(d):
                    out[i] += a * row[i]
        return CycInt(M, tuple(out))

    def __repr__(self):
        return f"CycInt({self.m}, {list(self.vec)})"


def zero(m: int) -> CycInt:
    return CycInt(m, (0,) * degree(m))


def one(m: int) -> CycInt:
    return from_int(m, 1)


def from_int(m: int, a: int) -> CycInt:
    v = [0] * degree(m)
    v[0] = a
    return CycInt(m, tuple(v))


def zeta(m: int, k: int = 1) -> CycInt:
    """zeta_m^k, any integer k."""
    return CycInt(m, _power_table(m)[k % m])


def common_ambient(*xs):
    """Lift to Z[zeta_lcm]."""
    M = 1
    for x in xs:
        M = M * x.m // math.gcd(M, x.m)
    return tuple(x.to_ambient(M) for x in xs)


def ramanujan_sum(m: int, k: int) -> int:
    """c_m(k) = sum of zeta_m^{vk} over v in (Z/m)^*, exactly; always a
    rational integer."""
    acc = zero(m)
    for v in range(1, m + 1):
        if math.gcd(v, m) == 1:
            acc = acc + zeta(m, v * k)
    r = acc.is_rational()
    assert r is not None
    return r
