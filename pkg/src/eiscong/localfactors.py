"""Dirichlet characters, Gauss sums, and local epsilon constants.

Everything here is exact.  Characters take values in roots of unity kept
as (order, exponent) pairs; sums of values live in Z[zeta_m] via the
cyclotomic module.  The checkable statements:

  * |G(chi)|^2 = cond(chi) for primitive chi;
  * the Tate integral against exp(-2*pi*i*x) agrees with the Katz local
    Fourier factor up to the stated shift normalization;
  * conductor-discriminant, and its local form at a totally ramified
    prime of a cyclic tower;
  * degree-zero inductivity of conductor exponents across the tower;
  * inductivity of epsilon constants across the tower;
  * a telescoping identity for trace-weighted Euler factors;
  * valuations of CM polarization elements under relative norms.
"""
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import cyclotomic as cy
from .nfcore import (CMElement, CMQuadExt, Element, IdealLattice,
                     element_valuation, factor_rational_prime,
                     ideal_valuation)
from .residue import ResidueRing


def _factorize(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _int_val(n, q):
    v = 0
    n = abs(n)
    while n and n % q == 0:
        n //= q
        v += 1
    return v


def _crt(r1, m1, r2, m2):
    g = math.gcd(m1, m2)
    assert g == 1
    return (r1 * m2 * pow(m2, -1, m1) + r2 * m1 * pow(m1, -1, m2)) % (m1 * m2)


def _euler_phi(n):
    out = 1
    for q, a in _factorize(n).items():
        out *= q ** (a - 1) * (q - 1)
    return out


def _mult_order(g, m):
    o, x = 1, g % m
    while x != 1:
        x = x * g % m
        o += 1
    return o


def _primitive_root(q, a):
    m = q ** a
    target = _euler_phi(m)
    facs = list(_factorize(target))
    for g in range(2, m):
        if math.gcd(g, m) != 1:
            continue
        if all(pow(g, target // f, m) != 1 for f in facs):
            return g
    raise AssertionError("no primitive root")


@lru_cache(maxsize=None)
def _unit_group(m):
    """Generators, their orders, and a full discrete-log table for
    (Z/m)^*.  Sized for moduli up to a few thousand."""
    if m == 1:
        return (), (), {0: ()}
    gens, orders = [], []
    for q, a in sorted(_factorize(m).items()):
        pk = q ** a
        rest = m // pk
        if q == 2:
            local = []
            if a == 2:
                local = [(3, 2)]
            elif a >= 3:
                local = [(pk - 1, 2), (5, 1 << (a - 2))]
        else:
            local = [(_primitive_root(q, a), _euler_phi(pk))]
        for g, d in local:
            lift = g if rest == 1 else _crt(g, pk, 1, rest)
            gens.append(lift)
            orders.append(d)
    dlog = {}
    for exps in itertools.product(*(range(d) for d in orders)):
        x = 1
        for g, e in zip(gens, exps):
            if e:
                x = x * pow(g, e, m) % m
        dlog[x] = exps
    assert len(dlog) == _euler_phi(m), m
    return tuple(gens), tuple(orders), dlog


@dataclass(frozen=True)
class RootU:
    """zeta_order^k, stored with order reduced so equality is literal."""
    order: int
    k: int

    def __post_init__(self):
        k = self.k % self.order
        g = math.gcd(k, self.order) if k else self.order
        object.__setattr__(self, "order", self.order // g)
        object.__setattr__(self, "k", k // g)

    @staticmethod
    def one():
        return RootU(1, 0)

    def is_one(self):
        return self.order == 1

    def mul(self, other):
        L = self.order * other.order // math.gcd(self.order, other.order)
        return RootU(L, self.k * (L // self.order)
                     + other.k * (L // other.order))

    def inv(self):
        return RootU(self.order, -self.k)

    def pow(self, n):
        return RootU(self.order, self.k * n)

    def to_cyc(self, M):
        assert M % self.order == 0
        return cy.zeta(M, self.k * (M // self.order))


def _root_sum(roots):
    """Sum of roots of unity as a CycInt in the smallest common ambient."""
    M = 1
    for r in roots:
        M = M * r.order // math.gcd(M, r.order)
    acc = cy.zero(M)
    for r in roots:
        acc = acc + r.to_cyc(M)
    return acc


@dataclass(frozen=True)
class DirichletChar:
    """A character of (Z/modulus)^*, as exponents on fixed generators."""
    modulus: int
    exps: tuple

    @staticmethod
    def trivial(m):
        _, orders, _ = _unit_group(m)
        return DirichletChar(m, (0,) * len(orders))

    @staticmethod
    def quadratic(p):
        """The Legendre symbol mod an odd prime."""
        assert p > 2 and len(_factorize(p)) == 1
        _, orders, _ = _unit_group(p)
        return DirichletChar(p, ((p - 1) // 2,))

    @staticmethod
    def all_characters(m):
        _, orders, _ = _unit_group(m)
        return [DirichletChar(m, e)
                for e in itertools.product(*(range(d) for d in orders))]

    @property
    def order(self):
        _, orders, _ = _unit_group(self.modulus)
        o = 1
        for d, e in zip(orders, self.exps):
            oe = d // math.gcd(d, e)
            o = o * oe // math.gcd(o, oe)
        return o

    def value_root(self, n):
        """chi(n) as a root of unity, or None off the unit group."""
        if math.gcd(n, self.modulus) != 1:
            return None
        _, orders, dlog = _unit_group(self.modulus)
        a = dlog[n % self.modulus]
        L = 1
        for d in orders:
            L = L * d // math.gcd(L, d)
        k = 0
        for d, e, ai in zip(orders, self.exps, a):
            k += e * ai * (L // d)
        return RootU(L, k)

    def __call__(self, n):
        r = self.value_root(n)
        if r is None:
            return cy.zero(self.order)
        return r.to_cyc(self.order)

    def conductor(self):
        return _conductor(self)

    def conductor_exponent(self, q):
        return _int_val(self.conductor(), q)

    def is_primitive(self):
        return self.conductor() == self.modulus

    def _transfer(self, M, embed):
        gens, orders, _ = _unit_group(M)
        exps = []
        for g, d in zip(gens, orders):
            r = self.value_root(embed(g))
            assert r is not None and d % r.order == 0
            exps.append(r.k * (d // r.order) % d)
        return DirichletChar(M, tuple(exps))

    def lift(self, M):
        assert M % self.modulus == 0
        return self._transfer(M, lambda n: n % self.modulus)

    def primitive_part(self):
        f = self.conductor()
        m = self.modulus

        def embed(n):
            while math.gcd(n, m) != 1:
                n += f
            return n

        return self._transfer(f, embed)

    def local_part(self, q):
        """The component of modulus q^{v_q(modulus)}."""
        a = _int_val(self.modulus, q)
        mq = q ** a
        rest = self.modulus // mq
        if a == 0:
            return DirichletChar.trivial(1)
        return self._transfer(mq, lambda n: _crt(n, mq, 1, rest)
                              if rest > 1 else n)

    def prime_to_part(self, q):
        a = _int_val(self.modulus, q)
        mq = q ** a
        rest = self.modulus // mq
        if a == 0:
            return self
        return self._transfer(rest, lambda n: _crt(1, mq, n, rest)
                              if rest > 1 else 1)

    def __mul__(self, other):
        m1, m2 = self.modulus, other.modulus
        M = m1 * m2 // math.gcd(m1, m2)
        a, b = self.lift(M), other.lift(M)
        _, orders, _ = _unit_group(M)
        return DirichletChar(M, tuple((x + y) % d for x, y, d
                                      in zip(a.exps, b.exps, orders)))

    def inverse(self):
        _, orders, _ = _unit_group(self.modulus)
        return DirichletChar(self.modulus,
                             tuple(-e % d for e, d
                                   in zip(self.exps, orders)))

    conj = inverse

    def is_even(self):
        return self.value_root((-1) % self.modulus or 1).is_one()

    def describe(self):
        return {"modulus": self.modulus, "exponents": list(self.exps),
                "order": self.order, "conductor": self.conductor(),
                "even": self.is_even()}

    def __str__(self):
        return f"chi[{self.modulus};{','.join(map(str, self.exps))}]"


@lru_cache(maxsize=None)
def _conductor(chi):
    m = chi.modulus
    divs = sorted(d for d in range(1, m + 1) if m % d == 0)
    for f in divs:
        ok = True
        for u in range(1, m + 1, f):
            if math.gcd(u, m) == 1 and not chi.value_root(u).is_one():
                ok = False
                break
        if ok:
            return f
    raise AssertionError("unreachable")


def conductor_exponent_direct(chi, q):
    """Smallest k with chi_q trivial on 1 + q^k Z, read off the unit
    filtration rather than the divisor lattice."""
    a = _int_val(chi.modulus, q)
    if a == 0:
        return 0
    cq = chi.local_part(q)
    mq = q ** a
    for k in range(a + 1):
        step = q ** k
        if all(cq.value_root(u).is_one()
               for u in range(1, mq + 1, step) if math.gcd(u, mq) == 1):
            return k
    raise AssertionError("unreachable")


# -- Gauss sums


def gauss_sum(chi):
    """G(chi) = sum chi(u) zeta_f^u for primitive chi of conductor f."""
    assert chi.is_primitive(), "gauss_sum wants a primitive character"
    f = chi.modulus
    if f == 1:
        return cy.one(1)
    o = chi.order
    M = f if o <= 2 else f * o // math.gcd(f, o)
    acc = cy.zero(M)
    for u in range(1, f + 1):
        r = chi.value_root(u)
        if r is None:
            continue
        mono = cy.zeta(M, u * (M // f))
        if r.order <= 2:
            acc = acc + (mono if r.is_one() else -mono)
        else:
            acc = acc + cy.zeta(M, r.k * (M // r.order) + u * (M // f))
    return acc


def gauss_norm_squared(chi):
    """|G(chi)|^2 via Ramanujan sums; stays inside Z[zeta_ord]."""
    assert chi.is_primitive()
    f = chi.modulus
    if f == 1:
        return 1
    o = max(chi.order, 1)
    acc = cy.zero(o)
    for w in range(1, f + 1):
        r = chi.value_root(w)
        if r is not None:
            acc = acc + cy.ramanujan_sum(f, w - 1) * r.to_cyc(o)
    out = acc.is_rational()
    assert out is not None
    return out


def gauss_conductor_sweep(max_modulus=50):
    """|G(chi)|^2 = cond(chi) for every primitive chi of modulus <= bound."""
    checked, failures = 0, []
    for m in range(1, max_modulus + 1):
        for chi in DirichletChar.all_characters(m):
            if not chi.is_primitive():
                continue
            checked += 1
            if gauss_norm_squared(chi) != m:
                failures.append(str(chi))
    return {"max_modulus": max_modulus, "checked": checked,
            "failures": failures, "ok": not failures}


# -- the idele dictionary at one rational prime


def _vq_frac(x: Fraction, q):
    return _int_val(x.numerator, q) - _int_val(x.denominator, q)


def _unit_mod(x: Fraction, q, mod):
    num, den = x.numerator, x.denominator
    while num % q == 0:
        num //= q
    while den % q == 0:
        den //= q
    return num * pow(den, -1, mod) % mod


def additive_char(q, x: Fraction):
    """exp(-2 pi i {x}_q), the q-part of the fractional part only."""
    t = -_vq_frac(x, q)
    if t <= 0:
        return RootU.one()
    D = q ** t
    u = _unit_mod(x * D, q, D)
    return RootU(D, -u)


def idele_unit(chi, q, x: Fraction):
    """c_q on a q-unit: inverse of the local component of chi."""
    a = _int_val(chi.modulus, q)
    if a == 0:
        return RootU.one()
    cq = chi.local_part(q)
    return cq.value_root(_unit_mod(x, q, q ** a)).inv()


def idele_value(chi, q, x: Fraction):
    """c_q on any nonzero rational: prime-to-q part of chi at the
    uniformizer, inverse local part on units."""
    v = _vq_frac(x, q)
    out = idele_unit(chi, q, x / Fraction(q) ** v)
    if v:
        rest = chi.prime_to_part(q)
        r = rest.value_root(q % rest.modulus if rest.modulus > 1 else 0)
        out = out.mul(r.pow(v))
    return out


# -- epsilon constants over Q


@dataclass(frozen=True)
class EpsilonInput:
    char: DirichletChar
    q: int
    n_psi: int = 0
    measure: str = "dx1"
    alpha: Fraction = None


@dataclass(frozen=True)
class EpsValue:
    """scale * cyc * q^{half/2} with half in {0, 1}."""
    q: int
    scale: Fraction
    cyc: cy.CycInt
    half: int

    def abs_squared(self):
        r = (self.cyc * self.cyc.conj()).is_rational()
        assert r is not None
        return self.scale * self.scale * r * Fraction(self.q) ** self.half

    def mul(self, other):
        assert self.q == other.q
        a, b = cy.common_ambient(self.cyc, other.cyc)
        h = self.half + other.half
        return _eps_value(self.q, self.scale * other.scale, a * b, h)

    def mul_root(self, r: RootU, scale=Fraction(1)):
        M = self.cyc.m * r.order // math.gcd(self.cyc.m, r.order)
        return _eps_value(self.q, self.scale * scale,
                          self.cyc.to_ambient(M) * r.to_cyc(M), self.half)

    def equals(self, other):
        if self.q != other.q or self.half != other.half:
            return False
        d = (self.scale.denominator * other.scale.denominator
             // math.gcd(self.scale.denominator, other.scale.denominator))
        i1, i2 = int(self.scale * d), int(other.scale * d)
        a, b = cy.common_ambient(self.cyc, other.cyc)
        return i1 * a == i2 * b

    def serialize(self):
        return {"q": self.q,
                "scale": [self.scale.numerator, self.scale.denominator],
                "half": self.half,
                "cyc": {"m": self.cyc.m, "vec": list(self.cyc.vec)}}


def _eps_value(q, scale, cyc, half):
    rem = half % 2
    return EpsValue(q, scale * Fraction(q) ** ((half - rem) // 2), cyc, rem)


def epsilon_tate(inp: EpsilonInput) -> EpsValue:
    """The unit-shell integral of c^{-1} against exp(-2 pi i x) under the
    measure giving the units volume 1, times the conductor of psi as a
    norm factor.  All choices of alpha at the right valuation agree."""
    chi, q = inp.char, inp.q
    assert inp.measure in ("dx1", "tamagawa"), inp.measure
    n = chi.conductor_exponent(q)
    ntot = n + inp.n_psi
    alpha = Fraction(q) ** ntot if inp.alpha is None else inp.alpha
    if _vq_frac(alpha, q) != ntot:
        raise ValueError("alpha must have valuation n(chi) + n(psi)")
    shift = Fraction(q) ** inp.n_psi
    roots = []
    for u in (u for u in range(1, q ** n + 1)
              if math.gcd(u, q) == 1) if n else [1]:
        term = idele_unit(chi, q, Fraction(u))
        term = term.mul(additive_char(q, shift * u / alpha))
        roots.append(term)
    acc = _root_sum(roots)
    val = _eps_value(q, Fraction(q) ** inp.n_psi, acc, 0)
    val = val.mul_root(idele_value(chi, q, alpha).inv())
    if inp.measure == "tamagawa":
        val = _eps_value(val.q, val.scale, val.cyc, val.half - inp.n_psi)
    return val


# -- Katz local Fourier factor


def katz_fhat(chi, q, x: Fraction) -> EpsValue:
    """N^{-n} sum of c(u) exp(-2 pi i u x) over units mod q^n."""
    n = chi.conductor_exponent(q)
    roots = [idele_unit(chi, q, Fraction(u)).mul(additive_char(q, x * u))
             for u in range(1, q ** n + 1) if math.gcd(u, q) == 1]
    if not roots:
        roots = [RootU.one()]
    return _eps_value(q, Fraction(1, q ** n), _root_sum(roots), 0)


def katz_local(chi, q, delta=Fraction(1)) -> EpsValue:
    """F-hat(-1/(2 delta a)) / c(a) at a = q^{n(chi)}; chi must ramify
    at the odd prime q, and delta must be a q-unit."""
    if q == 2:
        raise ValueError("the Fourier shift needs 2 invertible mod q")
    n = chi.conductor_exponent(q)
    if n == 0:
        raise ValueError("chi must ramify at q")
    delta = Fraction(delta)
    if _vq_frac(delta, q) != 0:
        raise ValueError("delta must be a unit at q")
    a = Fraction(q) ** n
    fh = katz_fhat(chi, q, Fraction(-1) / (2 * delta * a))
    return fh.mul_root(idele_value(chi, q, a).inv())


def check_katz_deligne(chi, q, delta=Fraction(1)):
    """epsilon = N^n c^{-1}(-2 delta) N(theta) Local, exactly.

    The -2 in the c^{-1} slot aligns Tate's alpha with the -2*delta*a
    shift inside the Fourier factor; over Q the different is trivial."""
    delta = Fraction(delta)
    n = chi.conductor_exponent(q)
    lhs = epsilon_tate(EpsilonInput(chi, q))
    rhs = katz_local(chi, q, delta).mul_root(
        idele_value(chi, q, -2 * delta).inv(), scale=Fraction(q) ** n)
    return {"chi": chi.describe(), "q": q,
            "delta": [delta.numerator, delta.denominator],
            "n": n, "equal": lhs.equals(rhs),
            "lhs": lhs.serialize(), "rhs": rhs.serialize()}


def katz_deligne_sweep(max_modulus=25, delta=Fraction(1)):
    """Every primitive character of modulus <= bound, at every odd
    ramified prime."""
    checked, failures, no_odd = 0, [], 0
    for m in range(2, max_modulus + 1):
        for chi in DirichletChar.all_characters(m):
            if not chi.is_primitive():
                continue
            odd = [q for q in _factorize(m) if q != 2]
            if not odd:
                no_odd += 1
                continue
            for q in odd:
                checked += 1
                rep = check_katz_deligne(chi, q, delta)
                if not rep["equal"]:
                    failures.append([str(chi), q])
    return {"max_modulus": max_modulus, "checked": checked,
            "skipped_even_conductor": no_odd,
            "failures": failures, "ok": not failures}


# -- conductors across a cyclic totally ramified tower


def tower_characters(preset):
    """The cyclic-degree-many characters cutting out the top field,
    conductor a power of the ramified rational prime."""
    q, p = preset.ramified_rational, preset.tower.p
    a = 1
    while _euler_phi(q ** a) % p:
        a += 1
    chars = [c for c in DirichletChar.all_characters(q ** a)
             if p % max(c.order, 1) == 0]
    assert len(chars) == p
    return sorted(chars, key=lambda c: c.exps)


def _lattice_elements(lat):
    return lat.basis_elements()


def conductor_exponent_composed(phi, preset):
    """n_lambda(phi o N) read off the unit filtration of the top residue
    rings; exact because the norm is well defined at these depths."""
    q = preset.ramified_rational
    t = preset.tower
    e = t.p
    j = phi.conductor_exponent(q)
    if j == 0:
        return 0
    K = e * j + preset.theta_valuation
    pi = preset.theta_gen
    assert abs(int(pi.norm())) == q, "uniformizer norm must be the prime"
    phi_q = phi.local_part(q)
    mq = phi_q.modulus

    def trivial_at(x: Element):
        nrm = x.norm()
        assert nrm.denominator == 1
        return phi_q.value_root(int(nrm) % mq).is_one()

    layers = []
    for kp in range(1, K):
        lat = IdealLattice.principal(pi).pow(kp)
        layers.append([t.top.one() + b for b in _lattice_elements(lat)])
    r0 = t.top.from_int(_primitive_root(q, 1))
    for k in range(K + 1):
        ok = k > 0 or trivial_at(r0)
        for kp in range(max(k, 1), K):
            if not ok:
                break
            ok = all(trivial_at(g) for g in layers[kp - 1])
        if ok:
            return k
    raise AssertionError("unreachable")


def inductivity_degree_zero(phi, preset):
    """n(phi o N) = sum n(phi chi) - sum n(chi) over the tower block."""
    q = preset.ramified_rational
    chars = tower_characters(preset)
    lhs = conductor_exponent_composed(phi, preset)
    twisted = [conductor_exponent_direct(phi * c, q) for c in chars]
    plain = [conductor_exponent_direct(c, q) for c in chars]
    rhs = sum(twisted) - sum(plain)
    return {"preset": preset.name, "phi": phi.describe(),
            "lhs": lhs, "twisted_exponents": twisted,
            "base_exponents": plain, "rhs": rhs, "equal": lhs == rhs}


def different_valuation_by_trace(preset):
    """Largest k with Tr(lambda^{-k} O) integral; the valuation of the
    absolute different, computed without the conductor side."""
    pi = preset.theta_gen
    t = preset.tower
    k = 0
    while True:
        lat = IdealLattice.principal(pi).pow(-(k + 1))
        if all(x.trace().denominator == 1 for x in _lattice_elements(lat)):
            k += 1
        else:
            return k


def conductor_discriminant(preset):
    """|disc| = prod cond(chi), and at the ramified prime
    v(different) = sum of the local conductor exponents."""
    t = preset.tower
    q = preset.ramified_rational
    chars = tower_characters(preset)
    prods = 1
    for c in chars:
        prods *= c.conductor()
    disc = abs(int(t.top.disc))
    v_trace = different_valuation_by_trace(preset)
    v_ideal = preset.theta_valuation
    v_lat = ideal_valuation(t.rel_different(), preset.theta_prime())
    exps = [conductor_exponent_direct(c, q) for c in chars]
    composed = [conductor_exponent_composed(c, preset) for c in chars]
    return {"preset": preset.name, "disc_abs": disc,
            "char_conductors": [c.conductor() for c in chars],
            "product": prods, "product_ok": prods == disc,
            "v_different_trace": v_trace, "v_different_ideal": v_lat,
            "v_different_preset": v_ideal,
            "local_exponents": exps,
            "local_form_ok": v_trace == sum(exps) and v_trace == v_lat,
            "composed_exponents": composed,
            "norm_kernel_ok": all(c == 0 for c in composed),
            "ok": (prods == disc and v_trace == sum(exps)
                   and v_trace == v_lat
                   and all(c == 0 for c in composed))}


# -- epsilon constants at the ramified prime of the top field


def epsilon_top(phi, preset, measure="tamagawa") -> EpsValue:
    """epsilon of the base change phi o N at the totally ramified prime,
    against psi' = exp(-2 pi i Tr) and the unit-volume-1 measure; the
    tamagawa option divides by N(lambda)^{n(psi')/2}."""
    q = preset.ramified_rational
    t = preset.tower
    pi = preset.theta_gen
    npsi = preset.theta_valuation
    n = conductor_exponent_composed(phi, preset)
    phi_q = phi.local_part(q)
    mq = max(phi_q.modulus, 1)
    cpi = idele_value(phi, q, Fraction(int(pi.norm())))
    alpha_inv = pi ** (-(n + npsi))

    def unit_root(x: Element):
        nrm = x.norm()
        assert nrm.denominator == 1
        return phi_q.value_root(int(nrm) % mq).inv()

    if n == 0:
        lifts = [t.top.one()]
    else:
        ring = ResidueRing(t.top, IdealLattice.principal(pi).pow(n))
        lifts = [ring.lift(u) for u in ring.units()]
        base = lifts[0]
        for b in _lattice_elements(ring.modulus)[:2]:
            moved = base + b
            assert unit_root(moved) == unit_root(base)
            assert (additive_char(q, (moved * alpha_inv).trace())
                    == additive_char(q, (base * alpha_inv).trace()))
    roots = [unit_root(x).mul(additive_char(q, (x * alpha_inv).trace()))
             for x in lifts]
    val = _eps_value(q, Fraction(q) ** npsi, _root_sum(roots), 0)
    val = val.mul_root(cpi.pow(n + npsi).inv())
    if measure == "tamagawa":
        val = _eps_value(val.q, val.scale, val.cyc, val.half - npsi)
    return val


def epsilon_inductivity(phi, preset):
    """One epsilon upstairs against the product of twisted epsilons
    downstairs, in the tamagawa normalization on both sides."""
    q = preset.ramified_rational
    chars = tower_characters(preset)
    lhs = epsilon_top(phi, preset, measure="tamagawa")
    rhs = None
    for c in chars:
        f = epsilon_tate(EpsilonInput(phi * c, q, 0, "dx1"))
        rhs = f if rhs is None else rhs.mul(f)
    return {"preset": preset.name, "phi": phi.describe(),
            "lhs": lhs.serialize(), "rhs": rhs.serialize(),
            "equal": lhs.equals(rhs),
            "lhs_abs_sq": [lhs.abs_squared().numerator,
                           lhs.abs_squared().denominator],
            "rhs_abs_sq": [rhs.abs_squared().numerator,
                           rhs.abs_squared().denominator],
            "abs_sq_equal": lhs.abs_squared() == rhs.abs_squared()}


# -- a telescoping Euler-factor identity


_NO_TRUNC = 10 ** 9


@dataclass
class RationalFunctionSeries:
    """Finite Laurent slice sum coeffs[i] * t^{start+i}, coefficients
    rational functions of sympy symbols.  Coefficients past `trunc` are
    unknown, not zero; exact polynomials leave it at the sentinel."""
    start: int
    coeffs: list
    trunc: int = field(default=_NO_TRUNC)

    def mul(self, other):
        import sympy
        start = self.start + other.start
        end = (self.start + len(self.coeffs) - 1
               + other.start + len(other.coeffs) - 1)
        trunc = _NO_TRUNC
        if self.trunc < _NO_TRUNC:
            trunc = min(trunc, self.trunc + other.start)
        if other.trunc < _NO_TRUNC:
            trunc = min(trunc, other.trunc + self.start)
        end = min(end, trunc)
        out = [sympy.Integer(0)] * (end - start + 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                k = self.start + i + other.start + j
                if k <= end:
                    out[k - start] += a * b
        return RationalFunctionSeries(start, out, trunc)

    def nonzero_terms(self):
        import sympy
        out = []
        for i, c in enumerate(self.coeffs):
            if self.start + i <= self.trunc and sympy.simplify(c) != 0:
                out.append((self.start + i, sympy.simplify(c)))
        return out


def verify_euler_identity(e, trunc=30):
    """The weighted sum with w = -1/N at t^{-1-e} and 1 - 1/N beyond
    matches (1 - (XNt)^{-1}) X^{-e} t^{-e} / (1 - Xt), via expansion and
    via telescoping against (1 - Xt)."""
    import sympy
    X, N, t_ = sympy.symbols("X N t")
    e = int(e)
    assert e >= 0
    lhs = RationalFunctionSeries(
        -1 - e,
        [-1 / N * X ** (-1 - e)] + [(1 - 1 / N) * X ** n
                                    for n in range(-e, trunc + 1)],
        trunc)
    f1 = RationalFunctionSeries(-1, [-1 / (X * N), sympy.Integer(1)])
    f2 = RationalFunctionSeries(-e, [X ** (-e)])
    geom = RationalFunctionSeries(0, [X ** i for i in range(trunc + e + 2)],
                                  trunc + e + 1)
    rhs = f1.mul(f2).mul(geom)
    ident = True
    for n in range(-1 - e, trunc + 1):
        a = lhs.coeffs[n - lhs.start] if 0 <= n - lhs.start < len(lhs.coeffs) \
            else sympy.Integer(0)
        b = rhs.coeffs[n - rhs.start] if 0 <= n - rhs.start < len(rhs.coeffs) \
            else sympy.Integer(0)
        if sympy.simplify(a - b) != 0:
            ident = False
            break
    tele = RationalFunctionSeries(0, [sympy.Integer(1), -X]).mul(lhs)
    terms = tele.nonzero_terms()
    tele_ok = (len(terms) == 2
               and terms[0][0] == -1 - e
               and sympy.simplify(terms[0][1] + X ** (-1 - e) / N) == 0
               and terms[1][0] == -e
               and sympy.simplify(terms[1][1] - X ** (-e)) == 0)
    return {"e": e, "truncation": trunc,
            "identity_ok": ident, "telescoping_ok": tele_ok,
            "ok": ident and tele_ok}


# -- CM polarization valuations


def _galois_cm(t, x: CMElement, i):
    a, b = x.a, x.b
    for _ in range(i):
        a, b = t.galois(a), t.galois(b)
    return CMElement(x.ext, a, b)


def _cm_pow(x: CMElement, k):
    out = x.ext.one()
    for _ in range(k):
        out = out * x
    return out


def diff_valuations(preset, delta=None, delta_prime=None, at_prime=None):
    """ord of delta^p against ord of the relative norm of delta', at the
    primes of the quadratic CM field over a rational prime.

    Both inputs must anticonjugate (delta^c = -delta); the default
    delta' carries the full different of the top field, the default
    delta none, so the reported difference is the different gap."""
    t = preset.tower
    p = t.p
    q = preset.ramified_rational if at_prime is None else at_prime
    q_order = t.base
    assert q_order.n == 1, "the quadratic CM field needs a rational base"
    cm0 = CMQuadExt(q_order, preset.cm_disc)
    cm2 = preset.cm_top()
    if delta is None:
        delta = cm0.sqrt_d()
    if delta_prime is None:
        delta_prime = cm2.sqrt_d() * cm2.coerce(
            preset.theta_gen ** preset.theta_valuation)
    checks = {}
    checks["delta_anticonjugates"] = (delta.conj() + delta).is_zero()
    checks["delta_prime_anticonjugates"] = \
        (delta_prime.conj() + delta_prime).is_zero()
    nrm_rel = delta_prime.norm_to_base()
    checks["norm_valuation_top"] = element_valuation(
        nrm_rel, preset.theta_prime()) if not nrm_rel.is_zero() else None
    checks["different_valuation_matches"] = (
        checks["norm_valuation_top"] == 2 * preset.theta_valuation)
    nd = delta_prime
    acc = nd
    for i in range(1, p):
        acc = acc * _galois_cm(t, nd, i)
    a0, b0 = t.in_base(acc.a), t.in_base(acc.b)
    assert a0 is not None and b0 is not None, \
        "relative norm must descend to the quadratic field"
    down = CMElement(cm0, q_order.el([a0.coords[0]]),
                     q_order.el([b0.coords[0]]))
    k0 = preset.cm_quad()
    abs_norm = cm0.to_absolute(down, k0)
    abs_delta_p = cm0.to_absolute(_cm_pow(delta, p), k0)
    primes = factor_rational_prime(k0, q)
    rows = []
    for P in primes:
        va = element_valuation(abs_delta_p, P)
        vb = element_valuation(abs_norm, P)
        rows.append({"prime_residue_degree": P.f,
                     "ord_delta_pow": va, "ord_norm": vb,
                     "difference": vb - va})
    return {"preset": preset.name, "rational_prime": q,
            "split_primes": len(primes),
            "preconditions": checks, "valuations": rows}


# -- serialization helper shared by reports


def plain(x):
    if isinstance(x, Fraction):
        return [x.numerator, x.denominator]
    if isinstance(x, EpsValue):
        return x.serialize()
    if isinstance(x, RootU):
        return {"order": x.order, "k": x.k}
    if isinstance(x, cy.CycInt):
        return {"m": x.m, "vec": list(x.vec)}
    if isinstance(x, DirichletChar):
        return x.describe()
    if isinstance(x, dict):
        return {k: plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    return x
