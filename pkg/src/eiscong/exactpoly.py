"""Polynomials over Q as coefficient tuples (low degree first), plus Sturm
isolation of real roots and rational interval evaluation.

Everything here is exact; floating point never decides a sign.
"""

from __future__ import annotations

from fractions import Fraction


def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return tuple(f)


def degree(f):
    return len(f) - 1


def evaluate(f, x):
    acc = Fraction(0)
    for c in reversed(f):
        acc = acc * x + c
    return acc


def add(f, g):
    n = max(len(f), len(g))
    return trim(tuple((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)
                      for i in range(n)))


def neg(f):
    return tuple(-c for c in f)


def mul(f, g):
    if not f or not g:
        return ()
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim(tuple(out))


def divmod_poly(f, g):
    """Quotient and remainder; g need not be monic."""
    g = trim(g)
    if not g:
        raise ZeroDivisionError
    f = [Fraction(c) for c in f]
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 1)
    while len(trim(f)) >= len(g):
        f = list(trim(f))
        shift = len(f) - len(g)
        coef = f[-1] / g[-1]
        q[shift] += coef
        for i, c in enumerate(g):
            f[shift + i] -= coef * c
        f[-1] = Fraction(0)
    return trim(tuple(q)), trim(tuple(f))


def deriv(f):
    return trim(tuple(i * c for i, c in enumerate(f)))[1:] if len(f) > 1 else ()


def _monic(f):
    f = trim(f)
    return tuple(c / f[-1] for c in f) if f else f


def gcd_poly(f, g):
    a, b = trim(f), trim(g)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return _monic(a)


def squarefree_part(f):
    g = gcd_poly(f, deriv(f))
    if degree(g) <= 0:
        return trim(f)
    return divmod_poly(f, g)[0]


def sturm_chain(f):
    chain = [trim(f), deriv(f)]
    while chain[-1] and degree(chain[-1]) > 0:
        rem = divmod_poly(chain[-2], chain[-1])[1]
        if not rem:
            break
        chain.append(neg(rem))
    return [p for p in chain if p]


def _sign_changes(chain, x):
    signs = []
    for p in chain:
        v = evaluate(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(chain, lo, hi):
    """Number of distinct real roots in (lo, hi]."""
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


def root_bound(f):
    """Cauchy bound: all real roots lie in (-B, B)."""
    f = trim(f)
    lead = abs(f[-1])
    return 1 + max((abs(c) / lead for c in f[:-1]), default=Fraction(0))


def isolate_real_roots(f):
    """Disjoint rational intervals (lo, hi), one simple root each, ascending.

    Works on the squarefree part, so endpoints see a genuine sign change.
    """
    f = squarefree_part(f)
    chain = sturm_chain(f)
    B = root_bound(f)
    out = []
    stack = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        k = count_roots(chain, lo, hi)
        if k == 0:
            continue
        if k == 1 and evaluate(f, lo) != 0 and evaluate(f, hi) != 0:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        while evaluate(f, mid) == 0:
            # nudge the cut off a root
            mid += (hi - lo) / 16
        stack.append((lo, mid))
        stack.append((mid, hi))
    return sorted(out)


def refine_root(f, lo, hi, width):
    """Shrink an isolating interval by bisection until hi - lo <= width."""
    flo = evaluate(f, lo)
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = evaluate(f, mid)
        if fm == 0:
            eps = (hi - lo) / 4
            return (mid - min(eps, width / 2), mid + min(eps, width / 2))
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo, hi)


def power_sums(monic_coeffs, count):
    """Newton's identities: traces of powers of a root of a monic polynomial.

    monic_coeffs is low-first including the leading 1.  Returns
    [p_0, ..., p_{count-1}] where p_k is the sum of k-th powers of all roots.
    """
    f = trim(monic_coeffs)
    n = degree(f)
    assert f[-1] == 1
    c = f  # c[i] multiplies x^i
    p = [Fraction(n)]
    for k in range(1, count):
        if k <= n:
            s = -k * c[n - k]
            for i in range(1, k):
                s -= c[n - i] * p[k - i]
        else:
            s = Fraction(0)
            for i in range(1, n + 1):
                s -= c[n - i] * p[k - i]
        p.append(s)
    return p


# interval helpers: closed rational intervals as (lo, hi) pairs

def iv_add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def iv_mul(a, b):
    xs = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(xs), max(xs))


def iv_scale(a, c):
    return (a[0] * c, a[1] * c) if c >= 0 else (a[1] * c, a[0] * c)


def eval_interval(f, box):
    """Evaluate a polynomial over an interval argument (Horner)."""
    acc = (Fraction(0), Fraction(0))
    for c in reversed(f):
        acc = iv_mul(acc, box)
        acc = (acc[0] + c, acc[1] + c)
    return acc
