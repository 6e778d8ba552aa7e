"""Exact integer and rational linear algebra.

Row convention throughout: matrices are lists of row vectors, lattices are
integer row spans.  The Hermite normal form here is the canonical form used
for ideal equality tests, so its conventions (positive pivots, entries above
a pivot reduced into [0, pivot)) must not drift.
"""

from __future__ import annotations

from fractions import Fraction


def _nonzero_rows(rows):
    return [list(r) for r in rows if any(r)]


def hnf(rows, ncols=None):
    """Row-style Hermite normal form of an integer matrix.

    Returns the list of nonzero rows in echelon form: pivots strictly move
    right, each pivot is positive, and entries above a pivot lie in
    [0, pivot).  The result is a canonical basis of the row span.
    """
    A = _nonzero_rows(rows)
    if not A:
        return []
    n = ncols if ncols is not None else len(A[0])
    r = 0
    for c in range(n):
        if r >= len(A):
            break
        # gather the column c into a single pivot row by gcd steps
        while True:
            nz = [i for i in range(r, len(A)) if A[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[i0] = A[i0], A[r]
            done = True
            for i in range(r + 1, len(A)):
                if A[i][c] != 0:
                    q = A[i][c] // A[r][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    if A[i][c] != 0:
                        done = False
            if done:
                break
        if r < len(A) and A[r][c] != 0:
            if A[r][c] < 0:
                A[r] = [-a for a in A[r]]
            for i in range(r):
                q = A[i][c] // A[r][c]
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
            r += 1
        A = [row for row in A if any(row)]
    return A[:r] + [row for row in A[r:] if any(row)]


def hnf_with_transform(rows, ncols=None):
    """HNF together with a unimodular U such that U * rows = [H; 0].

    Returns (H, U) where H holds the nonzero rows.  Zero input rows are kept
    (not stripped) so U stays square of size len(rows).
    """
    A = [list(r) for r in rows]
    m = len(A)
    if m == 0:
        return [], []
    n = ncols if ncols is not None else len(A[0])
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r >= m:
            break
        while True:
            nz = [i for i in range(r, m) if A[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[i0] = A[i0], A[r]
            U[r], U[i0] = U[i0], U[r]
            done = True
            for i in range(r + 1, m):
                if A[i][c] != 0:
                    q = A[i][c] // A[r][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if A[i][c] != 0:
                        done = False
            if done:
                break
        if r < m and A[r][c] != 0:
            if A[r][c] < 0:
                A[r] = [-a for a in A[r]]
                U[r] = [-a for a in U[r]]
            for i in range(r):
                q = A[i][c] // A[r][c]
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
            r += 1
    H = [A[i] for i in range(r)]
    return H, U


def kernel_rows(rows, ncols=None):
    """Basis of the left integer kernel {v : v * rows = 0}."""
    if not rows:
        return []
    H, U = hnf_with_transform(rows, ncols)
    return [U[i] for i in range(len(H), len(rows))]


def solve_in_rowspan(rows, target, ncols=None):
    """Integer combination v with v * rows = target, or None.

    Back-substitution against the HNF; divisibility failures mean the target
    is outside the lattice.
    """
    if not rows:
        return None if any(target) else []
    n = ncols if ncols is not None else len(rows[0])
    H, U = hnf_with_transform(rows, n)
    t = list(target)
    y = [0] * len(H)
    for i, row in enumerate(H):
        c = next(j for j in range(n) if row[j] != 0)
        q, rem = divmod(t[c], row[c])
        if rem != 0:
            return None
        y[i] = q
        t = [a - q * b for a, b in zip(t, row)]
    if any(t):
        return None
    m = len(rows)
    v = [0] * m
    for i, yi in enumerate(y):
        if yi:
            for j in range(m):
                v[j] += yi * U[i][j]
    return v


def smith_normal_form(rows):
    """Diagonal of the Smith normal form, with the divisibility chain.

    Returns the list of nonzero invariant factors d_1 | d_2 | ...  Input is
    any integer matrix; the cokernel of its row span in Z^n is
    Z/d_1 x ... x Z/d_r x Z^(n-r).
    """
    A = _nonzero_rows(rows)
    if not A:
        return []
    m, n = len(A), len(A[0])
    divisors = []
    top = 0  # reduce the submatrix A[top:][top:]
    while top < min(m, n):
        if all(A[i][j] == 0 for i in range(top, m) for j in range(top, n)):
            break
        while True:
            # move a minimal nonzero entry to the (top, top) corner
            best = None
            for i in range(top, m):
                for j in range(top, n):
                    if A[i][j] != 0 and (best is None or abs(A[i][j]) < best[0]):
                        best = (abs(A[i][j]), i, j)
            _, bi, bj = best
            A[top], A[bi] = A[bi], A[top]
            for row in A:
                row[top], row[bj] = row[bj], row[top]
            p = A[top][top]
            dirty = False
            for i in range(top + 1, m):
                if A[i][top] != 0:
                    q = A[i][top] // p
                    A[i] = [a - q * b for a, b in zip(A[i], A[top])]
                    dirty = dirty or A[i][top] != 0
            for j in range(top + 1, n):
                if A[top][j] != 0:
                    q = A[top][j] // p
                    for row in A:
                        row[j] -= q * row[top]
                    dirty = dirty or A[top][j] != 0
            if dirty:
                continue
            # pivot must divide every remaining entry for the chain property
            offender = None
            for i in range(top + 1, m):
                for j in range(top + 1, n):
                    if A[i][j] % p != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            A[top] = [a + b for a, b in zip(A[top], A[offender])]
        divisors.append(abs(A[top][top]))
        top += 1
    return [d for d in divisors if d != 0]


def mat_mul(A, B):
    """Matrix product, exact (int or Fraction entries)."""
    if not A or not B:
        return []
    n = len(B[0])
    return [[sum(a * B[k][j] for k, a in enumerate(row)) for j in range(n)]
            for row in A]


def mat_det(A):
    """Determinant by fraction-free (Bareiss) elimination; exact for ints."""
    n = len(A)
    if n == 0:
        return 1
    M = [[x for x in row] for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def mat_inv_fraction(A):
    """Inverse of a square matrix as Fractions. Raises on singular input."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for i in range(n):
            if i != col and M[i][col] != 0:
                f = M[i][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[col])]
    return [row[n:] for row in M]


def solve_fraction(A, b):
    """Solve x * A = b over the rationals (row-vector convention)."""
    inv = mat_inv_fraction(A)
    return [sum(Fraction(bj) * inv[j][i] for j, bj in enumerate(b))
            for i in range(len(A))]


def solve_fraction_rect(rows, target):
    """Solve x * rows = target exactly, rows rectangular (m rows, n cols).

    Returns the coefficient list of length m, or None when target is not in
    the rational row span.  With fewer rows than columns the solution, when
    it exists, is unique only if the rows are independent; callers here pass
    independent rows.
    """
    m = len(rows)
    if m == 0:
        return [] if all(Fraction(t) == 0 for t in target) else None
    n = len(rows[0])
    aug = [[Fraction(rows[i][j]) for i in range(m)] + [Fraction(target[j])]
           for j in range(n)]
    piv_of_col = {}
    r = 0
    for col in range(m):
        piv = next((i for i in range(r, n) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pv = aug[r][col]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_of_col[col] = r
        r += 1
    for i in range(r, n):
        if aug[i][m] != 0:
            return None
    sol = [Fraction(0)] * m
    for col, row in piv_of_col.items():
        sol[col] = aug[row][m]
    return sol


def lattice_intersect(A, B, ncols=None):
    """HNF basis of the intersection of two integer row lattices."""
    if not A or not B:
        return []
    n = ncols if ncols is not None else len(A[0])
    stacked = [list(r) for r in A] + [[-x for x in r] for r in B]
    inter = []
    for v in kernel_rows(stacked, n):
        vec = [0] * n
        for i, c in enumerate(v[: len(A)]):
            if c:
                for j in range(n):
                    vec[j] += c * A[i][j]
        inter.append(vec)
    return hnf(inter, n)
