"""Dense exact linear algebra over Q and over Q[t].

Rational matrices are lists of Fraction rows.  Determinant-like work is
routed through the integer elimination kernels after clearing denominators;
everything else is straightforward exact Gauss elimination.
"""

from fractions import Fraction
from math import lcm

from . import kernels
from .errors import DomainError, ShapeError
from .scalars import Poly


def identity(n):
    return [[Fraction(i == j) for j in range(n)] for i in range(n)]


def zeros(r, c):
    return [[Fraction(0)] * c for _ in range(r)]


def transpose(m):
    return [list(col) for col in zip(*m)] if m else []


def mat_mul(a, b):
    if not a or not b:
        return []
    if len(a[0]) != len(b):
        raise ShapeError("matrix product shape mismatch")
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a, v):
    if a and len(a[0]) != len(v):
        raise ShapeError("matrix-vector shape mismatch")
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, s):
    return [[s * x for x in row] for row in a]


def mat_pow(a, k):
    n = len(a)
    out = identity(n)
    for _ in range(k):
        out = mat_mul(out, a)
    return out


def commutator(a, b):
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def rows_to_int(rows):
    """Scale each row by the lcm of its denominators; returns (int rows, scales)."""
    int_rows = []
    scales = []
    for row in rows:
        mult = lcm(*(Fraction(x).denominator for x in row)) if row else 1
        int_rows.append([int(x * mult) for x in row])
        scales.append(mult)
    return int_rows, scales


def det_rational(rows):
    """Exact determinant of a square Fraction matrix via the integer kernel."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ShapeError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    int_rows, scales = rows_to_int(rows)
    d = kernels.bareiss_det(int_rows)
    denom = 1
    for s in scales:
        denom *= s
    return Fraction(d, denom)


def det_ring(rows, divexact):
    """Bareiss determinant over a commutative ring with exact division.

    Used for matrices over Q[t]; `divexact(a, b)` must implement the exact
    quotient that the Bareiss identity guarantees to exist.
    """
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ShapeError("determinant of a non-square matrix")
    if n == 0:
        return Poly.const(1)
    m = [list(r) for r in rows]
    sign = 1
    prev = None
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Poly()
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = pivot * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = num if prev is None else divexact(num, prev)
            m[i][k] = Poly()
        prev = pivot
    return m[n - 1][n - 1] if sign > 0 else -m[n - 1][n - 1]


def rref(rows):
    """Reduced row echelon form; returns (new rows, pivot columns)."""
    m = [[Fraction(x) for x in row] for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    piv_cols = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot_row = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    return m, piv_cols


def rank(rows):
    if not rows:
        return 0
    int_rows, _ = rows_to_int(rows)
    r, _, _ = kernels.fraction_free_echelon(int_rows)
    return r


def kernel(rows):
    """Basis of the right kernel, free variables set to 1 in column order."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, piv_cols = rref(rows)
    free_cols = [c for c in range(ncols) if c not in piv_cols]
    basis = []
    for fc in free_cols:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(piv_cols):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def solve(a, b):
    """One solution of A x = b, or None if inconsistent."""
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    aug = [list(a[i]) + [b[i]] for i in range(nrows)]
    red, piv_cols = rref(aug)
    if ncols in piv_cols:
        return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(piv_cols):
        x[pc] = red[r][ncols]
    return x


def inverse(a):
    n = len(a)
    aug = [list(a[i]) + identity(n)[i] for i in range(n)]
    red, piv_cols = rref(aug)
    if piv_cols != list(range(n)):
        raise DomainError("matrix is singular")
    return [row[n:] for row in red]


def char_poly(rows):
    """det(x*I - M) in Q[t] (t playing the role of x)."""
    n = len(rows)
    t = Poly.t()
    m = [
        [t - Poly.const(rows[i][j]) if i == j else Poly.const(-rows[i][j]) for j in range(n)]
        for i in range(n)
    ]
    return det_ring(m, lambda a, b: a.divexact(b))


def rational_roots(p: Poly):
    """All rational roots of p with multiplicities: list of (root, mult)."""
    if p.is_zero():
        raise DomainError("zero polynomial")
    denom = lcm(*(c.denominator for c in p.coeffs))
    ints = [int(c * denom) for c in p.coeffs]
    low = next(k for k, c in enumerate(ints) if c != 0)
    roots = []
    if low > 0:
        roots.append((Fraction(0), low))
        ints = ints[low:]
    lead, const = ints[-1], ints[0]
    candidates = set()
    for pn in _divisors(abs(const)):
        for qn in _divisors(abs(lead)):
            candidates.add(Fraction(pn, qn))
            candidates.add(Fraction(-pn, qn))
    work = Poly([Fraction(c) for c in ints])
    for cand in sorted(candidates):
        mult = 0
        while not work.is_zero() and work(cand) == 0:
            work = work.divexact(Poly([-cand, 1]))
            mult += 1
        if mult:
            roots.append((cand, mult))
    return sorted(roots)


def _divisors(n):
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return sorted(set(out))
