"""Fraction-free integer elimination kernels (pure-Python backend).

All functions take dense row lists of Python ints and never leave integer
arithmetic; exact divisions are guaranteed by the Bareiss identity.  The
compiled twin in _ffelim_cy.pyx implements the same contracts.
"""


def bareiss_det(rows):
    """Determinant of a square integer matrix by Bareiss elimination."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i = m[i]
            row_k = m[k]
            factor = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - factor * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def leading_principal_minors(rows):
    """[det M_1, ..., det M_n] for the leading principal submatrices.

    Runs unpivoted Bareiss, whose k-th pivot *is* det M_k.  Returns the
    minors computed so far plus a None tail once a zero pivot blocks the
    recursion (the caller decides how to treat the undetermined ones).
    """
    n = len(rows)
    m = [list(r) for r in rows]
    minors = []
    prev = 1
    for k in range(n):
        pivot = m[k][k]
        minors.append(pivot)
        if pivot == 0:
            minors.extend([None] * (n - k - 1))
            return minors
        for i in range(k + 1, n):
            row_i = m[i]
            row_k = m[k]
            factor = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - factor * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return minors


def fraction_free_echelon(rows):
    """Row echelon form over the integers, Bareiss style.

    Returns (rank, pivot_cols, echelon_rows).  Row space is preserved up to
    nonzero integer row scalings, so kernels and ranks can be read off.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    piv_cols = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot_row = -1
        for i in range(r, nrows):
            if m[i][c] != 0:
                pivot_row = i
                break
        if pivot_row < 0:
            continue
        if pivot_row != r:
            m[r], m[pivot_row] = m[pivot_row], m[r]
        pivot = m[r][c]
        for i in range(r + 1, nrows):
            row_i = m[i]
            row_r = m[r]
            factor = row_i[c]
            for j in range(c + 1, ncols):
                row_i[j] = (pivot * row_i[j] - factor * row_r[j]) // prev
            row_i[c] = 0
        prev = pivot
        piv_cols.append(c)
        r += 1
    return r, piv_cols, m
