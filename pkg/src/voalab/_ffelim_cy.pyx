# cython: language_level=3
"""Fraction-free integer elimination kernels (compiled backend).

Same contracts as _ffelim_py; entries stay arbitrary-precision Python ints,
Cython removes the interpreter overhead of the inner loops.
"""


def bareiss_det(rows):
    cdef Py_ssize_t n = len(rows)
    if n == 0:
        return 1
    cdef list m = [list(r) for r in rows]
    cdef Py_ssize_t i, j, k
    cdef int sign = 1
    cdef list row_i, row_k
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
        row_k = m[k]
        for i in range(k + 1, n):
            row_i = m[i]
            factor = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - factor * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    if sign > 0:
        return m[n - 1][n - 1]
    return -m[n - 1][n - 1]


def leading_principal_minors(rows):
    cdef Py_ssize_t n = len(rows)
    cdef list m = [list(r) for r in rows]
    cdef list minors = []
    cdef Py_ssize_t i, j, k
    cdef list row_i, row_k
    prev = 1
    for k in range(n):
        pivot = m[k][k]
        minors.append(pivot)
        if pivot == 0:
            minors.extend([None] * (n - k - 1))
            return minors
        row_k = m[k]
        for i in range(k + 1, n):
            row_i = m[i]
            factor = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - factor * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return minors


def fraction_free_echelon(rows):
    cdef list m = [list(row) for row in rows]
    cdef Py_ssize_t nrows = len(m)
    cdef Py_ssize_t ncols = len(m[0]) if nrows else 0
    cdef list piv_cols = []
    cdef Py_ssize_t r = 0, c, i, j
    cdef Py_ssize_t pivot_row
    cdef list row_i, row_r
    prev = 1
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
        row_r = m[r]
        for i in range(r + 1, nrows):
            row_i = m[i]
            factor = row_i[c]
            for j in range(c + 1, ncols):
                row_i[j] = (pivot * row_i[j] - factor * row_r[j]) // prev
            row_i[c] = 0
        prev = pivot
        piv_cols.append(c)
        r += 1
    return r, piv_cols, m
