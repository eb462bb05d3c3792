"""Sparse exact matrices and the fraction-free linear algebra entry points."""

from fractions import Fraction

from . import kernels, linalg
from .errors import DegenerateInputError, DomainError, ShapeError
from .scalars import Poly, format_rational, rational


class SparseRationalMatrix:
    """Shape plus a (row, col) -> Fraction map; explicit zeros are dropped."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=None):
        if rows < 0 or cols < 0:
            raise ShapeError("negative matrix dimensions")
        self.rows = rows
        self.cols = cols
        self.entries = {}
        if entries:
            for (i, j), v in entries.items() if hasattr(entries, "items") else entries:
                self[i, j] = v

    @classmethod
    def from_dense(cls, dense):
        m = cls(len(dense), len(dense[0]) if dense else 0)
        for i, row in enumerate(dense):
            for j, v in enumerate(row):
                m[i, j] = v
        return m

    @classmethod
    def identity(cls, n):
        m = cls(n, n)
        for i in range(n):
            m[i, i] = 1
        return m

    def to_dense(self):
        d = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            d[i][j] = v
        return d

    def __getitem__(self, ij):
        return self.entries.get(ij, Fraction(0))

    def __setitem__(self, ij, v):
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise ShapeError(f"index {ij} outside {self.rows}x{self.cols}")
        v = rational(v)
        if v == 0:
            self.entries.pop(ij, None)
        else:
            self.entries[ij] = v

    def __add__(self, other):
        self._match(other)
        out = SparseRationalMatrix(self.rows, self.cols, dict(self.entries))
        for ij, v in other.entries.items():
            out[ij] = out[ij] + v
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s):
        s = rational(s)
        out = SparseRationalMatrix(self.rows, self.cols)
        if s != 0:
            for ij, v in self.entries.items():
                out.entries[ij] = v * s
        return out

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ShapeError("matrix product shape mismatch")
        by_row = {}
        for (i, k), v in other.entries.items():
            by_row.setdefault(i, []).append((k, v))
        out = SparseRationalMatrix(self.rows, other.cols)
        acc = {}
        for (i, k), v in self.entries.items():
            for j, w in by_row.get(k, ()):
                acc[i, j] = acc.get((i, j), Fraction(0)) + v * w
        for ij, v in acc.items():
            out[ij] = v
        return out

    def commutator(self, other):
        return (self @ other) - (other @ self)

    def transpose(self):
        out = SparseRationalMatrix(self.cols, self.rows)
        for (i, j), v in self.entries.items():
            out.entries[j, i] = v
        return out

    def apply(self, vec):
        if len(vec) != self.cols:
            raise ShapeError("vector length mismatch")
        out = [Fraction(0)] * self.rows
        for (i, j), v in self.entries.items():
            if vec[j]:
                out[i] += v * vec[j]
        return out

    def is_zero(self):
        return not self.entries

    def _match(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ShapeError("matrix shape mismatch")

    def __eq__(self, other):
        return (
            isinstance(other, SparseRationalMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"SparseRationalMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"

    def to_json(self):
        items = sorted(self.entries.items())
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[i, j, format_rational(v)] for (i, j), v in items],
        }

    @classmethod
    def from_json(cls, obj):
        m = cls(int(obj["rows"]), int(obj["cols"]))
        for i, j, v in obj["entries"]:
            m[int(i), int(j)] = rational(v)
        return m


def det_exact(m):
    """Exact determinant; accepts sparse/dense rationals or dense Q[t] rows."""
    dense = m.to_dense() if isinstance(m, SparseRationalMatrix) else m
    if dense and isinstance(dense[0][0], Poly):
        return linalg.det_ring(dense, lambda a, b: a.divexact(b))
    return linalg.det_rational(dense)


def kernel_basis(m):
    """Basis of the exact right kernel; empty iff m is injective."""
    dense = m.to_dense() if isinstance(m, SparseRationalMatrix) else m
    return linalg.kernel(dense)


def t_valuations(m):
    """Smith-type t-adic valuations of a square nonsingular matrix over Q[t].

    Elimination over the local ring at t: each step pivots on an entry of
    minimal valuation and clears its row and column using only unit row
    scalings and transvections, so the multiset of valuations is exactly the
    elementary-divisor data.  Their sum is ord_t det.
    """
    dense = m.to_dense() if isinstance(m, SparseRationalMatrix) else m
    n = len(dense)
    if any(len(r) != n for r in dense):
        raise ShapeError("t_valuations needs a square matrix")
    work = [[e if isinstance(e, Poly) else Poly.const(rational(e)) for e in row] for row in dense]
    vals = []
    size = n
    while size > 0:
        best = None
        for i in range(size):
            for j in range(size):
                e = work[i][j]
                if e.is_zero():
                    continue
                v = e.valuation()
                if best is None or v < best[0]:
                    best = (v, i, j)
        if best is None:
            raise DegenerateInputError("matrix is singular over Q[t]")
        v, pi, pj = best
        vals.append(v)
        work[0], work[pi] = work[pi], work[0]
        for row in work:
            row[0], row[pj] = row[pj], row[0]
        pivot_unit = work[0][0].shift_down(v)
        for i in range(1, size):
            a = work[i][0]
            if a.is_zero():
                continue
            aq = a.shift_down(v)
            work[i] = [pivot_unit * work[i][j] - aq * work[0][j] for j in range(size)]
        for j in range(1, size):
            b = work[0][j]
            if b.is_zero():
                continue
            bq = b.shift_down(v)
            for i in range(size):
                work[i][j] = pivot_unit * work[i][j] - bq * work[i][0]
        work = [row[1:] for row in work[1:]]
        size -= 1
    return sorted(vals)


def ldl_pivots(m):
    """Pivots of the exact LDL decomposition of a symmetric matrix.

    d_k = det M_k / det M_{k-1}; all pivots positive iff positive definite.
    Raises DomainError when a zero leading principal minor interrupts the
    recursion before the matrix is exhausted.
    """
    dense = m.to_dense() if isinstance(m, SparseRationalMatrix) else m
    n = len(dense)
    if any(len(r) != n for r in dense):
        raise ShapeError("ldl_pivots needs a square matrix")
    if n == 0:
        return []
    int_rows, scales = linalg.rows_to_int(dense)
    minors_scaled = kernels.leading_principal_minors(int_rows)
    minors = []
    denom = 1
    for k in range(n):
        denom *= scales[k]
        if minors_scaled[k] is None:
            raise DomainError(f"zero leading principal minor at size {k}")
        minors.append(Fraction(minors_scaled[k], denom))
    pivots = []
    prev = Fraction(1)
    for k in range(n):
        if minors[k] == 0 and k < n - 1:
            raise DomainError(f"zero leading principal minor at size {k + 1}")
        pivots.append(minors[k] / prev)
        prev = minors[k] if minors[k] != 0 else prev
    return pivots


def is_positive_definite(m):
    try:
        return all(p > 0 for p in ldl_pivots(m))
    except DomainError:
        return False
