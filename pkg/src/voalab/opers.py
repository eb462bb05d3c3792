"""Connections and differential operators over truncated Laurent series:
oper shape detection, the gauge action, the unique companion-form
representative, and the Miura composition/factorization."""

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import (
    BranchError,
    DomainError,
    GaugeError,
    OperShapeError,
    PrecisionError,
)
from .series import LaurentSeries

# -- series matrices -------------------------------------------------------


def smat_identity(n):
    one = LaurentSeries.const(1)
    zero = LaurentSeries.zero()
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def smat_mul(a, b):
    n, mid, m = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = LaurentSeries.zero()
            for k in range(mid):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def smat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def smat_deriv(a):
    return [[x.differentiate() for x in row] for row in a]


def smat_inverse(a):
    """Inverse over the Laurent-series field, minimal-valuation pivoting.

    Raises GaugeError when a pivot column is exactly zero and PrecisionError
    when it is only zero to its window."""
    n = len(a)
    work = [list(row) + list(ident_row) for row, ident_row in zip(a, smat_identity(n))]
    for col in range(n):
        best = None
        saw_windowed_zero = False
        for i in range(col, n):
            e = work[i][col]
            if e.is_zero():
                if not e.is_exact():
                    saw_windowed_zero = True
                continue
            if best is None or e.valuation() < work[best][col].valuation():
                best = i
        if best is None:
            if saw_windowed_zero:
                raise PrecisionError("pivot column zero to its window")
            raise GaugeError("matrix is singular over the series field")
        work[col], work[best] = work[best], work[col]
        inv = work[col][col].inverse()
        work[col] = [x * inv for x in work[col]]
        for i in range(n):
            if i != col:
                f = work[i][col]
                if not f.is_zero():
                    work[i] = [x - f * y for x, y in zip(work[i], work[col])]
    return [row[n:] for row in work]


@dataclass(frozen=True)
class ConnectionMatrix:
    """D = d/dt - M for an n x n series matrix M."""

    matrix: tuple

    def __post_init__(self):
        n = len(self.matrix)
        if any(len(r) != n for r in self.matrix):
            raise DomainError("connection matrix must be square")
        object.__setattr__(self, "matrix", tuple(tuple(r) for r in self.matrix))

    @property
    def size(self):
        return len(self.matrix)

    def rows(self):
        return [list(r) for r in self.matrix]


@dataclass(frozen=True)
class MonicDiffOp:
    """d^n - q_1 d^(n-1) - ... - q_n, coefficients on a shared window."""

    q: tuple

    def __post_init__(self):
        if not self.q:
            raise DomainError("operator order must be >= 1")
        object.__setattr__(self, "q", tuple(self.q))

    @property
    def order(self):
        return len(self.q)

    def poly_coeffs(self):
        """[p_0, ..., p_n] with op = sum p_i d^i (p_n = 1)."""
        n = self.order
        ps = [LaurentSeries.zero()] * (n + 1)
        ps[n] = LaurentSeries.const(1)
        for i, qi in enumerate(self.q):
            ps[n - 1 - i] = -qi
        return ps

    @classmethod
    def from_poly_coeffs(cls, ps):
        n = len(ps) - 1
        lead = ps[n]
        if lead.is_zero() or lead.valuation() != 0 or lead.coeffs != (Fraction(1),):
            raise DomainError("operator must be monic")
        return cls(tuple(-ps[n - 1 - i] for i in range(n)))

    def agrees(self, other, min_window=1):
        if self.order != other.order:
            return False
        return all(a.agrees(b, min_window) for a, b in zip(self.q, other.q))


def op_mul(ps_a, ps_b):
    """Product of differential operators given as p-coefficient lists:
    d^i . f = sum_m C(i,m) f^(m) d^(i-m)."""
    na, nb = len(ps_a) - 1, len(ps_b) - 1
    out = [LaurentSeries.zero() for _ in range(na + nb + 1)]
    for i, pa in enumerate(ps_a):
        if pa.is_zero() and pa.is_exact():
            continue
        for j, pb in enumerate(ps_b):
            f = pb
            for m in range(i + 1):
                if not (f.is_zero() and f.is_exact()):
                    out[i + j - m] = out[i + j - m] + pa * Fraction(comb(i, m)) * f
                f = f.differentiate()
    return out


def sl_mode_check(op: MonicDiffOp):
    """SL(n) reading of the splitting: the d^(n-1) coefficient vanishes."""
    return op.q[0].is_zero()


# -- oper shape / gauge ----------------------------------------------------


def oper_shape_check(d: ConnectionMatrix):
    """True iff first-subdiagonal entries are units (valuation 0) and all
    entries below the first subdiagonal vanish; returns (flag, witness)."""
    m = d.matrix
    n = d.size
    for i in range(n):
        for j in range(n):
            e = m[i][j]
            if i == j + 1:
                if e.is_zero():
                    return False, {"position": (i, j), "reason": "subdiagonal vanishes"}
                if e.valuation() != 0:
                    return False, {
                        "position": (i, j),
                        "reason": f"subdiagonal valuation {e.valuation()} != 0",
                    }
            elif i > j + 1 and not e.is_zero():
                return False, {"position": (i, j), "reason": "entry below subdiagonal"}
    return True, None


def gauge_transform(g, d: ConnectionMatrix) -> ConnectionMatrix:
    """g.D with matrix part Ad(g) M - (dg/dt) g^{-1}; a left group action."""
    ginv = smat_inverse(g)
    new = smat_sub(smat_mul(smat_mul(g, d.rows()), ginv), smat_mul(smat_deriv(g), ginv))
    return ConnectionMatrix(new)


def companion_connection(op: MonicDiffOp) -> ConnectionMatrix:
    """Companion matrix with first row (q_1..q_n) and unit subdiagonal."""
    n = op.order
    rows = [[LaurentSeries.zero() for _ in range(n)] for _ in range(n)]
    for j in range(n):
        rows[0][j] = op.q[j]
    for i in range(1, n):
        rows[i][i - 1] = LaurentSeries.const(1)
    return ConnectionMatrix(rows)


def to_companion(d: ConnectionMatrix):
    """Unique companion-form representative of an oper-shaped connection.

    Returns (MonicDiffOp, gauge g) with gauge_transform(g, d) equal to the
    companion connection on the window.  The subdiagonal is normalized to 1
    by a diagonal gauge; the unipotent part is then forced row by row from
    the bottom (the companion equation C g = g M - g' is triangular)."""
    ok, witness = oper_shape_check(d)
    if not ok:
        raise OperShapeError(f"not an oper: {witness}")
    n = d.size
    m = d.rows()
    diag = [LaurentSeries.const(1)]
    for i in range(n - 1):
        diag.append(diag[i] * m[i + 1][i].inverse())
    zero = LaurentSeries.zero()
    g_diag = [[diag[i] if i == j else zero for j in range(n)] for i in range(n)]
    d1 = gauge_transform(g_diag, d)
    m1 = d1.rows()

    g = [[zero for _ in range(n)] for _ in range(n)]
    g[n - 1] = [LaurentSeries.const(1) if j == n - 1 else zero for j in range(n)]
    for r in range(n - 2, -1, -1):
        upper = g[r + 1]
        row = [
            sum((upper[k] * m1[k][j] for k in range(n)), LaurentSeries.zero())
            - upper[j].differentiate()
            for j in range(n)
        ]
        g[r] = row
    rhs = [
        sum((g[0][k] * m1[k][j] for k in range(n)), LaurentSeries.zero())
        - g[0][j].differentiate()
        for j in range(n)
    ]
    q = []
    for k in range(n):
        acc = rhs[k]
        for j in range(len(q)):
            acc = acc - q[j] * g[j][k]
        q.append(acc)
    op = MonicDiffOp(tuple(q))
    total = smat_mul(g, g_diag)
    comp = companion_connection(op)
    check = gauge_transform(total, d)
    for i in range(n):
        for j in range(n):
            if not check.matrix[i][j].agrees(comp.matrix[i][j]):
                raise PrecisionError("companion round-trip failed on the window")
    return op, total


# -- Miura -----------------------------------------------------------------


def miura_compose(chis) -> MonicDiffOp:
    """Expand (d - chi_1)(d - chi_2)...(d - chi_n), chi_1 leftmost."""
    if not chis:
        raise DomainError("need at least one factor")
    ps = [-chis[0], LaurentSeries.const(1)]
    for chi in chis[1:]:
        ps = op_mul(ps, [-chi, LaurentSeries.const(1)])
    return MonicDiffOp.from_poly_coeffs(ps)


def _riccati(op: MonicDiffOp, b):
    """E(b) = P_n(b) - sum q_i P_{n-i}(b), P_0 = 1, P_{k+1} = P_k' + b P_k.

    E(b) = op(f)/f for f with f'/f = b, so right factors (d - b) are exactly
    the series zeros of E."""
    n = op.order
    p = [LaurentSeries.const(1)]
    for _ in range(n):
        p.append(p[-1].differentiate() + b * p[-1])
    acc = p[n]
    for i, qi in enumerate(op.q):
        acc = acc - qi * p[n - 1 - i]
    return acc


def _indicial_roots(op: MonicDiffOp):
    """Rational roots of the leading t^{-1} residue equation, found by
    interpolation of E(x/t) at sample points."""
    from .linalg import rational_roots
    from .scalars import Poly

    n = op.order
    samples = []
    for x in range(n + 2):
        e = _riccati(op, LaurentSeries.t_power(-1, x))
        try:
            samples.append((Fraction(x), e.coeff(-n)))
        except PrecisionError as exc:
            raise PrecisionError("window too short for the indicial equation") from exc
    # Lagrange interpolation of the degree-<=n indicial polynomial
    poly = Poly()
    for xi, yi in samples:
        term = Poly.const(yi)
        for xj, _ in samples:
            if xj == xi:
                continue
            term = term * Poly([-xj, 1]) * Poly.const(1 / (xi - xj))
        poly = poly + term
    if poly.is_zero():
        raise BranchError("indicial equation degenerates")
    return [r for r, _ in rational_roots(poly)]


_MAX_GREEDY_STEPS = 240


def _extract_rightmost(op: MonicDiffOp, v, min_other):
    """Rightmost factor (d - b) of op with prescribed valuation v.

    Coefficients below min(other exponents) are forced from q_1 (the sum of
    all factors); the remaining ones are solved greedily, each step matching
    the residual's lowest order against the linear sensitivity of the next
    unknown.  A vanishing pivot with zero residual demand is a resonance:
    the free coefficient is set to 0 (canonical branch)."""
    if v < -1:
        raise BranchError(f"leading exponent {v} < -1 not supported")
    q1 = op.q[0]
    coeffs = {}
    if v < min_other:
        if q1.is_zero() or q1.valuation() != v:
            raise BranchError("q_1 valuation does not match the minimal exponent")
        for k in range(v, min_other):
            coeffs[k] = q1.coeff(k)
        next_j = min_other
    elif v == -1:
        roots = [r for r in _indicial_roots(op) if r != 0]
        if not roots:
            raise BranchError("no rational nonzero indicial root for exponent -1")
        coeffs[-1] = min(roots)
        next_j = 0
    else:
        next_j = v

    def current():
        if not coeffs:
            return LaurentSeries.zero()
        lo = min(coeffs)
        hi = max(coeffs)
        return LaurentSeries(lo, [coeffs.get(k, 0) for k in range(lo, hi + 1)])

    j = next_j
    steps = 0
    while steps < _MAX_GREEDY_STEPS:
        steps += 1
        b = current()
        resid = _riccati(op, b)
        if resid.is_zero() and resid.is_exact():
            break
        probe = LaurentSeries.t_power(j)
        lp = (_riccati(op, b + probe) - _riccati(op, b - probe)) * Fraction(1, 2)
        if lp.is_zero():
            if not lp.is_exact() and lp.prec <= j + 1:
                break  # window exhausted: no sensitivity visible
            # resonance: the coefficient is free, take the canonical branch
            if not resid.is_zero() and resid.valuation() < j + 2:
                raise BranchError("residual cannot be cancelled at a resonance")
            coeffs[j] = Fraction(0)
            j += 1
            continue
        t_ord = lp.valuation()
        if resid.is_zero():
            if t_ord >= resid.prec:
                break  # nothing more determinable inside the window
            coeffs[j] = Fraction(0)
            j += 1
            continue
        m0 = resid.valuation()
        if m0 < t_ord:
            raise BranchError(
                f"no factorization with these exponents (stuck residual at t^{m0})"
            )
        if m0 == t_ord:
            coeffs[j] = -resid.coeff(m0) / lp.coeff(t_ord)
        else:
            coeffs[j] = Fraction(0)
        j += 1
    else:
        raise PrecisionError("Miura recursion exceeded the step cap")
    result = current()
    if not result.is_zero() and result.valuation() != v:
        raise BranchError(
            f"solved factor has valuation {result.valuation()}, expected {v}"
        )
    final = _riccati(op, result)
    prec = None if (final.is_exact() and final.is_zero()) else j
    if result.is_zero():
        return LaurentSeries.zero(prec)
    return LaurentSeries(result.val, result.coeffs, prec)


def right_divide(op: MonicDiffOp, chi):
    """op = Q (d - chi) + R; returns (Q as MonicDiffOp, R).  Q stays monic."""
    n = op.order
    if n < 2:
        raise DomainError("cannot divide an order-1 operator")
    rem = op.poly_coeffs()
    quot = [LaurentSeries.zero() for _ in range(n)]
    for k in range(n - 1, -1, -1):
        u = rem[k + 1]
        quot[k] = u
        sub = op_mul([LaurentSeries.zero()] * k + [u], [-chi, LaurentSeries.const(1)])
        for i in range(len(sub)):
            rem[i] = rem[i] - sub[i]
    return MonicDiffOp.from_poly_coeffs(quot), rem[0]


def miura_factor(op: MonicDiffOp, leading_exponents):
    """Factor op = (d - chi_1)...(d - chi_n) for n in {2, 3}.

    `leading_exponents` selects the branch: the valuation of each chi_i
    (integers >= -1; the factorization fiber is a variety and only these
    regular-singular branches are supported).  Postcondition:
    miura_compose(result) equals op on the common window."""
    n = op.order
    if n not in (2, 3):
        raise DomainError("factorization implemented for orders 2 and 3")
    if len(leading_exponents) != n:
        raise DomainError("need one leading exponent per factor")
    exps = []
    for e in leading_exponents:
        fe = Fraction(e)
        if fe.denominator != 1:
            raise BranchError("non-integer leading exponents are not supported")
        exps.append(int(fe))
    chis_rev = []
    cur = op
    for i in range(n - 1, 0, -1):
        b = _extract_rightmost(cur, exps[i], min(exps[:i]))
        quotient, rem = right_divide(cur, b)
        if not rem.is_zero():
            raise BranchError("right division left a nonzero remainder")
        chis_rev.append(b)
        cur = quotient
    chis_rev.append(cur.q[0])
    chis = list(reversed(chis_rev))
    recomposed = miura_compose(chis)
    if not recomposed.agrees(op):
        raise BranchError("factorization does not recompose to the operator")
    for chi, e in zip(chis, exps):
        if not chi.is_zero() and chi.valuation() != e:
            raise BranchError(
                f"factor valuation {chi.valuation()} differs from requested {e}"
            )
    return chis
