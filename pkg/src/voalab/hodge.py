"""Monodromy weight filtrations of nilpotent endomorphisms, graded
polarization pairings, Griffiths/strictness checks for filtered connections
over truncated series, and the limit twist by exp(log(t) N / 2 pi i)."""

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from . import linalg
from .errors import (
    DomainError,
    InvarianceError,
    NilpotencyError,
    PrecisionError,
)
from .scalars import format_rational, rational
from .series import LaurentSeries
from .opers import smat_mul, smat_inverse

# -- exact subspace helpers --------------------------------------------------


def row_space_basis(vectors):
    if not vectors:
        return []
    red, piv = linalg.rref(vectors)
    return [red[i] for i in range(len(piv))]


def in_span(basis, v):
    if not basis:
        return all(x == 0 for x in v)
    cols = linalg.transpose(basis)
    return linalg.solve(cols, v) is not None


def extend_basis(current, candidates):
    """Greedily extend `current` by candidate vectors to a larger basis."""
    out = [list(v) for v in current]
    r = linalg.rank(out) if out else 0
    added = []
    for cand in candidates:
        trial = out + [list(cand)]
        if linalg.rank(trial) > r:
            out = trial
            added.append(list(cand))
            r += 1
    return out, added


def spans_equal(a, b):
    ra = linalg.rank(a) if a else 0
    rb = linalg.rank(b) if b else 0
    if ra != rb:
        return False
    return linalg.rank(a + b) == ra if (a or b) else True


# -- nilpotent endomorphisms and the weight filtration ----------------------


class NilpotentEndo:
    """Square rational matrix with N^nu = 0, N^(nu-1) != 0."""

    def __init__(self, matrix):
        self.matrix = [[Fraction(x) for x in row] for row in matrix]
        n = len(self.matrix)
        if any(len(r) != n for r in self.matrix):
            raise DomainError("nilpotent endomorphism must be square")
        power = linalg.identity(n)
        nu = None
        for k in range(1, n + 2):
            power = linalg.mat_mul(power, self.matrix)
            if all(x == 0 for row in power for x in row):
                nu = k
                break
        if nu is None:
            raise NilpotencyError("matrix is not nilpotent")
        self.size = n
        self.index = nu

    def apply(self, v):
        return linalg.mat_vec(self.matrix, v)

    def power(self, k):
        return linalg.mat_pow(self.matrix, k)


@dataclass(frozen=True)
class WeightFiltration:
    """Centered chain W_{-nu+1} <= ... <= W_{nu-1} as basis lists."""

    size: int
    index: int
    steps: dict  # k -> list of basis vectors for W_k

    def basis(self, k):
        if k >= self.index:
            k = self.index - 1
        if k <= -self.index:
            return []
        return self.steps.get(k, [])

    def graded_basis(self, k):
        """Representatives of Gr_k = W_k / W_{k-1}."""
        lower = self.basis(k - 1)
        _, added = extend_basis(lower, self.basis(k))
        return added

    def to_json(self):
        return {
            "index": self.index,
            "steps": {
                str(k): [[format_rational(x) for x in v] for v in self.basis(k)]
                for k in range(-self.index + 1, self.index)
            },
        }


def _jordan_chains(n: NilpotentEndo):
    """Jordan chain tops by decreasing block size: K_s relative to
    K_{s-1} + N K_{s+1}."""
    nu = n.index
    kers = {0: []}
    for j in range(1, nu + 1):
        kers[j] = linalg.kernel(n.power(j))
    kers[nu + 1] = kers[nu]
    chains = []
    for s in range(nu, 0, -1):
        avoid = [list(v) for v in kers[s - 1]]
        avoid += [n.apply(v) for v in kers[s + 1]]
        avoid = row_space_basis(avoid) if avoid else []
        _, tops = extend_basis(avoid, kers[s])
        for top in tops:
            chain = [top]
            for _ in range(s - 1):
                chain.append(n.apply(chain[-1]))
            chains.append(chain)
    return chains


def weight_filtration(n: NilpotentEndo) -> WeightFiltration:
    """The unique centered filtration with N W_k <= W_{k-2} and
    N^k : Gr_k ~ Gr_{-k}; built from exact Jordan chains (a size-s block
    contributes weights s-1, s-3, ..., -(s-1)) and verified before return."""
    nu = n.index
    weighted = []
    for chain in _jordan_chains(n):
        s = len(chain)
        for j, vec in enumerate(chain):
            weighted.append((s - 1 - 2 * j, vec))
    if len(weighted) != n.size:
        raise DomainError("Jordan chain construction lost vectors")
    steps = {}
    for k in range(-nu + 1, nu):
        vecs = [v for w, v in weighted if w <= k]
        steps[k] = row_space_basis(vecs)
    filt = WeightFiltration(n.size, nu, steps)
    ok, witness = verify_weight_filtration(n, filt)
    if not ok:
        raise DomainError(f"constructed filtration fails its defining property: {witness}")
    return filt


def verify_weight_filtration(n: NilpotentEndo, filt: WeightFiltration):
    """Both defining properties, checked exactly."""
    nu = n.index
    for k in range(-nu + 1, nu):
        lower = filt.basis(k - 1)
        if lower and not all(in_span(filt.basis(k), v) for v in lower):
            return False, f"W_{k-1} not inside W_{k}"
        target = filt.basis(k - 2)
        for v in filt.basis(k):
            if not in_span(target, n.apply(v)):
                return False, f"N W_{k} escapes W_{k-2}"
    for k in range(0, nu):
        up = filt.graded_basis(k)
        down = filt.graded_basis(-k)
        if len(up) != len(down):
            return False, f"dim Gr_{k} != dim Gr_{-k}"
        if k == 0 or not up:
            continue
        lower = filt.basis(-k - 1)
        images = [n.apply(v) for v in up]
        for j in range(k - 1):
            images = [n.apply(v) for v in images]
        cols = linalg.transpose(down + lower) if (down or lower) else []
        mat = []
        for img in images:
            sol = linalg.solve(cols, img) if cols else None
            if sol is None:
                return False, f"N^{k} Gr_{k} escapes W_{-k}"
            mat.append(sol[: len(down)])
        if linalg.rank(mat) != len(up):
            return False, f"N^{k}: Gr_{k} -> Gr_{-k} is not an isomorphism"
    return True, None


def exp_nilpotent(n: NilpotentEndo):
    """exp(N) as an exact rational matrix (finite sum by nilpotency)."""
    out = linalg.identity(n.size)
    term = linalg.identity(n.size)
    for j in range(1, n.index + 1):
        term = linalg.mat_mul(term, n.matrix)
        out = linalg.mat_add(out, linalg.mat_scale(term, Fraction(1, factorial(j))))
    return out


def monodromy_preserves(filt: WeightFiltration, t_matrix):
    """T W_k = W_k for every step, exactly."""
    for k in range(-filt.index + 1, filt.index):
        basis = filt.basis(k)
        image = [linalg.mat_vec(t_matrix, v) for v in basis]
        if not spans_equal(basis, image):
            return False, k
    return True, None


# -- graded polarization pairings -------------------------------------------


@dataclass(frozen=True)
class GradedPairing:
    forms: dict  # k >= 0 -> dense matrix of B_k on Gr_k
    nondegenerate: dict

    def to_json(self):
        return {
            str(k): {
                "matrix": [[format_rational(x) for x in row] for row in m],
                "nondegenerate": self.nondegenerate[k],
            }
            for k, m in sorted(self.forms.items())
        }


def graded_pairing(b_matrix, n: NilpotentEndo, filt: WeightFiltration) -> GradedPairing:
    """B_k(u, v) = B(u, N^k v) on Gr_k representatives for k >= 0.

    Requires infinitesimal invariance B(Nu, v) + B(u, Nv) = 0; each B_k is
    checked for nondegeneracy (guaranteed when B itself is)."""
    b = [[Fraction(x) for x in row] for row in b_matrix]
    nt_b = linalg.mat_mul(linalg.transpose(n.matrix), b)
    b_n = linalg.mat_mul(b, n.matrix)
    if any(x + y != 0 for rx, ry in zip(nt_b, b_n) for x, y in zip(rx, ry)):
        raise InvarianceError("pairing is not N-invariant: B(Nu,v) + B(u,Nv) != 0")
    forms = {}
    nondeg = {}
    for k in range(0, filt.index):
        reps = filt.graded_basis(k)
        if not reps:
            continue
        nk = n.power(k)
        mat = []
        for u in reps:
            row = []
            for v in reps:
                nv = linalg.mat_vec(nk, v)
                row.append(sum(x * y for x, y in zip(u, linalg.mat_vec(b, nv))))
            mat.append(row)
        forms[k] = mat
        nondeg[k] = linalg.det_rational(mat) != 0
    return GradedPairing(forms, nondeg)


# -- filtered connections over series ----------------------------------------


@dataclass
class FilteredConnection:
    """nabla = d + Gamma(t) dt on a free series module with a decreasing
    filtration F^p given by frames (lists of series vectors)."""

    gamma: list  # series matrix
    filtration: dict = field(default_factory=dict)  # p -> list of vectors
    pairing: object = None

    @property
    def rank(self):
        return len(self.gamma)

    def nabla(self, vec):
        """Coefficient of dt in nabla(v): v' + Gamma v."""
        n = self.rank
        out = []
        for i in range(n):
            acc = vec[i].differentiate()
            for j in range(n):
                acc = acc + self.gamma[i][j] * vec[j]
            out.append(acc)
        return out

    def piece(self, p):
        ps = sorted(self.filtration)
        if not ps:
            raise DomainError("no filtration data")
        if p < ps[0]:
            return [_unit_vector(self.rank, i) for i in range(self.rank)]
        if p > ps[-1]:
            return []
        candidates = [q for q in ps if q >= p]
        return self.filtration[candidates[0]] if candidates else []


def _unit_vector(n, i):
    return [LaurentSeries.const(1) if j == i else LaurentSeries.zero() for j in range(n)]


def _series_rank(rows):
    """Rank over the series field, min-valuation pivoting; raises
    PrecisionError when a pivot decision is blocked by the window."""
    if not rows:
        return 0
    work = [list(r) for r in rows]
    ncols = len(work[0])
    row = 0
    for col in range(ncols):
        if row == len(work):
            break
        best = None
        saw_window_zero = False
        for i in range(row, len(work)):
            e = work[i][col]
            if e.is_zero():
                if not e.is_exact():
                    saw_window_zero = True
                continue
            if best is None or e.valuation() < work[best][col].valuation():
                best = i
        if best is None:
            if saw_window_zero:
                raise PrecisionError("rank undecidable on the window")
            continue
        work[row], work[best] = work[best], work[row]
        inv = work[row][col].inverse()
        work[row] = [x * inv for x in work[row]]
        for i in range(len(work)):
            if i != row and not work[i][col].is_zero():
                f = work[i][col]
                work[i] = [x - f * y for x, y in zip(work[i], work[row])]
        row += 1
    return row


def _series_membership(frames, target):
    """target in the series-field span of the frame vectors, decided on the
    window; returns True/False or raises PrecisionError."""
    if not frames:
        return all(x.is_zero() for x in target)
    n = len(target)
    cols = len(frames)
    aug = [[frames[j][i] for j in range(cols)] + [target[i]] for i in range(n)]
    row = 0
    for col in range(cols):
        best = None
        saw_window_zero = False
        for i in range(row, n):
            e = aug[i][col]
            if e.is_zero():
                if not e.is_exact():
                    saw_window_zero = True
                continue
            if best is None or e.valuation() < aug[best][col].valuation():
                best = i
        if best is None:
            if saw_window_zero:
                raise PrecisionError("membership undecidable on the window")
            continue
        aug[row], aug[best] = aug[best], aug[row]
        inv = aug[row][col].inverse()
        aug[row] = [x * inv for x in aug[row]]
        for i in range(n):
            if i != row and not aug[i][col].is_zero():
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[row])]
        row += 1
    for i in range(row, n):
        if not aug[i][cols].is_zero():
            return False
    return True


@dataclass(frozen=True)
class FiltrationReport:
    passed: bool
    detail: str
    witness: tuple = None

    def to_json(self):
        out = {"passed": self.passed, "detail": self.detail}
        if self.witness is not None:
            out["witness"] = [str(w) for w in self.witness]
        return out


def griffiths_check(fc: FilteredConnection) -> FiltrationReport:
    """nabla(F^p) inside F^(p-1) (x) dt for every filtration step."""
    if not fc.filtration:
        raise DomainError("no filtration data")
    ps = sorted(fc.filtration)
    for p in sorted(fc.filtration, reverse=True):
        lower = fc.piece(p - 1)
        for idx, vec in enumerate(fc.filtration[p]):
            img = fc.nabla(vec)
            if not _series_membership(lower, img):
                return FiltrationReport(
                    False, "transversality fails", (p, idx)
                )
    return FiltrationReport(True, f"Griffiths transversality holds for p in {ps}")


def strictness_check(fc: FilteredConnection) -> FiltrationReport:
    """The induced graded maps Gr^p -> Gr^(p-1) are isomorphisms on the
    window (square blocks with unit determinant); requires transversality."""
    g = griffiths_check(fc)
    if not g.passed:
        return FiltrationReport(False, f"precondition: {g.detail}", g.witness)
    ps = sorted(fc.filtration)
    p_top = max(ps)
    bottom_rank = _series_rank(fc.filtration[ps[0]])
    p_min = ps[0] if bottom_rank == fc.rank else ps[0] - 1
    pieces = {}
    adapted = []
    for p in range(p_top, p_min - 1, -1):
        added = []
        for v in fc.piece(p):
            if _series_rank(adapted + [v]) > len(adapted):
                adapted.append(v)
                added.append(v)
        pieces[p] = added
    if len(adapted) != fc.rank:
        return FiltrationReport(False, "frames do not span the module", None)
    basis_matrix = [[adapted[j][i] for j in range(fc.rank)] for i in range(fc.rank)]
    inv = smat_inverse(basis_matrix)
    offsets = {}
    pos = 0
    for p in range(p_top, p_min - 1, -1):
        offsets[p] = (pos, pos + len(pieces[p]))
        pos += len(pieces[p])
    for p in range(p_top, p_min, -1):
        up = pieces[p]
        down = pieces[p - 1]
        if not up and not down:
            continue
        if len(up) != len(down):
            return FiltrationReport(
                False, f"graded ranks differ at p={p}: {len(up)} vs {len(down)}", (p,)
            )
        block = []
        lo, hi = offsets[p - 1]
        for vec in up:
            img = fc.nabla(vec)
            coords = [
                sum((inv[r][i] * img[i] for i in range(fc.rank)), LaurentSeries.zero())
                for r in range(fc.rank)
            ]
            block.append(coords[lo:hi])
        mat = [[block[c][r] for c in range(len(up))] for r in range(len(up))]
        det = _series_det(mat)
        if det.is_zero() or det.valuation() != 0:
            return FiltrationReport(
                False, f"graded map at p={p} is not a unit isomorphism", (p,)
            )
    return FiltrationReport(True, "all graded maps are unit isomorphisms (oper-type)")


def _series_det(m):
    n = len(m)
    if n == 0:
        return LaurentSeries.const(1)
    if n == 1:
        return m[0][0]
    acc = LaurentSeries.zero()
    for i in range(n):
        minor = [row[1:] for k, row in enumerate(m) if k != i]
        term = m[i][0] * _series_det(minor)
        acc = acc + (term if i % 2 == 0 else -term)
    return acc


def standard_oper_flag(conn_rows):
    """The full flag F^p = span(e_1..e_{n-p}) attached to a companion-form
    connection D = d/dt - M: a FilteredConnection with Gamma = -M."""
    n = len(conn_rows)
    gamma = [[-conn_rows[i][j] for j in range(n)] for i in range(n)]
    filtration = {}
    for p in range(0, n):
        filtration[p] = [_unit_vector(n, i) for i in range(n - p)]
    return FilteredConnection(gamma, filtration)


# -- limit twist -------------------------------------------------------------


class FormalTwist:
    """Polynomial in the commuting formal symbols log(t) and (2 pi i)^{-1}:
    terms (a, b) -> coefficient of log(t)^a (2 pi i)^{-b}."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for key, c in (terms or {}).items():
            c = rational(c)
            if c != 0:
                self.terms[key] = c

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    def __add__(self, other):
        out = dict(self.terms)
        for key, c in other.terms.items():
            v = out.get(key, Fraction(0)) + c
            if v == 0:
                out.pop(key, None)
            else:
                out[key] = v
        return FormalTwist(out)

    def scale(self, c):
        c = rational(c)
        return FormalTwist({k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        return self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items()):
            sym = []
            if a:
                sym.append("log(t)" + (f"^{a}" if a > 1 else ""))
            if b:
                sym.append("(2*pi*i)^-" + str(b))
            body = "*".join(sym) if sym else "1"
            parts.append(f"({format_rational(c)})*{body}")
        return " + ".join(parts)


def limit_twist(frames, n: NilpotentEndo):
    """Frames multiplied by exp(log(t) N / (2 pi i)); nilpotency truncates
    the exponential, so entries are exact FormalTwist polynomials."""
    def twist_vector(v):
        v = [Fraction(x) for x in v]
        out = [FormalTwist.const(c) for c in v]
        cur = v
        for j in range(1, n.index + 1):
            cur = n.apply(cur)
            coeff = Fraction(1, factorial(j))
            for r in range(n.size):
                if cur[r]:
                    out[r] = out[r] + FormalTwist({(j, j): cur[r] * coeff})
        return out

    if isinstance(frames, dict):
        return {p: [twist_vector(v) for v in vs] for p, vs in frames.items()}
    return [twist_vector(v) for v in frames]
