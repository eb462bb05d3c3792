"""Affine Lie algebras over structure-constant tables, level-k vacuum
modules, and Sugawara operators (normalized away from the critical level,
raw and central at k = -h_check)."""

from dataclasses import dataclass
from fractions import Fraction

from .errors import CriticalLevelError, DomainError, TruncationError
from .liealg import FiniteLieAlgebra
from .scalars import rational


class AffineElement:
    """Finite sum of (generator tensor t^n) terms plus a central K part.

    The bracket realizes [x t^a, y t^b] = [x,y] t^{a+b} + a d_{a+b,0}(x,y) K,
    the cocycle convention matching [a_m, a_n] = m d_{m+n,0} K for the
    Heisenberg case (the printed f dg residue has the opposite sign and
    contradicts that normalization)."""

    __slots__ = ("algebra", "terms", "central")

    def __init__(self, algebra, terms=None, central=0):
        self.algebra = algebra
        self.terms = {}
        for (g, n), c in (terms or {}).items():
            c = rational(c)
            if c != 0:
                self.terms[int(g), int(n)] = c
        self.central = rational(central)

    @classmethod
    def mode(cls, algebra, gen_name, n, coeff=1):
        return cls(algebra, {(algebra.index[gen_name], n): coeff})

    @classmethod
    def K(cls, algebra, coeff=1):
        return cls(algebra, {}, coeff)

    def _check(self, other):
        if self.algebra is not other.algebra:
            raise DomainError("affine elements over different algebras")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms.get(key, Fraction(0)) + c
        return AffineElement(self.algebra, terms, self.central + other.central)

    def __neg__(self):
        return AffineElement(
            self.algebra, {k: -c for k, c in self.terms.items()}, -self.central
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        s = rational(s)
        return AffineElement(
            self.algebra, {k: c * s for k, c in self.terms.items()}, self.central * s
        )

    def is_zero(self):
        return not self.terms and self.central == 0

    def __eq__(self, other):
        return (
            self.algebra is other.algebra
            and self.terms == other.terms
            and self.central == other.central
        )

    def __repr__(self):
        names = self.algebra.gen_names
        parts = [f"({c})*{names[g]}(t^{n})" for (g, n), c in sorted(self.terms.items())]
        if self.central != 0:
            parts.append(f"({self.central})*K")
        return " + ".join(parts) or "0"


def affine_bracket(x: AffineElement, y: AffineElement) -> AffineElement:
    x._check(y)
    alg = x.algebra
    terms = {}
    central = Fraction(0)
    for (g1, a), c1 in x.terms.items():
        for (g2, b), c2 in y.terms.items():
            coeff = c1 * c2
            for g3, sc in alg.bracket(g1, g2).items():
                key = (g3, a + b)
                terms[key] = terms.get(key, Fraction(0)) + coeff * sc
            if a + b == 0:
                central += coeff * a * alg.pairing(g1, g2)
    return AffineElement(alg, terms, central)


class VacuumModule:
    """Level-k vacuum module: monomials J^{a_1}_{n_1}...J^{a_m}_{n_m} 1_k
    with n_i <= -1 in the fixed normal order (mode, then generator index);
    g[[t]] annihilates 1_k and K acts by k."""

    def __init__(self, algebra: FiniteLieAlgebra, k):
        self.algebra = algebra
        self.k = rational(k)
        self._dual_pairs = algebra.dual_pairs()

    # -- vectors -----------------------------------------------------------

    @staticmethod
    def vacuum():
        return {(): Fraction(1)}

    @staticmethod
    def add(a, b, scale=1):
        out = dict(a)
        for mon, c in b.items():
            v = out.get(mon, Fraction(0)) + scale * c
            if v == 0:
                out.pop(mon, None)
            else:
                out[mon] = v
        return out

    @staticmethod
    def scale_vec(a, s):
        s = rational(s)
        return {mon: c * s for mon, c in a.items() if c * s != 0}

    @staticmethod
    def level_of(mon):
        return -sum(n for n, _ in mon)

    def monomial(self, pairs):
        """pairs: iterable of (generator name, mode); returns a basis vector."""
        mon = tuple(sorted((int(n), self.algebra.index[g]) for g, n in pairs))
        if any(n > -1 for n, _ in mon):
            raise DomainError("vacuum monomials need modes <= -1")
        return {mon: Fraction(1)}

    def basis(self, level):
        """Monomials of the given total degree, lexicographic in the sorted
        (mode, generator) pairs."""
        gens = range(len(self.algebra.gen_names))
        out = []

        def build(remaining, min_pair, current):
            if remaining == 0:
                out.append(tuple(current))
                return
            for n in range(-1, -remaining - 1, -1):
                for g in gens:
                    pair = (n, g)
                    if pair < min_pair:
                        continue
                    build(remaining + n, pair, current + [pair])

        build(level, (-level - 1, -1), [])
        return sorted(out)

    # -- module action -----------------------------------------------------

    def act(self, gen_idx, n, vec):
        out = {}
        for mon, c in vec.items():
            for mon2, c2 in self._act_mon(gen_idx, n, mon).items():
                v = out.get(mon2, Fraction(0)) + c * c2
                if v == 0:
                    out.pop(mon2, None)
                else:
                    out[mon2] = v
        return out

    def act_combo(self, combo, n, vec):
        out = {}
        for g, c in combo.items():
            out = self.add(out, self.act(g, n, vec), scale=c)
        return out

    def _act_mon(self, g, n, mon):
        if not mon:
            if n >= 0:
                return {}
            return {((n, g),): Fraction(1)}
        head = mon[0]
        key = (n, g)
        if key <= head:
            # only creation modes can sort before an ordered monomial's head
            return {(key,) + mon: Fraction(1)}
        m, b = head
        tail = mon[1:]
        out = {}

        def put(d, scale=1):
            for mon2, c2 in d.items():
                v = out.get(mon2, Fraction(0)) + scale * c2
                if v == 0:
                    out.pop(mon2, None)
                else:
                    out[mon2] = v

        inner = self._act_mon(g, n, tail)
        for mon2, c2 in inner.items():
            put(self._act_mon(b, m, mon2), c2)
        for g3, sc in self.algebra.bracket(g, b).items():
            put(self._act_mon(g3, n + m, tail), sc)
        if n + m == 0:
            put({tail: Fraction(1)}, n * self.algebra.pairing(g, b) * self.k)
        return out

    # -- Sugawara ----------------------------------------------------------

    def sugawara_apply(self, n, vec, normalized=False):
        """S_n v for S = (1/2) sum_a :J_a(z) J^a(z): (dual-basis form of the
        orthonormal square).  `normalized` rescales by 1/(k + h_check), the
        conformal normalization; at the critical level request raw modes."""
        hv = self.algebra.dual_coxeter
        if normalized:
            if hv is None:
                raise DomainError("algebra table lacks dual_coxeter")
            if self.k == -hv:
                raise CriticalLevelError(
                    "k = -h_check: conformal normalization undefined, use raw modes"
                )
        if not vec:
            return {}
        d = max(self.level_of(mon) for mon in vec)
        out = {}
        for j in range(n - d, d + 1):
            l = n - j
            for x, xdual in self._dual_pairs:
                if j <= -1:
                    tmp = self.act_combo(xdual, l, vec)
                    tmp = self.act_combo(x, j, tmp)
                else:
                    tmp = self.act_combo(x, j, vec)
                    tmp = self.act_combo(xdual, l, tmp)
                out = self.add(out, tmp, scale=Fraction(1, 2))
        if normalized:
            out = self.scale_vec(out, Fraction(1) / (self.k + hv))
        return out

    def sugawara_mode_table(self, n, degree_cap, normalized=False):
        """Exact matrices of S_n per source level <= degree_cap."""
        tables = {}
        for d in range(degree_cap + 1):
            src = self.basis(d)
            d_out = d - n
            if d_out < 0:
                tables[d] = [[Fraction(0)] * len(src) for _ in range(0)]
                continue
            dst = {mon: i for i, mon in enumerate(self.basis(d_out))}
            mat = [[Fraction(0)] * len(src) for _ in range(len(dst))]
            for jcol, mon in enumerate(src):
                img = self.sugawara_apply(n, {mon: Fraction(1)}, normalized)
                for mon2, c in img.items():
                    mat[dst[mon2]][jcol] = c
            tables[d] = mat
        return tables


@dataclass(frozen=True)
class SugawaraVirasoroReport:
    consistent: bool
    central_charge: object
    detail: str
    witness: tuple = None

    def to_json(self):
        from .scalars import format_rational

        out = {
            "consistent": self.consistent,
            "central_charge": None
            if self.central_charge is None
            else format_rational(self.central_charge),
            "detail": self.detail,
        }
        if self.witness is not None:
            out["witness"] = [str(w) for w in self.witness]
        return out


def check_virasoro_of_sugawara(module: VacuumModule, mode_cap, degree_cap):
    """Verify [S_n, S_m] = (n-m) S_{n+m} + (n^3-n)/12 d_{n,-m} c Id for the
    normalized modes on the truncation, extracting the measured c."""
    if mode_cap == 0:
        return SugawaraVirasoroReport(True, None, "vacuous: mode_cap 0")
    candidates = []
    for n in range(2, mode_cap + 1):
        lhs = module.sugawara_apply(
            n, module.sugawara_apply(-n, module.vacuum(), True), True
        )
        rhs = module.sugawara_apply(
            -n, module.sugawara_apply(n, module.vacuum(), True), True
        )
        comm = module.add(lhs, rhs, scale=-1)
        # [S_n, S_-n] 1_k = 2n S_0 1_k + (n^3-n)/12 c 1_k and S_0 1_k = 0
        s0 = module.scale_vec(module.sugawara_apply(0, module.vacuum(), True), 2 * n)
        resid = module.add(comm, s0, scale=-1)
        coeff = resid.get((), Fraction(0))
        if resid and set(resid) != {()}:
            return SugawaraVirasoroReport(
                False, None, "commutator not proportional to the vacuum", (n,)
            )
        candidates.append((n, coeff / Fraction(n**3 - n, 12)))
    cvals = {c for _, c in candidates}
    if len(cvals) > 1:
        raise TruncationError(f"inconsistent central charge candidates: {candidates}")
    c = cvals.pop() if cvals else None
    if c is None:
        return SugawaraVirasoroReport(True, None, "no informative mode pair in cap")
    basis = [mon for d in range(degree_cap + 1) for mon in module.basis(d)]
    for n in range(-mode_cap, mode_cap + 1):
        for m in range(-mode_cap, mode_cap + 1):
            for mon in basis:
                v = {mon: Fraction(1)}
                lhs = module.add(
                    module.sugawara_apply(n, module.sugawara_apply(m, v, True), True),
                    module.sugawara_apply(m, module.sugawara_apply(n, v, True), True),
                    scale=-1,
                )
                rhs = module.scale_vec(module.sugawara_apply(n + m, v, True), n - m)
                if n + m == 0:
                    rhs = module.add(rhs, v, scale=Fraction(n**3 - n, 12) * c)
                if lhs != rhs:
                    return SugawaraVirasoroReport(
                        False, c, "Virasoro relation fails", (n, m, mon)
                    )
    return SugawaraVirasoroReport(True, c, f"Virasoro relations hold, c = {c}")


def critical_centrality_check(algebra: FiniteLieAlgebra, mode_cap, degree_cap):
    """At k = -h_check the raw Sugawara modes commute with every current
    J^a_m on the truncation; returns (passed, witness)."""
    if algebra.dual_coxeter is None:
        raise DomainError("algebra table lacks dual_coxeter")
    module = VacuumModule(algebra, -algebra.dual_coxeter)
    basis = [mon for d in range(degree_cap + 1) for mon in module.basis(d)]
    for n in range(-mode_cap, mode_cap + 1):
        for g in range(len(algebra.gen_names)):
            for m in range(-mode_cap, mode_cap + 1):
                for mon in basis:
                    v = {mon: Fraction(1)}
                    lhs = module.sugawara_apply(n, module.act(g, m, v))
                    rhs = module.act(g, m, module.sugawara_apply(n, v))
                    if module.add(lhs, rhs, scale=-1):
                        return False, (n, algebra.gen_names[g], m, mon)
    return True, None
