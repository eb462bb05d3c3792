"""Virasoro algebra, Verma modules, exact Gram matrices, unitarity
classification and the Jantzen filtration via the h -> h + t deformation."""

from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateInputError, DomainError
from .partitions import Partition, partitions_of
from .scalars import Poly, rational, scalar_is_zero
from .smatrix import det_exact, t_valuations
from . import linalg

CENTRAL = "C"


class VirasoroElement:
    """Finite combination of modes L_n plus a central multiple of C."""

    __slots__ = ("modes", "central")

    def __init__(self, modes=None, central=0):
        self.modes = {int(n): rational(c) for n, c in (modes or {}).items() if c != 0}
        self.central = rational(central)

    @classmethod
    def L(cls, n, coeff=1):
        return cls({n: coeff})

    @classmethod
    def C(cls, coeff=1):
        return cls({}, coeff)

    def __add__(self, other):
        modes = dict(self.modes)
        for n, c in other.modes.items():
            modes[n] = modes.get(n, Fraction(0)) + c
        return VirasoroElement(modes, self.central + other.central)

    def __neg__(self):
        return VirasoroElement({n: -c for n, c in self.modes.items()}, -self.central)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = rational(c)
        return VirasoroElement({n: v * c for n, v in self.modes.items()}, self.central * c)

    def is_zero(self):
        return not self.modes and self.central == 0

    def __eq__(self, other):
        return self.modes == other.modes and self.central == other.central

    def __repr__(self):
        parts = [f"({c})*L_{n}" for n, c in sorted(self.modes.items())]
        if self.central != 0:
            parts.append(f"({self.central})*C")
        return " + ".join(parts) or "0"


def vir_bracket(a: VirasoroElement, b: VirasoroElement) -> VirasoroElement:
    """[L_n, L_m] = (n - m) L_{n+m} + (n^3 - n)/12 delta_{n,-m} C; C central."""
    out = VirasoroElement()
    for n, ca in a.modes.items():
        for m, cb in b.modes.items():
            coeff = ca * cb
            term = VirasoroElement({n + m: (n - m) * coeff})
            if n + m == 0:
                term = term + VirasoroElement.C(Fraction(n**3 - n, 12) * coeff)
            out = out + term
    return out


@dataclass(frozen=True)
class VermaParameters:
    """Central charge and conformal weight, both in the same coefficient
    ring (Fraction, or Poly for the Jantzen deformation)."""

    c: object
    h: object

    @classmethod
    def rational(cls, c, h):
        return cls(rational(c), rational(h))

    @classmethod
    def h_deformed(cls, c, h):
        """(c, h + t) over Q[t]: the Jantzen deformation direction."""
        return cls(Poly.const(rational(c)), Poly([rational(h), 1]))


def _act_monomial(n, mon, params):
    """L_n on a PBW basis monomial (a descending Partition); returns a dict
    Partition -> ring coefficient."""
    if not mon:
        if n > 0:
            return {}
        if n == 0:
            return {Partition(): params.h}
        return {Partition((-n,)): 1}
    m = -mon[0]
    if n <= m:
        return {Partition((-n,) + tuple(mon)): 1}
    tail = Partition(mon[1:])
    out = {}

    def accumulate(d, scalar=1):
        for mon2, c2 in d.items():
            prev = out.get(mon2, 0)
            out[mon2] = prev + scalar * c2

    # L_n L_m = L_m L_n + [L_n, L_m]
    for mon2, c2 in _act_monomial(n, tail, params).items():
        for mon3, c3 in _act_monomial(m, mon2, params).items():
            accumulate({mon3: c3 * c2})
    accumulate(_act_monomial(n + m, tail, params), n - m)
    if n + m == 0:
        cc = Fraction(n**3 - n, 12)
        accumulate({tail: params.c}, cc)
    return {k: v for k, v in out.items() if not scalar_is_zero(v)}


def l_act(n, vec, params):
    """Extend the monomial action linearly to a whole VermaVector (a dict
    Partition -> coefficient)."""
    out = {}
    for mon, cf in vec.items():
        for mon2, c2 in _act_monomial(n, mon, params).items():
            prev = out.get(mon2, 0)
            out[mon2] = prev + cf * c2
    return {k: v for k, v in out.items() if not scalar_is_zero(v)}


def vir_act(x: VirasoroElement, vec, params):
    """Action of a general element: modes act by straightening, C by c."""
    out = {}

    def add_scaled(d, s):
        for mon, c in d.items():
            prev = out.get(mon, 0)
            out[mon] = prev + s * c

    for n, cf in x.modes.items():
        add_scaled(l_act(n, vec, params), cf)
    if x.central != 0:
        add_scaled(vec, x.central * params.c)
    return {k: v for k, v in out.items() if not scalar_is_zero(v)}


def basis_at_level(N):
    """Level-N PBW basis partitions, descending lexicographic."""
    return partitions_of(N)


def gram_matrix(params, N):
    """Contravariant-form Gram matrix on the level-N basis, exact entries.

    (L_{-mu} v, L_{-nu} v) = coefficient of v in L_{mu_1} ... L_{mu_k}
    applied to the nu-monomial: the largest raising mode acts first.
    """
    if N < 0:
        raise DomainError("level must be nonnegative")
    basis = basis_at_level(N)
    empty = Partition()
    size = len(basis)
    out = [[0] * size for _ in range(size)]
    for j, nu in enumerate(basis):
        for i, mu in enumerate(basis):
            vec = {nu: 1}
            for p in mu:
                vec = l_act(p, vec, params)
                if not vec:
                    break
            out[i][j] = vec.get(empty, 0)
    return out


def gram_det(params, N):
    g = gram_matrix(params, N)
    if isinstance(params.c, Poly) or isinstance(params.h, Poly):
        rows = [[e if isinstance(e, Poly) else Poly.const(rational(e)) for e in row] for row in g]
        return det_exact(rows)
    return det_exact([[rational(e) for e in row] for row in g])


def minimal_c(m):
    """c_m = 1 - 6/(m(m+1))."""
    return 1 - Fraction(6, m * (m + 1))


def minimal_h(m, r, s):
    """h^m_{r,s} = ((r(m+1) - s m)^2 - 1) / (4 m (m+1))."""
    return Fraction((r * (m + 1) - s * m) ** 2 - 1, 4 * m * (m + 1))


@dataclass(frozen=True)
class UnitarityClass:
    kind: str  # "continuum" | "discrete-series" | "not-unitary"
    m: int = None
    r: int = None
    s: int = None
    notes: tuple = ()

    def to_json(self):
        out = {"kind": self.kind}
        if self.m is not None:
            out.update({"m": self.m, "r": self.r, "s": self.s})
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def classify_unitary(c, h, m_max=50) -> UnitarityClass:
    """Unitarity of V(c, h): continuum c >= 1, h >= 0, or the discrete
    series (c_m, h^m_{r,s}) with m >= 3, 1 <= s <= r < m searched up to
    m_max.  Boundary conventions (m < 3) are flagged, not asserted."""
    c, h = rational(c), rational(h)
    if c >= 1 and h >= 0:
        return UnitarityClass("continuum")
    notes = []
    for m in range(1, m_max + 1):
        if minimal_c(m) != c:
            continue
        if m < 3:
            notes.append(f"c matches degenerate series m={m}; outside the m>=3 convention")
            continue
        for r in range(1, m):
            for s in range(1, r + 1):
                if minimal_h(m, r, s) == h:
                    return UnitarityClass("discrete-series", m=m, r=r, s=s)
        notes.append(f"c = c_{m} but h is not any h^{m}_(r,s) with 1<=s<=r<m")
    return UnitarityClass("not-unitary", notes=tuple(notes))


@dataclass(frozen=True)
class JantzenReport:
    """Level-N layer dimensions of the Jantzen filtration.

    dims[m-1] = dim M(m)_N for m = 1, 2, ...; their sum equals the t-order
    of the deformed Gram determinant (the Jantzen sum formula)."""

    level: int
    dims: tuple
    ord_det: int

    def to_json(self):
        return {"level": self.level, "dims": list(self.dims), "ord_det": self.ord_det}


def jantzen_filtration(c, h, N) -> JantzenReport:
    """Layers of the Jantzen filtration at level N for the deformation
    h -> h + t with c fixed: dim M(m)_N = #{i : v_i >= m} where v_i are the
    Smith-type t-valuations of the deformed Gram matrix."""
    if N < 0:
        raise DomainError("level must be nonnegative")
    if N == 0:
        return JantzenReport(0, (), 0)
    params = VermaParameters.h_deformed(c, h)
    g = gram_matrix(params, N)
    rows = [[e if isinstance(e, Poly) else Poly.const(rational(e)) for e in row] for row in g]
    try:
        vals = t_valuations(rows)
    except DegenerateInputError as exc:
        raise DegenerateInputError(
            "deformed Gram matrix is identically singular; perturb c instead"
        ) from exc
    top = max(vals) if vals else 0
    dims = tuple(sum(1 for v in vals if v >= m) for m in range(1, top + 1))
    return JantzenReport(N, dims, sum(vals))


def radical_dimension(c, h, N):
    """dim of the radical of the undeformed level-N form (= dim M(1)_N)."""
    params = VermaParameters.rational(c, h)
    g = gram_matrix(params, N)
    rows = [[rational(e) for e in row] for row in g]
    return len(rows) - linalg.rank(rows)


def graded_character(params, N_max):
    """Graded dimensions dim V(c,h)_N, N = 0..N_max (partition numbers)."""
    if N_max < 0:
        raise DomainError("N_max must be nonnegative")
    return [len(partitions_of(n)) for n in range(N_max + 1)]
