"""Knizhnik-Zamolodchikov systems: Casimir matrices on sl2 tensor products,
flatness via the infinitesimal braid relations, regular-singular log-series
solutions of the reduced two-point equation, associator and monodromy."""

import functools
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import linalg
from .errors import (
    DomainError,
    PrecisionError,
    ResonanceCapError,
    UnsupportedSpectrumError,
)
from .liealg import FiniteLieAlgebra
from .scalars import rational
from .series import LaurentSeries, LogSeries
from .smatrix import SparseRationalMatrix

_LOG_CAP = 64


def sl2_irrep(dim):
    """(E, F, H) on the weight basis v_0..v_{dim-1}."""
    if dim < 1:
        raise DomainError("irrep dimension must be >= 1")
    e = [[Fraction(0)] * dim for _ in range(dim)]
    f = [[Fraction(0)] * dim for _ in range(dim)]
    h = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(dim):
        h[i][i] = Fraction(dim - 1 - 2 * i)
        if i + 1 < dim:
            f[i + 1][i] = Fraction(1)
            e[i][i + 1] = Fraction((i + 1) * (dim - 1 - i))
    return e, f, h


def _slot_matrices(dim):
    alg = FiniteLieAlgebra.sl2()
    e, f, h = sl2_irrep(dim)
    return {alg.index["e"]: e, alg.index["f"]: f, alg.index["h"]: h}, alg


def _tensor_operator(slot_dims, slot_mats):
    """Sparse operator acting as the given matrix on one or two slots."""
    total = 1
    for d in slot_dims:
        total *= d
    strides = []
    acc = 1
    for d in reversed(slot_dims):
        strides.append(acc)
        acc *= d
    strides.reverse()
    out = SparseRationalMatrix(total, total)

    def index(t):
        return sum(i * s for i, s in zip(t, strides))

    import itertools

    for tup in itertools.product(*(range(d) for d in slot_dims)):
        base = index(tup)
        # compose single-slot actions sequentially
        partial = {base: Fraction(1)}
        for slot, mat in slot_mats:
            nxt = {}
            for idx, c in partial.items():
                t = list(_unindex(idx, slot_dims, strides))
                col = t[slot]
                for r in range(slot_dims[slot]):
                    v = mat[r][col]
                    if v:
                        t2 = list(t)
                        t2[slot] = r
                        key = index(t2)
                        nxt[key] = nxt.get(key, Fraction(0)) + c * v
            partial = nxt
        for idx, c in partial.items():
            if c:
                out[idx, base] = out[idx, base] + c
    return out


def _unindex(idx, slot_dims, strides):
    out = []
    for d, s in zip(slot_dims, strides):
        out.append((idx // s) % d)
    return out


@dataclass(frozen=True)
class KZSystem:
    """Casimir data Omega_ij on V_1 (x) ... (x) V_n; kappa = k + 2 is the
    sl2 level shift used when forming connections Omega/kappa."""

    slot_dims: tuple
    omegas: dict  # (i, j) with i < j -> SparseRationalMatrix
    kappa: object = None

    def omega(self, i, j):
        if i == j:
            raise DomainError("Omega_ii is not defined")
        key = (min(i, j), max(i, j))
        return self.omegas[key]

    @property
    def dimension(self):
        total = 1
        for d in self.slot_dims:
            total *= d
        return total


def casimir_matrices(slot_dims, kappa=None) -> KZSystem:
    """Exact Omega_ij = sum_a J_a (x) J^a acting in slots i, j (dual bases
    for the invariant form normalized by (theta, theta) = 2)."""
    slot_dims = tuple(int(d) for d in slot_dims)
    if any(d < 1 for d in slot_dims):
        raise DomainError("slot dimensions must be >= 1")
    alg = FiniteLieAlgebra.sl2()
    pairs = alg.dual_pairs()
    reps = {d: _slot_matrices(d)[0] for d in set(slot_dims)}
    omegas = {}
    n = len(slot_dims)
    for i in range(n):
        for j in range(i + 1, n):
            total = SparseRationalMatrix(_prod(slot_dims), _prod(slot_dims))
            for x, xdual in pairs:
                mat_i = _combo_matrix(reps[slot_dims[i]], x)
                mat_j = _combo_matrix(reps[slot_dims[j]], xdual)
                total = total + _tensor_operator(slot_dims, [(i, mat_i), (j, mat_j)])
            omegas[i, j] = total
    return KZSystem(slot_dims, omegas, None if kappa is None else rational(kappa))


def _prod(dims):
    out = 1
    for d in dims:
        out *= d
    return out


def _combo_matrix(rep, combo):
    dim = len(next(iter(rep.values())))
    out = [[Fraction(0)] * dim for _ in range(dim)]
    for g, c in combo.items():
        m = rep[g]
        for i in range(dim):
            for j in range(dim):
                if m[i][j]:
                    out[i][j] += c * m[i][j]
    return out


def flatness_check(system: KZSystem):
    """Infinitesimal braid relations: [O_ij, O_ik + O_jk] = 0 for distinct
    i, j, k and [O_ij, O_kl] = 0 for disjoint pairs; (ok, witness)."""
    n = len(system.slot_dims)
    import itertools

    for i, j, k in itertools.combinations(range(n), 3):
        oij, oik, ojk = system.omega(i, j), system.omega(i, k), system.omega(j, k)
        for lhs, name in (
            (oij.commutator(oik + ojk), (i, j, "with", i, k, "+", j, k)),
            (oik.commutator(oij + ojk), (i, k, "with", i, j, "+", j, k)),
            (ojk.commutator(oij + oik), (j, k, "with", i, j, "+", i, k)),
        ):
            if not lhs.is_zero():
                return False, {"relation": " ".join(map(str, name))}
    for (i, j), (k, l) in itertools.combinations(
        [p for p in itertools.combinations(range(n), 2)], 2
    ):
        if {i, j} & {k, l}:
            continue
        if not system.omega(i, j).commutator(system.omega(k, l)).is_zero():
            return False, {"relation": f"[O_{i}{j}, O_{k}{l}]"}
    return True, None


@dataclass(frozen=True)
class ReducedKZ:
    """d phi/dx = (A/x - B/(1-x)) phi with rational square matrices A, B."""

    a: tuple
    b: tuple

    def __post_init__(self):
        a = tuple(tuple(Fraction(x) for x in row) for row in self.a)
        b = tuple(tuple(Fraction(x) for x in row) for row in self.b)
        if len(a) != len(b) or any(len(r) != len(a) for r in a + b):
            raise DomainError("A and B must be square of equal size")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def dim(self):
        return len(self.a)


def reduced_from_casimirs(slot_dims, kappa):
    """The standard 3-slot bridge: A = Omega_12/kappa, B = Omega_23/kappa."""
    system = casimir_matrices(slot_dims, kappa)
    if len(system.slot_dims) < 3:
        raise DomainError("need at least 3 slots for the reduced equation")
    kappa = rational(kappa)
    a = system.omega(0, 1).scale(Fraction(1) / kappa).to_dense()
    b = system.omega(1, 2).scale(Fraction(1) / kappa).to_dense()
    return ReducedKZ(tuple(map(tuple, a)), tuple(map(tuple, b)))


class _Spectral:
    """Generalized eigen-decomposition of a rational matrix with rational
    spectrum: block coordinates in which the residue matrix is block
    diagonal, one block per eigenvalue."""

    def __init__(self, a):
        self.dim = len(a)
        cp = linalg.char_poly(a)
        roots = linalg.rational_roots(cp)
        if sum(m for _, m in roots) != self.dim:
            raise UnsupportedSpectrumError(
                "residue matrix has irrational or non-rational eigenvalues"
            )
        self.eigenvalues = [lam for lam, _ in roots]
        columns = []
        self.block_range = {}
        for lam, mult in roots:
            shifted = [
                [a[i][j] - (lam if i == j else 0) for j in range(self.dim)]
                for i in range(self.dim)
            ]
            power = linalg.mat_pow(shifted, mult)
            basis = linalg.kernel(power)
            if len(basis) != mult:
                raise UnsupportedSpectrumError("generalized eigenspace dimension mismatch")
            start = len(columns)
            columns.extend(basis)
            self.block_range[lam] = (start, start + mult)
        self.s = linalg.transpose(columns)
        self.sinv = linalg.inverse(self.s)
        self.a_t = linalg.mat_mul(self.sinv, linalg.mat_mul(a, self.s))
        self.inv_cache = {}

    def shifted_inverse(self, mu):
        """(mu I - A)^{-1} in block coordinates (mu not an eigenvalue)."""
        if mu not in self.inv_cache:
            m = [
                [(mu if i == j else Fraction(0)) - self.a_t[i][j] for j in range(self.dim)]
                for i in range(self.dim)
            ]
            self.inv_cache[mu] = linalg.inverse(m)
        return self.inv_cache[mu]

    def to_block(self, v):
        return linalg.mat_vec(self.sinv, v)

    def from_block(self, v):
        return linalg.mat_vec(self.s, v)

    def project_block(self, v, lam):
        start, end = self.block_range[lam]
        return [v[i] if start <= i < end else Fraction(0) for i in range(self.dim)]


@dataclass
class KZSolution:
    """phi_w at one regular-singular point: per-eigenvalue branches with
    coefficient vectors coeffs[(lam)][i][j] (x^(lam+i) log^j x)."""

    dim: int
    order: int
    at: int
    branches: dict  # lam -> list over i of list over j of vectors

    def component(self, idx) -> LogSeries:
        branches = {}
        for lam, grid in self.branches.items():
            max_j = max((len(row) for row in grid), default=0)
            tables = []
            for j in range(max_j):
                coeffs = [
                    (grid[i][j][idx] if j < len(grid[i]) else Fraction(0))
                    for i in range(len(grid))
                ]
                tables.append(LaurentSeries(0, coeffs, self.order + 1))
            branches[lam] = tables
        return LogSeries(branches)

    def components(self):
        return [self.component(i) for i in range(self.dim)]

    def leading_projections(self):
        """w_{0,0}^(lam) per branch; their sum recovers the seed."""
        return {
            lam: (grid[0][0] if grid and grid[0] else [Fraction(0)] * self.dim)
            for lam, grid in self.branches.items()
        }

    def evaluate(self, x, log_shift=0, loop_twist=False):
        return [
            comp.evaluate(x, mpmath, log_shift=log_shift, loop_twist=loop_twist)
            for comp in self.components()
        ]


@functools.lru_cache(maxsize=32)
def _spectral_setup(red: ReducedKZ, at: int):
    a0 = red.a if at == 0 else red.b
    b0 = red.b if at == 0 else red.a
    spec = _Spectral([list(r) for r in a0])
    b_t = linalg.mat_mul(spec.sinv, linalg.mat_mul([list(r) for r in b0], spec.s))
    return spec, b_t


def solve_regular_singular(red: ReducedKZ, w, order, at=0) -> KZSolution:
    """The unique log-series solution with seed w at x=0 (or y=1-x at 1).

    Branch lam starts from the generalized projection pi_lam(w) with leading
    Jordan logs N^j/j!; integer resonances above a branch are absorbed with
    the canonical zero choice for the new eigenvalue component (the seeded
    part of that eigenvalue lives in its own branch)."""
    if order < 1:
        raise DomainError("order must be >= 1")
    if at not in (0, 1):
        raise DomainError("at must be 0 or 1")
    dim = red.dim
    if len(w) != dim:
        raise DomainError("seed vector has wrong length")
    w = [Fraction(x) for x in w]
    spec, b_t = _spectral_setup(red, at)
    w_t = spec.to_block(w)
    eigen = set(spec.eigenvalues)

    def solve_nonresonant(mu, rhs):
        return linalg.mat_vec(spec.shifted_inverse(mu), rhs)

    branches = {}
    for lam in spec.eigenvalues:
        seed = spec.project_block(w_t, lam)
        if all(c == 0 for c in seed):
            continue
        grid = []
        # i = 0: x^lam (I + N log + N^2/2 log^2 + ...) seed
        logs = [seed]
        cur = seed
        jj = 1
        while True:
            nxt = [
                sum(
                    (spec.a_t[r][c] - (lam if r == c else 0)) * cur[c]
                    for c in range(dim)
                )
                / jj
                for r in range(dim)
            ]
            if all(x == 0 for x in nxt):
                break
            logs.append(nxt)
            cur = nxt
            jj += 1
            if jj > _LOG_CAP:
                raise ResonanceCapError("log power exceeded the internal cap")
        grid.append(logs)
        for i in range(1, order + 1):
            mu = lam + i
            prev_top = max(len(row) for row in grid)
            rhs_rows = []
            for j in range(prev_top + 1):
                # R_j = sum_{k>=1} A_k P_{i-k, j} with A_k = -B
                acc = [Fraction(0)] * dim
                for k in range(1, i + 1):
                    row = grid[i - k]
                    if j < len(row):
                        pv = row[j]
                        bv = linalg.mat_vec(b_t, pv)
                        acc = [x - y for x, y in zip(acc, bv)]
                rhs_rows.append(acc)
            if mu not in eigen:
                new_row = [None] * prev_top
                upper = [Fraction(0)] * dim
                for j in range(prev_top - 1, -1, -1):
                    rhs = [
                        rhs_rows[j][r] - (j + 1) * upper[r] for r in range(dim)
                    ]
                    new_row[j] = solve_nonresonant(mu, rhs)
                    upper = new_row[j]
                while new_row and all(c == 0 for c in new_row[-1]):
                    new_row.pop()
                grid.append(new_row)
            else:
                start, end = spec.block_range[mu]

                def split(v):
                    g = [v[r] if start <= r < end else Fraction(0) for r in range(dim)]
                    h = [v[r] - g[r] for r in range(dim)]
                    return g, h

                # H-part top-down, G-part by the upward nilpotent chain
                new_row = []
                h_parts = {}
                upper = [Fraction(0)] * dim
                for j in range(prev_top - 1, -1, -1):
                    rhs = [rhs_rows[j][r] - (j + 1) * upper[r] for r in range(dim)]
                    _, rhs_h = split(rhs)
                    sol_h = _solve_on_complement(spec, mu, rhs_h, start, end)
                    h_parts[j] = sol_h
                    upper = sol_h  # G-part of upper handled in the chain below
                # G-part upward chain from the canonical choice P_0^G = 0:
                # (j+1) P_{j+1}^G = R_j^G + N P_j^G  (G and H never mix)
                g_parts = {0: [Fraction(0)] * dim}
                j = 0
                while True:
                    rhs_g, _ = split(rhs_rows[j] if j < len(rhs_rows) else [Fraction(0)] * dim)
                    npj = [
                        sum(
                            (spec.a_t[r][c] - (mu if r == c else 0)) * g_parts[j][c]
                            for c in range(start, end)
                        )
                        if start <= r < end
                        else Fraction(0)
                        for r in range(dim)
                    ]
                    nxt = [(rhs_g[r] + npj[r]) / (j + 1) for r in range(dim)]
                    if all(x == 0 for x in nxt) and j + 1 >= prev_top:
                        break
                    g_parts[j + 1] = nxt
                    j += 1
                    if j > _LOG_CAP:
                        raise ResonanceCapError("log power exceeded the internal cap")
                top = max(max(h_parts, default=0), max(g_parts, default=0))
                for jj2 in range(top + 1):
                    h = h_parts.get(jj2, [Fraction(0)] * dim)
                    g = g_parts.get(jj2, [Fraction(0)] * dim)
                    new_row.append([x + y for x, y in zip(h, g)])
                while new_row and all(c == 0 for c in new_row[-1]):
                    new_row.pop()
                grid.append(new_row)
        branches[lam] = grid
    # back to original coordinates
    out = {}
    for lam, grid in branches.items():
        out[lam] = [[spec.from_block(vec) for vec in row] for row in grid]
    return KZSolution(dim, order, at, out)


def _solve_on_complement(spec, mu, rhs_h, start, end):
    """(mu - A) x = rhs on the complement of the mu-block (block diagonal:
    solve every non-mu block with its invertible shift)."""
    dim = spec.dim
    x = [Fraction(0)] * dim
    for lam, (s, e) in spec.block_range.items():
        if s == start:
            continue
        block = [[(mu if i == j else Fraction(0)) - spec.a_t[s + i][s + j] for j in range(e - s)] for i in range(e - s)]
        rhs_block = rhs_h[s:e]
        if all(v == 0 for v in rhs_block):
            continue
        sol = linalg.solve(block, rhs_block)
        if sol is None:
            raise DomainError("complement solve failed unexpectedly")
        for i, v in enumerate(sol):
            x[s + i] = v
    return x


def ode_residual(red: ReducedKZ, sol: KZSolution):
    """x(1-x) phi' - ((1-x)A - xB) phi as LogSeries components (all zero to
    the window for a true solution).  Uses the at-point's (A, B) roles."""
    a0 = red.a if sol.at == 0 else red.b
    b0 = red.b if sol.at == 0 else red.a
    comps = sol.components()
    derivs = [c.differentiate() for c in comps]
    x_poly = LaurentSeries(1, [1, -1])  # x - x^2
    one_minus_x = LaurentSeries(0, [1, -1])
    x_only = LaurentSeries(1, [1])
    out = []
    for i in range(sol.dim):
        term = derivs[i].mul_series(x_poly)
        for j in range(sol.dim):
            coeff_a = a0[i][j]
            coeff_b = b0[i][j]
            if coeff_a:
                term = term - comps[j].mul_series(one_minus_x).scale(coeff_a)
            if coeff_b:
                term = term + comps[j].mul_series(x_only).scale(coeff_b)
        out.append(term)
    return out


def fundamental_solutions(red: ReducedKZ, order, at=0):
    """Solutions seeded with the standard basis vectors."""
    dim = red.dim
    out = []
    for i in range(dim):
        w = [Fraction(1) if j == i else Fraction(0) for j in range(dim)]
        out.append(solve_regular_singular(red, w, order, at))
    return out


def associator(red: ReducedKZ, order, eval_point, threshold=1e-4, dps=50):
    """Phi_KZ = phi_B(1-x)^{-1} phi_A(x) evaluated numerically at
    eval_point in (0,1), with an order-sensitivity error estimate."""
    x0 = rational(eval_point)
    if not (0 < x0 < 1):
        raise DomainError("eval_point must be inside (0, 1)")
    old_dps = mpmath.mp.dps
    mpmath.mp.dps = dps
    try:
        main = _associator_at_order(red, order, x0)
        ref = _associator_at_order(red, max(order - 2, 1), x0)
        err = max(
            abs(main[i, j] - ref[i, j]) for i in range(red.dim) for j in range(red.dim)
        )
        if err > threshold:
            raise PrecisionError(
                f"associator error estimate {err} exceeds threshold {threshold}"
            )
        return main, float(err)
    finally:
        mpmath.mp.dps = old_dps


def _associator_at_order(red, order, x0):
    xa = mpmath.mpf(x0.numerator) / x0.denominator
    ya = 1 - xa
    cols_a = fundamental_solutions(red, order, at=0)
    cols_b = fundamental_solutions(red, order, at=1)
    ma = mpmath.matrix([sol.evaluate(xa) for sol in cols_a]).T
    mb = mpmath.matrix([sol.evaluate(ya) for sol in cols_b]).T
    return (mb**-1) * ma


def monodromy_at_zero(red: ReducedKZ, order, eval_point=Fraction(1, 3), dps=50):
    """Connecting matrix of the formal loop log x -> log x + 2 pi i,
    x^lam -> e^(2 pi i lam) x^lam: equals exp(2 pi i A) in the canonical
    normalization."""
    x0 = rational(eval_point)
    old_dps = mpmath.mp.dps
    mpmath.mp.dps = dps
    try:
        xa = mpmath.mpf(x0.numerator) / x0.denominator
        cols = fundamental_solutions(red, order, at=0)
        plain = mpmath.matrix([sol.evaluate(xa) for sol in cols]).T
        shift = 2 * mpmath.pi * mpmath.mpc(0, 1)
        looped = mpmath.matrix(
            [sol.evaluate(xa, log_shift=shift, loop_twist=True) for sol in cols]
        ).T
        return (plain**-1) * looped
    finally:
        mpmath.mp.dps = old_dps
