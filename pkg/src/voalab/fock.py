"""Rank-1 Heisenberg Fock modules, normal ordering, reconstructed fields,
and the decidable vertex-algebra axiom checks (vacuum, translation,
locality) on graded truncations."""

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .errors import DomainError, UnsupportedStateError
from .partitions import Partition, partitions_of
from .scalars import rational

EMPTY = Partition()


def vacuum():
    return {EMPTY: Fraction(1)}


def monomial(parts):
    return {Partition(tuple(sorted(parts, reverse=True))): Fraction(1)}


def add_vec(a, b, scale=1):
    out = dict(a)
    for mon, c in b.items():
        v = out.get(mon, Fraction(0)) + scale * c
        if v == 0:
            out.pop(mon, None)
        else:
            out[mon] = v
    return out


def scale_vec(a, s):
    s = rational(s)
    return {mon: c * s for mon, c in a.items() if c * s != 0}


def vec_level(vec):
    levels = {mon.weight for mon in vec}
    if len(levels) > 1:
        raise DomainError("vector is not homogeneous")
    return levels.pop() if levels else 0


def heis_act(n, vec, eta=0):
    """Mode a_n on a Fock vector over the highest weight eta.

    Creation (n < 0) inserts a part; a_0 scales by eta; annihilation (n > 0)
    contracts against equal parts with the bracket coefficient n (K acts 1).
    """
    eta = rational(eta)
    out = {}

    def put(mon, c):
        if c == 0:
            return
        prev = out.get(mon, Fraction(0)) + c
        if prev == 0:
            out.pop(mon, None)
        else:
            out[mon] = prev

    for mon, c in vec.items():
        if n < 0:
            put(Partition(tuple(sorted(mon + (-n,), reverse=True))), c)
        elif n == 0:
            put(mon, c * eta)
        else:
            mult = mon.count(n)
            if mult:
                reduced = list(mon)
                reduced.remove(n)
                put(Partition(reduced), c * n * mult)
    return out


def normal_order_pair(k, l):
    """Ordered mode pair per the rank-1 case split: swap only the
    contracting diagonal l = -k with k >= 0; all other pairs commute."""
    if k >= 0 and l == -k:
        return (l, k)
    return (k, l)


def apply_pair(pair, vec, eta=0):
    k, l = pair
    return heis_act(k, heis_act(l, vec, eta), eta)


def apply_normal_ordered_pair(k, l, vec, eta=0):
    return apply_pair(normal_order_pair(k, l), vec, eta)


def translation(vec, t_vacuum=None):
    """Translation operator on F^0: T|0> = 0 (unless corrupted for tests)
    and [T, a_n] = -n a_{n-1}, i.e. T(a_{-p} w) = p a_{-p-1} w + a_{-p} T(w)."""
    out = {}
    for mon, c in vec.items():
        for mon2, c2 in _translate_monomial(mon, t_vacuum).items():
            v = out.get(mon2, Fraction(0)) + c * c2
            if v == 0:
                out.pop(mon2, None)
            else:
                out[mon2] = v
    return out


def _translate_monomial(mon, t_vacuum):
    if not mon:
        return dict(t_vacuum) if t_vacuum else {}
    p = mon[0]
    tail = Partition(mon[1:])
    first = {Partition(tuple(sorted((p + 1,) + tuple(tail), reverse=True))): Fraction(p)}
    rest = _translate_monomial(tail, t_vacuum)
    out = dict(first)
    for mon2, c2 in rest.items():
        key = Partition(tuple(sorted((p,) + tuple(mon2), reverse=True)))
        out[key] = out.get(key, Fraction(0)) + c2
    return out


class Field:
    """A state together with its mode action; modes act exactly on any
    finite vector, tables are only a serialization of that action."""

    def __init__(self, name, state):
        self.name = name
        self.state = state

    def apply(self, n, vec, eta=0):
        raise NotImplementedError

    def mode_matrix(self, n, level_in, eta=0):
        """Exact matrix of A_(n): level_in -> level_in - n on partition bases."""
        src = partitions_of(level_in)
        lvl_out = level_in - n
        if lvl_out < 0:
            return [[] for _ in src]
        dst = {mon: i for i, mon in enumerate(partitions_of(lvl_out))}
        cols = []
        for mon in src:
            img = self.apply(n, {mon: Fraction(1)}, eta)
            col = [Fraction(0)] * len(dst)
            for m2, c in img.items():
                col[dst[m2]] = c
            cols.append(col)
        return [[cols[j][i] for j in range(len(src))] for i in range(len(dst))]


class IdentityField(Field):
    """Y(|0>, z) = Id: the only nonzero mode is A_(-1) = Id."""

    def __init__(self):
        super().__init__("vacuum", vacuum())

    def apply(self, n, vec, eta=0):
        return dict(vec) if n == -1 else {}


class CurrentField(Field):
    """Y(a_{-m}|0>, z) = d^{m-1} a(z) / (m-1)!: modes are rescaled a-modes."""

    def __init__(self, m=1):
        if m < 1:
            raise UnsupportedStateError("current requires m >= 1")
        self.m = m
        super().__init__(f"a(-{m})", monomial([m]))

    def _coeff(self, n):
        num = 1
        for j in range(1, self.m):
            num *= self.m - 1 - n - j
        return Fraction(num, factorial(self.m - 1))

    def apply(self, n, vec, eta=0):
        c = self._coeff(n)
        if c == 0:
            return {}
        return scale_vec(heis_act(n - self.m + 1, vec, eta), c)


class SquareField(Field):
    """Y(a_{-1}^2|0>, z) = :a(z)^2:, modes A_(n) = sum_{k+l=n-1} :a_k a_l:."""

    def __init__(self):
        super().__init__("a(-1)^2", monomial([1, 1]))

    def apply(self, n, vec, eta=0):
        if not vec:
            return {}
        d = max(mon.weight for mon in vec)
        out = {}
        for k in range(n - 1 - (d + abs(n) + 2), d + abs(n) + 3):
            l = n - 1 - k
            contrib = apply_normal_ordered_pair(k, l, vec, eta)
            out = add_vec(out, contrib)
        return out


def fock_vertex_operator(state, degree_cap=None):
    """Reconstructed field of a low-degree monomial state.

    Supports |0>, a_{-m}|0> and a_{-1}^2|0>; other states raise
    UnsupportedStateError (higher normal-ordered reconstructions are out of
    scope here)."""
    items = [(mon, c) for mon, c in state.items() if c != 0]
    if not items:
        raise UnsupportedStateError("zero state has no field")
    if len(items) > 1:
        raise UnsupportedStateError("only monomial states are supported")
    mon, c = items[0]
    if c != 1:
        raise UnsupportedStateError("state must have coefficient 1")
    if mon == EMPTY:
        return IdentityField()
    if len(mon) == 1:
        return CurrentField(mon[0])
    if mon == Partition((1, 1)):
        return SquareField()
    raise UnsupportedStateError(f"state degree not supported: {tuple(mon)}")


@dataclass(frozen=True)
class CheckReport:
    passed: bool
    detail: str = ""
    witness: tuple = None

    def to_json(self):
        out = {"passed": self.passed, "detail": self.detail}
        if self.witness is not None:
            out["witness"] = [str(w) for w in self.witness]
        return out


def check_vacuum_axiom(field: Field, degree_cap) -> CheckReport:
    """Y(A,z)|0> must lie in V[[z]] with constant term the state itself."""
    for n in range(0, degree_cap + 2):
        img = field.apply(n, vacuum())
        if img:
            return CheckReport(False, f"A_({n})|0> != 0", (n,))
    creation = field.apply(-1, vacuum())
    if creation != field.state:
        return CheckReport(False, "A_(-1)|0> differs from the state", (-1,))
    return CheckReport(True, "vacuum axiom holds on the truncation")


def check_translation_axiom(degree_cap, t_vacuum=None) -> CheckReport:
    """[T, a_n] = -n a_{n-1} on all basis vectors of level <= degree_cap,
    |n| <= degree_cap, with T|0> = 0 (or a deliberate corruption)."""
    basis = [mon for lvl in range(degree_cap + 1) for mon in partitions_of(lvl)]
    for n in range(-degree_cap, degree_cap + 1):
        for mon in basis:
            v = {mon: Fraction(1)}
            lhs = add_vec(
                translation(heis_act(n, v), t_vacuum),
                heis_act(n, translation(v, t_vacuum)),
                scale=-1,
            )
            rhs = scale_vec(heis_act(n - 1, v), -n)
            if lhs != rhs:
                return CheckReport(False, "translation axiom violated", (n, tuple(mon)))
    return CheckReport(True, f"translation axiom holds to level {degree_cap}")


def locality_check(field_a: Field, field_b: Field, degree_cap, max_n=None):
    """Least N with (z-w)^N [Y(A,z), Y(B,w)] = 0 on the truncation.

    Mode form: sum_i (-1)^i C(N,i) [A_(p+N-i), B_(q+i)] = 0 for all p, q.
    Returns (N, CheckReport); N is None when no N <= max_n works."""
    cap = degree_cap if max_n is None else max_n
    basis = [mon for lvl in range(degree_cap + 1) for mon in partitions_of(lvl)]
    last_witness = None
    for n_try in range(cap + 1):
        ok = True
        for p in range(-degree_cap - 1, degree_cap + 2):
            for q in range(-degree_cap - 1, degree_cap + 2):
                for mon in basis:
                    v = {mon: Fraction(1)}
                    acc = {}
                    for i in range(n_try + 1):
                        sign = Fraction((-1) ** i * comb(n_try, i))
                        am, bm = p + n_try - i, q + i
                        term = add_vec(
                            field_a.apply(am, field_b.apply(bm, v)),
                            field_b.apply(bm, field_a.apply(am, v)),
                            scale=-1,
                        )
                        acc = add_vec(acc, term, scale=sign)
                    if acc:
                        ok = False
                        last_witness = (n_try, p, q, tuple(mon))
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            return n_try, CheckReport(True, f"local of order N={n_try}")
    return None, CheckReport(False, "no locality order within cap", last_witness)


def graded_dimension(level):
    return len(partitions_of(level))
