"""Exact scalars: rationals and one-variable polynomial deformations.

Rationals are stdlib fractions.Fraction (already reduced, positive
denominator, exact arithmetic).  Poly is the deformation ring Q[t] used by
the Jantzen construction; it is a polynomial on purpose, never a series.
"""

from fractions import Fraction

from .errors import DomainError

Q = Fraction


def rational(x) -> Fraction:
    """Coerce ints, Fractions and 'p/q' strings to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, Poly):
        if x.degree() > 0:
            raise DomainError(f"not a constant: {x}")
        return x.coeff(0)
    raise DomainError(f"cannot coerce {x!r} to a rational")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


class Poly:
    """Dense polynomial in the central indeterminate t over Q.

    Immutable; trailing zero coefficients are stripped so the leading
    coefficient of a nonzero polynomial is never zero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("Poly is immutable")

    @classmethod
    def const(cls, c):
        return cls([Fraction(c)])

    @classmethod
    def t(cls):
        return cls([0, 1])

    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -1

    def is_zero(self):
        return not self.coeffs

    def coeff(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def valuation(self):
        """t-adic valuation; raises on the zero polynomial."""
        if not self.coeffs:
            raise DomainError("zero polynomial has no t-valuation")
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        raise AssertionError

    def shift_down(self, m):
        """Exact division by t**m."""
        if m == 0:
            return self
        if any(c != 0 for c in self.coeffs[:m]):
            raise DomainError(f"{self} not divisible by t^{m}")
        return Poly(self.coeffs[m:])

    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self.coeff(k) + other.coeff(k) for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _as_poly(other) + (-self)

    def __mul__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise DomainError("negative power of a polynomial")
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def divmod(self, other):
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dn = other.degree()
        lead = other.coeffs[-1]
        q = [Fraction(0)] * max(len(rem) - dn, 0)
        for k in range(len(rem) - dn - 1, -1, -1):
            c = rem[k + dn] / lead
            if c != 0:
                q[k] = c
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Poly(q), Poly(rem)

    def divexact(self, other):
        q, r = self.divmod(other)
        if not r.is_zero():
            raise DomainError(f"inexact polynomial division: {self} / {other}")
        return q

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            cs = format_rational(c)
            if k == 0:
                terms.append(cs)
            elif k == 1:
                terms.append(f"{cs}*t" if cs != "1" else "t")
            else:
                terms.append(f"{cs}*t^{k}" if cs != "1" else f"t^{k}")
        return " + ".join(terms)


def _as_poly(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly([Fraction(x)])
    return NotImplemented


def scalar_is_zero(x):
    """Zero test that works for int, Fraction and Poly coefficients."""
    if isinstance(x, Poly):
        return x.is_zero()
    return x == 0
