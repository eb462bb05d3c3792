"""Truncated Laurent series over Q, and log-series built on top of them.

A LaurentSeries knows its coefficients for every exponent below an absolute
bound `prec` (None = exact: all unlisted coefficients are really zero).
Operations track the tightest valid bound; reading past it raises
PrecisionError instead of fabricating a coefficient.
"""

from fractions import Fraction

from .errors import DomainError, PrecisionError
from .scalars import format_rational, rational


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _add_prec(a, b):
    if a is None or b is None:
        return None
    return a + b


class LaurentSeries:
    """sum of coeffs[i] * t**(val+i), known below exponent `prec`."""

    __slots__ = ("val", "coeffs", "prec")

    def __init__(self, val, coeffs, prec=None):
        coeffs = [Fraction(c) for c in coeffs]
        val = int(val)
        if prec is not None:
            prec = int(prec)
            if val + len(coeffs) > prec:
                coeffs = coeffs[: max(prec - val, 0)]
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
            val += 1
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            val = prec if prec is not None else 0
        object.__setattr__(self, "val", val)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, *a):
        raise AttributeError("LaurentSeries is immutable")

    @classmethod
    def zero(cls, prec=None):
        return cls(0, (), prec)

    @classmethod
    def const(cls, c, prec=None):
        return cls(0, (rational(c),), prec)

    @classmethod
    def t_power(cls, n, coeff=1, prec=None):
        return cls(n, (rational(coeff),), prec)

    @classmethod
    def from_coeffs(cls, val, coeffs, window=None):
        """Series with an explicit window: prec = val + window (or exact)."""
        prec = None if window is None else val + window
        return cls(val, coeffs, prec)

    def is_zero(self):
        """Zero as far as the window shows (exactly zero when prec is None)."""
        return not self.coeffs

    def is_exact(self):
        return self.prec is None

    @property
    def truncation_order(self):
        """Window length T: number of known exponents from the valuation."""
        if self.prec is None:
            return None
        return self.prec - self.val if self.coeffs else 0

    def valuation(self):
        if not self.coeffs:
            raise DomainError("zero-to-window series has no valuation")
        return self.val

    def coeff(self, n):
        if self.prec is not None and n >= self.prec:
            raise PrecisionError(f"coefficient of t^{n} outside window (prec {self.prec})")
        if not self.coeffs:
            return Fraction(0)
        k = n - self.val
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def _eff_val(self):
        # lowest exponent at which an unknown-or-nonzero coefficient may live
        if self.coeffs:
            return self.val
        return self.prec  # None for the exact zero

    def __add__(self, other):
        other = _as_series(other)
        if other is NotImplemented:
            return NotImplemented
        prec = _min_prec(self.prec, other.prec)
        if not self.coeffs and not other.coeffs:
            return LaurentSeries.zero(prec)
        vals = [s.val for s in (self, other) if s.coeffs]
        lo = min(vals)
        hi = max(s.val + len(s.coeffs) for s in (self, other) if s.coeffs)
        if prec is not None:
            hi = min(hi, prec)
        out = []
        for n in range(lo, hi):
            c = Fraction(0)
            for s in (self, other):
                k = n - s.val
                if s.coeffs and 0 <= k < len(s.coeffs):
                    c += s.coeffs[k]
            out.append(c)
        return LaurentSeries(lo, out, prec)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.val, [-c for c in self.coeffs], self.prec)

    def __sub__(self, other):
        other = _as_series(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _as_series(other) + (-self)

    def __mul__(self, other):
        other = _as_series(other)
        if other is NotImplemented:
            return NotImplemented
        if (self.is_exact() and not self.coeffs) or (other.is_exact() and not other.coeffs):
            return LaurentSeries.zero()
        ev1, ev2 = self._eff_val(), other._eff_val()
        prec = _min_prec(_add_prec(self.prec, ev2), _add_prec(other.prec, ev1))
        if not self.coeffs or not other.coeffs:
            return LaurentSeries.zero(prec)
        lo = self.val + other.val
        width = len(self.coeffs) + len(other.coeffs) - 1
        if prec is not None:
            width = min(width, prec - lo)
        out = [Fraction(0)] * max(width, 0)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            jmax = min(len(other.coeffs), width - i)
            for j in range(jmax):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return LaurentSeries(lo, out, prec)

    __rmul__ = __mul__

    def inverse(self, prec=None):
        """Multiplicative inverse.

        A windowed series keeps its relative window (result prec = p - 2v).
        Inverting an exact series needs an explicit target prec unless it is
        a monomial, whose inverse is again exact.
        """
        if not self.coeffs:
            if self.prec is None:
                raise ZeroDivisionError("inverse of the zero series")
            raise PrecisionError("cannot invert a series that is zero to its window")
        v = self.val
        if self.prec is None:
            if len(self.coeffs) == 1:
                out = LaurentSeries(-v, (1 / self.coeffs[0],))
                return out if prec is None else LaurentSeries(out.val, out.coeffs, prec)
            if prec is None:
                raise DomainError("inverse of an exact series needs a target window")
            rel = prec + v
        else:
            rel = (self.prec - 2 * v) + v if prec is None else prec + v
            if prec is not None:
                rel = min(rel, self.prec - v)
        # invert u = sum a_k t^k with a_0 != 0, to relative order `rel`
        n_terms = rel
        if n_terms <= 0:
            return LaurentSeries.zero(-v + n_terms)
        a = [self.coeffs[k] if k < len(self.coeffs) else Fraction(0) for k in range(n_terms)]
        b = [Fraction(0)] * n_terms
        b[0] = 1 / a[0]
        for n in range(1, n_terms):
            s = Fraction(0)
            for k in range(1, n + 1):
                if a[k]:
                    s += a[k] * b[n - k]
            b[n] = -s / a[0]
        return LaurentSeries(-v, b, -v + n_terms)

    def __truediv__(self, other):
        other = _as_series(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def differentiate(self):
        """d/dt; the window shrinks by one exponent."""
        prec = None if self.prec is None else self.prec - 1
        out = [(self.val + i) * c for i, c in enumerate(self.coeffs)]
        return LaurentSeries(self.val - 1, out, prec)

    def shift(self, k):
        """Multiply by t**k."""
        prec = None if self.prec is None else self.prec + k
        return LaurentSeries(self.val + k, self.coeffs, prec)

    def agrees(self, other, min_window=1):
        """Equality of all coefficients on the common window."""
        other = _as_series(other)
        bound = _min_prec(self.prec, other.prec)
        lows = [s.val for s in (self, other) if s.coeffs]
        if bound is None:
            return self.val == other.val and self.coeffs == other.coeffs if lows else True
        if not lows:
            return True
        lo = min(lows)
        if bound - lo < min_window and not (self.is_zero() and other.is_zero()):
            raise PrecisionError("windows too short to compare")
        for n in range(lo, bound):
            if self.coeff(n) != other.coeff(n):
                return False
        return True

    def evaluate(self, x):
        """Numeric evaluation (finite window sum); x may be mpmath/float."""
        total = 0
        for i, c in enumerate(self.coeffs):
            total = total + x ** (self.val + i) * c.numerator / c.denominator
        return total

    def __eq__(self, other):
        other = _as_series(other)
        if other is NotImplemented:
            return NotImplemented
        return (self.val, self.coeffs, self.prec) == (other.val, other.coeffs, other.prec)

    def __hash__(self):
        return hash((self.val, self.coeffs, self.prec))

    def __repr__(self):
        if not self.coeffs:
            body = "0"
        else:
            terms = []
            for i, c in enumerate(self.coeffs):
                if c == 0:
                    continue
                n = self.val + i
                cs = format_rational(c)
                if n == 0:
                    terms.append(cs)
                else:
                    power = "t" if n == 1 else f"t^{n}"
                    terms.append(power if cs == "1" else f"{cs}*{power}")
            body = " + ".join(terms)
        if self.prec is None:
            return body
        return f"{body} + O(t^{self.prec})"

    def to_json(self):
        if self.prec is None:
            return {
                "valuation": self.val,
                "truncation": len(self.coeffs),
                "coeffs": [format_rational(c) for c in self.coeffs],
                "exact": True,
            }
        val = self.val if self.coeffs else self.prec
        width = self.prec - val
        cs = [self.coeff(val + k) for k in range(width)]
        return {
            "valuation": val,
            "truncation": width,
            "coeffs": [format_rational(c) for c in cs],
        }

    @classmethod
    def from_json(cls, obj):
        val = int(obj["valuation"])
        coeffs = [rational(c) for c in obj["coeffs"]]
        if obj.get("exact"):
            return cls(val, coeffs, None)
        width = int(obj.get("truncation", len(coeffs)))
        return cls(val, coeffs, val + width)


def _as_series(x):
    if isinstance(x, LaurentSeries):
        return x
    if isinstance(x, (int, Fraction)):
        return LaurentSeries.const(x)
    return NotImplemented


class LogSeries:
    """Finite branches lambda -> [S_0, S_1, ...] encoding
    sum_lambda x^lambda sum_j S_j(x) (log x)^j.

    Branch keys are rational; the integer grid inside a branch lives in the
    LaurentSeries valuations, so congruent-mod-1 keys can be merged.
    """

    __slots__ = ("branches",)

    def __init__(self, branches=None):
        data = {}
        for lam, table in (branches or {}).items():
            lam = Fraction(lam)
            table = list(table)
            while table and table[-1].is_zero() and table[-1].prec is None:
                table.pop()
            if table:
                data[lam] = table
        object.__setattr__(self, "branches", data)

    def __setattr__(self, *a):
        raise AttributeError("LogSeries is immutable")

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def from_series(cls, s, lam=0):
        return cls({Fraction(lam): [s]})

    def max_log_power(self):
        return max((len(t) - 1 for t in self.branches.values()), default=0)

    def canonical(self):
        """Merge branches whose keys differ by integers (minimal key wins)."""
        groups = {}
        for lam in self.branches:
            groups.setdefault(lam % 1, []).append(lam)
        out = {}
        for frac_part, lams in groups.items():
            base = min(lams)
            width = max(len(self.branches[lam]) for lam in lams)
            table = []
            for j in range(width):
                acc = LaurentSeries.zero()
                for lam in lams:
                    tab = self.branches[lam]
                    if j < len(tab):
                        acc = acc + tab[j].shift(int(lam - base))
                table.append(acc)
            out[base] = table
        return LogSeries(out)

    def __add__(self, other):
        out = {lam: list(tab) for lam, tab in self.branches.items()}
        for lam, tab in other.branches.items():
            if lam in out:
                mine = out[lam]
                merged = []
                for j in range(max(len(mine), len(tab))):
                    a = mine[j] if j < len(mine) else LaurentSeries.zero()
                    b = tab[j] if j < len(tab) else LaurentSeries.zero()
                    merged.append(a + b)
                out[lam] = merged
            else:
                out[lam] = list(tab)
        return LogSeries(out)

    def __neg__(self):
        return LogSeries({lam: [-s for s in tab] for lam, tab in self.branches.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = rational(c)
        return LogSeries({lam: [s * c for s in tab] for lam, tab in self.branches.items()})

    def mul_series(self, f):
        """Multiply by a plain LaurentSeries (log-free, integer exponents)."""
        return LogSeries({lam: [s * f for s in tab] for lam, tab in self.branches.items()})

    def differentiate(self):
        """d/dx, branch by branch; keys are preserved (valuations shift)."""
        out = {}
        for lam, tab in self.branches.items():
            new_tab = []
            for j in range(len(tab)):
                s = tab[j]
                euler = LaurentSeries(
                    s.val - 1,
                    [(lam + s.val + i) * c for i, c in enumerate(s.coeffs)],
                    None if s.prec is None else s.prec - 1,
                )
                term = euler
                if j + 1 < len(tab):
                    term = term + (j + 1) * tab[j + 1].shift(-1)
                new_tab.append(term)
            out[lam] = new_tab
        return LogSeries(out)

    def is_zero_to_window(self):
        return all(s.is_zero() for tab in self.branches.values() for s in tab)

    def agrees(self, other):
        diff = (self - other).canonical()
        return diff.is_zero_to_window()

    def evaluate(self, x, mp=None, log_shift=0, loop_twist=False):
        """Numeric value at x > 0; optionally after the formal loop
        log x -> log x + log_shift, x^lambda -> e^(lambda*log_shift)-twisted."""
        import mpmath as _mp

        mp = mp or _mp
        lx = mp.log(x)
        total = 0
        for lam, tab in self.branches.items():
            xl = mp.power(x, mp.mpf(lam.numerator) / lam.denominator)
            if loop_twist:
                xl = xl * mp.exp(log_shift * mp.mpf(lam.numerator) / lam.denominator)
            for j, s in enumerate(tab):
                if s.is_zero():
                    continue
                total = total + xl * s.evaluate(x) * (lx + log_shift) ** j
        return total

    def to_json(self):
        return {
            "branches": [
                {"exponent": format_rational(lam), "tables": [s.to_json() for s in tab]}
                for lam, tab in sorted(self.branches.items())
            ]
        }

    def __repr__(self):
        if not self.branches:
            return "LogSeries(0)"
        parts = []
        for lam, tab in sorted(self.branches.items()):
            for j, s in enumerate(tab):
                if s.is_zero() and s.prec is None:
                    continue
                logs = "" if j == 0 else ("*log(x)" if j == 1 else f"*log(x)^{j}")
                parts.append(f"x^{lam}*({s!r}){logs}")
        return " + ".join(parts) or "LogSeries(0)"
