"""Finite-dimensional Lie algebras from structure-constant tables, PBW
arithmetic in U(g), the Shapovalov form/determinant and Harish-Chandra maps.

sl2 ships as the bundled reference table; other algebras (sl_n Chevalley
tables) load from JSON and are validated by the Jacobi check at
construction.  No root-system generation happens here.
"""

import json
from fractions import Fraction
from importlib import resources

from .errors import CentralityError, DomainError
from .scalars import rational

_KIND_RANK = {"f": 0, "h": 1, "e": 2}


class FiniteLieAlgebra:
    """Structure constants plus the data the Shapovalov machinery needs:
    a sigma-pairing e_i <-> f_i, an invariant form with (theta,theta)=2,
    positive-root coordinates for the f-generators and the rho values."""

    def __init__(self, name, generators, brackets, form, cartan, rho, dual_coxeter=None):
        self.name = name
        self.gen_names = [g["name"] for g in generators]
        self.kinds = [g["kind"] for g in generators]
        if any(k not in _KIND_RANK for k in self.kinds):
            raise DomainError("generator kind must be e, f or h")
        self.index = {n: i for i, n in enumerate(self.gen_names)}
        if len(self.index) != len(self.gen_names):
            raise DomainError("duplicate generator names")
        self.sigma_of = [self.index[g["sigma"]] for g in generators]
        self.roots = [tuple(g.get("root") or ()) for g in generators]
        self.cartan = [self.index[n] for n in cartan]
        self.rho = {self.index[n]: rational(v) for n, v in rho.items()}
        self.dual_coxeter = None if dual_coxeter is None else rational(dual_coxeter)
        self._brackets = {}
        for key, combo in brackets.items():
            a, b = (s.strip() for s in key.split(","))
            ia, ib = self.index[a], self.index[b]
            val = {self.index[n]: rational(c) for n, c in combo.items()}
            self._set_bracket(ia, ib, val)
        self.form = {}
        for key, c in form.items():
            a, b = (s.strip() for s in key.split(","))
            ia, ib = self.index[a], self.index[b]
            self.form[ia, ib] = rational(c)
            self.form[ib, ia] = rational(c)
        self._validate()

    # -- table access ------------------------------------------------------

    def _set_bracket(self, i, j, combo):
        self._brackets[i, j] = dict(combo)
        self._brackets[j, i] = {k: -c for k, c in combo.items()}

    def bracket(self, i, j):
        """[g_i, g_j] as a dict index -> coefficient."""
        if i == j:
            return {}
        return self._brackets.get((i, j), {})

    def bracket_lin(self, x, y):
        """Bracket of two linear combinations (dicts index -> coeff)."""
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.bracket(i, j).items():
                    out[k] = out.get(k, Fraction(0)) + a * b * c
        return {k: v for k, v in out.items() if v != 0}

    def pairing(self, i, j):
        return self.form.get((i, j), Fraction(0))

    def dual_pairs(self):
        """(basis vector, dual vector) pairs for the invariant form, as
        index->coeff dicts; used by Casimir/Sugawara sums."""
        from . import linalg

        n = len(self.gen_names)
        gram = [[self.pairing(i, j) for j in range(n)] for i in range(n)]
        inv = linalg.inverse(gram)
        pairs = []
        for a in range(n):
            dual = {b: inv[b][a] for b in range(n) if inv[b][a] != 0}
            pairs.append(({a: Fraction(1)}, dual))
        return pairs

    def _validate(self):
        n = len(self.gen_names)
        for i in self.cartan:
            for j in self.cartan:
                if self.bracket(i, j):
                    raise DomainError("Cartan generators must commute")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    acc = {}
                    for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
                        inner = self.bracket(y, z)
                        for m, c in self.bracket_lin({x: Fraction(1)}, inner).items():
                            acc[m] = acc.get(m, Fraction(0)) + c
                    if any(v != 0 for v in acc.values()):
                        raise DomainError(
                            f"Jacobi identity fails on ({self.gen_names[i]}, "
                            f"{self.gen_names[j]}, {self.gen_names[k]})"
                        )

    # -- ordering ----------------------------------------------------------

    def order_key(self, i):
        return (_KIND_RANK[self.kinds[i]], i)

    def gen(self, name):
        return PBWElement(self, {(self.index[name],): Fraction(1)})

    def one(self):
        return PBWElement(self, {(): Fraction(1)})

    def ad_weight(self, i):
        """Weight of generator i under the Cartan: tuple of eigenvalues."""
        out = []
        for h in self.cartan:
            br = self.bracket(h, i)
            out.append(br.get(i, Fraction(0)))
        return tuple(out)

    @classmethod
    def from_dict(cls, obj):
        return cls(
            obj.get("name", "?"),
            obj["generators"],
            obj["brackets"],
            obj["form"],
            obj["cartan"],
            obj.get("rho", {}),
            obj.get("dual_coxeter"),
        )

    @classmethod
    def from_json_file(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    @classmethod
    def sl2(cls):
        text = resources.files("voalab.data").joinpath("sl2.json").read_text()
        return cls.from_dict(json.loads(text))


class PBWElement:
    """Linear combination of normal-ordered words (f's, then h's, then e's)."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms=None):
        self.algebra = algebra
        self.terms = {w: c for w, c in (terms or {}).items() if c != 0}

    def _check(self, other):
        if self.algebra is not other.algebra:
            raise DomainError("PBW elements from different algebras")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.algebra.one().scale(other)
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, Fraction(0)) + c
        return PBWElement(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return PBWElement(self.algebra, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.algebra.one().scale(other)
        return self + (-other)

    def scale(self, c):
        c = rational(c)
        return PBWElement(self.algebra, {w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        out = PBWElement(self.algebra, {})
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                out = out + pbw_normalize(self.algebra, w1 + w2, c1 * c2)
        return out

    __rmul__ = scale

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.algebra.one().scale(other)
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.algebra), tuple(sorted(self.terms.items()))))

    def sigma(self):
        """Transpose anti-involution: fixes h, swaps e_i <-> f_i, reverses."""
        alg = self.algebra
        out = PBWElement(alg, {})
        for w, c in self.terms.items():
            image = tuple(alg.sigma_of[i] for i in reversed(w))
            out = out + pbw_normalize(alg, image, c)
        return out

    def weight(self, word):
        alg = self.algebra
        rank = len(alg.cartan)
        total = [Fraction(0)] * rank
        for i in word:
            wt = alg.ad_weight(i)
            for k in range(rank):
                total[k] += wt[k]
        return tuple(total)

    def __repr__(self):
        if not self.terms:
            return "0"
        names = self.algebra.gen_names
        parts = []
        for w, c in sorted(self.terms.items()):
            word = "*".join(names[i] for i in w) if w else "1"
            parts.append(f"({c})*{word}")
        return " + ".join(parts)


def pbw_normalize(algebra, word, coeff=1):
    """Straighten a free word into PBW normal form.

    Repeatedly rewrites x*y -> y*x + [x,y] at the first out-of-order adjacent
    pair; terminates because each rewrite lowers (inversions, length).
    """
    coeff = rational(coeff)
    result = {}
    stack = [(tuple(word), coeff)]
    while stack:
        w, c = stack.pop()
        pos = -1
        for p in range(len(w) - 1):
            if algebra.order_key(w[p]) > algebra.order_key(w[p + 1]):
                pos = p
                break
        if pos < 0:
            result[w] = result.get(w, Fraction(0)) + c
            continue
        swapped = w[:pos] + (w[pos + 1], w[pos]) + w[pos + 2 :]
        stack.append((swapped, c))
        for k, bc in algebra.bracket(w[pos], w[pos + 1]).items():
            stack.append((w[:pos] + (k,) + w[pos + 2 :], c * bc))
    return PBWElement(algebra, result)


def hc_project(x: PBWElement) -> PBWElement:
    """Projection U(g) -> U(h): kills every word containing an e or an f."""
    alg = x.algebra
    kept = {w: c for w, c in x.terms.items() if all(alg.kinds[i] == "h" for i in w)}
    return PBWElement(alg, kept)


def shapovalov_form(x: PBWElement, y: PBWElement) -> PBWElement:
    """F(x, y) = hc_project(sigma(x) * y), valued in S(h)."""
    x._check(y)
    return hc_project(x.sigma() * y)


def weight_space_basis(algebra, beta):
    """PBW basis words of U(g)_{-beta} for beta in the positive root lattice.

    Words are multisets of f-generators whose root coordinates sum to beta,
    enumerated with higher multiplicity of earlier generators first.
    """
    beta = tuple(int(b) for b in beta)
    fs = [i for i in range(len(algebra.gen_names)) if algebra.kinds[i] == "f"]
    for i in fs:
        if not algebra.roots[i]:
            raise DomainError(f"f-generator {algebra.gen_names[i]} lacks root data")
    out = []

    def assign(pos, remaining, counts):
        if pos == len(fs):
            if all(r == 0 for r in remaining):
                word = []
                for i, cnt in zip(fs, counts):
                    word.extend([i] * cnt)
                out.append(tuple(sorted(word)))
            return
        root = algebra.roots[fs[pos]]
        if len(root) != len(remaining):
            raise DomainError("root coordinate length does not match beta")
        top = min((rem // r for rem, r in zip(remaining, root) if r > 0), default=0)
        for cnt in range(top, -1, -1):
            new_rem = tuple(rem - cnt * r for rem, r in zip(remaining, root))
            assign(pos + 1, new_rem, counts + [cnt])

    assign(0, beta, [])
    return out


def shapovalov_determinant(algebra, beta) -> PBWElement:
    """det F(X_i, X_j) over the canonical PBW basis of U(g)_{-beta}.

    Division-free cofactor expansion keeps everything inside S(h); the empty
    weight space gives the empty determinant 1.
    """
    words = weight_space_basis(algebra, beta)
    if not words:
        return algebra.one()
    basis = [PBWElement(algebra, {w: Fraction(1)}) for w in words]
    gram = [[shapovalov_form(bi, bj) for bj in basis] for bi in basis]
    return _det_cofactor(algebra, gram)


def _det_cofactor(algebra, rows):
    n = len(rows)
    if n == 0:
        return algebra.one()
    if n == 1:
        return rows[0][0]
    total = PBWElement(algebra, {})
    for i in range(n):
        if rows[i][0].is_zero():
            continue
        minor = [row[1:] for k, row in enumerate(rows) if k != i]
        term = rows[i][0] * _det_cofactor(algebra, minor)
        total = total + (term if i % 2 == 0 else -term)
    return total


def evaluate_cartan_poly(x: PBWElement, mu):
    """Value of an S(h) element at a weight (dict name -> value)."""
    alg = x.algebra
    vals = {alg.index[n]: rational(v) for n, v in mu.items()}
    total = Fraction(0)
    for w, c in x.terms.items():
        if any(alg.kinds[i] != "h" for i in w):
            raise DomainError("not an element of S(h)")
        prod = c
        for i in w:
            prod *= vals.get(i, Fraction(0))
        total += prod
    return total


def harish_chandra(z: PBWElement) -> PBWElement:
    """rho-shifted Harish-Chandra image: hc_project(z) with h -> h - rho(h).

    With this twist the image is invariant under the linear Weyl action, so
    the character identity chi_mu = chi_{w.mu} holds for the dotted action.
    """
    alg = z.algebra
    proj = hc_project(z)
    out = PBWElement(alg, {})
    for w, c in proj.terms.items():
        term = alg.one().scale(c)
        for i in w:
            shifted = PBWElement(alg, {(i,): Fraction(1), (): -alg.rho.get(i, Fraction(0))})
            term = term * shifted
        out = out + term
    return out


def is_central(z: PBWElement) -> bool:
    alg = z.algebra
    for i in range(len(alg.gen_names)):
        g = PBWElement(alg, {(i,): Fraction(1)})
        if not (z * g - g * z).is_zero():
            return False
    return True


def infinitesimal_character(mu, z: PBWElement):
    """Scalar action of a central element on the Verma highest-weight vector
    of weight mu; equals hc_project(z) evaluated at mu."""
    if not is_central(z):
        raise CentralityError("element is not central")
    return evaluate_cartan_poly(hc_project(z), mu)


def casimir_sl2(algebra=None) -> PBWElement:
    """Quadratic Casimir e*f + f*e + h^2/2 of the bundled sl2."""
    alg = algebra or FiniteLieAlgebra.sl2()
    e, f, h = alg.gen("e"), alg.gen("f"), alg.gen("h")
    return e * f + f * e + (h * h).scale(Fraction(1, 2))
