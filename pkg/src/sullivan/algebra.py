"""
Free graded-commutative algebras over Q.

A :class:`FreeCGA` is generated by an ordered list of :class:`Generator`;
odd generators are exterior and an even generator may carry the cap 2,
modelling Q[x]/(x^2). Monomials are exponent tuples in declaration order
and polynomials are dicts from monomials to nonzero Fractions, so
polynomial equality is dict equality.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ContractViolation


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    cap: int = None  # None or 2

    def __post_init__(self):
        if self.degree < 1:
            raise ContractViolation(f"generator {self.name} must have degree >= 1")
        if self.cap not in (None, 2):
            raise ContractViolation("only the truncation cap 2 is supported")

    @property
    def odd(self):
        return self.degree % 2 == 1

    @property
    def max_exponent(self):
        """Largest exponent allowed, or None if unbounded."""
        if self.odd or self.cap == 2:
            return 1
        return None


def fmt_rational(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class FreeCGA:
    """Free graded-commutative algebra on an ordered generator list."""

    def __init__(self, generators):
        gens = tuple(generators)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ContractViolation(f"duplicate generator names in {names}")
        self.generators = gens
        self.index = {g.name: i for i, g in enumerate(gens)}
        self.degrees = tuple(g.degree for g in gens)
        self._odd = tuple(g.odd for g in gens)
        self._cap = tuple(g.max_exponent for g in gens)
        self._basis_cache = {}

    def __eq__(self, other):
        return isinstance(other, FreeCGA) and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    def __repr__(self):
        return "FreeCGA(" + ", ".join(f"{g.name}:{g.degree}" for g in self.generators) + ")"

    def __len__(self):
        return len(self.generators)

    def generator(self, name):
        try:
            return self.generators[self.index[name]]
        except KeyError:
            raise ContractViolation(f"unknown generator {name!r}") from None

    # -- elements -------------------------------------------------------
    @property
    def unit_monomial(self):
        return (0,) * len(self.generators)

    def one(self):
        return Polynomial(self, {self.unit_monomial: Fraction(1)})

    def zero(self):
        return Polynomial(self, {})

    def scalar(self, c):
        return Polynomial(self, {self.unit_monomial: Fraction(c)})

    def gen_monomial(self, name):
        e = [0] * len(self.generators)
        e[self.index[name]] = 1
        return tuple(e)

    def gen(self, name):
        i = self.index.get(name)
        if i is None:
            raise ContractViolation(f"unknown generator {name!r}")
        e = [0] * len(self.generators)
        e[i] = 1
        return Polynomial(self, {tuple(e): Fraction(1)})

    def monomial(self, m):
        return Polynomial(self, {tuple(m): Fraction(1)})

    def mono_degree(self, m):
        return sum(e * d for e, d in zip(m, self.degrees))

    def mono_odd_count(self, m):
        return sum(e for e, o in zip(m, self._odd) if o)

    def mono_word(self, m):
        """The monomial as the ordered list of generator indices."""
        w = []
        for i, e in enumerate(m):
            w.extend([i] * e)
        return w

    def mono_str(self, m):
        parts = []
        for i, e in enumerate(m):
            if e:
                name = self.generators[i].name
                parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    # -- products --------------------------------------------------------
    def mono_mul(self, a, b):
        """Product of two monomials as (sign, monomial) or None when zero."""
        sign = 1
        odd_after = 0  # odd generators of a with index > current
        # count pairs (i in a odd, j in b odd, i > j)
        n = len(a)
        suffix = [0] * (n + 1)
        for i in range(n - 1, -1, -1):
            suffix[i] = suffix[i + 1] + (a[i] if self._odd[i] else 0)
        for j in range(n):
            if b[j] and self._odd[j]:
                odd_after += suffix[j + 1]
        if odd_after % 2:
            sign = -1
        out = []
        for i in range(n):
            e = a[i] + b[i]
            cap = self._cap[i]
            if cap is not None and e > cap:
                return None
            out.append(e)
        return sign, tuple(out)

    def normalize_word(self, word):
        """Sort a word of generators into canonical order.

        ``word`` holds generator names, Generator objects or indices.
        Returns ``(sign, monomial)`` or None when the product vanishes.
        """
        idx = []
        for g in word:
            if isinstance(g, Generator):
                if g.name not in self.index or self.generator(g.name) != g:
                    raise ContractViolation(f"foreign generator {g.name!r}")
                idx.append(self.index[g.name])
            elif isinstance(g, str):
                if g not in self.index:
                    raise ContractViolation(f"foreign generator {g!r}")
                idx.append(self.index[g])
            else:
                idx.append(int(g))
        sign = 1
        # insertion sort; swapping two odd generators flips the sign
        idx = list(idx)
        for k in range(1, len(idx)):
            j = k
            while j > 0 and idx[j - 1] > idx[j]:
                if self._odd[idx[j - 1]] and self._odd[idx[j]]:
                    sign = -sign
                idx[j - 1], idx[j] = idx[j], idx[j - 1]
                j -= 1
        m = [0] * len(self.generators)
        for i in idx:
            m[i] += 1
            cap = self._cap[i]
            if cap is not None and m[i] > cap:
                return None
        return sign, tuple(m)

    # -- bases -----------------------------------------------------------
    def basis(self, k):
        """All monomials of degree exactly k, in canonical (lex) order."""
        if k < 0:
            return []
        if k not in self._basis_cache:
            self._basis_cache[k] = _enumerate(self.degrees, self._cap, k)
        return self._basis_cache[k]

    def basis_index(self, k):
        return {m: i for i, m in enumerate(self.basis(k))}

    def to_vector(self, p, k):
        """Coordinates of a degree-k polynomial in basis(k)."""
        idx = self.basis_index(k)
        out = {}
        for m, c in p.terms.items():
            if m not in idx:
                raise ContractViolation(f"polynomial not of degree {k}: {p}")
            out[idx[m]] = c
        return out

    def from_vector(self, v, k):
        b = self.basis(k)
        return Polynomial(self, {b[j]: c for j, c in v.items() if c})


def _enumerate(degrees, caps, k):
    n = len(degrees)
    out = []

    def rec(i, remaining, acc):
        if i == n:
            if remaining == 0:
                out.append(tuple(acc))
            return
        d = degrees[i]
        top = remaining // d
        if caps[i] is not None:
            top = min(top, caps[i])
        for e in range(top, -1, -1):
            acc.append(e)
            rec(i + 1, remaining - e * d, acc)
            acc.pop()

    rec(0, k, [])
    return out


class Polynomial:
    """A Q-linear combination of monomials of one FreeCGA."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms):
        self.alg = alg
        self.terms = {m: Fraction(c) for m, c in terms.items() if c != 0}

    # -- inspection ------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def degrees(self):
        return {self.alg.mono_degree(m) for m in self.terms}

    def degree(self):
        """Degree of a nonzero homogeneous polynomial (None for zero)."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ContractViolation(f"polynomial {self} is not homogeneous")
        return ds.pop()

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def coefficient(self, m):
        return self.terms.get(tuple(m), Fraction(0))

    def constant_term(self):
        return self.terms.get(self.alg.unit_monomial, Fraction(0))

    # -- arithmetic --------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, Polynomial):
            other = self.alg.scalar(other)
        if other.alg != self.alg:
            raise ContractViolation("polynomials from different algebras")
        return other

    def __add__(self, other):
        other = self._check(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return Polynomial(self.alg, t)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def scale(self, c):
        c = Fraction(c)
        if c == 0:
            return self.alg.zero()
        return Polynomial(self.alg, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._check(other)
        t = {}
        mul = self.alg.mono_mul
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                r = mul(a, b)
                if r is None:
                    continue
                s, m = r
                t[m] = t.get(m, 0) + s * ca * cb
        return Polynomial(self.alg, t)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e):
        out = self.alg.one()
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.alg.scalar(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.alg == other.alg and self.terms == other.terms

    def __hash__(self):
        return hash((self.alg, frozenset(self.terms.items())))

    # -- display ------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (self.alg.mono_degree(m), tuple(-e for e in m))):
            c = self.terms[m]
            ms = self.alg.mono_str(m)
            if ms == "1":
                body = fmt_rational(abs(c))
            elif abs(c) == 1:
                body = ms
            else:
                body = f"{fmt_rational(abs(c))}*{ms}"
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"Polynomial({self})"


def poly_mul(p, q):
    return p * q


def graded_basis(alg, k):
    return list(alg.basis(k))


def linear_decomposable_split(p):
    """Split a homogeneous polynomial into (linear part, decomposable part)."""
    if not p.is_homogeneous():
        raise ContractViolation(f"{p} is not homogeneous")
    lin, dec = {}, {}
    for m, c in p.terms.items():
        (lin if sum(m) == 1 else dec)[m] = c
    return Polynomial(p.alg, lin), Polynomial(p.alg, dec)


def linear_coefficients(p):
    """Map generator name -> coefficient of that generator in p."""
    out = {}
    for m, c in p.terms.items():
        if sum(m) == 1:
            out[p.alg.generators[m.index(1)].name] = c
    return out


@lru_cache(maxsize=None)
def _hilbert(degrees, caps, top):
    # coefficient list of prod_i (1 + t^d + ... ) up to top
    series = [0] * (top + 1)
    series[0] = 1
    for d, cap in zip(degrees, caps):
        new = [0] * (top + 1)
        for k, c in enumerate(series):
            if not c:
                continue
            e = 0
            while k + e * d <= top and (cap is None or e <= cap):
                new[k + e * d] += c
                e += 1
        series = new
    return tuple(series)


def hilbert_series(alg, top):
    """dim of each graded piece in degrees 0..top, via generating functions."""
    return list(_hilbert(alg.degrees, alg._cap, top))
