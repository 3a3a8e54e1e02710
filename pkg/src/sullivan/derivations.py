"""
phi-derivations, the boundary delta, derivation homology and evaluation
subgroups.

A degree-n phi-derivation theta: A -> B lowers degrees by n and obeys
theta(xy) = theta(x) phi(y) + (-1)^(n|x|) phi(x) theta(y). It is stored by
its values on the generators of A. The boundary is
delta(theta) = d_B theta - (-1)^n theta d_A.
"""

from dataclasses import dataclass
from fractions import Fraction
import re

from .algebra import fmt_rational
from .cdga import identity
from .errors import ContractViolation
from .linalg import Echelon, Matrix, Subquotient, Subspace, image_basis, kernel_basis


class Derivation:
    def __init__(self, phi, degree, values):
        self.phi = phi
        self.degree = degree
        B = phi.target.algebra
        self.values = {}
        for g in phi.source.generators:
            v = values.get(g.name)
            if v is None or g.degree - degree < 0:
                v = B.zero()
            self.values[g.name] = v
        self._cache = {}

    @property
    def source(self):
        return self.phi.source

    @property
    def target(self):
        return self.phi.target

    def __call__(self, p):
        A = self.source.algebra
        if p.alg != A:
            raise ContractViolation("polynomial not in the derivation's source")
        out = self.target.algebra.zero()
        for m, c in p.terms.items():
            out = out + self.on_monomial(m).scale(c)
        return out

    def on_monomial(self, m):
        if m in self._cache:
            return self._cache[m]
        A = self.source.algebra
        B = self.target.algebra
        gens = A.generators
        word = A.mono_word(m)
        images = [self.phi.values[gens[i].name] for i in word]
        total = B.zero()
        left = B.one()
        left_deg = 0
        n = self.degree
        for pos, i in enumerate(word):
            val = self.values[gens[i].name]
            if not val.is_zero():
                right = B.one()
                for img in images[pos + 1:]:
                    right = right * img
                term = left * val * right
                if (n * left_deg) % 2:
                    term = -term
                total = total + term
            left = left * images[pos]
            left_deg += gens[i].degree
        self._cache[m] = total
        return total

    def __add__(self, other):
        self._compatible(other)
        return Derivation(self.phi, self.degree,
                          {k: v + other.values[k] for k, v in self.values.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return Derivation(self.phi, self.degree, {k: v.scale(c) for k, v in self.values.items()})

    def _compatible(self, other):
        if other.degree != self.degree or other.source.algebra != self.source.algebra \
                or other.target.algebra != self.target.algebra:
            raise ContractViolation("incompatible derivations")

    def is_zero(self):
        return all(v.is_zero() for v in self.values.values())

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return (self.degree == other.degree and self.source.algebra == other.source.algebra
                and self.values == other.values)

    def __hash__(self):
        return hash((self.degree, tuple(sorted(self.values))))

    def __str__(self):
        return symbol_str(self)

    def __repr__(self):
        return f"Derivation[{self.degree}]({self})"

    def augmented(self):
        """Generator-dual functional: coefficient of 1 in theta(g) for each g."""
        return {g: v.constant_term() for g, v in self.values.items() if v.constant_term()}


def symbol_str(theta):
    """Print theta in the symbol notation, e.g. ``(w4,1) - 2*(w7,v3)``."""
    parts = []
    B = theta.target.algebra
    for g in theta.source.generators:
        val = theta.values[g.name]
        for m in sorted(val.terms, key=lambda m: tuple(-e for e in m)):
            c = val.terms[m]
            body = f"({g.name},{B.mono_str(m)})"
            if abs(c) != 1:
                body = f"{fmt_rational(abs(c))}*{body}"
            parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


_SYMBOL = re.compile(r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*\s*)?\(\s*([A-Za-z_][\w']*)\s*,\s*([^()]*?)\s*\)")


def _monomial(B, text):
    p = B.one()
    if text == "1":
        return p
    for factor in text.split("*"):
        name, _, e = factor.strip().partition("^")
        if name not in B.index:
            raise ContractViolation(f"unknown generator {name!r} in symbol")
        p = p * B.gen(name) ** (int(e) if e else 1)
    return p


def parse_symbols(phi, n, text):
    """Inverse of symbol_str: ``(w4,1) - 2*(w7,v3)`` -> degree-n derivation."""
    A, B = phi.source.algebra, phi.target.algebra
    vals = {}
    text = text.strip()
    if text == "0":
        return Derivation(phi, n, {})
    pos = 0
    while pos < len(text):
        m = _SYMBOL.match(text, pos)
        if not m or (pos > 0 and not m.group(1)):
            raise ContractViolation(f"cannot parse derivation symbol at {text[pos:]!r}")
        sign, coef, gen, mono = m.groups()
        if gen not in A.index:
            raise ContractViolation(f"unknown source generator {gen!r} in symbol")
        h = _monomial(B, mono)
        if h.degree() != A.generator(gen).degree - n:
            raise ContractViolation(f"symbol ({gen},{mono}) does not have degree {n}")
        c = Fraction(coef or 1) * (-1 if sign == "-" else 1)
        vals[gen] = vals.get(gen, B.zero()) + h.scale(c)
        pos = m.end()
    return Derivation(phi, n, vals)


def symbol(phi, n, gen, h):
    """The derivation (gen, h): gen |-> h, other generators |-> 0."""
    if isinstance(h, (int, Fraction)):
        h = phi.target.algebra.scalar(h)
    return Derivation(phi, n, {gen: h})


def delta(theta):
    """Boundary d_B o theta - (-1)^n theta o d_A (a derivation of degree n-1)."""
    n = theta.degree
    A, B = theta.source, theta.target
    sign = -1 if n % 2 == 0 else 1
    vals = {}
    for g in A.generators:
        v = B.d(theta.values[g.name]) + theta(A.d_gen(g.name)).scale(sign)
        vals[g.name] = v
    return Derivation(theta.phi, n - 1, vals)


class DerComplex:
    """The graded vector space Der_*(A, B; phi) with explicit bases."""

    def __init__(self, phi):
        self.phi = phi
        self._basis = {}
        self._delta = {}

    def basis_pairs(self, n):
        """Ordered list of (generator name, monomial of B) spanning Der_n."""
        if n < 0:
            return []
        if n not in self._basis:
            B = self.phi.target.algebra
            pairs = []
            for g in self.phi.source.generators:
                for m in B.basis(g.degree - n):
                    pairs.append((g.name, m))
            self._basis[n] = pairs
        return self._basis[n]

    def dim(self, n):
        return len(self.basis_pairs(n))

    def element(self, n, vec):
        B = self.phi.target.algebra
        vals = {}
        pairs = self.basis_pairs(n)
        for j, c in vec.items():
            g, m = pairs[j]
            vals[g] = vals.get(g, B.zero()) + B.monomial(m).scale(c)
        return Derivation(self.phi, n, vals)

    def vector(self, theta):
        idx = {p: i for i, p in enumerate(self.basis_pairs(theta.degree))}
        out = {}
        for g, v in theta.values.items():
            for m, c in v.terms.items():
                out[idx[(g, m)]] = c
        return out

    def basis(self, n):
        return [self.element(n, {j: 1}) for j in range(self.dim(n))]

    def delta_matrix(self, n):
        """Matrix of delta : Der_n -> Der_{n-1}."""
        if n not in self._delta:
            cols = [self.vector(delta(t)) for t in self.basis(n)]
            self._delta[n] = Matrix.from_columns(self.dim(n - 1), cols)
        return self._delta[n]

    def cycles(self, n):
        if n == 0:
            return Subspace.full(self.dim(0))
        return kernel_basis(self.delta_matrix(n))

    def boundaries(self, n):
        return image_basis(self.delta_matrix(n + 1))

    def homology(self, n):
        return Subquotient(self.cycles(n), self.boundaries(n))


def der_basis(A, B, phi, n):
    if n < 1:
        raise ContractViolation("derivation degree must be positive")
    _check_triple(A, B, phi)
    return DerComplex(phi).basis(n)


def _check_triple(A, B, phi):
    if phi.source.algebra != A.algebra or phi.target.algebra != B.algebra:
        raise ContractViolation("phi does not go from A to B")


@dataclass
class DerivationClass:
    representative: Derivation
    degree: int

    def __str__(self):
        return f"[{self.representative}]"


def der_homology(A, B, phi, n):
    """(dim H_n(Der(A,B;phi)), list of DerivationClass)."""
    if n < 1:
        raise ContractViolation("homology degree must be positive")
    _check_triple(A, B, phi)
    cx = DerComplex(phi)
    h = cx.homology(n)
    return h.dim, [DerivationClass(cx.element(n, v), n) for v in h.reps]


def is_cocycle(theta):
    return delta(theta).is_zero()


def is_boundary(theta):
    """True when theta = delta(eta) for some eta of degree n+1."""
    cx = DerComplex(theta.phi)
    return cx.boundaries(theta.degree).contains(cx.vector(theta))


def evaluation_subgroup(A, B, phi, n):
    """G_n(A, B; phi) as a subspace of Hom(degree-n generators of A, Q).

    Coordinates follow the order of ``A.generators_in_degree(n)``.
    """
    _check_triple(A, B, phi)
    if not A.is_minimal():
        raise ContractViolation("evaluation subgroups need a minimal Sullivan source")
    gens = A.generators_in_degree(n)
    cx = DerComplex(phi)
    z = cx.cycles(n)
    B_alg = B.algebra
    one = B_alg.unit_monomial
    pairs = cx.basis_pairs(n)
    col = {(g, one): i for i, g in enumerate(gens)}
    images = []
    for v in z.basis:
        img = {}
        for j, c in v.items():
            key = pairs[j]
            if key in col:
                img[col[key]] = c
        images.append(img)
    return Subspace(len(gens), images)


def evaluation_cocycles(A, B, phi, n):
    """Cocycles whose augmentations span G_n; one per basis vector of G_n."""
    gens = A.generators_in_degree(n)
    cx = DerComplex(phi)
    z = cx.cycles(n)
    one = B.algebra.unit_monomial
    pairs = cx.basis_pairs(n)
    e = Echelon(len(gens))
    out = []
    for v in z.basis:
        img = {gens.index(pairs[j][0]): c for j, c in v.items()
               if pairs[j][1] == one and pairs[j][0] in gens}
        if e.add(img):
            out.append(cx.element(n, v))
    return out


def gottlieb_group(A, n):
    return evaluation_subgroup(A, A, identity(A), n)
