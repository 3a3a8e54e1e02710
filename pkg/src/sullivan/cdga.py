"""Commutative differential graded algebras, morphisms and cohomology."""

from dataclasses import dataclass
import warnings

from .algebra import FreeCGA, Generator, Polynomial, linear_decomposable_split
from .errors import ContractViolation, ValidationError
from .linalg import Matrix, Subquotient, Subspace, image_basis, kernel_basis, rank


class CDGA:
    """A free (possibly truncated) CGA with a degree +1 differential.

    Construct through :func:`make_cdga`, which validates d^2 = 0.
    """

    def __init__(self, algebra, d_values, name=None):
        self.algebra = algebra
        self.name = name
        self.d_values = {}
        for g in algebra.generators:
            v = d_values.get(g.name)
            self.d_values[g.name] = v if v is not None else algebra.zero()
        self._mono_cache = {}
        self._matrix_cache = {}

    def __repr__(self):
        body = ", ".join(f"d{g} = {v}" for g, v in self.d_values.items() if not v.is_zero())
        return f"CDGA({self.algebra!r}; {body or 'd = 0'})"

    @property
    def generators(self):
        return self.algebra.generators

    def gen(self, name):
        return self.algebra.gen(name)

    def d_gen(self, name):
        return self.d_values[name]

    def d_monomial(self, m):
        if m in self._mono_cache:
            return self._mono_cache[m]
        alg = self.algebra
        word = alg.mono_word(m)
        total = alg.zero()
        left = alg.one()
        left_deg = 0
        gens = alg.generators
        for pos, i in enumerate(word):
            right = alg.one()
            for j in word[pos + 1:]:
                right = right * alg.gen(gens[j].name)
            term = left * self.d_values[gens[i].name] * right
            if left_deg % 2:
                term = -term
            total = total + term
            left = left * alg.gen(gens[i].name)
            left_deg += gens[i].degree
        self._mono_cache[m] = total
        return total

    def d(self, p):
        if p.alg != self.algebra:
            raise ContractViolation("polynomial from a different algebra")
        out = self.algebra.zero()
        for m, c in p.terms.items():
            out = out + self.d_monomial(m).scale(c)
        return out

    def d_matrix(self, k):
        """Matrix of d : A^k -> A^{k+1} in the monomial bases (rows = target)."""
        if k not in self._matrix_cache:
            alg = self.algebra
            cols = [alg.to_vector(self.d_monomial(m), k + 1) for m in alg.basis(k)]
            self._matrix_cache[k] = Matrix.from_columns(len(alg.basis(k + 1)), cols)
        return self._matrix_cache[k]

    def cocycles(self, k):
        return kernel_basis(self.d_matrix(k))

    def coboundaries(self, k):
        if k <= 0:
            return Subspace.zero(len(self.algebra.basis(k)))
        return image_basis(self.d_matrix(k - 1))

    def cohomology_space(self, k):
        return Subquotient(self.cocycles(k), self.coboundaries(k))

    def cohomology(self, k):
        """(dim H^k, list of cocycle representatives)."""
        if k < 0:
            raise ContractViolation("degree must be non-negative")
        sq = self.cohomology_space(k)
        return sq.dim, [self.algebra.from_vector(v, k) for v in sq.reps]

    def cohomology_dim(self, k):
        if k < 0:
            return 0
        n = len(self.algebra.basis(k))
        z = n - rank(self.d_matrix(k))
        b = rank(self.d_matrix(k - 1)) if k > 0 else 0
        return z - b

    def is_coboundary(self, p, k=None):
        if p.is_zero():
            return True
        k = p.degree() if k is None else k
        return self.coboundaries(k).contains(self.algebra.to_vector(p, k))

    def is_minimal(self):
        return all(linear_decomposable_split(v)[0].is_zero()
                   for v in self.d_values.values() if not v.is_zero())

    def generator_degrees(self):
        return sorted({g.degree for g in self.generators})

    def generators_in_degree(self, n):
        return [g.name for g in self.generators if g.degree == n]


def make_cdga(generators, d_values, name=None):
    """Validate and build a CDGA.

    ``generators`` are Generator objects or ``(name, degree[, cap])``
    tuples; ``d_values`` maps names to Polynomials (or is filled in later
    by a callable taking the algebra).
    """
    gens = [g if isinstance(g, Generator) else Generator(*g) for g in generators]
    alg = FreeCGA(gens)
    if callable(d_values):
        d_values = d_values(alg)
    d_values = dict(d_values)
    for k in d_values:
        if k not in alg.index:
            raise ValidationError(f"differential given for unknown generator {k!r}",
                                  {"generator": k})
    for g in gens:
        v = d_values.get(g.name)
        if v is None or v.is_zero():
            continue
        if v.alg != alg:
            raise ValidationError(f"d{g.name} lives in a different algebra")
        if not v.is_homogeneous() or v.degree() != g.degree + 1:
            got = sorted(v.degrees())
            raise ValidationError(
                f"d{g.name} has degree {got[0] if len(got) == 1 else got}, "
                f"expected {g.degree + 1}",
                {"generator": g.name, "expected": g.degree + 1, "got": got})
    A = CDGA(alg, d_values, name)
    for g in gens:
        dd = A.d(A.d_gen(g.name))
        if not dd.is_zero():
            raise ValidationError(f"d^2 {g.name} = {dd} != 0",
                                  {"generator": g.name, "residual": str(dd)})
        if g.cap == 2 and not g.odd:
            # d(g^2) = 2 g dg must vanish since g^2 = 0
            r = (A.gen(g.name) * A.d_gen(g.name)).scale(2)
            if not r.is_zero():
                raise ValidationError(f"differential incompatible with truncation of {g.name}",
                                      {"generator": g.name, "residual": str(r)})
    return A


def cohomology(A, k):
    return A.cohomology(k)


def is_minimal(A):
    return A.is_minimal()


def tensor(*factors, name=None):
    """Tensor product of CDGAs with D = sum of the factor differentials."""
    gens = [g for A in factors for g in A.generators]
    alg = FreeCGA(gens)
    d = {}
    for A in factors:
        for g in A.generators:
            d[g.name] = transport(A.d_gen(g.name), alg)
    return make_cdga(gens, d, name=name)


def transport(p, alg):
    """Rewrite p in a larger algebra containing its generators by name."""
    out = {}
    src = p.alg
    for m, c in p.terms.items():
        e = [0] * len(alg)
        for i, x in enumerate(m):
            if x:
                e[alg.index[src.generators[i].name]] = x
        out[tuple(e)] = c
    # generator order may differ; renormalize word by word
    if [alg.index[g.name] for g in src.generators] == sorted(alg.index[g.name] for g in src.generators):
        return Polynomial(alg, out)
    res = alg.zero()
    for m, c in p.terms.items():
        word = [src.generators[i].name for i in src.mono_word(m)]
        r = alg.normalize_word(word)
        if r is not None:
            res = res + alg.monomial(r[1]).scale(r[0] * c)
    return res


class Morphism:
    """A degree-0 algebra map between CDGAs, determined on generators."""

    def __init__(self, source, target, values, name=None):
        self.source = source
        self.target = target
        self.name = name
        tz = target.algebra.zero()
        self.values = {g.name: values.get(g.name, tz) for g in source.generators}
        self._cache = {}

    def __repr__(self):
        return "Morphism(" + ", ".join(f"{k} -> {v}" for k, v in self.values.items()) + ")"

    def on_monomial(self, m):
        if m not in self._cache:
            out = self.target.algebra.one()
            gens = self.source.algebra.generators
            for i in self.source.algebra.mono_word(m):
                out = out * self.values[gens[i].name]
            self._cache[m] = out
        return self._cache[m]

    def __call__(self, p):
        if p.alg != self.source.algebra:
            raise ContractViolation("polynomial not in the source algebra")
        out = self.target.algebra.zero()
        for m, c in p.terms.items():
            out = out + self.on_monomial(m).scale(c)
        return out

    def compose(self, other):
        """self after other."""
        if other.target.algebra != self.source.algebra:
            raise ContractViolation("morphisms not composable")
        return Morphism(other.source, self.target,
                        {k: self(v) for k, v in other.values.items()})

    def equals(self, other):
        return (self.source.algebra == other.source.algebra
                and self.target.algebra == other.target.algebra
                and all(self.values[k] == other.values[k] for k in self.values))

    def violations(self):
        """List of human-readable reasons this is not a CDGA map."""
        out = []
        src, tgt = self.source, self.target
        for g in src.generators:
            v = self.values[g.name]
            if v.alg != tgt.algebra:
                out.append(f"{g.name}: value lives in a different algebra")
                continue
            if not v.is_zero() and (not v.is_homogeneous() or v.degree() != g.degree):
                out.append(f"{g.name}: value {v} does not have degree {g.degree}")
                continue
        if out:
            return out
        for g in src.generators:
            lhs = self(src.d_gen(g.name))
            rhs = tgt.d(self.values[g.name])
            if lhs != rhs:
                out.append(f"{g.name}: f(d {g.name}) = {lhs} but d f({g.name}) = {rhs}")
            if g.cap == 2 and not g.odd:
                sq = self.values[g.name] * self.values[g.name]
                if not sq.is_zero():
                    out.append(f"{g.name}: capped generator maps to {self.values[g.name]} "
                               f"whose square {sq} is nonzero")
        return out

    def is_valid(self):
        return not self.violations()


def make_morphism(source, target, values, name=None):
    phi = Morphism(source, target, values, name)
    bad = phi.violations()
    if bad:
        raise ValidationError("not a CDGA morphism: " + "; ".join(bad), {"violations": bad})
    return phi


def identity(A):
    return Morphism(A, A, {g.name: A.gen(g.name) for g in A.generators}, name="id")


def trivial_cdga():
    return CDGA(FreeCGA([]), {}, name="Q")


def augmentation(A):
    """The CDGA map A -> Q killing every positive-degree element."""
    Q = trivial_cdga()
    return Morphism(A, Q, {})


@dataclass
class LinearPart:
    degree: int
    source_gens: list
    target_gens: list
    matrix: Matrix
    injective: bool
    surjective: bool


def linear_part(phi):
    """Per-degree matrix of the map induced on indecomposables."""
    if not (phi.source.is_minimal() and phi.target.is_minimal()):
        warnings.warn("linear part of a morphism between non-minimal algebras", stacklevel=2)
    degrees = sorted({g.degree for g in phi.source.generators}
                     | {g.degree for g in phi.target.generators})
    out = {}
    for n in degrees:
        sg = phi.source.generators_in_degree(n)
        tg = phi.target.generators_in_degree(n)
        rows = []
        for t in tg:
            row = {}
            for j, s in enumerate(sg):
                c = phi.values[s].coefficient(phi.target.algebra.gen_monomial(t))
                if c:
                    row[j] = c
            rows.append(row)
        M = Matrix(len(tg), len(sg), rows)
        r = rank(M)
        out[n] = LinearPart(n, sg, tg, M, injective=(r == len(sg)), surjective=(r == len(tg)))
    return out
