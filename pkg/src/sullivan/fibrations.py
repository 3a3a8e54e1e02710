"""
KS-extensions, twisted products over spheres, sections, rational
triviality, the rho map and the trivial-fibration builder.

Over a sphere the base is Q[x]/(x^2) (or Lambda x for odd n) and a twist
is a degree n-1 cocycle theta in Der(X); the total differential is
D'(v) = d_X(v) - (-1)^(n|v|) theta(v) x.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import FreeCGA, Generator, linear_decomposable_split
from .cdga import CDGA, Morphism, identity, make_cdga, transport
from .derivations import DerComplex, Derivation, DerivationClass, delta, is_boundary
from .errors import ContractViolation, InternalInconsistency, ValidationError
from .linalg import Matrix, Subspace, solve_affine


def sphere_base(n, var="x"):
    """Lambda x for odd n, Q[x]/(x^2) for even n, zero differential."""
    return make_cdga([Generator(var, n, None if n % 2 else 2)], {}, name=f"S{n}")


@dataclass
class KSExtension:
    base: CDGA
    fiber_names: list
    total: CDGA
    fiber: CDGA
    name: str = None

    @property
    def sphere_degree(self):
        """n when the base is a sphere model, else None."""
        gens = self.base.generators
        if len(gens) == 1 and all(v.is_zero() for v in self.base.d_values.values()):
            g = gens[0]
            if g.odd or g.cap == 2:
                return g.degree
        return None

    @property
    def var(self):
        return self.base.generators[0].name

    def D(self, name):
        return self.total.d_gen(name)

    def inclusion(self):
        """The base inclusion i: base -> total."""
        T = self.total.algebra
        return Morphism(self.base, self.total,
                        {g.name: T.gen(g.name) for g in self.base.generators})

    def projection(self):
        """q: total -> fiber, killing the base generators."""
        F = self.fiber.algebra
        vals = {g.name: F.zero() for g in self.base.generators}
        vals.update({v: F.gen(v) for v in self.fiber_names})
        return Morphism(self.total, self.fiber, vals)


def _fiber_reduce(p, base_names, fiber_alg):
    """Image of p under the map killing base generators."""
    src = p.alg
    base_idx = {src.index[b] for b in base_names}
    out = fiber_alg.zero()
    for m, c in p.terms.items():
        if any(m[i] for i in base_idx):
            continue
        word = [src.generators[i].name for i in src.mono_word(m)]
        r = fiber_alg.normalize_word(word)
        if r is not None:
            out = out + fiber_alg.monomial(r[1]).scale(r[0] * c)
    return out


def make_ks(base, fiber_gens, d_values, name=None):
    """Validate a KS-extension base -> base (x) Lambda V.

    ``d_values`` maps fiber generator names to polynomials in the total
    algebra, or is a callable receiving the total FreeCGA.
    """
    fg = [g if isinstance(g, Generator) else Generator(*g) for g in fiber_gens]
    gens = list(base.generators) + fg
    alg = FreeCGA(gens)
    if callable(d_values):
        d_values = d_values(alg)
    d = {g.name: transport(base.d_gen(g.name), alg) for g in base.generators}
    for k, v in d_values.items():
        if k in d:
            if v != d[k]:
                raise ValidationError(f"D restricted to the base differs from d_base at {k}")
            continue
        d[k] = v
    fnames = [g.name for g in fg]
    # nilpotence: D(v_i) only involves base generators and v_1..v_{i-1}
    for i, v in enumerate(fnames):
        later = {alg.index[u] for u in fnames[i:]}
        dv = d.get(v)
        if dv is None:
            continue
        for m in dv.terms:
            if any(m[j] for j in later):
                raise ValidationError(f"D {v} = {dv} violates the KS nilpotence order",
                                      {"generator": v})
    total = make_cdga(gens, d, name=name)
    falg = FreeCGA(fg)
    fd = {v: _fiber_reduce(total.d_gen(v), [g.name for g in base.generators], falg)
          for v in fnames}
    fiber = make_cdga(fg, fd, name=f"{name}/base" if name else None)
    return KSExtension(base, fnames, total, fiber, name)


def is_decomposable_extension(ks):
    return all(linear_decomposable_split(ks.D(v))[0].is_zero()
               for v in ks.fiber_names if not ks.D(v).is_zero())


# -- twisted products over spheres ----------------------------------------

@dataclass
class SphereTwist:
    fiber: CDGA
    n: int
    theta: Derivation

    def __post_init__(self):
        if self.theta.degree != self.n - 1:
            raise ContractViolation("twist derivation must have degree n-1")


def split_x(p, var, fiber_alg):
    """Write p = p0 + x*p1 with p0, p1 in the fiber algebra."""
    src = p.alg
    xi = src.index[var]
    p0, p1 = fiber_alg.zero(), fiber_alg.zero()
    for m, c in p.terms.items():
        e = m[xi]
        rest = list(m)
        rest[xi] = 0
        word = [src.generators[i].name for i in src.mono_word(tuple(rest))]
        r = fiber_alg.normalize_word(word)
        if r is None:
            continue
        term = fiber_alg.monomial(r[1]).scale(r[0] * c)
        if e == 0:
            p0 = p0 + term
        elif e == 1:
            # x sits first in canonical order, so m = x * rest with no sign
            if xi != 0:
                raise ContractViolation("the sphere generator must come first")
            p1 = p1 + term
        else:
            raise ContractViolation("x^2 term in a truncated sphere model")
    return p0, p1


def twisted_total_algebra(X, n, var="x"):
    if var in X.algebra.index:
        raise ContractViolation(f"sphere variable {var!r} clashes with a fiber generator")
    return FreeCGA([Generator(var, n, None if n % 2 else 2)] + list(X.generators))


def twist_differential(X, n, theta, alg, var="x"):
    """Generator values of D' = d_X - theta.x on Lambda x/x^2 (x) X."""
    x = alg.gen(var)
    d = {var: alg.zero()}
    for g in X.generators:
        t = transport(theta.values[g.name], alg) * x
        if (n * g.degree) % 2:
            t = -t
        d[g.name] = transport(X.d_gen(g.name), alg) - t
    return d


def twist_to_extension(X, n, theta, var="x", name=None):
    if theta.source.algebra != X.algebra or theta.degree != n - 1:
        raise ContractViolation("theta must be a degree n-1 derivation of X")
    base = sphere_base(n, var)
    alg = twisted_total_algebra(X, n, var)
    d = twist_differential(X, n, theta, alg, var)
    try:
        total = make_cdga(alg.generators, d, name=name)
    except ValidationError as e:
        raise ValidationError(f"twist is not a cocycle: {e}", e.details) from None
    return KSExtension(base, [g.name for g in X.generators], total, X, name)


def product_extension(X, n, var="x"):
    return twist_to_extension(X, n, Derivation(identity(X), n - 1, {}), var)


def _require_sphere(ks):
    n = ks.sphere_degree
    if n is None:
        raise ContractViolation("the base is not a sphere model")
    return n


def extract_twist(ks):
    """Recover theta from D' - d_X; raises ValidationError if malformed."""
    n = _require_sphere(ks)
    X = ks.fiber
    var = ks.var
    vals = {}
    for v in ks.fiber_names:
        p0, p1 = split_x(ks.D(v), var, X.algebra)
        if p0 != X.d_gen(v):
            raise ValidationError(f"D'{v} - d_X {v} is not a multiple of {var}",
                                  {"generator": v})
        vals[v] = -p1
    theta = Derivation(identity(X), n - 1, vals)
    check = twist_differential(X, n, theta, ks.total.algebra, var)
    if any(check[v] != ks.D(v) for v in ks.fiber_names):
        raise InternalInconsistency("twist extraction does not reproduce D'")
    return theta


def classifying_class(ks):
    n = _require_sphere(ks)
    theta = extract_twist(ks)
    if not delta(theta).is_zero():
        raise ValidationError("extracted twist is not a cocycle")
    return DerivationClass(theta, n - 1)


def is_rationally_trivial(ks):
    cls = classifying_class(ks)
    return cls.representative.is_zero() or is_boundary(cls.representative)


# -- the rho map --------------------------------------------------------------

@dataclass
class RhoEntry:
    cls: int          # index of the derivation class
    degree: int       # cohomological degree k of the source class
    source: int       # index in the H^k basis
    image: list       # coordinates in the H^{k-n+1} basis


@dataclass
class Rho:
    n: int
    cap: int
    classes: list
    entries: list = field(default_factory=list)

    def is_zero(self):
        return all(all(c == 0 for c in e.image) for e in self.entries)

    def nonzero_entries(self):
        return [e for e in self.entries if any(c != 0 for c in e.image)]


def _rho_for(X, sigma, cap, cls_index=0, entries=None):
    entries = [] if entries is None else entries
    shift = sigma.degree
    for k in range(max(shift, 0), cap + 1):
        Hk = X.cohomology_space(k)
        if Hk.dim == 0:
            continue
        target = X.cohomology_space(k - shift)
        for j, rep in enumerate(Hk.reps):
            w = X.algebra.from_vector(rep, k)
            img = sigma(w)
            if img.is_zero():
                coords = [Fraction(0)] * target.dim
            else:
                vec = X.algebra.to_vector(img, k - shift)
                if not target.cycles.contains(vec):
                    raise InternalInconsistency("cocycle derivation sent a cocycle to a non-cocycle")
                coords = target.coordinates(vec)
            entries.append(RhoEntry(cls_index, k, j, list(coords)))
    return entries


def rho(X, n, cap):
    """rho : H_{n-1}(Der X) -> Der_{n-1} H*(X) on cohomology up to degree cap."""
    if n < 2:
        raise ContractViolation("rho needs n > 1")
    cx = DerComplex(identity(X))
    h = cx.homology(n - 1)
    classes = [cx.element(n - 1, v) for v in h.reps]
    out = Rho(n, cap, classes)
    for i, sigma in enumerate(classes):
        _rho_for(X, sigma, cap, i, out.entries)
    return out


def rho_of(theta, cap):
    """rho applied to the class of one cocycle theta."""
    X = theta.source
    r = Rho(theta.degree + 1, cap, [theta])
    _rho_for(X, theta, cap, 0, r.entries)
    return r


def default_cap(X, n):
    """Cohomological cap covering the formal dimension when it is known."""
    fd = formal_dimension(X)
    if fd is not None:
        return fd + n
    return sum(g.degree for g in X.generators if g.odd) + n + max(
        [g.degree for g in X.generators] + [1])


def formal_dimension(X):
    """Top cohomology degree for a pure elliptic X, else None.

    Pure means d kills even generators and sends odd ones into the
    polynomial algebra on the even ones; ellipticity is then decided by the
    finiteness of Q[even] / (d odd).
    """
    evens = [g for g in X.generators if not g.odd]
    odds = [g for g in X.generators if g.odd]
    alg = X.algebra
    even_idx = {alg.index[g.name] for g in evens}
    for g in evens:
        if not X.d_gen(g.name).is_zero():
            return None
    for g in odds:
        for m in X.d_gen(g.name).terms:
            if any(e for i, e in enumerate(m) if i not in even_idx):
                return None
    if any(g.cap == 2 for g in evens):
        return None
    fd = sum(g.degree for g in odds) - sum(g.degree - 1 for g in evens)
    if not evens:
        return fd
    # quotient Q[evens]/(d odds) vanishes in a window of width max|even| above fd
    width = max(g.degree for g in evens)
    for k in range(fd + 1, fd + 1 + width):
        basis = alg.basis(k)
        pure = [m for m in basis if not any(e for i, e in enumerate(m) if i not in even_idx)]
        if not pure:
            continue
        ideal = []
        for g in odds:
            dg = X.d_gen(g.name)
            if dg.is_zero():
                continue
            for m in alg.basis(k - dg.degree()):
                if any(e for i, e in enumerate(m) if i not in even_idx):
                    continue
                ideal.append(alg.to_vector(alg.monomial(m) * dg, k))
        if Subspace(len(basis), ideal).dim < len(pure):
            return None
    return fd


@dataclass
class TnczResult:
    tncz: bool
    cap: int
    rho: Rho
    dims_total: dict
    dims_product: dict
    complete: bool   # True when cap covers every degree where rho can be nonzero


def is_tncz(ks, cap=None):
    n = _require_sphere(ks)
    if n < 2:
        raise ContractViolation("tncz test needs n > 1")
    theta = classifying_class(ks).representative
    X = ks.fiber
    fd = formal_dimension(X)
    if cap is None:
        cap = default_cap(X, n)
    r = rho_of(theta, cap)
    verdict = r.is_zero()
    dt, dp = {}, {}
    for k in range(cap + 1):
        dt[k] = ks.total.cohomology_dim(k)
        dp[k] = X.cohomology_dim(k) + X.cohomology_dim(k - n)
    if (dt == dp) != verdict:
        raise InternalInconsistency(
            f"rho verdict {verdict} disagrees with the Kunneth dimension count up to {cap}")
    return TnczResult(verdict, cap, r, dt, dp, complete=fd is not None and cap >= fd)


# -- sections ---------------------------------------------------------------

def _section_equations(ks):
    """Linear conditions on r(v) = lambda_v x making r a section.

    Returns (unknown names, list of (coeff dict, constant)) meaning
    sum coeff[v] * lambda_v + constant = 0.
    """
    n = _require_sphere(ks)
    T = ks.total.algebra
    var = ks.var
    unknowns = [v for v in ks.fiber_names if T.generator(v).degree == n]
    xm = T.gen_monomial(var)
    eqs = []
    for u in ks.fiber_names:
        if T.generator(u).degree != n - 1:
            continue
        coeff, const = {}, Fraction(0)
        for m, c in ks.D(u).terms.items():
            if m == xm:
                const += c
            elif sum(m) == 1:
                g = T.generators[m.index(1)].name
                if g in unknowns:
                    coeff[g] = coeff.get(g, 0) + c
        eqs.append((coeff, const))
    return unknowns, eqs


def find_section_over_sphere(ks):
    """A CDGA map r: total -> base with r(x) = x, or None."""
    unknowns, eqs = _section_equations(ks)
    idx = {v: i for i, v in enumerate(unknowns)}
    A = Matrix(len(eqs), len(unknowns), [{idx[v]: c for v, c in co.items()} for co, _ in eqs])
    sol = solve_affine(A, {i: -const for i, (_, const) in enumerate(eqs)})
    if sol is None:
        return None
    lam = dict(zip(unknowns, sol[0]))
    return section_from_values(ks, lam)


def section_from_values(ks, lam):
    B = ks.base.algebra
    x = B.gen(ks.var)
    vals = {ks.var: x}
    for v in ks.fiber_names:
        vals[v] = x.scale(lam.get(v, 0))
    r = Morphism(ks.total, ks.base, vals, name="r")
    return r if r.is_valid() else None


# -- the trivial-fibration builder ---------------------------------------

def projection_pairs(p):
    """For a generator projection p, map W-generator -> V-generator or None."""
    src, tgt = p.source, p.target
    out = {}
    hit = {}
    for g in src.generators:
        val = p.values[g.name]
        if val.is_zero():
            out[g.name] = None
            continue
        if len(val.terms) != 1:
            raise ContractViolation(f"{g.name} maps to {val}, not to a generator")
        (m, c), = val.terms.items()
        if c != 1 or sum(m) != 1:
            raise ContractViolation(f"{g.name} maps to {val}, not to a generator")
        v = tgt.algebra.generators[m.index(1)].name
        if v in hit:
            raise ContractViolation(f"{g.name} and {hit[v]} both map to {v}")
        hit[v] = g.name
        out[g.name] = v
    missing = [g.name for g in tgt.generators if g.name not in hit]
    if missing:
        raise ContractViolation(f"projection misses target generators {missing}")
    return out


def is_generator_projection(p):
    try:
        projection_pairs(p)
    except ContractViolation:
        return False
    return True


def sphere_map(Y, n, a, var="x"):
    """M(a): Y -> Lambda x/x^2 sending a degree-n generator w to a(w) x."""
    S = sphere_base(n, var)
    x = S.algebra.gen(var)
    vals = {g.name: x.scale(a.get(g.name, 0)) if g.degree == n else S.algebra.zero()
            for g in Y.generators}
    return Morphism(Y, S, vals, name="M(a)")


@dataclass
class Certificate:
    """A lift certificate: extension, F: M(Y) -> total, section r, class a."""
    ks: KSExtension
    F: Morphism
    section: Morphism
    f: Morphism
    a: dict
    n: int
    gates: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(self.gates.values())


class BuilderGateFailure(ValidationError):
    def __init__(self, message, certificate):
        super().__init__(message, {"gates": certificate.gates})
        self.certificate = certificate


def build_trivial_fibration(p, a, n=None, var="x"):
    """Rationally trivial fibration over S^n with section and map F'.

    ``p`` must be a generator projection Lambda W -> Lambda V; ``a`` maps
    degree-n generators of W to rationals.
    """
    pairs = projection_pairs(p)
    Y, X = p.source, p.target
    degs = {Y.algebra.generator(w).degree for w in a}
    if n is None:
        if len(degs) != 1:
            raise ContractViolation("cannot infer the sphere degree from the class")
        n = degs.pop()
    elif degs - {n}:
        raise ContractViolation("class must be supported on degree-n generators")
    sgn = -1 if n % 2 else 1
    Xa = X.algebra
    sigma_vals = {w: Xa.scalar(sgn * Fraction(c)) for w, c in a.items()}
    sigma = Derivation(p, n, sigma_vals)
    inverse = {v: w for w, v in pairs.items() if v is not None}
    sigma_bar = Derivation(identity(X), n, {v: sigma.values[w] for v, w in inverse.items()})
    theta = delta(sigma_bar)
    ks = twist_to_extension(X, n, theta, var)
    T = ks.total.algebra
    x = T.gen(var)
    fvals = {}
    for g in Y.generators:
        t = transport(sigma.values[g.name], T) * x
        if (n * g.degree) % 2:
            t = -t
        fvals[g.name] = transport(p.values[g.name], T) + t
    F = Morphism(Y, ks.total, fvals, name="F'")
    B = ks.base.algebra
    s = Morphism(ks.total, ks.base, {var: B.gen(var), **{v: B.zero() for v in ks.fiber_names}},
                 name="M(s)")
    cert = Certificate(ks, F, s, p, {k: Fraction(v) for k, v in a.items()}, n)
    cert.gates = verify_diagram(ks, s, F, p, cert.a).gates
    cert.gates["rationally_trivial"] = is_rationally_trivial(ks)
    cert.gates["section_found"] = find_section_over_sphere(ks) is not None
    if not cert.ok:
        failed = sorted(k for k, v in cert.gates.items() if not v)
        raise BuilderGateFailure(f"builder gates failed: {failed}", cert)
    return cert


@dataclass
class DiagramCheck:
    gates: dict
    failures: list

    @property
    def ok(self):
        return all(self.gates.values())

    def __bool__(self):
        return self.ok


def verify_diagram(ks, r, F, f, a):
    """Check q F = M(f), r F = M(a), r(x) = x and that F, r are CDGA maps."""
    n = _require_sphere(ks)
    failures = []
    gates = {}
    bad = F.violations()
    gates["F_morphism"] = not bad
    failures += [f"F: {b}" for b in bad]
    bad = r.violations()
    gates["section_morphism"] = not bad
    failures += [f"r: {b}" for b in bad]
    B = ks.base.algebra
    gates["section_on_base"] = r.values[ks.var] == B.gen(ks.var)
    if not gates["section_on_base"]:
        failures.append(f"r({ks.var}) = {r.values[ks.var]}")
    q = ks.projection()
    qF = q.compose(F)
    gates["fiber_restriction"] = True
    for g in f.source.generators:
        want = f.values[g.name]
        got = qF.values[g.name]
        if got.alg != want.alg:
            got = transport(got, want.alg)
        if got != want:
            gates["fiber_restriction"] = False
            failures.append(f"q F({g.name}) = {got} but f({g.name}) = {want}")
    Ma = sphere_map(f.source, n, a, ks.var)
    rF = r.compose(F)
    gates["section_class"] = True
    for g in f.source.generators:
        if rF.values[g.name] != Ma.values[g.name]:
            gates["section_class"] = False
            failures.append(f"r F({g.name}) = {rF.values[g.name]} but M(a)({g.name}) = "
                            f"{Ma.values[g.name]}")
    return DiagramCheck(gates, failures)
