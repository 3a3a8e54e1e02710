"""
Lifting a map through a twisted product over a sphere.

Given f: M(Y) -> X, a twist theta in Der_{n-1}(X) and a class a on the
degree-n generators of M(Y), we look for

    F(w) = f(w) + x * eta(w)            (so q F = f)
    r(x) = x,  r(v) = lambda_v x        (a section, |v| = n)

with F a chain map and r F = M(a). Because x^2 = 0 every condition is
linear in (eta, lambda, theta, a): eta is a degree-n f-derivation and the
chain condition reads delta_f(eta) = (-1)^n theta o f. Symbolic
parameters therefore enter linearly and are solved for exactly.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Polynomial, fmt_rational
from .cdga import Morphism, identity, transport
from .derivations import DerComplex, Derivation, is_boundary
from .errors import ContractViolation, InternalInconsistency
from .fibrations import (Certificate, build_trivial_fibration, default_cap,
                         extract_twist, formal_dimension, rho_of, section_from_values,
                         twist_to_extension, verify_diagram)
from .linalg import (Echelon, Matrix, Subspace, axpy, kernel_basis,
                     left_null_certificate, solve_affine)


class Affine:
    """const + sum_p p * terms[p] over values supporting + and scale()."""

    def __init__(self, const, terms=None):
        self.const = const
        self.terms = {p: v for p, v in (terms or {}).items() if not _is_zero(v)}

    def at(self, values):
        out = self.const
        for p, v in self.terms.items():
            out = out + _scale(v, Fraction(values.get(p, 0)))
        return out

    @property
    def params(self):
        return sorted(self.terms)

    def __str__(self):
        parts = []
        if not _is_zero(self.const) or not self.terms:
            parts.append(str(self.const))
        for p in sorted(self.terms):
            v = self.terms[p]
            s = str(v)
            if isinstance(v, Fraction):
                body = p if v == 1 else f"-{p}" if v == -1 else f"{fmt_rational(v)}*{p}"
            elif isinstance(v, Polynomial) and len(v.terms) == 1:
                (m, c), = v.terms.items()
                mono = v.alg.mono_str(m)
                coef = "" if c == 1 else "-" if c == -1 else f"{fmt_rational(c)}*"
                body = f"{coef}{p}" if mono == "1" else f"{coef}{p}*{mono}"
            else:
                body = f"{p}*({s})"
            parts.append(body)
        out = parts[0]
        for b in parts[1:]:
            out += f" - {b[1:]}" if b.startswith("-") else f" + {b}"
        return out


def _is_zero(v):
    if isinstance(v, (int, Fraction)):
        return v == 0
    return v.is_zero()


def _scale(v, c):
    if isinstance(v, (int, Fraction)):
        return Fraction(v) * c
    return v.scale(c)


@dataclass
class ParamTwist:
    """theta = const + sum_p p * params[p], all cocycles in Der_{n-1}(X)."""
    fiber: object
    n: int
    const: Derivation
    params: dict = field(default_factory=dict)

    @classmethod
    def zero(cls, X, n):
        return cls(X, n, Derivation(identity(X), n - 1, {}))

    def at(self, values):
        out = self.const
        for p, th in self.params.items():
            out = out + th.scale(Fraction(values.get(p, 0)))
        return out

    def names(self):
        return sorted(self.params)


def affine_class(a):
    """Normalize a class: gen -> Fraction | Affine  ==>  gen -> Affine."""
    out = {}
    for g, v in a.items():
        out[g] = v if isinstance(v, Affine) else Affine(Fraction(v))
    return out


# -- linear system -----------------------------------------------------------

class LiftSystem:
    """Rows: chain conditions per generator, section rows, class rows.

    Columns: [eta basis..., lambda...]. Each parameter p (and the constant,
    key None) contributes a right-hand side vector; the system is
    M u = rhs[None] + sum_p p * rhs[p].
    """

    def __init__(self, f, n, twists, classes, var="x"):
        self.f = f
        self.n = n
        self.var = var
        Y, X = f.source, f.target
        self.Y, self.X = Y, X
        if not Y.is_minimal():
            raise ContractViolation("the source of f must be a minimal model")
        self.cx = DerComplex(f)
        self.eta_pairs = self.cx.basis_pairs(n)
        self.lam = [g.name for g in X.generators if g.degree == n]
        self.ncols = len(self.eta_pairs) + len(self.lam)
        lam_col = {v: len(self.eta_pairs) + i for i, v in enumerate(self.lam)}
        rows, self.row_gen, self.row_kind = [], [], []
        keys = set(twists) | set(k for a in classes.values() for k in a)
        self.keys = sorted((k for k in keys if k is not None))
        rhs = {k: {} for k in [None] + self.keys}

        # chain: delta(eta)(w) - (-1)^n theta(f(w)) = 0, coordinates in Der_{n-1}
        D = self.cx.delta_matrix(n)
        low_pairs = self.cx.basis_pairs(n - 1)
        sgn = -1 if n % 2 else 1
        tf = {}
        for k, th in twists.items():
            vals = {g.name: th(f.values[g.name]) for g in Y.generators}
            tf[k] = self.cx.vector(Derivation(f, n - 1, vals))
        for i, (w, _m) in enumerate(low_pairs):
            rows.append(dict(D.rows[i]))
            self.row_gen.append(w)
            self.row_kind.append("chain")
            for k in tf:
                if i in tf[k]:
                    rhs[k][len(rows) - 1] = sgn * tf[k][i]
        # section: sum_v coeff_v(d u) lambda_v = eps(theta(u)) for |u| = n-1
        for u in X.generators:
            if u.degree != n - 1:
                continue
            row = {}
            du = X.d_gen(u.name)
            for v in self.lam:
                c = du.coefficient(X.algebra.gen_monomial(v))
                if c:
                    row[lam_col[v]] = c
            rows.append(row)
            self.row_gen.append(u.name)
            self.row_kind.append("section")
            for k, th in twists.items():
                e = th.values[u.name].constant_term()
                if e:
                    rhs[k][len(rows) - 1] = e
        # class: sum_v coeff_v(f(w)) lambda_v + eps(eta(w)) = a(w) for |w| = n
        one = X.algebra.unit_monomial
        for w in Y.generators:
            if w.degree != n:
                continue
            row = {}
            fw = f.values[w.name]
            for v in self.lam:
                c = fw.coefficient(X.algebra.gen_monomial(v))
                if c:
                    row[lam_col[v]] = c
            j = self.eta_pairs.index((w.name, one))
            row[j] = Fraction(1)
            rows.append(row)
            self.row_gen.append(w.name)
            self.row_kind.append("class")
            for k, val in classes.get(w.name, {}).items():
                if val:
                    rhs[k][len(rows) - 1] = Fraction(val)
        self.M = Matrix(len(rows), self.ncols, rows)
        self.rhs = rhs

    def rhs_at(self, values):
        out = dict(self.rhs[None])
        for k in self.keys:
            out = axpy(out, Fraction(values.get(k, 0)), self.rhs[k])
        return out

    def gen_degree(self, g):
        if g in self.Y.algebra.index:
            return self.Y.algebra.generator(g).degree
        return self.X.algebra.generator(g).degree

    def restrict(self, max_degree):
        """Row indices for conditions attached to generators of degree <= max_degree."""
        out = []
        for i, (g, kind) in enumerate(zip(self.row_gen, self.row_kind)):
            deg = self.gen_degree(g) + (1 if kind == "section" else 0)
            if deg <= max_degree:
                out.append(i)
        return out

    def sub(self, idx, b):
        M = Matrix(len(idx), self.ncols, [self.M.rows[i] for i in idx])
        rb = {j: b[i] for j, i in enumerate(idx) if i in b}
        return M, rb

    def solution_parts(self, u):
        eta = self.cx.element(self.n, {j: c for j, c in enumerate(u[: len(self.eta_pairs)]) if c})
        lam = dict(zip(self.lam, u[len(self.eta_pairs):]))
        return eta, lam


def _lift_from(f, n, theta, eta, lam, var):
    X = f.target
    ks = twist_to_extension(X, n, theta, var)
    T = ks.total.algebra
    x = T.gen(var)
    vals = {g.name: transport(f.values[g.name], T) + x * transport(eta.values[g.name], T)
            for g in f.source.generators}
    F = Morphism(f.source, ks.total, vals, name="F")
    r = section_from_values(ks, lam)
    if r is None:
        r = Morphism(ks.total, ks.base, {var: ks.base.algebra.gen(var),
                                         **{v: ks.base.algebra.gen(var).scale(lam.get(v, 0))
                                            for v in ks.fiber_names}}, name="r")
    return ks, F, r


# -- obstruction witnesses -----------------------------------------------------

@dataclass
class Witness:
    """A checkable proof that no lift exists for given parameter values.

    ``farkas`` is y with y^T M = 0 and y . rhs = 1 for the lift system.
    ``generator`` is the first generator (by degree) at which the
    degree-truncated system becomes inconsistent; ``required`` is F(d w)
    computed from an admissible choice on lower generators and
    ``class_nonzero`` records whether it is a nonzero cohomology class of
    the total space.
    """
    values: dict
    farkas: dict
    generator: str = None
    required: str = None
    class_nonzero: bool = None
    feasible_parameters: str = None

    def describe(self):
        s = f"no lift for {self._vals()}"
        if self.generator:
            s += f": condition at {self.generator} fails"
            if self.required is not None:
                s += f"; F(d {self.generator}) = {self.required}"
                if self.class_nonzero:
                    s += " is a nonzero cohomology class but must be exact"
        return s

    def _vals(self):
        return ", ".join(f"{k}={fmt_rational(v)}" for k, v in sorted(self.values.items())) or "given data"


def _witness(system, values, twist_at, classes):
    b = system.rhs_at(values)
    y = left_null_certificate(system.M, b)
    if y is None:
        return None
    w = Witness(dict(values), y)
    # degreewise: find first generator degree where the truncated system fails
    degs = sorted({system.gen_degree(g) + (1 if k == "section" else 0)
                   for g, k in zip(system.row_gen, system.row_kind)})
    prev = None
    for dgr in degs:
        idx = system.restrict(dgr)
        M, rb = system.sub(idx, b)
        if solve_affine(M, rb) is None:
            bad = [system.row_gen[i] for i in idx if system.gen_degree(system.row_gen[i]) == dgr
                   or system.row_kind[i] == "section"]
            w.generator = bad[0] if bad else None
            if prev is not None and w.generator in system.Y.algebra.index:
                _describe_required(system, prev, b, w, twist_at)
            break
        prev = dgr
    return w


def _describe_required(system, prev_deg, b, w, theta):
    idx = system.restrict(prev_deg)
    M, rb = system.sub(idx, b)
    sol = solve_affine(M, rb)
    if sol is None:
        return
    eta, lam = system.solution_parts(sol[0])
    ks, F, _ = _lift_from(system.f, system.n, theta, eta, lam, system.var)
    dw = system.Y.d_gen(w.generator)
    req = F(dw)
    w.required = str(req)
    if req.is_zero():
        w.class_nonzero = False
        return
    k = req.degree()
    vec = ks.total.algebra.to_vector(req, k)
    w.class_nonzero = (ks.total.cocycles(k).contains(vec)
                       and not ks.total.coboundaries(k).contains(vec))


def verify_witness(f, n, twist, a, witness, var="x"):
    """Re-check a Farkas certificate against freshly assembled equations."""
    system = _system(f, n, twist, a, var)
    b = system.rhs_at(witness.values)
    y = witness.farkas
    for j in range(system.ncols):
        s = sum((y[i] * system.M.rows[i].get(j, 0) for i in y), Fraction(0))
        if s:
            return False
    return sum((y[i] * b.get(i, 0) for i in y), Fraction(0)) != 0


# -- single-lift solver ---------------------------------------------------------

@dataclass
class Found:
    F: dict            # generator -> Affine polynomial in the total algebra
    section: dict      # fiber generator -> Affine rational (r(v) = lambda x)
    twist: ParamTwist
    a: dict
    f: Morphism
    n: int
    var: str = "x"
    kind: str = "found"

    def certificate(self, values=None):
        values = values or {}
        theta = self.twist.at(values)
        ks = twist_to_extension(self.f.target, self.n, theta, self.var)
        T = ks.total.algebra
        vals = {g: transport(v.at(values), T) for g, v in self.F.items()}
        F = Morphism(self.f.source, ks.total, vals, name="F")
        lam = {v: l.at(values) for v, l in self.section.items()}
        r = section_from_values(ks, lam)
        a = {g: v.at(values) for g, v in self.a.items()}
        cert = Certificate(ks, F, r, self.f, a, self.n)
        if r is None:
            cert.gates = {"section_morphism": False}
            return cert
        cert.gates = verify_diagram(ks, r, F, self.f, a).gates
        return cert


@dataclass
class Obstructed:
    witness: Witness
    feasible: str
    kind: str = "obstructed"


@dataclass
class Undetermined:
    reason: str
    kind: str = "undetermined"


@dataclass
class LiftOptions:
    max_parameters: int = 2


def _system(f, n, twist, a, var):
    twists = {None: twist.const, **twist.params}
    classes = {}
    for g, v in affine_class(a).items():
        classes[g] = {None: v.const, **v.terms}
    return LiftSystem(f, n, twists, classes, var)


def solve_lift_degreewise(f, twist, a, options=None, var="x"):
    """Found(F) | Obstructed(witness) | Undetermined for symbolic data."""
    options = options or LiftOptions()
    if twist.fiber.algebra != f.target.algebra:
        raise ContractViolation("twist fiber must be the target of f")
    n = twist.n
    for g in a:
        if f.source.algebra.generator(g).degree != n:
            raise ContractViolation(f"class must live on degree-{n} generators, not {g}")
    system = _system(f, n, twist, a, var)
    params = system.keys
    if options.max_parameters is not None and len(params) > options.max_parameters:
        return Undetermined(f"{len(params)} symbolic parameters exceed the limit "
                            f"{options.max_parameters}")
    sols = {}
    for k in [None] + params:
        sols[k] = solve_affine(system.M, system.rhs[k])
    if all(s is not None for s in sols.values()):
        def part(slc):
            const = [sols[None][0][j] for j in slc]
            return const, {p: [sols[p][0][j] for j in slc] for p in params}
        ne = len(system.eta_pairs)
        F = {}
        T_alg = twist_to_extension(f.target, n, twist.const, var).total.algebra
        x = T_alg.gen(var)

        def eta_of(u):
            eta, _ = system.solution_parts(u + [Fraction(0)] * len(system.lam))
            return eta
        e0 = eta_of(sols[None][0][:ne])
        ep = {p: eta_of(sols[p][0][:ne]) for p in params}
        for g in f.source.generators:
            const = transport(f.values[g.name], T_alg) + x * transport(e0.values[g.name], T_alg)
            terms = {p: x * transport(ep[p].values[g.name], T_alg) for p in params}
            F[g.name] = Affine(const, terms)
        section = {}
        for i, v in enumerate(system.lam):
            section[v] = Affine(sols[None][0][ne + i], {p: sols[p][0][ne + i] for p in params})
        return Found(F, section, twist, affine_class(a), f, n, var)
    # describe the feasible parameter set and find a bad value
    feasible = _feasible_parameters(system, params)
    bad = _bad_value(system, params, sols)
    theta = twist.at(bad)
    w = _witness(system, bad, theta, a)
    if w is None:
        raise InternalInconsistency("infeasible lift system without a Farkas certificate")
    w.feasible_parameters = feasible
    return Obstructed(w, feasible)


def _bad_value(system, params, sols):
    if sols[None] is None:
        return {}
    for p in params:
        if sols[p] is None:
            return {p: Fraction(1)}
    raise InternalInconsistency("no infeasible parameter value found")


def _feasible_parameters(system, params):
    """Human-readable description of {params : system solvable}."""
    # solvable iff rhs(params) in column space; columns [M | -rhs_p | -rhs_0*t]
    cols = [system.M.column(j) for j in range(system.ncols)]
    extra = [{i: -v for i, v in system.rhs[p].items()} for p in params]
    const = {i: -v for i, v in system.rhs[None].items()}
    A = Matrix.from_columns(system.M.nrows, cols + extra + [const])
    k = kernel_basis(A)
    nc = system.ncols
    proj = [{j - nc: v for j, v in z.items() if j >= nc} for z in k.basis]
    S = Subspace(len(params) + 1, proj)
    # affine set {p : (p, 1) in S}
    if not params:
        return "none" if not S.contains({0: 1}) and S.dim == 0 else "all"
    eqs = kernel_basis(S.matrix())  # annihilator gives linear equations
    if eqs.dim == 0:
        return "all"
    out = []
    names = list(params)
    for e in eqs.basis:
        lead = e[min(e)]
        terms = {names[j] if j < len(names) else None: c / lead for j, c in e.items()}
        const = terms.pop(None, Fraction(0))
        lhs = str(Affine(Fraction(0), terms)).removeprefix("0 + ")
        out.append(f"{lhs} = {fmt_rational(-const)}")
    return "; ".join(out)


# -- membership subspaces -----------------------------------------------------

@dataclass
class Membership:
    """Feasible classes in Hom(W^n, Q) for one kind of fibration."""
    mode: str
    n: int
    gens: list
    subspace: Subspace
    certificates: list
    obstructions: list
    twist_basis: list
    complete: bool = True


def twist_basis(X, n):
    """Cocycle representatives of a basis of H_{n-1}(Der X)."""
    if n < 2:
        return []
    cx = DerComplex(identity(X))
    h = cx.homology(n - 1)
    return [cx.element(n - 1, v) for v in h.reps]


def membership(f, n, mode, cap=None, var="x"):
    """Classes a admitting a lift, for mode G (trivial), T (tncz) or S (any).

    Uses exact linear algebra; returns the feasible subspace together
    with certificates for a basis and Farkas witnesses for a complement.
    """
    Y, X = f.source, f.target
    gens = Y.generators_in_degree(n)
    basis = [] if mode == "G" else twist_basis(X, n)
    tnames = [f"t{i}" for i in range(len(basis))]
    anames = [f"a_{g}" for g in gens]
    twists = {None: Derivation(identity(X), n - 1, {})}
    twists.update(dict(zip(tnames, basis)))
    classes = {g: {an: Fraction(1)} for g, an in zip(gens, anames)}
    system = LiftSystem(f, n, twists, classes, var)
    extra_rows = []
    complete = True
    if mode == "T" and basis:
        if cap is None:
            cap = default_cap(X, n)
        fd = formal_dimension(X)
        complete = fd is not None and cap >= fd
        # rho(sum t_j theta_j) = 0 entrywise up to cap
        per = [rho_of(th, cap) for th in basis]
        nent = len(per[0].entries)
        for e in range(nent):
            width = len(per[0].entries[e].image)
            for c in range(width):
                extra_rows.append({tnames[j]: per[j].entries[e].image[c] for j in range(len(basis))
                                   if per[j].entries[e].image[c]})
    # unknown vector: [eta, lambda, t..., a...]; M u - sum rhs_p p = 0
    params = tnames + anames
    nc = system.ncols
    cols = [system.M.column(j) for j in range(nc)]
    cols += [{i: -v for i, v in system.rhs[p].items()} for p in params]
    A = Matrix.from_columns(system.M.nrows, cols)
    rows = list(A.rows)
    for er in extra_rows:
        rows.append({nc + params.index(p): v for p, v in er.items()})
    A = Matrix(len(rows), A.ncols, rows)
    K = kernel_basis(A)
    na = len(anames)
    off = nc + len(tnames)
    proj = [{j - off: v for j, v in z.items() if j >= off} for z in K.basis]
    S = Subspace(na, proj)
    # certificates for a basis of S
    certs = []
    for target in S.basis:
        z = _preimage(K, off, target)
        u = [z.get(j, Fraction(0)) for j in range(nc)]
        eta, lam = system.solution_parts(u)
        theta = twists[None]
        for j, tn in enumerate(tnames):
            c = z.get(nc + j, Fraction(0))
            if c:
                theta = theta + basis[j].scale(c)
        ks, F, r = _lift_from(f, n, theta, eta, lam, var)
        a = {g: target.get(i, Fraction(0)) for i, g in enumerate(gens)}
        cert = Certificate(ks, F, r, f, a, n)
        cert.gates = verify_diagram(ks, r, F, f, a).gates
        if not cert.ok:
            raise InternalInconsistency(f"lift certificate failed verification: {cert.gates}")
        certs.append(cert)
    # Farkas witnesses for a complement of S (standard basis vectors outside S)
    obstructions = []
    e = Echelon(na)
    for v in S.basis:
        e.add(v)
    for i, g in enumerate(gens):
        if e.add({i: 1}):
            obstructions.append(_membership_witness(A, nc, tnames, anames, i, g))
    return Membership(mode, n, gens, S, certs, obstructions, basis, complete)


def _preimage(K, off, target):
    """A kernel vector whose a-part equals target."""
    na_cols = {}
    for idx, z in enumerate(K.basis):
        na_cols[idx] = {j - off: v for j, v in z.items() if j >= off}
    M = Matrix.from_columns(max([j for c in na_cols.values() for j in c] + list(target) + [-1]) + 1,
                            [na_cols[i] for i in range(len(K.basis))])
    sol = solve_affine(M, target)
    if sol is None:
        raise InternalInconsistency("feasible class without preimage")
    z = {}
    for idx, c in enumerate(sol[0]):
        if c:
            z = axpy(z, c, K.basis[idx])
    return z


@dataclass
class MembershipWitness:
    generator: str
    farkas: dict
    A: Matrix
    b: dict

    def verify(self):
        y = self.farkas
        for j in range(self.A.ncols):
            if sum((y[i] * self.A.rows[i].get(j, 0) for i in y), Fraction(0)):
                return False
        return sum((y[i] * self.b.get(i, 0) for i in y), Fraction(0)) != 0


def _membership_witness(A, nc, tnames, anames, i, g):
    """Farkas certificate that a = e_i admits no lift."""
    off = nc + len(tnames)
    rows = [{j: v for j, v in r.items() if j < off} for r in A.rows]
    Ared = Matrix(A.nrows, off, rows)
    b = {k: -r[off + i] for k, r in enumerate(A.rows) if (off + i) in r}
    y = left_null_certificate(Ared, b)
    if y is None:
        raise InternalInconsistency(f"class {g}* outside the feasible subspace yet solvable")
    return MembershipWitness(g, y, Ared, b)


# -- symbolic certificates --------------------------------------------------------

def _word_bound(polys):
    return max([sum(m) for p in polys for m in p.terms] + [1])


def verify_symbolic(f, twist, a, F, section, var="x"):
    """Check a certificate whose data are affine in parameters.

    Every checked identity is polynomial in the parameters of degree at
    most ``bound``, so checking a grid of bound+1 values per parameter
    proves it for all values. Returns (ok, gates, bound).
    """
    params = sorted(set(twist.params) | {p for v in F.values() for p in v.terms}
                    | {p for v in section.values() for p in v.terms}
                    | {p for v in affine_class(a).values() for p in v.terms})
    polys = [v.const for v in F.values()] + [t for v in F.values() for t in v.terms.values()]
    polys += list(f.source.d_values.values())
    bound = _word_bound(polys) + 1
    grid = [{}]
    for p in params:
        grid = [dict(g, **{p: Fraction(k)}) for g in grid for k in range(bound + 1)]
    gates = {}
    for values in grid:
        theta = twist.at(values)
        ks = twist_to_extension(f.target, twist.n, theta, var)
        T = ks.total.algebra
        Fm = Morphism(f.source, ks.total, {g: transport(v.at(values), T) for g, v in F.items()},
                      name="F")
        lam = {v: l.at(values) for v, l in section.items()}
        B = ks.base.algebra
        x = B.gen(var)
        r = Morphism(ks.total, ks.base, {var: x, **{v: x.scale(lam.get(v, 0))
                                                    for v in ks.fiber_names}}, name="r")
        av = {g: v.at(values) for g, v in affine_class(a).items()}
        for k, ok in verify_diagram(ks, r, Fm, f, av).gates.items():
            gates[k] = gates.get(k, True) and ok
    return all(gates.values()), gates, bound


@dataclass
class SymbolicBuild:
    """Builder output with data affine in the class parameters."""
    p: Morphism
    n: int
    a: dict
    F: dict          # generator -> Affine polynomial in the total algebra
    twist: ParamTwist
    D: dict          # fiber generator -> Affine polynomial, the total differential
    gates: dict
    var: str = "x"

    @property
    def ok(self):
        return all(self.gates.values())


def build_symbolic(p, a, n=None, var="x"):
    """Run the trivial-fibration builder for a class affine in parameters.

    The construction is linear in the class, so the outputs at the
    constant part and at each unit parameter determine it everywhere; the
    result is then re-verified on a parameter grid.
    """
    a = affine_class(a)
    params = sorted({q for v in a.values() for q in v.terms})
    base = build_trivial_fibration(p, {g: v.const for g, v in a.items()}, n, var)
    n = base.n
    zero = build_trivial_fibration(p, {}, n, var)
    units = {q: build_trivial_fibration(p, {g: v.terms.get(q, 0) for g, v in a.items()}, n, var)
             for q in params}
    T = base.ks.total.algebra
    F = {g.name: Affine(base.F.values[g.name],
                        {q: c.F.values[g.name] - zero.F.values[g.name] for q, c in units.items()})
         for g in p.source.generators}
    X = p.target
    th0 = extract_twist(base.ks)
    ths = {q: extract_twist(c.ks) for q, c in units.items()}
    twist = ParamTwist(X, n, th0, ths)
    D = {v: Affine(base.ks.D(v), {q: c.ks.D(v) - zero.ks.D(v) for q, c in units.items()})
         for v in base.ks.fiber_names}
    section = {v: Affine(Fraction(0)) for v in base.ks.fiber_names if T.generator(v).degree == n}
    ok, gates, _ = verify_symbolic(p, twist, a, F, section, var)
    gates["rationally_trivial"] = all(is_boundary(th) or th.is_zero()
                                      for th in [th0] + list(ths.values()))
    gates["section_found"] = gates["section_morphism"]
    return SymbolicBuild(p, n, a, F, twist, D, gates, var)
