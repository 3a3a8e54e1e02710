"""
Per-degree classification of the evaluation subgroup G and the relaxed
subgroups gcal, tcal, scal inside Hom(W^n, Q) = pi_n(Y) (x) Q.

G is always computed exactly. The other three combine the surjectivity,
injectivity and product-fiber criteria with the exact lift search of :mod:`sullivan.lifting`; every verdict carries evidence
that can be re-checked.
"""

from dataclasses import dataclass, field
import json

from .algebra import fmt_rational, linear_decomposable_split
from .cdga import CDGA, Morphism, identity, make_cdga, make_morphism
from .derivations import der_homology, evaluation_cocycles, evaluation_subgroup
from .errors import ContractViolation, InternalInconsistency, ValidationError
from .fibrations import (BuilderGateFailure, KSExtension, build_trivial_fibration,
                         default_cap, formal_dimension, is_generator_projection)
from .lifting import membership
from .linalg import Subspace

EXACT, LOWER, UNKNOWN = "Exact", "LowerBound", "Unknown"
CHAIN = ("G", "gcal", "tcal", "scal")


@dataclass
class Bound:
    kind: str
    space: Subspace = None

    def to_json(self, gens):
        out = {"kind": self.kind}
        if self.space is not None and self.kind != UNKNOWN:
            out["dim"] = self.space.dim
            out["basis"] = [functional_str(v, gens) for v in self.space.basis]
        return out


@dataclass
class Evidence:
    kind: str        # computation | criterion | certificate | obstruction | note
    tag: str
    target: str
    detail: str
    verified: bool = True

    def to_json(self):
        return {"kind": self.kind, "tag": self.tag, "target": self.target,
                "detail": self.detail, "verified": self.verified}


def functional_str(vec, gens):
    """Print a functional on degree-n generators, e.g. ``w4* - 2*u4*``."""
    parts = []
    for i, g in enumerate(gens):
        c = vec.get(i, 0)
        if not c:
            continue
        body = f"{g}*" if abs(c) == 1 else f"{fmt_rational(abs(c))}*{g}*"
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


@dataclass
class SubgroupStatus:
    n: int
    pi_rank: int
    gens: list
    G: Subspace
    gcal: Bound
    tcal: Bound
    scal: Bound
    evidence: list = field(default_factory=list)

    def bound(self, key):
        return Bound(EXACT, self.G) if key == "G" else getattr(self, key)

    def to_json(self):
        return {"n": self.n, "pi_rank": self.pi_rank, "generators": list(self.gens),
                "G": {"dim": self.G.dim,
                      "basis": [functional_str(v, self.gens) for v in self.G.basis]},
                "gcal": self.gcal.to_json(self.gens),
                "tcal": self.tcal.to_json(self.gens),
                "scal": self.scal.to_json(self.gens),
                "evidence": [e.to_json() for e in self.evidence]}


def report_json(statuses):
    return json.dumps([s.to_json() for s in statuses], sort_keys=True, indent=2)


# -- map models -------------------------------------------------------------

@dataclass
class MapModel:
    """A map f: X -> Y given by a KS-extension over M(Y), a morphism
    M(Y) -> M(X), or both."""
    Y: CDGA
    ks: KSExtension = None
    morphism: Morphism = None
    name: str = None

    def __post_init__(self):
        if self.ks is None and self.morphism is None:
            raise ContractViolation("a map model needs a KS-extension or a morphism")
        if self.ks is not None and self.ks.base.algebra != self.Y.algebra:
            raise ValidationError("KS-extension base does not match M(Y)")
        if self.morphism is not None and self.morphism.source.algebra != self.Y.algebra:
            raise ValidationError("morphism source does not match M(Y)")
        if self.ks is not None and self.morphism is not None:
            names = {g.name for g in self.morphism.target.generators}
            if not names <= set(self.ks.total.algebra.index):
                raise ValidationError("morphism target generators are not generators of the "
                                      "KS total space")

    def map(self):
        """The morphism used for derivations: M(f) or the inclusion into the total space."""
        if self.morphism is not None:
            return self.morphism
        return self.ks.inclusion()

    @property
    def X(self):
        return self.map().target


def pi_rank(M, n):
    if not M.is_minimal():
        raise ContractViolation("pi_rank needs a minimal model")
    return len(M.generators_in_degree(n))


# -- criteria ---------------------------------------------------------------

def criterion_surjective(m, n):
    """Prop 1.4: fires when no degree-n base generator is hit by the linear part of D."""
    if m.ks is None:
        return None
    ks = m.ks
    T = ks.total.algebra
    base_n = set(m.Y.generators_in_degree(n))
    for v in ks.fiber_names:
        if T.generator(v).degree != n - 1:
            continue
        lin, _ = linear_decomposable_split(ks.D(v)) if not ks.D(v).is_zero() else (None, None)
        if lin is None:
            continue
        for mono in lin.terms:
            if T.generators[mono.index(1)].name in base_n:
                return None
    return Evidence("criterion", "Prop 1.4", "gcal",
                    f"pi_{n}(f) (x) Q is surjective: no D(v) has a linear term in degree {n}")


def criterion_injective(m, degrees, projection=None, tag="Thm 1.6"):
    """Thm 1.6 via the builder: {n: (evidence list, fired)} for each degree.

    Fires in degree n only when a builder certificate passes every gate for
    each degree-n generator functional.
    """
    p = projection if projection is not None else m.morphism
    if p is None or not is_generator_projection(p):
        return {}
    out = {}
    for n in degrees:
        gens = p.source.generators_in_degree(n)
        if not gens:
            continue
        ev, fired = [], True
        for g in gens:
            try:
                cert = build_trivial_fibration(p, {g: 1}, n)
                ev.append(Evidence("certificate", tag, "gcal",
                                   f"builder certificate for {g}*: " + _cert_summary(cert)))
            except BuilderGateFailure as e:
                fired = False
                failed = sorted(k for k, v in e.certificate.gates.items() if not v)
                ev.append(Evidence("note", tag, "gcal",
                                   f"builder for {g}* fails gates {failed}", verified=False))
        if fired:
            ev.append(Evidence("criterion", tag, "gcal",
                               f"generator projection; builder certificates for all of {gens}"))
        out[n] = (ev, fired)
    return out


def _cert_summary(cert):
    F = "; ".join(f"F({k}) = {v}" for k, v in cert.F.values.items())
    D = "; ".join(f"D'{v} = {cert.ks.D(v)}" for v in cert.ks.fiber_names
                  if not cert.ks.D(v).is_zero())
    return f"{F}; {D or 'D = 0'}"


def kq_projection(m):
    """For a one-generator fiber with Dv = c*w, the projection M(Y) -> M(X) killing w."""
    ks = m.ks
    if ks is None or len(ks.fiber_names) != 1:
        return None
    v = ks.fiber_names[0]
    Dv = ks.D(v)
    lin, dec = linear_decomposable_split(Dv) if not Dv.is_zero() else (Dv, Dv)
    if lin.is_zero():
        return "decomposable"
    if not dec.is_zero() or len(lin.terms) != 1:
        return None
    T = ks.total.algebra
    (mono, _c), = lin.terms.items()
    w = T.generators[mono.index(1)].name
    if w not in m.Y.algebra.index:
        return None
    Y = m.Y
    keep = [g for g in Y.generators if g.name != w]

    def values(alg):
        out = {}
        for g in keep:
            out[g.name] = _kill(Y.d_gen(g.name), w, alg)
        return out
    try:
        X = make_cdga(keep, values, name=f"{Y.name or 'Y'}/{w}")
        p = make_morphism(Y, X, {g.name: (X.gen(g.name) if g.name != w else X.algebra.zero())
                                 for g in Y.generators})
    except ValidationError:
        return None
    return p


def _kill(poly, w, alg):
    src = poly.alg
    wi = src.index[w]
    out = alg.zero()
    for mono, c in poly.terms.items():
        if mono[wi]:
            continue
        word = [src.generators[i].name for i in src.mono_word(mono)]
        r = alg.normalize_word(word)
        if r is not None:
            out = out + alg.monomial(r[1]).scale(r[0] * c)
    return out


def criterion_kq_fiber(m, degrees):
    """Cor 1.7: one fiber generator; route to Prop 1.4 or to Thm 1.6."""
    p = kq_projection(m)
    if p is None:
        return {}
    out = {}
    if p == "decomposable":
        for n in degrees:
            if m.Y.generators_in_degree(n):
                ev = Evidence("criterion", "Cor 1.7", "gcal",
                              "single fiber generator with decomposable Dv; surjective on pi_n")
                out[n] = ([ev], True)
        return out
    for n, (ev, fired) in criterion_injective(m, degrees, p, tag="Cor 1.7").items():
        if fired:
            ev.append(Evidence("criterion", "Cor 1.7", "gcal",
                               "single fiber generator with Dv a generator; "
                               f"dim V = dim W - 1 via the projection killing "
                               f"{[g.name for g in p.source.generators if p.values[g.name].is_zero()][0]}"))
        out[n] = (ev, fired)
    return out


def criterion_prop31(X, n):
    """Prop 3.1: no generators of X in degree >= n gives scal = G."""
    if any(g.degree >= n for g in X.generators):
        return None
    return Evidence("criterion", "Prop 3.1", "scal",
                    f"pi_(>={n})(X) (x) Q = 0, so scal_{n} = G_{n}")


def criterion_prop32(X, n):
    """Prop 3.2: H_{n-1}(Der X) = 0 gives gcal = scal."""
    if n < 2:
        return None
    dim, _ = der_homology(X, X, identity(X), n - 1)
    if dim:
        return None
    return Evidence("criterion", "Prop 3.2", "scal",
                    f"H_{n - 1}(Der M(X)) = 0, so gcal_{n} = scal_{n}")


# -- classification ------------------------------------------------------------

@dataclass
class ClassifyOptions:
    cap: int = None


def _simply_connected(X):
    return all(g.degree > 1 for g in X.generators)


def classify(m, degrees=None, options=None):
    options = options or ClassifyOptions()
    Y = m.Y
    if not Y.is_minimal():
        raise ContractViolation("classify needs a minimal model of Y")
    if degrees is None:
        degrees = sorted({g.degree for g in Y.generators})
    phi = m.map()
    X = phi.target
    inj = criterion_injective(m, degrees)
    kq = criterion_kq_fiber(m, degrees)
    out = []
    for n in degrees:
        out.append(_classify_degree(m, phi, X, n, inj.get(n), kq.get(n), options))
    return out


def _classify_degree(m, phi, X, n, inj, kq, options):
    Y = m.Y
    gens = Y.generators_in_degree(n)
    k = len(gens)
    full = Subspace.full(k)
    ev = []
    G = evaluation_subgroup(Y, X, phi, n)
    cocycles = evaluation_cocycles(Y, X, phi, n)
    ev.append(Evidence("computation", "Thm 2.1", "G",
                       f"dim G_{n} = {G.dim}" + "".join(f"; cocycle {c}" for c in cocycles)))
    if k == 0:
        z = Subspace.zero(0)
        return SubgroupStatus(n, 0, gens, G, Bound(EXACT, z), Bound(EXACT, z), Bound(EXACT, z), ev)

    exact = {}      # key -> Subspace (forced by criteria or exact search)
    lower = {key: Subspace.zero(k) for key in CHAIN}
    upper = {key: full for key in CHAIN}
    exact["G"] = G

    def set_exact(key, space, why):
        if key in exact and exact[key] != space:
            raise InternalInconsistency(f"{key}_{n}: {why} gives dim {space.dim} but another "
                                        f"source gives dim {exact[key].dim}")
        exact[key] = space

    surj = criterion_surjective(m, n)
    if surj is not None:
        ev.append(surj)
        set_exact("gcal", full, "Prop 1.4")
    for res in (inj, kq):
        if res is None:
            continue
        items, fired = res
        ev.extend(items)
        if fired:
            set_exact("gcal", full, items[-1].tag)

    # exact lift search for gcal (zero twist on the product model)
    mg = membership(phi, n, "G")
    _record_membership(ev, mg, "gcal", gens)
    set_exact("gcal", mg.subspace, "lift search")

    # tcal and scal: twists over a basis of H_{n-1}(Der X)
    trusted = _simply_connected(X)
    if n >= 2:
        cap = options.cap
        mt = membership(phi, n, "T", cap=cap)
        ms = membership(phi, n, "S")
        _record_membership(ev, mt, "tcal", gens)
        _record_membership(ev, ms, "scal", gens)
        if not trusted:
            ev.append(Evidence("note", "classification", "tcal",
                               "X is not simply connected; twist searches give lower bounds only"))
        lower["tcal"] = _certified(mt)
        lower["scal"] = _certified(ms)
        if trusted:
            upper["scal"] = ms.subspace
            upper["tcal"] = mt.subspace
            set_exact("scal", ms.subspace, "lift search")
            if mt.complete or not mt.twist_basis:
                set_exact("tcal", mt.subspace, "lift search")
            else:
                fd = formal_dimension(X)
                ev.append(Evidence("note", "Lemma 3.3", "tcal",
                                   f"rho checked up to degree {cap or default_cap(X, n)}; "
                                   f"formal dimension {'unknown' if fd is None else fd}"))

    p31 = criterion_prop31(X, n)
    if p31 is not None:
        ev.append(p31)
        set_exact("scal", G, "Prop 3.1")
    p32 = criterion_prop32(X, n)
    if p32 is not None:
        ev.append(p32)
        if "gcal" in exact:
            set_exact("scal", exact["gcal"], "Prop 3.2")

    bounds = _propagate(n, exact, lower, upper)
    return SubgroupStatus(n, k, gens, G, bounds["gcal"], bounds["tcal"], bounds["scal"], ev)


def _certified(mem):
    dim = len(mem.gens)
    return Subspace(dim, [_class_vector(c.a, mem.gens) for c in mem.certificates])


def _class_vector(a, gens):
    return {i: a[g] for i, g in enumerate(gens) if a.get(g)}


def _record_membership(ev, mem, target, gens):
    tag = {"G": "lift search (product model)", "T": "lift search (tncz twists)",
           "S": "lift search (sectioned twists)"}[mem.mode]
    for cert in mem.certificates:
        a = functional_str(_class_vector(cert.a, gens), gens)
        ev.append(Evidence("certificate", tag, target, f"{a}: " + _cert_summary(cert),
                           verified=cert.ok))
    for w in mem.obstructions:
        ev.append(Evidence("obstruction", tag, target,
                           f"{w.generator}* admits no lift (Farkas certificate, "
                           f"{len(w.farkas)} rows)", verified=w.verify()))


def _propagate(n, exact, lower, upper):
    """Fold exact values and bounds along G <= gcal <= tcal <= scal."""
    lo, hi = dict(lower), dict(upper)
    for key, sp in exact.items():
        lo[key] = sp
        hi[key] = sp
    changed = True
    while changed:
        changed = False
        for a, b in zip(CHAIN, CHAIN[1:]):
            # lower bounds move up the chain, upper bounds move down
            s = lo[b] + lo[a]
            if s != lo[b]:
                lo[b], changed = s, True
            t = hi[a].intersection(hi[b])
            if t != hi[a]:
                hi[a], changed = t, True
    for key in CHAIN:
        if not lo[key].issubset(hi[key]):
            raise InternalInconsistency(
                f"degree {n}: lower bound for {key} (dim {lo[key].dim}) escapes its upper "
                f"bound (dim {hi[key].dim})")
    out = {}
    for key in CHAIN[1:]:
        if lo[key] == hi[key]:
            out[key] = Bound(EXACT, lo[key])
        elif lo[key].dim == 0:
            out[key] = Bound(UNKNOWN)
        else:
            out[key] = Bound(LOWER, lo[key])
    return out


def check_chain(status):
    """Re-check chain consistency of a finished report; raises on violation."""
    prev = status.G
    prev_exact = True
    for key in CHAIN[1:]:
        b = status.bound(key)
        if b.kind == UNKNOWN:
            prev_exact = False
            continue
        if not prev.issubset(b.space) and prev_exact:
            raise InternalInconsistency(f"{key} does not contain its predecessor")
        prev, prev_exact = b.space, b.kind == EXACT
    return True
