"""Command-line interface: every command prints one JSON object."""

import argparse
import json
import sys
from fractions import Fraction

from .algebra import FreeCGA, fmt_rational
from .cdga import identity
from .corpus import entry
from .derivations import DerComplex, der_homology, evaluation_cocycles, evaluation_subgroup
from .dsl import DslError, Expr, _affine, load, parse, print_document, tokenize
from .errors import ContractViolation, InternalInconsistency, SullivanError, ValidationError
from .fibrations import (classifying_class, find_section_over_sphere, is_rationally_trivial,
                         is_tncz, rho, twist_to_extension)
from .lifting import (Affine, LiftOptions, build_symbolic, solve_lift_degreewise,
                      verify_symbolic)
from .reports import ClassifyOptions, MapModel, classify, functional_str

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 2, 3


class UsageError(ValidationError):
    pass


# -- inputs -------------------------------------------------------------------

def _text(args, attr):
    path = getattr(args, attr, None)
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                return fh.read()
        except OSError as e:
            raise UsageError(f"cannot read {path}: {e.strerror}") from None
    if args.builtin:
        try:
            return entry(args.builtin).text
        except KeyError as e:
            raise UsageError(str(e.args[0])) from None
    raise UsageError(f"an input document is required (--{attr} FILE or --builtin KEY)")


def _env(args, attr):
    return load(_text(args, attr))


def _pick(env, kind, args):
    d = getattr(env, kind)
    name = args.name
    if name is None and kind == "algebras" and args.builtin:
        name = entry(args.builtin).defaults.get("model")
    if name is not None:
        if name not in d:
            raise UsageError(f"no {kind[:-1]} named {name!r}")
        return d[name]
    if not d:
        raise UsageError(f"the document has no {kind[:-1]}")
    return list(d.values())[-1] if kind == "algebras" else next(iter(d.values()))


def _range(s):
    try:
        if ".." in s:
            a, b = s.split("..")
            return list(range(int(a), int(b) + 1))
        return [int(s)]
    except ValueError:
        raise UsageError(f"bad degree range {s!r}; use A..B") from None


def _params(items):
    out = {}
    for it in items or []:
        k, _, v = it.partition("=")
        try:
            out[k.strip()] = Fraction(v.strip())
        except ValueError:
            raise UsageError(f"bad parameter value {it!r}") from None
    return out


def _classes(items):
    """Parse --class gen=expr into gen -> Affine over Q."""
    Q = FreeCGA([])
    out = {}
    for it in items or []:
        g, eq, v = it.partition("=")
        if not eq:
            raise UsageError(f"bad class {it!r}; use GEN=VALUE")
        toks = tokenize(v)
        ex = Expr(tuple(t.text for t in toks if t.kind != "eof"), 1, len(g) + 2)
        aff = _affine(ex, Q)
        out[g.strip()] = Affine(aff.const.constant_term(),
                                {p: q.constant_term() for p, q in aff.terms.items()})
    return out


def _twist_ext(env, args):
    tw = _pick(env, "twists", args)
    var = env.twist_vars[next(k for k, v in env.twists.items() if v is tw)]
    values = _params(args.param)
    missing = [p for p in tw.params if p not in values]
    if missing:
        raise UsageError(f"give values for parameters {missing} with --param")
    return twist_to_extension(tw.fiber, tw.n, tw.at(values), var), values


def _sphere_ks(env, args):
    if env.twists:
        return _twist_ext(env, args)[0]
    return _pick(env, "extensions", args)


def _map_model(env, args):
    f = env.first("morphisms") if args.name is None else env.morphisms.get(args.name)
    ks = env.first("extensions")
    if f is not None:
        if ks is not None and ks.base.algebra != f.source.algebra:
            ks = None
        return MapModel(f.source, ks=ks, morphism=f)
    if ks is None:
        raise UsageError("the map document needs a morphism or a ks block")
    return MapModel(ks.base, ks=ks)


def _poly_map(d):
    return {k: str(v) for k, v in d.items()}


# -- commands -------------------------------------------------------------------

def cmd_cohomology(args):
    A = _pick(_env(args, "model"), "algebras", args)
    out = {}
    for k in _range(args.degree):
        dim, reps = A.cohomology(k)
        out[str(k)] = {"dim": dim, "reps": [str(r) for r in reps]}
    return {"model": A.name, "degrees": out}


def cmd_gottlieb(args):
    A = _pick(_env(args, "model"), "algebras", args)
    n = int(args.degree)
    G = evaluation_subgroup(A, A, identity(A), n)
    gens = A.generators_in_degree(n)
    return {"model": A.name, "n": n, "dim": G.dim,
            "basis": [functional_str(v, gens) for v in G.basis],
            "cocycles": [str(c) for c in evaluation_cocycles(A, A, identity(A), n)]}


def cmd_evsub(args):
    m = _map_model(_env(args, "map"), args)
    n = int(args.degree)
    phi = m.map()
    G = evaluation_subgroup(m.Y, phi.target, phi, n)
    gens = m.Y.generators_in_degree(n)
    return {"n": n, "dim": G.dim, "basis": [functional_str(v, gens) for v in G.basis],
            "cocycles": [str(c) for c in evaluation_cocycles(m.Y, phi.target, phi, n)]}


def cmd_derhom(args):
    A = _pick(_env(args, "model"), "algebras", args)
    n = int(args.degree)
    dim, classes = der_homology(A, A, identity(A), n)
    cx = DerComplex(identity(A))
    return {"model": A.name, "n": n, "dim": dim, "classes": [str(c) for c in classes],
            "chain_dim": cx.dim(n)}


def cmd_rho(args):
    A = _pick(_env(args, "model"), "algebras", args)
    r = rho(A, args.sphere, args.cap)
    return {"model": A.name, "n": args.sphere, "cap": args.cap,
            "classes": [str(c) for c in r.classes], "zero": r.is_zero(),
            "entries": [_rho_entry(A, r, e) for e in r.nonzero_entries()]}


def _rho_entry(A, r, e):
    """One nonzero value rho([sigma])([w]) with classes printed by representatives."""
    shift = r.n - 1
    src = A.cohomology_space(e.degree).reps[e.source]
    reps = A.cohomology_space(e.degree - shift).reps
    img = A.algebra.zero()
    for c, rep in zip(e.image, reps):
        img = img + A.algebra.from_vector(rep, e.degree - shift).scale(c)
    return {"class": str(r.classes[e.cls]), "degree": e.degree,
            "source": str(A.algebra.from_vector(src, e.degree)), "image": str(img)}


def cmd_tncz(args):
    env = _env(args, "twist")
    ks = _sphere_ks(env, args)
    res = is_tncz(ks, args.cap)
    return {"tncz": res.tncz, "cap": res.cap, "complete": res.complete,
            "rho_zero": res.rho.is_zero(),
            "dims_total": {str(k): v for k, v in res.dims_total.items()},
            "dims_product": {str(k): v for k, v in res.dims_product.items()},
            "D": _poly_map({v: ks.D(v) for v in ks.fiber_names})}


def cmd_trivial(args):
    ks = _sphere_ks(_env(args, "ks"), args)
    cls = classifying_class(ks)
    return {"rationally_trivial": is_rationally_trivial(ks), "class": str(cls.representative)}


def cmd_section(args):
    ks = _sphere_ks(_env(args, "ks"), args)
    r = find_section_over_sphere(ks)
    return {"section": None if r is None else
            _poly_map({v: r.values[v] for v in ks.fiber_names})}


def cmd_build(args):
    env = _env(args, "projection")
    p = _pick(env, "morphisms", args)
    a = _classes(args.cls)
    b = build_symbolic(p, a, args.sphere)
    return {"n": b.n, "ok": b.ok, "gates": b.gates,
            "F": _poly_map(b.F), "D": _poly_map(b.D),
            "twist": str(b.twist.const) if not b.twist.params else
            {"const": str(b.twist.const), **{k: str(v) for k, v in b.twist.params.items()}},
            "section": {v: "0" for v in b.D},
            "document": _certificate_document(_text(args, "projection"), p, b)}


def _certificate_document(text, p, b):
    """The input document plus twist and certificate blocks that ``verify`` re-checks."""
    X = p.target
    theta = []
    for g in X.generators:
        v = Affine(b.twist.const.values[g.name],
                   {q: th.values[g.name] for q, th in b.twist.params.items()})
        if str(v) != "0":
            theta.append(f"theta {g.name} = {v};")
    body = [f"class {g} = {v};" for g, v in sorted(b.a.items())]
    body += [f"F {g} = {v};" for g, v in b.F.items()]
    blocks = (f"twist Built over sphere {b.n} on {X.name} as {b.var} {{ {' '.join(theta)} }}\n"
              f"certificate BuiltCert for {p.name} twist Built {{ {' '.join(body)} }}\n")
    return print_document(parse(text + blocks))


def cmd_lift(args):
    env = _env(args, "map")
    tenv = load(_text(args, "twist")) if args.twist else env
    f = _pick(env, "morphisms", args)
    tw = _pick(tenv, "twists", argparse.Namespace(name=None, builtin=None))
    var = next(tenv.twist_vars[k] for k, v in tenv.twists.items() if v is tw)
    a = _classes(args.cls)
    res = solve_lift_degreewise(f, tw, a, LiftOptions(args.max_parameters), var)
    out = {"result": res.kind}
    if res.kind == "found":
        out["F"] = _poly_map(res.F)
        out["section"] = _poly_map(res.section)
        T = twist_to_extension(f.target, tw.n, tw.const, var)
        D = {}
        for v in T.fiber_names:
            const = T.D(v)
            terms = {p: twist_to_extension(f.target, tw.n, tw.const + th, var).D(v) - const
                     for p, th in tw.params.items()}
            D[v] = Affine(const, terms)
        out["D"] = _poly_map(D)
        ok, gates, _ = verify_symbolic(f, tw, res.a, res.F, res.section, var)
        out["verified"] = ok
    elif res.kind == "obstructed":
        w = res.witness
        out["feasible"] = res.feasible
        out["witness"] = {"values": {k: fmt_rational(v) for k, v in w.values.items()},
                          "generator": w.generator, "required": w.required,
                          "class_nonzero": w.class_nonzero, "description": w.describe(),
                          "farkas_rows": len(w.farkas)}
    else:
        out["reason"] = res.reason
    return out


def cmd_verify(args):
    env = _env(args, "certificate")
    c = _pick(env, "certificates", args)
    ok, gates, bound = verify_symbolic(c.f, c.twist, c.a, c.F, c.section, c.var)
    return {"certificate": c.name, "ok": ok, "gates": gates, "grid_points_per_parameter":
            bound + 1}


def cmd_classify(args):
    m = _map_model(_env(args, "map"), args)
    degrees = _range(args.degrees) if args.degrees else None
    return [s.to_json() for s in classify(m, degrees, ClassifyOptions(cap=args.cap))]


def cmd_format(args):
    return {"document": print_document(parse(_text(args, "file")))}


# -- driver --------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="sullivan", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, inputs, *extra):
        p = sub.add_parser(name)
        for attr, positional in inputs:
            if positional:
                p.add_argument(attr, nargs="?")
            else:
                p.add_argument(f"--{attr}", dest=attr)
        p.add_argument("--builtin", help="use a built-in corpus document")
        p.add_argument("--name", help="pick a named object from the document")
        p.add_argument("--param", action="append", help="parameter value, e.g. c=1")
        for flag, kw in extra:
            p.add_argument(flag, **kw)
        p.set_defaults(fn=fn)

    degree = ("--degree", dict(required=True))
    cls = ("--class", dict(action="append", dest="cls", metavar="GEN=VALUE", default=[]))
    add("cohomology", cmd_cohomology, [("model", True)], degree)
    add("gottlieb", cmd_gottlieb, [("model", True)], degree)
    add("evsub", cmd_evsub, [("map", False)], degree)
    add("derhom", cmd_derhom, [("model", True)], ("--degree", dict(type=int, required=True)))
    add("rho", cmd_rho, [("model", True)], ("--sphere", dict(type=int, required=True)),
        ("--cap", dict(type=int, required=True)))
    add("tncz", cmd_tncz, [("twist", False)], ("--cap", dict(type=int, default=None)))
    add("trivial", cmd_trivial, [("ks", False)])
    add("section", cmd_section, [("ks", False)])
    add("build", cmd_build, [("projection", False)], cls,
        ("--sphere", dict(type=int, default=None)))
    add("lift", cmd_lift, [("map", False), ("twist", False)], cls,
        ("--max-parameters", dict(type=int, default=2)))
    add("verify", cmd_verify, [("certificate", False)])
    add("classify", cmd_classify, [("map", False)], ("--degrees", dict(default=None)),
        ("--cap", dict(type=int, default=None)))
    add("format", cmd_format, [("file", True)])
    return ap


def run(argv):
    """(exit code, JSON-able result) without printing."""
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return EXIT_OK, args.fn(args)
    except InternalInconsistency as e:
        return EXIT_INTERNAL, {"error": "internal-inconsistency", "message": str(e)}
    except DslError as e:
        return EXIT_INPUT, {"error": "parse", "message": str(e), "line": e.line,
                            "column": e.col}
    except (ValidationError, ContractViolation, SullivanError) as e:
        out = {"error": "validation", "message": str(e)}
        if getattr(e, "details", None):
            out["details"] = json.loads(json.dumps(e.details, default=str))
        return EXIT_INPUT, out


def main(argv=None):
    code, out = run(sys.argv[1:] if argv is None else argv)
    print(json.dumps(out, sort_keys=True, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
