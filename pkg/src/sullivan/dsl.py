"""
A small text format for models, morphisms, extensions, twists and
certificates.

    algebra S4 { gen w4 : 4; gen w7 : 7; d w7 = w4^2; }
    algebra CP3 { gen v2 : 2; gen w7 : 7; d w7 = v2^4; }
    morphism f : S4 -> CP3 { w4 = v2^2; w7 = w7; }
    ks E over S4 fiber (v3 : 3) { D v3 = w4; }
    twist T over sphere 4 on CP3 as x { theta w7 = -2*c*v2^2; }
    certificate C for f twist T { class w4 = c; F w4 = v2^2 + c*x; F w7 = w7; }

Rationals are written ``p/q`` and powers ``^``. Single-letter names that
are not generators are symbolic parameters; they are allowed only in
``twist`` and ``certificate`` blocks and must enter linearly. Comments run
from ``#`` to the end of the line.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import re

from .algebra import FreeCGA, Generator
from .cdga import identity, make_cdga, make_morphism
from .derivations import Derivation
from .errors import ValidationError
from .fibrations import make_ks, sphere_base, twisted_total_algebra
from .lifting import Affine, ParamTwist


class DslError(ValidationError):
    def __init__(self, message, line=None, col=None):
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + message, {"line": line, "column": col})
        self.line, self.col = line, col


# -- lexer --------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(#[^\n]*)|(->)|([A-Za-z_][A-Za-z0-9_']*)|(\d+)|([{}():;=+\-*/^,]))")


@dataclass(frozen=True)
class Token:
    kind: str    # name | int | sym | eof
    text: str
    line: int
    col: int


def tokenize(text):
    out = []
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        ws_end = pos
        while ws_end < n and text[ws_end].isspace():
            if text[ws_end] == "\n":
                line += 1
                line_start = ws_end + 1
            ws_end += 1
        if ws_end >= n:
            break
        if m is None or m.end() == pos:
            raise DslError(f"unexpected character {text[ws_end]!r}", line, ws_end - line_start + 1)
        start = ws_end
        col = start - line_start + 1
        comment, arrow, name, num, sym = m.groups()
        if arrow:
            out.append(Token("sym", "->", line, col))
        elif name:
            out.append(Token("name", name, line, col))
        elif num:
            out.append(Token("int", num, line, col))
        elif sym:
            out.append(Token("sym", sym, line, col))
        pos = m.end()
    col = pos - line_start + 1
    out.append(Token("eof", "", line, col))
    return out


# -- syntax tree ----------------------------------------------------------------

@dataclass(frozen=True)
class Expr:
    """An expression kept as its token texts, with the position of its first token."""
    tokens: tuple
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    def __str__(self):
        return _join(self.tokens)


def _join(tokens):
    s = ""
    for i, t in enumerate(tokens):
        if i and t in ("+", "-") and tokens[i - 1] not in ("(", "^", "*", "/"):
            s += f" {t} "
        else:
            s += t
    return s


@dataclass(frozen=True)
class Stmt:
    kind: str          # gen | d | trunc | value | D | theta | class | F | section
    name: str
    value: object      # Expr, int or None
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Block:
    kind: str          # algebra | morphism | ks | twist | certificate
    name: str
    header: tuple      # kind-specific header data
    body: tuple
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Document:
    blocks: tuple

    def block(self, name):
        for b in self.blocks:
            if b.name == name:
                return b
        return None

    def of_kind(self, kind):
        return [b for b in self.blocks if b.kind == kind]


# -- parser --------------------------------------------------------------------

class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        got = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise DslError(f"{msg}, got {got}", tok.line, tok.col)

    def take(self, kind=None, text=None, what=None):
        t = self.tok
        if (kind and t.kind != kind) or (text and t.text != text):
            self.error(f"expected {what or (repr(text) if text else kind)}")
        self.i += 1
        return t

    def at(self, text):
        return self.tok.kind in ("sym", "name") and self.tok.text == text

    def document(self):
        blocks = []
        while self.tok.kind != "eof":
            blocks.append(self.block())
        return Document(tuple(blocks))

    def block(self):
        t = self.take("name", what="a block keyword")
        kind = t.text
        if kind == "algebra":
            name = self.take("name", what="an algebra name").text
            header = ()
            body = self.body({"gen", "d", "trunc"})
        elif kind == "morphism":
            name = self.take("name", what="a morphism name").text
            self.take("sym", ":")
            src = self.take("name", what="a source algebra").text
            self.take("sym", "->")
            tgt = self.take("name", what="a target algebra").text
            header = (src, tgt)
            body = self.body(None)
        elif kind == "ks":
            name = self.take("name", what="an extension name").text
            self.take("name", "over")
            base = self.take("name", what="a base algebra").text
            self.take("name", "fiber")
            self.take("sym", "(")
            fib = []
            while True:
                g = self.take("name", what="a fiber generator").text
                self.take("sym", ":")
                deg = int(self.take("int", what="a degree").text)
                fib.append((g, deg))
                if self.at(","):
                    self.i += 1
                    continue
                break
            self.take("sym", ")")
            header = (base, tuple(fib))
            body = self.body({"D"})
        elif kind == "twist":
            name = self.take("name", what="a twist name").text
            self.take("name", "over")
            self.take("name", "sphere")
            n = int(self.take("int", what="a sphere degree").text)
            self.take("name", "on")
            X = self.take("name", what="a fiber algebra").text
            var = "x"
            if self.at("as"):
                self.i += 1
                var = self.take("name", what="a sphere variable").text
            header = (n, X, var)
            body = self.body({"theta"})
        elif kind == "certificate":
            name = self.take("name", what="a certificate name").text
            self.take("name", "for")
            f = self.take("name", what="a morphism name").text
            self.take("name", "twist")
            tw = self.take("name", what="a twist name").text
            header = (f, tw)
            body = self.body({"class", "F", "section"})
        else:
            self.error("expected algebra, morphism, ks, twist or certificate", t)
        return Block(kind, name, header, body, t.line, t.col)

    def body(self, keywords):
        self.take("sym", "{")
        stmts = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.error("expected '}'")
            stmts.append(self.statement(keywords))
        self.take("sym", "}")
        return tuple(stmts)

    def statement(self, keywords):
        t = self.tok
        if keywords is None:
            name = self.take("name", what="a generator").text
            self.take("sym", "=")
            e = self.expr()
            self.take("sym", ";")
            return Stmt("value", name, e, t.line, t.col)
        kw = self.take("name", what="a statement keyword").text
        if kw not in keywords:
            self.error(f"expected one of {sorted(keywords)}", t)
        if kw == "gen":
            name = self.take("name", what="a generator name").text
            self.take("sym", ":")
            deg = int(self.take("int", what="a degree").text)
            self.take("sym", ";")
            return Stmt("gen", name, deg, t.line, t.col)
        if kw == "trunc":
            name = self.take("name", what="a generator name").text
            cap = int(self.take("int", what="a truncation exponent").text)
            self.take("sym", ";")
            return Stmt("trunc", name, cap, t.line, t.col)
        name = self.take("name", what="a generator name").text
        self.take("sym", "=")
        e = self.expr()
        self.take("sym", ";")
        return Stmt(kw, name, e, t.line, t.col)

    # expressions are validated here and stored as token texts
    def expr(self):
        start = self.i
        first = self.tok
        self._sum()
        texts = tuple(t.text for t in self.toks[start:self.i])
        return Expr(texts, first.line, first.col)

    def _sum(self):
        if self.at("-") or self.at("+"):
            self.i += 1
        self._product()
        while self.at("+") or self.at("-"):
            self.i += 1
            self._product()

    def _product(self):
        self._power()
        while self.at("*"):
            self.i += 1
            self._power()

    def _power(self):
        self._atom()
        if self.at("^"):
            self.i += 1
            self.take("int", what="an exponent")

    def _atom(self):
        t = self.tok
        if t.kind == "int":
            self.i += 1
            if self.at("/"):
                self.i += 1
                d = self.take("int", what="a denominator")
                if int(d.text) == 0:
                    raise DslError("zero denominator", d.line, d.col)
        elif t.kind == "name":
            self.i += 1
        elif self.at("("):
            self.i += 1
            self._sum()
            self.take("sym", ")")
        elif self.i > 0 and self.toks[self.i - 1].text in {"+", "-", "*", "/", "^"}:
            op = self.toks[self.i - 1]
            raise DslError(f"operator {op.text!r} has no right operand", op.line, op.col)
        else:
            self.error("expected a number, generator or '('")


def parse(text):
    """Parse a document; raises DslError with line and column."""
    return _Parser(text).document()


# -- printer ---------------------------------------------------------------------

def print_document(doc):
    out = []
    for b in doc.blocks:
        if b.kind == "algebra":
            head = f"algebra {b.name}"
        elif b.kind == "morphism":
            head = f"morphism {b.name} : {b.header[0]} -> {b.header[1]}"
        elif b.kind == "ks":
            fib = ", ".join(f"{g} : {d}" for g, d in b.header[1])
            head = f"ks {b.name} over {b.header[0]} fiber ({fib})"
        elif b.kind == "twist":
            n, X, var = b.header
            head = f"twist {b.name} over sphere {n} on {X} as {var}"
        else:
            head = f"certificate {b.name} for {b.header[0]} twist {b.header[1]}"
        lines = [head + " {"]
        for s in b.body:
            if s.kind == "gen":
                lines.append(f"  gen {s.name} : {s.value};")
            elif s.kind == "trunc":
                lines.append(f"  trunc {s.name} {s.value};")
            elif s.kind == "value":
                lines.append(f"  {s.name} = {s.value};")
            else:
                lines.append(f"  {s.kind} {s.name} = {s.value};")
        lines.append("}")
        out.append("\n".join(lines))
    return "\n\n".join(out) + "\n"


# -- evaluation of expressions ------------------------------------------------------

class _Eval:
    """Evaluate an Expr into {param or None: Polynomial} over ``alg``."""

    def __init__(self, expr, alg, params_ok):
        self.expr = expr
        self.toks = list(expr.tokens) + [""]
        self.i = 0
        self.alg = alg
        self.params_ok = params_ok

    def error(self, msg):
        raise DslError(msg, self.expr.line, self.expr.col)

    def run(self):
        v = self._sum()
        return {k: p for k, p in v.items() if not p.is_zero()}

    def _add(self, a, b, sign=1):
        out = dict(a)
        for k, p in b.items():
            out[k] = out.get(k, self.alg.zero()) + p.scale(sign)
        return out

    def _sum(self):
        sign = 1
        if self.toks[self.i] in ("+", "-"):
            sign = -1 if self.toks[self.i] == "-" else 1
            self.i += 1
        acc = self._add({}, self._product(), sign)
        while self.toks[self.i] in ("+", "-"):
            sign = -1 if self.toks[self.i] == "-" else 1
            self.i += 1
            acc = self._add(acc, self._product(), sign)
        return acc

    def _mul(self, a, b):
        out = {}
        for ka, pa in a.items():
            for kb, pb in b.items():
                if ka is not None and kb is not None:
                    self.error(f"parameters {ka} and {kb} multiply; only linear use is allowed")
                k = ka if ka is not None else kb
                out[k] = out.get(k, self.alg.zero()) + pa * pb
        return out

    def _product(self):
        acc = self._power()
        while self.toks[self.i] == "*":
            self.i += 1
            acc = self._mul(acc, self._power())
        return acc

    def _power(self):
        base = self._atom()
        if self.toks[self.i] == "^":
            self.i += 1
            e = int(self.toks[self.i])
            self.i += 1
            out = {None: self.alg.one()}
            for _ in range(e):
                out = self._mul(out, base)
            return out
        return base

    def _atom(self):
        t = self.toks[self.i]
        self.i += 1
        if t.isdigit():
            q = Fraction(int(t))
            if self.toks[self.i] == "/":
                q /= int(self.toks[self.i + 1])
                self.i += 2
            return {None: self.alg.scalar(q)}
        if t == "(":
            v = self._sum()
            self.i += 1
            return v
        if t in self.alg.index:
            return {None: self.alg.gen(t)}
        if len(t) == 1 and t.isalpha():
            if not self.params_ok:
                self.error(f"unknown generator {t!r} (symbolic parameters are only allowed "
                           "in twist and certificate blocks)")
            return {t: self.alg.one()}
        self.error(f"unknown generator {t!r}")


def evaluate(expr, alg, params_ok=False):
    return _Eval(expr, alg, params_ok).run()


def _plain(expr, alg):
    v = evaluate(expr, alg)
    return v.get(None, alg.zero())


def _affine(expr, alg):
    v = evaluate(expr, alg, params_ok=True)
    const = v.pop(None, alg.zero())
    return Affine(const, v)


# -- resolution ------------------------------------------------------------------------

@dataclass
class Certificate:
    """A parsed certificate: F and section values affine in parameters."""
    name: str
    f: object
    twist: ParamTwist
    var: str
    a: dict
    F: dict
    section: dict


@dataclass
class Environment:
    algebras: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    extensions: dict = field(default_factory=dict)
    twists: dict = field(default_factory=dict)
    twist_vars: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)

    def first(self, kind):
        d = getattr(self, kind)
        return next(iter(d.values())) if d else None


def _fail(block, msg, stmt=None):
    src = stmt or block
    raise DslError(msg, src.line, src.col)


def build(doc):
    """Resolve a document into validated library objects."""
    env = Environment()
    for b in doc.blocks:
        try:
            if b.kind == "algebra":
                env.algebras[b.name] = _build_algebra(b)
            elif b.kind == "morphism":
                env.morphisms[b.name] = _build_morphism(b, env)
            elif b.kind == "ks":
                env.extensions[b.name] = _build_ks(b, env)
            elif b.kind == "twist":
                env.twists[b.name] = _build_twist(b, env)
                env.twist_vars[b.name] = b.header[2]
            else:
                env.certificates[b.name] = _build_certificate(b, env)
        except DslError:
            raise
        except ValidationError as e:
            raise DslError(f"in {b.kind} {b.name}: {e}", b.line, b.col) from None
    return env


def load(text):
    return build(parse(text))


def _lookup(env, kind, name, block):
    d = getattr(env, kind)
    if name not in d:
        _fail(block, f"unknown {kind[:-1] if kind != 'extensions' else 'extension'} {name!r}")
    return d[name]


def _build_algebra(b):
    gens, caps, dvals = [], {}, []
    seen = set()
    for s in b.body:
        if s.kind == "gen":
            if s.name in seen:
                _fail(b, f"generator {s.name!r} declared twice", s)
            if s.value < 1:
                _fail(b, f"generator {s.name!r} must have positive degree", s)
            seen.add(s.name)
            gens.append((s.name, s.value))
        elif s.kind == "trunc":
            if s.value != 2:
                _fail(b, "only 'trunc NAME 2' is supported", s)
            caps[s.name] = 2
        else:
            dvals.append(s)
    for name in caps:
        if name not in seen:
            _fail(b, f"trunc of unknown generator {name!r}")
    G = [Generator(n, d, caps.get(n)) for n, d in gens]
    alg = FreeCGA(G)
    d = {}
    for s in dvals:
        if s.name not in alg.index:
            _fail(b, f"d of unknown generator {s.name!r}", s)
        d[s.name] = _plain(s.value, alg)
    return make_cdga(G, d, name=b.name)


def _build_morphism(b, env):
    src = _lookup(env, "algebras", b.header[0], b)
    tgt = _lookup(env, "algebras", b.header[1], b)
    vals = {}
    for s in b.body:
        if s.name not in src.algebra.index:
            _fail(b, f"{s.name!r} is not a generator of {b.header[0]}", s)
        vals[s.name] = _plain(s.value, tgt.algebra)
    return make_morphism(src, tgt, vals, name=b.name)


def _build_ks(b, env):
    base = _lookup(env, "algebras", b.header[0], b)
    fib = [Generator(g, d) for g, d in b.header[1]]
    alg = FreeCGA(list(base.generators) + fib)
    d = {}
    for s in b.body:
        if s.name not in {g.name for g in fib}:
            _fail(b, f"D of {s.name!r}, which is not a fiber generator", s)
        d[s.name] = _plain(s.value, alg)
    return make_ks(base, fib, d, name=b.name)


def _build_twist(b, env):
    n, Xname, var = b.header
    X = _lookup(env, "algebras", Xname, b)
    if n < 2:
        _fail(b, "the sphere degree must be at least 2")
    phi = identity(X)
    const, params = {}, {}
    for s in b.body:
        if s.name not in X.algebra.index:
            _fail(b, f"theta of unknown generator {s.name!r}", s)
        aff = _affine(s.value, X.algebra)
        const[s.name] = aff.const
        for p, v in aff.terms.items():
            params.setdefault(p, {})[s.name] = v
    tw = ParamTwist(X, n, Derivation(phi, n - 1, const),
                    {p: Derivation(phi, n - 1, v) for p, v in params.items()})
    for th in [tw.const] + list(tw.params.values()):
        for g, v in th.values.items():
            if not v.is_zero() and v.degree() != X.algebra.generator(g).degree - (n - 1):
                _fail(b, f"theta {g} = {v} has the wrong degree")
    return tw


def _build_certificate(b, env):
    f = _lookup(env, "morphisms", b.header[0], b)
    tw = _lookup(env, "twists", b.header[1], b)
    var = env.twist_vars[b.header[1]]
    if tw.fiber.algebra != f.target.algebra:
        _fail(b, "twist fiber differs from the morphism target")
    T = twisted_total_algebra(f.target, tw.n, var)
    S = sphere_base(tw.n, var).algebra
    Q = FreeCGA([])
    a, F, section = {}, {}, {}
    for s in b.body:
        if s.kind == "class":
            if s.name not in f.source.algebra.index:
                _fail(b, f"class on unknown generator {s.name!r}", s)
            aff = _affine(s.value, Q)
            a[s.name] = Affine(aff.const.constant_term(),
                               {p: v.constant_term() for p, v in aff.terms.items()})
        elif s.kind == "F":
            if s.name not in f.source.algebra.index:
                _fail(b, f"F of unknown generator {s.name!r}", s)
            F[s.name] = _affine(s.value, T)
        else:
            if s.name not in f.target.algebra.index:
                _fail(b, f"section of unknown fiber generator {s.name!r}", s)
            aff = _affine(s.value, S)
            xm = S.gen_monomial(var)
            for part in [aff.const] + list(aff.terms.values()):
                if any(m != xm for m in part.terms):
                    _fail(b, f"section value of {s.name} must be a multiple of {var}", s)
            section[s.name] = Affine(aff.const.coefficient(xm),
                                     {p: v.coefficient(xm) for p, v in aff.terms.items()})
    return Certificate(b.name, f, tw, var, a, F, section)

