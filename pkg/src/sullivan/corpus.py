"""
Built-in worked examples. Each entry holds a DSL document, the names of
its default objects and expected fragments of CLI output. A fragment is
``(argv, path, value)`` where ``path`` is a dotted path into the JSON
result (integers index lists, ``*`` means any element).
"""

from dataclasses import dataclass, field


@dataclass
class CorpusEntry:
    key: str
    text: str
    claim: str
    expected: list = field(default_factory=list)
    defaults: dict = field(default_factory=dict)


_S4 = "algebra S4 { gen w4 : 4; gen w7 : 7; d w7 = w4^2; }\n"

ENTRIES = {}


def _add(key, text, claim, expected, **defaults):
    ENTRIES[key] = CorpusEntry(key, text, claim, expected, defaults)


_add("ex2.2", """\
# S^3 -> X -> S^2 x S^2
algebra Y { gen w1 : 2; gen w2 : 2; gen w3 : 3; gen w4 : 3; d w3 = w1^2; d w4 = w2^2; }
ks E over Y fiber (v : 3) { D v = w1*w2; }
""", "G_2 = 0 while gcal_2 is all of pi_2(Y) (x) Q", [
    (["evsub", "--degree", "2"], "dim", 0),
    (["classify", "--degrees", "2..2"], "0.G.dim", 0),
    (["classify", "--degrees", "2..2"], "0.gcal.kind", "Exact"),
    (["classify", "--degrees", "2..2"], "0.gcal.dim", 2),
    (["classify", "--degrees", "2..2"], "0.evidence.*.tag", "Prop 1.4"),
])

_add("ex2.3-odd", """\
algebra S3 { gen w3 : 3; }
morphism id : S3 -> S3 { w3 = w3; }
""", "odd sphere: the twist is trivial", [
    (["build", "--class", "w3=c"], "F.w3", "w3 + c*x"),
    (["build", "--class", "w3=c"], "D.w3", "0"),
    (["build", "--class", "w3=c"], "ok", True),
    (["build", "--class", "w3=1"], "ok", True),
])

_add("ex2.3-even", _S4 + """\
morphism id : S4 -> S4 { w4 = w4; w7 = w7; }
""", "even sphere: the twisted differential picks up 2c*x*w_n", [
    (["build", "--class", "w4=c"], "F.w4", "w4 + c*x"),
    (["build", "--class", "w4=c"], "F.w7", "w7"),
    (["build", "--class", "w4=c"], "D.w7", "w4^2 + 2*c*x*w4"),
    (["build", "--class", "w4=c"], "ok", True),
    (["gottlieb", "--degree", "4"], "dim", 0),
    (["gottlieb", "--degree", "7"], "dim", 1),
])

_add("ex2.4", _S4 + """\
# Hopf fibration S^3 -> S^7 -> S^4
ks E over S4 fiber (v3 : 3) { D v3 = w4; }
""", "Hopf map: G_4 = gcal_4 = Q", [
    (["evsub", "--degree", "4"], "dim", 1),
    (["evsub", "--degree", "4"], "basis", ["w4*"]),
    (["classify", "--degrees", "4..4"], "0.G.dim", 1),
    (["classify", "--degrees", "4..4"], "0.gcal.kind", "Exact"),
    (["classify", "--degrees", "4..4"], "0.gcal.dim", 1),
])

_add("ex2.4-product", """\
algebra Y { gen w4 : 4; gen w7 : 7; gen u4 : 4; gen u7 : 7; d w7 = w4^2; d u7 = u4^2; }
# (f x id): S^7 x S^4 -> S^4 x S^4
ks E over Y fiber (v3 : 3) { D v3 = w4; }
""", "product map: G_4 = Q, gcal_4 = Q^2", [
    (["evsub", "--degree", "4"], "dim", 1),
    (["classify", "--degrees", "4..4"], "0.G.dim", 1),
    (["classify", "--degrees", "4..4"], "0.gcal.kind", "Exact"),
    (["classify", "--degrees", "4..4"], "0.gcal.dim", 2),
])

_add("ex2.5", """\
algebra Y { gen w3 : 3; gen w5 : 5; gen w7 : 7; gen w9 : 9; d w7 = w3*w5; d w9 = w3*w7; }
algebra X { gen w3 : 3; gen w7 : 7; gen w9 : 9; d w9 = w3*w7; }
morphism p : Y -> X { w3 = w3; w5 = 0; w7 = w7; w9 = w9; }
""", "G_3 = G_7 = 0 for the projection", [
    (["evsub", "--degree", "3"], "dim", 0),
    (["evsub", "--degree", "7"], "dim", 0),
    (["build", "--class", "w3=1"], "ok", True),
    (["build", "--class", "w7=1"], "ok", True),
    (["build", "--class", "w9=1"], "ok", True),
], model="Y")

_add("ex2.6", """\
algebra Y { gen w6 : 6; gen w11 : 11; d w11 = w6^2; }
algebra X { gen u3 : 3; gen v3 : 3; }
# the map S^3 x S^3 -> S^6 collapsing S^3 v S^3
morphism f : Y -> X { w6 = u3*v3; w11 = 0; }
twist T over sphere 6 on X { }
""", "every fibration over S^6 with fiber S^3 x S^3 is rationally trivial", [
    (["derhom", "--degree", "5"], "dim", 0),
    (["lift", "--class", "w6=c"], "result", "obstructed"),
    (["lift", "--class", "w6=c"], "witness.generator", "w11"),
    (["lift", "--class", "w6=c"], "witness.required", "2*x*u3*v3"),
    (["lift", "--class", "w6=c"], "witness.class_nonzero", True),
    (["lift", "--class", "w6=c"], "feasible", "c = 0"),
    (["classify", "--degrees", "6..6"], "0.G.dim", 0),
    (["classify", "--degrees", "6..6"], "0.gcal.dim", 0),
    (["classify", "--degrees", "6..6"], "0.tcal.dim", 0),
    (["classify", "--degrees", "6..6"], "0.scal.dim", 0),
    (["classify", "--degrees", "6..6"], "0.scal.kind", "Exact"),
], model="X")

_add("ex2.6-total", """\
# Q[x]/(x^2) (x) Lambda(u3, v3) with zero differential, |x| = 6
algebra E { gen x : 6; trunc x 2; gen u3 : 3; gen v3 : 3; }
""", "the class of x*u3*v3 survives in degree 12", [
    (["cohomology", "--degree", "12..12"], "degrees.12.dim", 1),
    (["cohomology", "--degree", "12..12"], "degrees.12.reps", ["x*u3*v3"]),
])

_add("ex3.4", _S4 + """\
algebra CP3 { gen v2 : 2; gen w7 : 7; d w7 = v2^4; }
morphism f : S4 -> CP3 { w4 = v2^2; w7 = w7; }
ks E over S4 fiber (v2 : 2, v3 : 3) { D v3 = v2^2 - w4; }
twist T over sphere 4 on CP3 { theta w7 = -2*c*v2^2; }
certificate C for f twist T { class w4 = c; F w4 = v2^2 + c*x; F w7 = w7; }
""", "tcal_4 = Q, gcal_4 = 0 for S^4 -> CP^3", [
    (["rho", "--sphere", "4", "--cap", "10"], "zero", True),
    (["lift", "--class", "w4=c"], "result", "found"),
    (["lift", "--class", "w4=c"], "F.w4", "v2^2 + c*x"),
    (["lift", "--class", "w4=c"], "F.w7", "w7"),
    (["lift", "--class", "w4=c"], "D.w7", "v2^4 + 2*c*x*v2^2"),
    (["verify"], "ok", True),
    (["tncz", "--param", "c=1"], "tncz", True),
    (["trivial", "--param", "c=1"], "rationally_trivial", False),
    (["classify", "--degrees", "4..4"], "0.tcal.kind", "Exact"),
    (["classify", "--degrees", "4..4"], "0.tcal.dim", 1),
    (["classify", "--degrees", "4..4"], "0.gcal.kind", "Exact"),
    (["classify", "--degrees", "4..4"], "0.gcal.dim", 0),
], model="CP3")

_add("ex3.5", _S4 + """\
algebra CP2 { gen v2 : 2; gen v5 : 5; d v5 = v2^3; }
# the map CP^2 -> S^4 collapsing the 2-cell
morphism f : S4 -> CP2 { w4 = v2^2; w7 = v2*v5; }
twist T over sphere 4 on CP2 { theta v5 = -2*c*v2; }
certificate C for f twist T { class w4 = c; F w4 = v2^2 + c*x; F w7 = v2*v5; }
""", "tcal_4 = Q, gcal_4 = 0 for S^4 -> CP^2", [
    (["rho", "--sphere", "4", "--cap", "6"], "zero", True),
    (["lift", "--class", "w4=c"], "result", "found"),
    (["lift", "--class", "w4=c"], "F.w4", "v2^2 + c*x"),
    (["lift", "--class", "w4=c"], "F.w7", "v2*v5"),
    (["lift", "--class", "w4=c"], "D.v5", "v2^3 + 2*c*x*v2"),
    (["verify"], "ok", True),
    (["classify", "--degrees", "4..4"], "0.tcal.kind", "Exact"),
    (["classify", "--degrees", "4..4"], "0.tcal.dim", 1),
    (["classify", "--degrees", "4..4"], "0.gcal.kind", "Exact"),
    (["classify", "--degrees", "4..4"], "0.gcal.dim", 0),
], model="CP2")

_add("ex3.6", """\
# free loop fibration Omega S^2 -> L S^2 -> S^2
algebra S2 { gen x : 2; gen y : 3; d y = x^2; }
ks L over S2 fiber (xb : 1, yb : 2) { D yb = 2*x*xb; }
algebra LS2 { gen x : 2; gen y : 3; gen xb : 1; gen yb : 2; d y = x^2; d yb = 2*x*xb; }
algebra OS2 { gen xb : 1; gen yb : 2; }
morphism i : LS2 -> OS2 { x = 0; y = 0; xb = xb; yb = yb; }
twist T over sphere 2 on OS2 { theta yb = -c*xb; }
""", "scal_2 is nonzero; twists with c != 0 are not tncz", [
    (["rho", "--sphere", "2", "--cap", "4"], "zero", False),
    (["tncz", "--param", "c=1"], "tncz", False),
    (["tncz", "--param", "c=1"], "dims_total.2", 1),
    (["tncz", "--param", "c=0"], "dims_total.2", 2),
    (["section", "--param", "c=1"], "section.xb", "0"),
    (["classify", "--degrees", "2..2"], "0.scal.dim", 2),
], model="OS2")

_add("cp2", """\
algebra CP2 { gen v2 : 2; gen v5 : 5; d v5 = v2^3; }
""", "one derivation class in degree 3", [
    (["derhom", "--degree", "3"], "dim", 1),
    (["rho", "--sphere", "4", "--cap", "6"], "zero", True),
])


def entry(key):
    try:
        return ENTRIES[key]
    except KeyError:
        raise KeyError(f"unknown builtin {key!r}; known: {sorted(ENTRIES)}") from None
