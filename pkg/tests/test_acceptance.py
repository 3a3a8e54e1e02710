"""
The ten acceptance criteria, each checked with zero tolerance through the
command line entry point. Every criterion prints one PASS/FAIL line; run
this file directly or through pytest (the lines appear in the summary).

Criteria 4 and 8 contain sub-claims that exact computation refutes; they
are checked as stated and marked xfail(strict) so a change in either
direction is noticed.
"""

import re
import sys
import tempfile
import time
from pathlib import Path

import pytest
from hypothesis import settings

from sullivan.cli import run
from sullivan.corpus import entry

sys.path.insert(0, str(Path(__file__).parent))

RESULTS = {}
TIME_LIMIT = 5.0


class Checks:
    def __init__(self, number):
        self.number = number
        self.items = []

    def check(self, what, ok):
        self.items.append((what, bool(ok)))
        return ok

    def cli(self, *argv):
        t0 = time.perf_counter()
        code, out = run(list(argv))
        dt = time.perf_counter() - t0
        self.check(f"`{' '.join(argv[:3])}` exits 0", code == 0)
        self.check(f"`{' '.join(argv[:3])}` under {TIME_LIMIT:.0f}s ({dt:.2f}s)", dt < TIME_LIMIT)
        return out if code == 0 else {}

    @property
    def ok(self):
        return all(ok for _, ok in self.items)

    def line(self):
        failed = [w for w, ok in self.items if not ok]
        status = "PASS" if not failed else "FAIL"
        tail = f"{len(self.items)} checks" if not failed else "failed: " + "; ".join(failed)
        return f"criterion {self.number:2d}: {status}  ({tail})"


_TMP = tempfile.TemporaryDirectory()


def doc(text):
    path = Path(_TMP.name) / f"doc{len(list(Path(_TMP.name).iterdir()))}.sul"
    path.write_text(text)
    return str(path)


def classify_one(c, key, n, **kw):
    out = c.cli("classify", "--builtin", key, "--degrees", f"{n}..{n}", *kw.get("extra", ()))
    return out[0] if out else {"G": {}, "gcal": {}, "tcal": {}, "scal": {}, "evidence": []}


def has_evidence(s, tag, target=None):
    return any(e["tag"] == tag and e["verified"] and (target is None or e["target"] == target)
               for e in s["evidence"])


# -- the criteria ------------------------------------------------------------------

def criterion_1():
    c = Checks(1)
    c.check("G_2 = 0", c.cli("evsub", "--builtin", "ex2.2", "--degree", "2").get("dim") == 0)
    s = classify_one(c, "ex2.2", 2)
    c.check("gcal_2 Exact", s["gcal"].get("kind") == "Exact")
    c.check("gcal_2 = Q^2", s["gcal"].get("dim") == 2 == s.get("pi_rank"))
    c.check("Prop 1.4 evidence", has_evidence(s, "Prop 1.4", "gcal"))
    return c


def sphere_doc(n):
    if n % 2:
        return (f"algebra S{n} {{ gen w{n} : {n}; }}\n"
                f"morphism id : S{n} -> S{n} {{ w{n} = w{n}; }}\n")
    m = 2 * n - 1
    return (f"algebra S{n} {{ gen w{n} : {n}; gen w{m} : {m}; d w{m} = w{n}^2; }}\n"
            f"morphism id : S{n} -> S{n} {{ w{n} = w{n}; w{m} = w{m}; }}\n")


def criterion_2():
    c = Checks(2)
    for n in (2, 3, 4, 5):
        path = doc(sphere_doc(n))
        b = c.cli("build", "--projection", path, "--class", f"w{n}=c")
        c.check(f"S^{n}: builder gates", b.get("ok") is True)
        c.check(f"S^{n}: F(w{n}) = w{n} + c*x", b.get("F", {}).get(f"w{n}") == f"w{n} + c*x")
        if n % 2 == 0:
            want = f"w{n}^2 + 2*c*x*w{n}"
            c.check(f"S^{n}: D'w{2 * n - 1} = {want}", b.get("D", {}).get(f"w{2 * n - 1}") == want)
        else:
            c.check(f"S^{n}: D' = 0", all(v == "0" for v in b.get("D", {"?": "?"}).values()))
        if "document" not in b:
            continue
        cert = doc(b["document"])
        v = c.cli("verify", "--certificate", cert, "--name", "BuiltCert")
        c.check(f"S^{n}: verify", v.get("ok") is True)
        for value in ("1", "-2", "1/3"):
            sec = c.cli("section", "--ks", cert, "--param", f"c={value}")
            c.check(f"S^{n}, c={value}: section", sec.get("section") is not None)
            tr = c.cli("trivial", "--ks", cert, "--param", f"c={value}")
            c.check(f"S^{n}, c={value}: classifying class 0", tr.get("rationally_trivial") is True)
    return c


def criterion_3():
    c = Checks(3)
    e = c.cli("evsub", "--builtin", "ex2.4", "--degree", "4")
    c.check("G_4 = span{w4*}", e.get("basis") == ["w4*"] and e.get("dim") == 1)
    cocycle = (e.get("cocycles") or [""])[0]
    c.check("cocycle (w4,1) + c(w7,v3), c = +-2",
            re.fullmatch(r"\(w4,1\) [+-] 2\*\(w7,v3\)", cocycle) is not None)
    s = classify_one(c, "ex2.4", 4)
    c.check("G_4 = gcal_4 = Q", s["G"].get("dim") == 1 and s["gcal"].get("kind") == "Exact"
            and s["gcal"].get("dim") == 1)
    p = classify_one(c, "ex2.4-product", 4)
    c.check("product: G_4 dim 1", p["G"].get("dim") == 1)
    c.check("product: gcal_4 dim 2", p["gcal"].get("dim") == 2 and p["gcal"].get("kind") == "Exact")
    return c


def criterion_4():
    c = Checks(4)
    for n in (3, 7):
        e = c.cli("evsub", "--builtin", "ex2.5", "--degree", str(n))
        c.check(f"G_{n} = 0", e.get("dim") == 0)
    out = c.cli("classify", "--builtin", "ex2.5", "--degrees", "3..9")
    by_n = {s["n"]: s for s in out or []}
    for n in (3, 5, 7, 9):
        s = by_n.get(n, {"gcal": {}, "pi_rank": None})
        c.check(f"gcal_{n} Exact full", s["gcal"].get("kind") == "Exact"
                and s["gcal"].get("dim") == s["pi_rank"] == 1)
    passed = 0
    for g in ("w3", "w5", "w7", "w9"):
        code, b = run(["build", "--builtin", "ex2.5", "--class", f"{g}=1"])
        if code != 0:
            c.check(f"builder certificate for {g}* ({b.get('message')})", False)
            continue
        v = c.cli("verify", "--certificate", doc(b["document"]), "--name", "BuiltCert")
        passed += c.check(f"builder certificate for {g}* passes verify", v.get("ok") is True)
    c.check("four builder certificates", passed == 4)
    return c


def criterion_5():
    c = Checks(5)
    c.check("H_5(Der M(S^3 x S^3)) = 0",
            c.cli("derhom", "--builtin", "ex2.6", "--degree", "5").get("dim") == 0)
    sym = c.cli("lift", "--builtin", "ex2.6", "--class", "w6=c")
    c.check("symbolic lift obstructed exactly off c = 0",
            sym.get("result") == "obstructed" and sym.get("feasible") == "c = 0")
    for value in ("1", "-1", "2", "1/3"):
        out = c.cli("lift", "--builtin", "ex2.6", "--class", f"w6={value}")
        w = out.get("witness", {})
        c.check(f"c={value}: obstructed at w11 with a nonzero class",
                out.get("result") == "obstructed" and w.get("generator") == "w11"
                and w.get("class_nonzero") is True)
    w = sym.get("witness", {})
    c.check("witness [(cx + u3v3)^2] = [2cxu3v3]", w.get("required") == "2*x*u3*v3")
    h = c.cli("cohomology", "--builtin", "ex2.6-total", "--degree", "12..12")
    c.check("x*u3*v3 spans H^12", h.get("degrees", {}).get("12", {}).get("reps") == ["x*u3*v3"])
    s = classify_one(c, "ex2.6", 6)
    c.check("G_6 = 0", s["G"].get("dim") == 0)
    for key in ("gcal", "tcal", "scal"):
        c.check(f"{key}_6 Exact 0", s[key].get("kind") == "Exact" and s[key].get("dim") == 0)
    c.check("Prop 3.1 and 3.2 evidence",
            has_evidence(s, "Prop 3.1") and has_evidence(s, "Prop 3.2"))
    return c


def zero_twist_doc(key, model):
    return entry(key).text + f"twist Z over sphere 4 on {model} {{ }}\n"


def cp_pipeline(c, key, model, cap, F7, dv):
    r = c.cli("rho", "--builtin", key, "--sphere", "4", "--cap", str(cap))
    c.check(f"rho on M({model}) at n=4 is zero", r.get("zero") is True)
    out = c.cli("lift", "--builtin", key, "--class", "w4=c")
    c.check("lift found", out.get("result") == "found" and out.get("verified") is True)
    c.check("F(w4) = v2^2 + c*x", out.get("F", {}).get("w4") == "v2^2 + c*x")
    c.check(f"F(w7) = {F7}", out.get("F", {}).get("w7") == F7)
    c.check(f"D'{dv[0]} = {dv[1]}", out.get("D", {}).get(dv[0]) == dv[1])
    v = c.cli("verify", "--builtin", key)
    c.check("certificate verifies", v.get("ok") is True)
    for value in ("1", "-3"):
        t = c.cli("trivial", "--builtin", key, "--param", f"c={value}")
        c.check(f"c={value}: classifying class nonzero", t.get("rationally_trivial") is False)
        z = c.cli("lift", "--map", doc(zero_twist_doc(key, model)), "--twist",
                  doc(zero_twist_doc(key, model)), "--class", f"w4={value}")
        c.check(f"c={value}: product lift obstructed", z.get("result") == "obstructed")
    s = classify_one(c, key, 4)
    c.check("tcal_4 Exact = Q", s["tcal"].get("kind") == "Exact" and s["tcal"].get("dim") == 1)
    c.check("gcal_4 Exact = 0", s["gcal"].get("kind") == "Exact" and s["gcal"].get("dim") == 0)


def criterion_6():
    c = Checks(6)
    cp_pipeline(c, "ex3.4", "CP3", 10, "w7", ("w7", "v2^4 + 2*c*x*v2^2"))
    return c


def criterion_7():
    c = Checks(7)
    cp_pipeline(c, "ex3.5", "CP2", 6, "v2*v5", ("v5", "v2^3 + 2*c*x*v2"))
    return c


def criterion_8():
    c = Checks(8)
    r = c.cli("rho", "--builtin", "ex3.6", "--sphere", "2", "--cap", "4")
    c.check("rho nonzero", r.get("zero") is False)
    c.check("rho([(yb,xb)])([yb]) = [xb]",
            {"class": "(yb,xb)", "degree": 2, "source": "yb", "image": "xb"} in r.get("entries", []))
    for value in ("1", "-1", "2"):
        t = c.cli("tncz", "--builtin", "ex3.6", "--param", f"c={value}")
        c.check(f"c={value}: not tncz", t.get("tncz") is False)
        c.check(f"c={value}: dim H^2(E) = 1", t.get("dims_total", {}).get("2") == 1)
    t0 = c.cli("tncz", "--builtin", "ex3.6", "--param", "c=0")
    c.check("c=0: dim H^2(E) = 2", t0.get("dims_total", {}).get("2") == 2)
    s = classify_one(c, "ex3.6", 2)
    c.check("tcal_2 Exact 0", s["tcal"].get("kind") == "Exact" and s["tcal"].get("dim") == 0)
    # an Exact verdict is at least as strong as the LowerBound the claim asks for
    c.check("scal_2 bounded below by a nonzero space",
            s["scal"].get("kind") in ("LowerBound", "Exact") and s["scal"].get("dim", 0) > 0)
    c.check("section certificate evidence",
            any(e["kind"] == "certificate" and e["target"] == "scal" and e["verified"]
                for e in s["evidence"]))
    return c


PROPERTIES = [
    ("delta o delta = 0", "test_derivations", "test_delta_squared_zero"),
    ("d^2 = 0", "test_cdga", "test_d_squared_zero"),
    ("Koszul double swap", "test_algebra", "test_koszul_double_swap"),
    ("rank-nullity", "test_linalg", "test_rank_nullity"),
    ("Kunneth", "test_cdga", "test_kunneth"),
    ("builder gates", "test_fibrations", "test_builder_outputs_pass_gates"),
    ("chain consistency (KS maps)", "test_reports", "test_chain_consistency_ks"),
    ("chain consistency (projections)", "test_reports", "test_chain_consistency_projections"),
]


def criterion_9():
    import importlib
    c = Checks(9)
    for label, module, name in PROPERTIES:
        test = getattr(importlib.import_module(module), name)
        inner = test.hypothesis.inner_test
        count = [0]

        def counted(*a, **k):
            count[0] += 1
            return inner(*a, **k)
        test.hypothesis.inner_test = counted
        try:
            settings(max_examples=200, deadline=None, database=None)(test)()
            ok = True
        except Exception as e:  # a falsifying example
            ok = False
            label += f" ({type(e).__name__})"
        finally:
            test.hypothesis.inner_test = inner
        c.check(f"{label}: {count[0]} cases", ok and count[0] >= 200)
    return c


def criterion_10():
    c = Checks(10)
    for n in (2, 3, 4, 5, 7):
        path = doc(sphere_doc(n))
        g = c.cli("gottlieb", path, "--degree", str(n))
        if n % 2:
            c.check(f"G_{n}(S^{n}) = Q", g.get("dim") == 1)
        else:
            c.check(f"G_{n}(S^{n}) = 0", g.get("dim") == 0)
            g2 = c.cli("gottlieb", path, "--degree", str(2 * n - 1))
            c.check(f"G_{2 * n - 1}(S^{n}) = Q", g2.get("dim") == 1)
    return c


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 11)}
UNATTAINABLE = {
    4: "gcal_5 = 0 exactly: a = w5* forces dF(w7) = w3*x, which is not a boundary",
    8: "G_2 = span{yb*} is nonzero and G_2 <= tcal_2, so tcal_2 cannot be 0",
}


def evaluate(i):
    c = CRITERIA[i]()
    RESULTS[i] = c.line()
    return c


@pytest.mark.parametrize("i", [pytest.param(i, marks=pytest.mark.xfail(
    strict=True, reason=UNATTAINABLE[i])) if i in UNATTAINABLE else i for i in CRITERIA])
def test_criterion(i):
    c = evaluate(i)
    assert c.ok, c.line()


if __name__ == "__main__":
    failed = 0
    for i in CRITERIA:
        c = evaluate(i)
        print(RESULTS[i], flush=True)
        failed += not c.ok
    sys.exit(1 if failed else 0)
