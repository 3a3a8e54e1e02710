import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from sullivan.cli import main, run
from sullivan.corpus import ENTRIES

GOLDEN = Path(__file__).parent / "golden"
UPDATE = os.environ.get("SULLIVAN_UPDATE_GOLDEN") == "1"


def lookup(obj, path):
    """Values at a dotted path; ``*`` fans out over list elements."""
    cur = [obj]
    for part in path.split("."):
        nxt = []
        for o in cur:
            if part == "*":
                nxt.extend(o)
            elif isinstance(o, list):
                nxt.append(o[int(part)])
            else:
                nxt.append(o[part])
        cur = nxt
    return cur


def expectations():
    for key, e in sorted(ENTRIES.items()):
        for argv, path, value in e.expected:
            yield pytest.param(key, argv, path, value, id=f"{key}:{' '.join(argv)}:{path}")


@pytest.mark.parametrize("key,argv,path,value", list(expectations()))
def test_corpus_expectation(key, argv, path, value):
    code, out = run([argv[0], "--builtin", key] + argv[1:])
    assert code == 0, out
    got = lookup(out, path)
    if "*" in path:
        assert value in got
    else:
        assert got == [value]


def golden_cases():
    seen = set()
    for key, e in sorted(ENTRIES.items()):
        for argv, _, _ in e.expected:
            if (key, tuple(argv)) not in seen:
                seen.add((key, tuple(argv)))
                yield key, argv


def golden_name(key, argv):
    return f"{key}__{'_'.join(a.replace('=', '-').replace('..', '-') for a in argv)}.json"


@pytest.mark.parametrize("key,argv", list(golden_cases()),
                         ids=lambda v: v if isinstance(v, str) else " ".join(v))
def test_golden(key, argv, capsys):
    code = main([argv[0], "--builtin", key] + argv[1:])
    text = capsys.readouterr().out
    assert code == 0
    path = GOLDEN / golden_name(key, argv)
    if UPDATE:
        GOLDEN.mkdir(exist_ok=True)
        path.write_text(text)
    assert path.exists(), f"missing golden {path.name}; rerun with SULLIVAN_UPDATE_GOLDEN=1"
    assert text == path.read_text()


def test_byte_identical_across_processes():
    cmd = [sys.executable, "-m", "sullivan.cli", "classify", "--builtin", "ex3.6", "--degrees", "2..2"]
    outs = set()
    for seed in ("0", "1", "12345"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        outs.add(subprocess.run(cmd, capture_output=True, env=env, check=True).stdout)
    assert len(outs) == 1


def test_file_input(tmp_path):
    f = tmp_path / "s4.sul"
    f.write_text(ENTRIES["ex2.3-even"].text)
    code, out = run(["gottlieb", str(f), "--name", "S4", "--degree", "7"])
    assert code == 0 and out["dim"] == 1


def test_format_canonical(tmp_path):
    f = tmp_path / "messy.sul"
    f.write_text("algebra   A{gen w4:4;gen w7 : 7 ;d w7=w4^2;}  # note\n")
    code, out = run(["format", str(f)])
    assert code == 0
    f.write_text(out["document"])
    assert run(["format", str(f)])[1]["document"] == out["document"]


def test_parse_error_exit_code(tmp_path):
    f = tmp_path / "bad.sul"
    f.write_text("algebra A { gen w : 4 d w = 0; }")
    code, out = run(["cohomology", str(f), "--degree", "0..2"])
    assert code == 2
    assert out["error"] == "parse" and (out["line"], out["column"]) == (1, 23)


def test_builder_failure_reports_gates():
    code, out = run(["build", "--builtin", "ex2.5", "--class", "w5=1"])
    assert code == 2
    assert out["details"]["gates"]["F_morphism"] is False


def test_unknown_builtin():
    code, out = run(["cohomology", "--builtin", "nope", "--degree", "0..1"])
    assert code == 2 and "unknown builtin" in out["message"]


def test_console_script_json():
    res = subprocess.run([sys.executable, "-m", "sullivan.cli", "derhom", "--builtin", "cp2",
                          "--degree", "3"], capture_output=True, check=True)
    assert json.loads(res.stdout)["dim"] == 1
