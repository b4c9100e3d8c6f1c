import io
import json
import subprocess
import sys

import pytest

from qbk.cli import FIXTURES, fixture_text, run


def call(*argv, stdin=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        old, sys.stdin = sys.stdin, io.StringIO(stdin)
    try:
        code = run(list(argv), out, err)
    finally:
        if stdin is not None:
            sys.stdin = old
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, (filename, _) in FIXTURES.items():
        p = tmp_path / filename
        p.write_text(fixture_text(name))
        paths[name] = str(p)
    return paths


def test_nnf_example():
    code, out, _ = call("nnf", "~(P(x) & Q(x))")
    assert code == 0 and out == "~P(x) | ~Q(x)\n"
    assert call("nnf", "~(p -> q)")[1] == "!!p & ~q\n"
    assert call("nnf", "~(p -> q)", "--nelson")[1] == "p & ~q\n"


def test_print_and_parse():
    code, out, _ = call("print", "((p)) & ~~q")
    assert (code, out) == (0, "p & ~~q\n")
    code, out, _ = call("parse", "P(c) -> p", "--constants", "c")
    assert code == 0 and "Const" in out


def test_eval_remark_model_under_nelson(files):
    code, out, _ = call("eval", "--model", files["remark28"], "--world", "x", "--polarity", "+",
                        "(p -> ~p) -> ~p", "--semantics", "nelson")
    assert code == 2
    code, _, _ = call("eval", "--model", files["remark28"], "--world", "x", "p -> ~p",
                      "--semantics", "nelson")
    assert code == 0


def test_eval_with_environment(files):
    code, _, _ = call("eval", "--model", files["expanding-barcan"], "--world", "v", "P(x)", "--env", "x=b")
    assert code == 0
    code, _, err = call("eval", "--model", files["expanding-barcan"], "--world", "u", "P(x)", "--env", "x=b")
    assert code == 1 and err


def test_check_proof_fixtures(files):
    for name in ("converse-barcan", "rn-pattern", "barcan-box"):
        code, out, _ = call("check-proof", files[name])
        assert code == 0, out


def test_check_proof_rejects_wrong_logic(files):
    code, out, _ = call("check-proof", files["barcan-box"], "--logic", "QBK", "-v")
    assert code == 2
    assert "scheme-not-in-logic" in out


def test_check_proof_from_stdin():
    code, _, _ = call("check-proof", "-", stdin=fixture_text("converse-barcan"))
    assert code == 0


def test_validate_model(files):
    assert call("validate-model", files["remark28"], "--class", "QB3S4")[0] == 0
    code, out, _ = call("validate-model", files["remark28"], "--class", "QBKo")
    assert code == 2 and "AtomComplete" in out


def test_search_countermodel():
    ba = "<>exists x. P(x) -> exists x. <>P(x)"
    code, out, _ = call("search-countermodel", ba)
    assert code == 2 and "worlds" in out
    code, _, _ = call("search-countermodel", ba, "--class", "QBKsharp")
    assert code == 0


def test_search_respects_cap():
    code, _, err = call("search-countermodel", "P(x) | Q(x, y)", "--max-worlds", "3",
                        "--max-domain", "3", "--cap", "1000")
    assert code == 1 and err


def test_translate_modes():
    assert call("translate", "~p")[1] == "~<>p\n"
    assert call("translate", "~p", "--mode", "tau-prime")[1].startswith("[]!p")
    code, _, err = call("translate", "~(p & p)", "--mode", "tau")
    assert code == 1 and err
    assert call("translate", "~(p & p)", "--mode", "tau", "--normalize")[0] == 0


def test_fixtures_listing_and_output(tmp_path):
    code, out, _ = call("fixtures")
    assert code == 0 and all(name in out for name in FIXTURES)
    target = tmp_path / "m.json"
    assert call("fixtures", "remark28", "-o", str(target))[0] == 0
    assert json.loads(target.read_text())["worlds"] == ["x"]


@pytest.mark.parametrize("argv", [
    ("nnf", "P(x) &"),
    ("frobnicate",),
    ("eval", "--model", "/nonexistent.json", "--world", "x", "p"),
    ("search-countermodel", "p", "--class", "NOPE"),
    ("fixtures", "nope"),
])
def test_errors_exit_one(argv):
    code, _, err = call(*argv)
    assert code == 1 and err


def test_json_envelope(files):
    code, out, _ = call("--json", "search-countermodel", "<>exists x. P(x) -> exists x. <>P(x)")
    doc = json.loads(out)
    assert code == 2
    assert doc["command"] == "search-countermodel" and doc["verdict"]
    assert "worlds" in doc["witness"]["model"]
    assert isinstance(doc["diagnostics"], list)
    code, out, _ = call("--json", "check-proof", files["converse-barcan"])
    doc = json.loads(out)
    assert code == 0 and doc["command"] == "check-proof"
    code, out, _ = call("--json", "nnf", "P(x) &")
    doc = json.loads(out)
    assert code == 1 and doc["diagnostics"]


def test_output_is_deterministic(files):
    argv = ("--json", "search-countermodel", "[]exists x. P(x) -> exists x. []P(x)", "--max-worlds", "2")
    first = call(*argv)
    assert all(call(*argv) == first for _ in range(3))
    parallel = call(*argv[:-2], "--max-worlds", "2", "--workers", "2")
    assert parallel[0] == first[0]
    assert json.loads(parallel[1])["witness"] == json.loads(first[1])["witness"]


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "qbk.cli", "nnf", "~~p"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "p\n"
