"""Command-line interface.

Exit status: 0 when the command succeeds with an affirmative answer (valid,
verified, proof accepted, no countermodel within bounds), 2 when it succeeds
with a negative answer, 1 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from .errors import ClassViolation, FormulaSyntaxError, InvariantViolation, QBKError, SchemaError
from .frontend import (
    dump_model, infer_signature, load_derivation, load_model, parse_formula, print_formula,
)
from .syntax import Signature

EXIT_YES, EXIT_ERROR, EXIT_NO = 0, 1, 2

FIXTURES = {
    "remark28": ("remark28.json", "one-point reflexive model refuting (p -> ~p) -> ~p"),
    "expanding-barcan": ("expanding_barcan.json", "two worlds with a growing domain refuting the Barcan formula"),
    "converse-barcan": ("converse_barcan.json", "derivation of the converse Barcan formula"),
    "rn-pattern": ("rn_pattern.json", "necessitation of a theorem"),
    "barcan-box": ("barcan_box.json", "box form of the Barcan formula from the diamond form"),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class Outcome:
    """What a command produced: verdict, exit code, text and extras for JSON."""

    def __init__(self, verdict, code, lines=(), witness=None, result=None, diagnostics=()):
        self.verdict = verdict
        self.code = code
        self.lines = list(lines)
        self.witness = witness
        self.result = result
        self.diagnostics = list(diagnostics)


# -- helpers -----------------------------------------------------------------

def _signature_arg(args) -> Signature | None:
    if getattr(args, "signature", None):
        try:
            data = json.loads(args.signature)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--signature is not JSON: {exc}") from None
        return Signature(data.get("predicates", {}), frozenset(data.get("constants", [])))
    return None


def _constants(args):
    raw = getattr(args, "constants", None) or ""
    return tuple(c for c in (p.strip() for p in raw.split(",")) if c)


def _parse(text, args, sig=None):
    sig = sig or _signature_arg(args)
    consts = _constants(args)
    if sig is not None and consts:
        sig = Signature(sig.predicates, sig.constants | frozenset(consts))
    return parse_formula(text, sig, consts)


def _env_arg(pairs):
    env = {}
    for p in pairs or ():
        if "=" not in p:
            raise UsageError(f"--env expects VAR=INDIVIDUAL, got {p!r}")
        k, v = p.split("=", 1)
        env[k.strip()] = v.strip()
    return env


def _resolve_individuals(m, env):
    # JSON individuals may be integers; match the textual form given on the command line
    by_text = {str(e): e for e in m.individuals()}
    return {x: by_text.get(v, v) for x, v in env.items()}


def _resolve_world(m, w):
    for x in m.worlds:
        if str(x) == w:
            return x
    raise UsageError(f"no world {w!r}; worlds are {', '.join(map(str, m.worlds))}")


# -- commands ----------------------------------------------------------------

def cmd_parse(args):
    f = _parse(args.formula, args)
    return Outcome("ok", EXIT_YES, [repr(f)], result=print_formula(f))


def cmd_print(args):
    f = _parse(args.formula, args)
    text = print_formula(f)
    return Outcome("ok", EXIT_YES, [text], result=text)


def cmd_nnf(args):
    from .transform import to_nnf
    text = print_formula(to_nnf(_parse(args.formula, args), nelson=args.nelson))
    return Outcome("ok", EXIT_YES, [text], result=text)


def cmd_translate(args):
    from . import nelson
    from .transform import to_nnf
    f = _parse(args.formula, args)
    if args.mode == "tau":
        g = nelson.tau(to_nnf(f, nelson=True) if args.normalize else f)
    elif args.mode == "tau-tilde":
        g = nelson.tau_tilde(f)
    else:
        g = nelson.tau_prime(f)
    text = print_formula(g)
    lines = [text]
    diags = []
    if args.mode == "tau-prime":
        diags.append(nelson.UNFAITHFUL_LABEL)
        lines.append(f"note: {nelson.UNFAITHFUL_LABEL}")
    return Outcome("ok", EXIT_YES, lines, result=text, diagnostics=diags)


def cmd_eval(args):
    from .semantics.evaluate import evaluate
    m = load_model(_read(args.model))
    w = _resolve_world(m, args.world)
    f = _parse(args.formula, args, m.signature)
    env = _resolve_individuals(m, _env_arg(args.env))
    if args.semantics == "nelson":
        from .nelson import nelson_evaluate
        yes = nelson_evaluate(m, w, f, args.polarity, env)
    else:
        yes = evaluate(m, w, f, args.polarity, env)
    act = "verified" if args.polarity == "+" else "falsified"
    verdict = act if yes else f"not-{act}"
    line = f"{print_formula(f)} is {'' if yes else 'not '}{act} at {w} ({args.semantics} semantics)"
    return Outcome(verdict, EXIT_YES if yes else EXIT_NO, [line],
                   witness={"world": str(w), "env": {k: str(v) for k, v in env.items()}})


def cmd_validate_model(args):
    from .semantics.model import validate_model
    m = load_model(_read(args.model))
    problems = validate_model(m, args.model_class)
    if not problems:
        return Outcome("valid", EXIT_YES, [f"model is in class {args.model_class}"])
    diags = [str(p) for p in problems]
    return Outcome("invalid", EXIT_NO, [f"model is not in class {args.model_class}:"] + ["  " + d for d in diags],
                   diagnostics=diags)


def cmd_check_proof(args):
    from .calculus import check_derivation
    d = load_derivation(_read(args.derivation))
    if args.logic:
        d.logic = args.logic
    report = check_derivation(d, trust_stated=args.trust_stated)
    lines = []
    for (f, j), r in zip(d.lines, report.lines):
        status = "ok  " if r.ok else "FAIL"
        detail = f" [{r.code}] {r.message}" if (not r.ok or args.verbose) else ""
        lines.append(f"{r.index:>3} {status} {j}  {print_formula(f)}{detail}")
    for code, msg in report.problems:
        lines.append(f"derivation: [{code}] {msg}")
    diags = [str(r) for r in report.failures()] + [f"[{c}] {m}" for c, m in report.problems]
    if report.valid:
        lines.append(f"valid: {print_formula(d.conclusion)}" if d.lines else "valid (empty)")
        return Outcome("valid", EXIT_YES, lines, diagnostics=diags)
    lines.append("invalid")
    return Outcome("invalid", EXIT_NO, lines, diagnostics=diags)


def cmd_search(args):
    from .semantics.enumerate import Bounds, search_countermodel
    sig = _signature_arg(args)
    consts = _constants(args)
    texts = list(args.hypothesis or []) + list(args.formulas)
    if sig is None:
        probe = [parse_formula(t, None, consts) for t in texts]
        sig = infer_signature(probe, consts)
    gamma = [_parse(t, args, sig) for t in args.hypothesis or []]
    delta = [_parse(t, args, sig) for t in args.formulas]
    bounds = Bounds(args.max_worlds, args.max_domain)
    found = search_countermodel(gamma, delta, bounds, args.model_class, sig=sig,
                                cap=args.cap, workers=args.workers)
    if found is None:
        return Outcome("no-countermodel", EXIT_YES, [
            f"no countermodel in class {args.model_class} with at most {args.max_worlds} world(s) "
            f"and {args.max_domain} individual(s); this is not a proof of validity"])
    m, w, env = found
    doc = dump_model(m)
    witness = {"world": str(w), "assignment": {k: str(v) for k, v in env.items()}, "model": doc}
    shown = ", ".join(f"{k}={v}" for k, v in env.items()) or "none"
    lines = [f"countermodel at world {w}, assignment: {shown}",
             json.dumps(doc, indent=2, ensure_ascii=False)]
    return Outcome("countermodel", EXIT_NO, lines, witness=witness)


def fixture_text(name: str) -> str:
    filename = FIXTURES[name][0]
    return resources.files("qbk").joinpath("fixtures", filename).read_text(encoding="utf-8")


def cmd_fixtures(args):
    if not args.name:
        lines = [f"{k:<18} {FIXTURES[k][1]}" for k in sorted(FIXTURES)]
        return Outcome("ok", EXIT_YES, lines, result=sorted(FIXTURES))
    if args.name not in FIXTURES:
        raise UsageError(f"unknown fixture {args.name!r}; known: {', '.join(sorted(FIXTURES))}")
    text = fixture_text(args.name)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        return Outcome("ok", EXIT_YES, [f"wrote {args.output}"], result=args.output)
    return Outcome("ok", EXIT_YES, [text.rstrip("\n")], result=json.loads(text))


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


# -- argument parsing ----------------------------------------------------------

def _formula_opts(p, positional=True):
    if positional:
        p.add_argument("formula", help="formula text")
    p.add_argument("--signature", help='JSON signature, e.g. {"predicates": {"P": 1}, "constants": ["c"]}')
    p.add_argument("--constants", help="comma-separated names to read as constants")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="qbk", description="Quantified Belnapian modal logic toolkit.")
    top.add_argument("--json", action="store_true", help="print a JSON envelope instead of text")
    sub = top.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("parse", help="parse a formula and show its syntax tree")
    _formula_opts(p)
    p.set_defaults(run=cmd_parse)

    p = sub.add_parser("print", help="print a formula in canonical form")
    _formula_opts(p)
    p.set_defaults(run=cmd_print)

    p = sub.add_parser("nnf", help="negative normal form")
    _formula_opts(p)
    p.add_argument("--nelson", action="store_true",
                   help="rewrite ~(A -> B) to A & ~B (verification-preserving only)")
    p.set_defaults(run=cmd_nnf)

    p = sub.add_parser("translate", help="translate a Nelson formula into the modal language")
    _formula_opts(p)
    p.add_argument("--mode", choices=["tau", "tau-tilde", "tau-prime"], default="tau-tilde")
    p.add_argument("--normalize", action="store_true", help="with --mode tau, bring the input to Nelson normal form first")
    p.set_defaults(run=cmd_translate)

    p = sub.add_parser("eval", help="evaluate a formula at a world of a model")
    _formula_opts(p)
    p.add_argument("--model", required=True, help="model JSON file ('-' for stdin)")
    p.add_argument("--world", required=True)
    p.add_argument("--polarity", choices=["+", "-"], default="+")
    p.add_argument("--semantics", choices=["qbk", "nelson"], default="qbk")
    p.add_argument("--env", action="append", metavar="VAR=INDIVIDUAL", help="value of a free variable")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("validate-model", help="check the side conditions of a model class")
    p.add_argument("model", help="model JSON file ('-' for stdin)")
    p.add_argument("--class", dest="model_class", default="QBK")
    p.set_defaults(run=cmd_validate_model)

    p = sub.add_parser("check-proof", help="check a derivation file")
    p.add_argument("derivation", help="derivation JSON file ('-' for stdin)")
    p.add_argument("--logic", help="override the logic named in the file")
    p.add_argument("--trust-stated", action="store_true", help="accept lemmas stated without proof")
    p.add_argument("--verbose", "-v", action="store_true", help="show the match of every line")
    p.set_defaults(run=cmd_check_proof)

    p = sub.add_parser("search-countermodel", help="bounded search for a countermodel")
    p.add_argument("formulas", nargs="+", help="conclusions (at least one must fail)")
    p.add_argument("--hyp", dest="hypothesis", action="append", help="hypothesis sentence (repeatable)")
    p.add_argument("--class", dest="model_class", default="QBK")
    p.add_argument("--max-worlds", type=int, default=3)
    p.add_argument("--max-domain", type=int, default=2)
    p.add_argument("--cap", type=int, default=10 ** 8, help="refuse searches larger than this many models")
    p.add_argument("--workers", type=int, default=1)
    _formula_opts(p, positional=False)
    p.set_defaults(run=cmd_search)

    p = sub.add_parser("fixtures", help="list or print the bundled fixtures")
    p.add_argument("name", nargs="?")
    p.add_argument("--output", "-o", help="write to this file instead of stdout")
    p.set_defaults(run=cmd_fixtures)
    return top


def _error_diagnostic(exc) -> str:
    if isinstance(exc, InvariantViolation):
        return f"invariant {exc.condition} violated: {exc}"
    if isinstance(exc, SchemaError):
        return f"schema error at {exc.path}: {exc}"
    if isinstance(exc, FormulaSyntaxError):
        return f"syntax error {exc}"
    if isinstance(exc, ClassViolation):
        return str(exc)
    return f"{type(exc).__name__}: {exc}"


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    as_json = "--json" in argv
    command = None
    try:
        args = parser.parse_args(argv)
        command = args.command
        if command is None:
            raise UsageError("a subcommand is required")
        outcome = args.run(args)
    except UsageError as exc:
        outcome = Outcome("error", EXIT_ERROR, diagnostics=[f"usage: {exc}"])
    except (QBKError, ValueError, OSError) as exc:
        outcome = Outcome("error", EXIT_ERROR, diagnostics=[_error_diagnostic(exc)])
    if as_json:
        env = {"command": command, "verdict": outcome.verdict}
        if outcome.witness is not None:
            env["witness"] = outcome.witness
        if outcome.result is not None:
            env["result"] = outcome.result
        env["diagnostics"] = outcome.diagnostics
        print(json.dumps(env, indent=2, ensure_ascii=False, sort_keys=False), file=out)
    else:
        for line in outcome.lines:
            print(line, file=out)
        if outcome.code == EXIT_ERROR:
            for d in outcome.diagnostics:
                print(f"error: {d}", file=err)
    return outcome.code


def main(argv=None) -> int:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
