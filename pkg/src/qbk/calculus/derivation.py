"""Derivation objects and the line-by-line checker."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import InvariantViolation, SchemaError
from ..syntax import BOTTOM, Box, Diamond, Exists, Forall, Imp, Or, free_vars
from .schemes import SCHEMES, logic_schemes, q_capture

__all__ = [
    "Justification", "parse_rule", "Derivation", "LineReport", "CheckReport",
    "check_derivation", "build_disjunction",
    "axiom", "lemma", "hyp", "mp", "mb", "md", "br1", "br2",
]

KINDS = ("axiom", "lemma", "hyp", "mp", "mb", "md", "br1", "br2")


@dataclass(frozen=True)
class Justification:
    kind: str
    refs: tuple = ()
    name: str | None = None  # scheme id, lemma name or quantified variable

    def __str__(self):
        if self.kind in ("axiom", "lemma"):
            return f"{self.kind}:{self.name}"
        if self.kind in ("br1", "br2"):
            return f"{self.kind}:{self.refs[0]},{self.name}"
        return f"{self.kind}:{','.join(map(str, self.refs))}"


def axiom(sid):
    return Justification("axiom", (), sid)


def lemma(name):
    return Justification("lemma", (), name)


def hyp(k):
    return Justification("hyp", (k,))


def mp(i, j):
    return Justification("mp", (i, j))


def mb(i):
    return Justification("mb", (i,))


def md(i):
    return Justification("md", (i,))


def br1(i, x):
    return Justification("br1", (i,), x)


def br2(i, x):
    return Justification("br2", (i,), x)


_RULE = re.compile(r"^(?P<kind>[a-z0-9]+):(?P<body>.+)$")


def parse_rule(text: str) -> Justification:
    m = _RULE.match(text.strip())
    if not m or m.group("kind") not in KINDS:
        raise SchemaError("rule", f"unknown rule {text!r}")
    kind, body = m.group("kind"), m.group("body")
    try:
        if kind in ("axiom", "lemma"):
            return Justification(kind, (), body)
        if kind in ("br1", "br2"):
            i, x = body.split(",")
            return Justification(kind, (int(i),), x.strip())
        refs = tuple(int(p) for p in body.split(","))
    except ValueError:
        raise SchemaError("rule", f"malformed rule {text!r}") from None
    arity = 2 if kind == "mp" else 1
    if len(refs) != arity:
        raise SchemaError("rule", f"{kind} takes {arity} index(es): {text!r}")
    return Justification(kind, refs)


@dataclass
class Derivation:
    mode: str  # "theorem" | "consequence"
    lines: list
    hypotheses: list = field(default_factory=list)
    logic: str = "QBK"
    signature: object = None

    def __post_init__(self):
        self.lines = [(f, j if isinstance(j, Justification) else parse_rule(j)) for f, j in self.lines]
        self.hypotheses = list(self.hypotheses)

    @property
    def conclusion(self):
        return self.lines[-1][0] if self.lines else None

    def check_structure(self) -> None:
        """Raise :class:`InvariantViolation` on the first broken structural
        condition (index order, mode restrictions, closed hypotheses)."""
        if self.mode not in ("theorem", "consequence"):
            raise InvariantViolation("mode", f"unknown mode {self.mode!r}")
        for k, h in enumerate(self.hypotheses):
            if free_vars(h):
                raise InvariantViolation("closed-hypotheses", f"hypothesis {k} has free variables")
        if self.mode == "theorem" and self.hypotheses:
            raise InvariantViolation("theorem-no-hypotheses", "theorem mode takes no hypotheses")
        for i, (_, j) in enumerate(self.lines):
            if j.kind == "hyp":
                if self.mode == "theorem":
                    raise InvariantViolation("theorem-no-hypotheses", f"line {i} cites a hypothesis")
                if not 0 <= j.refs[0] < len(self.hypotheses):
                    raise InvariantViolation("hypothesis-index", f"line {i} cites hypothesis {j.refs[0]}")
            elif j.kind in ("mb", "md") and self.mode == "consequence":
                raise InvariantViolation("consequence-rules", f"line {i} uses {j.kind} in consequence mode")
            elif j.kind not in ("axiom", "lemma"):
                for r in j.refs:
                    if not 0 <= r < i:
                        raise InvariantViolation("earlier-lines", f"line {i} cites line {r}")


@dataclass(frozen=True)
class LineReport:
    index: int
    ok: bool
    code: str
    message: str = ""
    binding: dict | None = None

    def __str__(self):
        status = "ok" if self.ok else "FAIL"
        return f"{self.index}: {status} [{self.code}] {self.message}".rstrip()


@dataclass(frozen=True)
class CheckReport:
    valid: bool
    lines: tuple
    problems: tuple = ()  # derivation-level problems

    def failures(self):
        return [r for r in self.lines if not r.ok]

    def codes(self):
        return [r.code for r in self.failures()] + [p[0] for p in self.problems]


def build_disjunction(formulas):
    """Right-nested disjunction; the empty list gives ``_|_``."""
    formulas = list(formulas)
    if not formulas:
        return BOTTOM
    out = formulas[-1]
    for f in reversed(formulas[:-1]):
        out = Or(f, out)
    return out


def _describe(binding):
    from ..frontend import print_formula
    parts = []
    for k, v in sorted(binding.items()):
        parts.append(f"{k}={v.name if hasattr(v, 'name') else print_formula(v)}")
    return ", ".join(parts)


def _check_line(d, i, f, j, earlier, allowed, store, trust_stated):
    def fail(code, msg):
        return LineReport(i, False, code, msg)

    def ok(code, msg="", binding=None):
        return LineReport(i, True, code, msg, binding)

    kind = j.kind
    if kind not in ("axiom", "lemma", "hyp"):
        for r in j.refs:
            if not 0 <= r < i:
                return fail("bad-index", f"line {r} is not an earlier line")
    if kind == "axiom":
        sid = j.name
        if sid not in SCHEMES:
            return fail("unknown-scheme", f"no scheme named {sid}")
        if sid not in allowed:
            return fail("scheme-not-in-logic", f"{sid} is not an axiom of {d.logic}")
        b = SCHEMES[sid].match(f)
        if b is None:
            if q_capture(sid, f):
                return fail("side-condition", f"{sid}: the instance term is not free for the variable")
            return fail("no-match", f"not an instance of {sid}")
        return ok("axiom", f"{sid} with {_describe(b)}", b)
    if kind == "lemma":
        if store is None or j.name not in store:
            return fail("unknown-lemma", f"no lemma named {j.name}")
        lem = store[j.name]
        if lem.proof is None and not trust_stated:
            return fail("untrusted-lemma", f"{j.name} is stated without proof")
        if not logic_schemes(lem.logic) <= allowed:
            return fail("scheme-not-in-logic", f"{j.name} needs {lem.logic}")
        b = lem.match(f)
        if b is None:
            return fail("no-match", f"not an instance of lemma {j.name}")
        return ok("lemma", f"{j.name} with {_describe(b)}", b)
    if kind == "hyp":
        if d.mode == "theorem":
            return fail("hyp-in-theorem-mode", "theorem mode has no hypotheses")
        k = j.refs[0]
        if not 0 <= k < len(d.hypotheses):
            return fail("bad-index", f"no hypothesis {k}")
        if d.hypotheses[k] != f:
            return fail("hyp-mismatch", f"line differs from hypothesis {k}")
        return ok("hyp")
    if kind == "mp":
        a, b = earlier[j.refs[0]], earlier[j.refs[1]]
        if b != Imp(a, f):
            return fail("mp-mismatch", f"line {j.refs[1]} is not line {j.refs[0]} -> this line")
        return ok("mp")
    if kind in ("mb", "md"):
        if d.mode == "consequence":
            return fail("rule-in-consequence-mode", f"{kind} is not a consequence rule")
        src = earlier[j.refs[0]]
        wrap = Box if kind == "mb" else Diamond
        if not isinstance(src, Imp) or f != Imp(wrap(src.left), wrap(src.right)):
            return fail(f"{kind}-mismatch", f"not the {kind} image of line {j.refs[0]}")
        return ok(kind)
    # br1 / br2
    src, x = earlier[j.refs[0]], j.name
    if not isinstance(src, Imp) or not isinstance(f, Imp):
        return fail("br-shape", "premise and conclusion must be implications")
    if kind == "br1":
        if f != Imp(src.left, Forall(x, src.right)):
            return fail("br-shape", f"not the br1 image of line {j.refs[0]} over {x}")
        if x in free_vars(src.left):
            return fail("side-condition", f"{x} is free in the antecedent")
    else:
        if f != Imp(Exists(x, src.left), src.right):
            return fail("br-shape", f"not the br2 image of line {j.refs[0]} over {x}")
        if x in free_vars(src.right):
            return fail("side-condition", f"{x} is free in the consequent")
    return ok(kind)


def check_derivation(d: Derivation, store=None, trust_stated: bool = False) -> CheckReport:
    """Check every line; never raises on a bad derivation.

    *store* maps lemma names to lemmas (defaults to the built-in store);
    lemmas stated without proof are accepted only with *trust_stated*.
    """
    if store is None:
        from .lemmas import STORE as store
    problems = []
    if d.mode not in ("theorem", "consequence"):
        problems.append(("mode", f"unknown mode {d.mode!r}"))
    for k, h in enumerate(d.hypotheses):
        if free_vars(h):
            problems.append(("closed-hypotheses", f"hypothesis {k} has free variables"))
    if d.mode == "theorem" and d.hypotheses:
        problems.append(("theorem-no-hypotheses", "theorem mode takes no hypotheses"))
    try:
        allowed = logic_schemes(d.logic)
    except ValueError as exc:
        problems.append(("logic", str(exc)))
        allowed = logic_schemes("QBK")
    earlier = []
    reports = []
    for i, (f, j) in enumerate(d.lines):
        reports.append(_check_line(d, i, f, j, earlier, allowed, store, trust_stated))
        earlier.append(f)
    valid = not problems and all(r.ok for r in reports)
    return CheckReport(valid, tuple(reports), tuple(problems))
