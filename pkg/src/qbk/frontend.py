"""Concrete syntax for formulas and the JSON formats for models and derivations.

Grammar, loosest first::

    form   := quant | imp
    quant  := ("forall" | "exists") VAR "." form
    imp    := or (("->" | "<->" | "<=>") form)?
    or     := and ("|" and)*
    and    := unary ("&" unary)*
    unary  := ("~" | "!" | "[]" | "<>") unary | ("forall" | "exists") VAR "." unary | atom
    atom   := "_|_" | IDENT ("(" term ("," term)* ")")? | "(" form ")"

A quantifier at the start of a form scopes as far right as possible; one in
operand position (after a prefix operator, or as an operand of ``&``/``|``)
takes a unary body.  ``!A`` is ``A -> _|_``; ``<->`` and ``<=>`` expand to
conjunctions of implications.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

import jsonschema

from .errors import ArityError, FormulaSyntaxError, InvariantViolation, SchemaError, UnknownSymbol
from .syntax import (
    BOTTOM, And, Atom, Bottom, Box, Const, Diamond, Exists, Forall, Imp, Or, SNeg,
    Signature, Var, check_formula, iff, neg, strong_iff, subformulas,
)

__all__ = [
    "parse_formula", "print_formula", "infer_signature", "SourceDocument",
    "load_model", "dump_model", "load_derivation", "dump_derivation",
    "MODEL_SCHEMA", "DERIVATION_SCHEMA",
]

KEYWORDS = ("forall", "exists")
_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op><=>|<->|->|<>|\[\]|_\|_|[~!&|(),.])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list:
    out, i = [], 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            raise FormulaSyntaxError(i, "a token", text)
        if m.lastgroup != "ws":
            kind = m.lastgroup
            if kind == "ident" and m.group() in KEYWORDS:
                kind = "kw"
            out.append(_Tok(kind, m.group(), i))
        i = m.end()
    out.append(_Tok("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, sig: Signature | None, constants):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.sig = sig
        self.constants = frozenset(constants) | (sig.constants if sig else frozenset())
        self.arity: dict = {}

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str, what: str | None = None) -> _Tok:
        t = self.peek()
        if t.text != text or t.kind == "ident":
            raise FormulaSyntaxError(t.pos, what or repr(text), self.text)
        return self.take()

    def fail(self, what: str):
        raise FormulaSyntaxError(self.peek().pos, what, self.text)

    # -- grammar ---------------------------------------------------------

    def form(self):
        if self.peek().kind == "kw":
            return self.quant(self.form)
        return self.imp()

    def quant(self, body):
        kw = self.take().text
        t = self.peek()
        if t.kind != "ident":
            self.fail("a variable")
        if t.text in self.constants:
            self.fail("a variable (not a constant)")
        self.take()
        self.expect(".", "'.' after the bound variable")
        cls = Forall if kw == "forall" else Exists
        return cls(t.text, body())

    def imp(self):
        left = self.disj()
        op = self.peek().text if self.peek().kind == "op" else None
        if op in ("->", "<->", "<=>"):
            self.take()
            right = self.form()
            if op == "->":
                return Imp(left, right)
            return iff(left, right) if op == "<->" else strong_iff(left, right)
        return left

    def disj(self):
        f = self.conj()
        while self.peek().kind == "op" and self.peek().text == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.peek().kind == "op" and self.peek().text == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        t = self.peek()
        if t.kind == "kw":
            return self.quant(self.unary)
        if t.kind == "op" and t.text in ("~", "!", "[]", "<>"):
            self.take()
            body = self.unary()
            if t.text == "~":
                return SNeg(body)
            if t.text == "!":
                return neg(body)
            return Box(body) if t.text == "[]" else Diamond(body)
        return self.atom()

    def atom(self):
        t = self.peek()
        if t.kind == "op" and t.text == "_|_":
            self.take()
            return BOTTOM
        if t.kind == "op" and t.text == "(":
            self.take()
            f = self.form()
            self.expect(")", "')'")
            return f
        if t.kind != "ident":
            self.fail("a formula")
        self.take()
        name = t.text
        if name in self.constants:
            raise FormulaSyntaxError(t.pos, "a predicate, not the constant " + name, self.text)
        args = []
        if self.peek().kind == "op" and self.peek().text == "(":
            self.take()
            args.append(self.term())
            while self.peek().kind == "op" and self.peek().text == ",":
                self.take()
                args.append(self.term())
            self.expect(")", "',' or ')'")
        self._note_arity(name, len(args), t.pos)
        return Atom(name, tuple(args))

    def term(self):
        t = self.peek()
        if t.kind != "ident":
            self.fail("a term")
        self.take()
        return Const(t.text) if t.text in self.constants else Var(t.text)

    def _note_arity(self, name, k, pos):
        if self.sig is not None:
            if name not in self.sig.predicates:
                raise UnknownSymbol(f"unknown predicate {name!r} at position {pos}")
            if self.sig.predicates[name] != k:
                raise ArityError(f"{name} expects {self.sig.predicates[name]} argument(s), "
                                 f"got {k} at position {pos}")
        elif self.arity.setdefault(name, k) != k:
            raise ArityError(f"{name} used with arities {self.arity[name]} and {k}")


def parse_formula(text: str, sig: Signature | None = None, constants=()):
    """Parse *text*; identifiers in term position are variables unless they
    are constants of *sig* (or listed in *constants*)."""
    p = _Parser(text, sig, constants)
    f = p.form()
    if p.peek().kind != "eof":
        p.fail("end of input")
    if sig is not None:
        check_formula(f, sig)
    return f


# -- printing ---------------------------------------------------------------

def _atom_text(f: Atom) -> str:
    if not f.args:
        return f.pred
    return f"{f.pred}({', '.join(t.name for t in f.args)})"


def print_formula(f) -> str:
    """Canonical text; ``parse_formula`` of the result gives back *f* when
    the constants of *f* are declared."""
    return _form(f)


def _is_neg(f) -> bool:
    return isinstance(f, Imp) and isinstance(f.right, Bottom)


def _form(f) -> str:
    if isinstance(f, (Forall, Exists)):
        return f"{_kw(f)} {f.var}. {_form(f.body)}"
    if isinstance(f, Imp) and not _is_neg(f):
        return f"{_disj(f.left)} -> {_form(f.right)}"
    return _disj(f)


def _disj(f) -> str:
    if isinstance(f, Or):
        return f"{_disj(f.left)} | {_conj(f.right)}"
    return _conj(f)


def _conj(f) -> str:
    if isinstance(f, And):
        return f"{_conj(f.left)} & {_unary(f.right)}"
    return _unary(f)


def _unary(f, after_prefix: bool = False) -> str:
    if isinstance(f, SNeg):
        return "~" + _unary(f.body, True)
    if _is_neg(f):
        return "!" + _unary(f.left, True)
    if isinstance(f, Box):
        return "[]" + _unary(f.body, True)
    if isinstance(f, Diamond):
        return "<>" + _unary(f.body, True)
    if isinstance(f, Atom):
        return _atom_text(f)
    if isinstance(f, Bottom):
        return "_|_"
    if isinstance(f, (Forall, Exists)) and after_prefix:
        return f"{_kw(f)} {f.var}. {_unary(f.body, True)}"
    return f"({_form(f)})"


def _kw(f) -> str:
    return "forall" if isinstance(f, Forall) else "exists"


def infer_signature(formulas, constants=()) -> Signature:
    preds: dict = {}
    consts = set(constants)
    for f in formulas:
        for g in subformulas(f):
            if isinstance(g, Atom):
                if preds.setdefault(g.pred, len(g.args)) != len(g.args):
                    raise ArityError(f"{g.pred} used with arities {preds[g.pred]} and {len(g.args)}")
                consts.update(t.name for t in g.args if isinstance(t, Const))
    return Signature(preds, frozenset(consts))


# -- documents --------------------------------------------------------------

@dataclass(frozen=True)
class SourceDocument:
    text: str
    kind: str  # "formula" | "model" | "derivation"

    @classmethod
    def from_path(cls, path, kind: str) -> SourceDocument:
        return cls(Path(path).read_text(encoding="utf-8"), kind)


_ELEM = {"type": ["string", "integer"]}
_SIG_SCHEMA = {
    "type": "object",
    "properties": {
        "predicates": {"type": "object",
                       "additionalProperties": {"type": "integer", "minimum": 0}},
        "constants": {"type": "array", "items": {"type": "string", "minLength": 1},
                      "uniqueItems": True},
    },
    "required": ["predicates"],
    "additionalProperties": False,
}
_EXT = {"type": "object", "additionalProperties": {
    "type": "object", "additionalProperties": {
        "type": "array", "items": {"type": "array", "items": _ELEM}}}}

MODEL_SCHEMA = {
    "type": "object",
    "properties": {
        "signature": _SIG_SCHEMA,
        "worlds": {"type": "array", "items": {"type": "string", "minLength": 1}, "minItems": 1},
        "access": {"type": "array", "items": {
            "type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2}},
        "domains": {"type": "object", "additionalProperties": {"type": "array", "items": _ELEM}},
        "const_interp": {"type": "object", "additionalProperties": {
            "type": "object", "additionalProperties": _ELEM}},
        "positive": _EXT,
        "negative": _EXT,
    },
    "required": ["signature", "worlds", "access", "domains"],
    "additionalProperties": False,
}

RULE_PATTERN = (r"^(axiom:[A-Za-z0-9_.]+|lemma:[A-Za-z0-9_.]+|hyp:\d+|mp:\d+,\d+|mb:\d+|md:\d+"
                r"|br1:\d+,[A-Za-z_][A-Za-z0-9_']*|br2:\d+,[A-Za-z_][A-Za-z0-9_']*)$")

DERIVATION_SCHEMA = {
    "type": "object",
    "properties": {
        "mode": {"enum": ["theorem", "consequence"]},
        "logic": {"type": "string"},
        "signature": _SIG_SCHEMA,
        "hypotheses": {"type": "array", "items": {"type": "string"}},
        "lines": {"type": "array", "items": {
            "type": "object",
            "properties": {"formula": {"type": "string"},
                           "rule": {"type": "string", "pattern": RULE_PATTERN},
                           "note": {"type": "string"}},
            "required": ["formula", "rule"],
            "additionalProperties": False}},
        "description": {"type": "string"},
    },
    "required": ["mode", "lines"],
    "additionalProperties": False,
}


def _json(doc):
    if isinstance(doc, SourceDocument):
        doc = doc.text
    if isinstance(doc, Path):
        doc = doc.read_text(encoding="utf-8")
    if isinstance(doc, (str, bytes)):
        try:
            return json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SchemaError("$", f"not valid JSON: {exc}") from None
    return doc


def _validate(data, schema):
    errors = sorted(jsonschema.Draft202012Validator(schema).iter_errors(data),
                    key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        path = "$" + "".join(f"[{p!r}]" if isinstance(p, str) else f"[{p}]" for p in e.absolute_path)
        raise SchemaError(path, e.message)


def _signature(data) -> Signature:
    try:
        return Signature(data.get("predicates", {}), frozenset(data.get("constants", [])))
    except ValueError as exc:
        raise InvariantViolation("signature", str(exc)) from None


def load_model(doc):
    """Load and fully validate a model document (text, path, dict or
    :class:`SourceDocument`)."""
    from .semantics.model import KripkeModel
    data = _json(doc)
    _validate(data, MODEL_SCHEMA)
    sig = _signature(data["signature"])
    return KripkeModel(
        sig, data["worlds"], [tuple(p) for p in data["access"]], data["domains"],
        data.get("const_interp", {}),
        {w: {p: [tuple(t) for t in ts] for p, ts in preds.items()}
         for w, preds in data.get("positive", {}).items()},
        {w: {p: [tuple(t) for t in ts] for p, ts in preds.items()}
         for w, preds in data.get("negative", {}).items()},
    )


def dump_model(m) -> dict:
    from .semantics.model import individual_key

    def ext(table):
        out = {}
        for w in m.worlds:
            preds = {p: sorted([list(t) for t in ts], key=lambda t: [individual_key(e) for e in t])
                     for p, ts in sorted(table.get(w, {}).items()) if ts}
            if preds:
                out[w] = preds
        return out

    order = {w: i for i, w in enumerate(m.worlds)}
    return {
        "signature": m.signature.to_json(),
        "worlds": list(m.worlds),
        "access": [list(p) for p in sorted(m.access, key=lambda p: (order[p[0]], order[p[1]]))],
        "domains": {w: sorted(m.domains[w], key=individual_key) for w in m.worlds},
        "const_interp": {w: dict(sorted(m.const_interp.get(w, {}).items())) for w in m.worlds},
        "positive": ext(m.positive),
        "negative": ext(m.negative),
    }


def load_derivation(doc):
    """Load a derivation document; formulas are parsed against the declared
    signature, or one inferred from all formulas of the document."""
    from .calculus.derivation import Derivation, parse_rule
    data = _json(doc)
    _validate(data, DERIVATION_SCHEMA)
    consts = data.get("signature", {}).get("constants", [])
    sig = _signature(data["signature"]) if "signature" in data else None

    def parse(text, where):
        try:
            return parse_formula(text, sig, consts)
        except FormulaSyntaxError as exc:
            raise SchemaError(where, f"formula syntax: {exc}") from None

    hyps = [parse(h, f"$['hypotheses'][{i}]") for i, h in enumerate(data.get("hypotheses", []))]
    lines = []
    for i, line in enumerate(data["lines"]):
        f = parse(line["formula"], f"$['lines'][{i}]['formula']")
        lines.append((f, parse_rule(line["rule"])))
    if sig is None:
        sig = infer_signature(hyps + [f for f, _ in lines], consts)
    d = Derivation(data["mode"], lines, hyps, logic=data.get("logic", "QBK"), signature=sig)
    d.check_structure()
    return d


def dump_derivation(d) -> dict:
    out = {"mode": d.mode, "logic": d.logic}
    if d.signature is not None:
        out["signature"] = d.signature.to_json()
    if d.hypotheses:
        out["hypotheses"] = [print_formula(h) for h in d.hypotheses]
    out["lines"] = [{"formula": print_formula(f), "rule": str(j)} for f, j in d.lines]
    return out
