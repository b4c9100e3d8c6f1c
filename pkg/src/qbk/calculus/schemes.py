"""Axiom schemes and matching of formulas against them.

Patterns are ordinary formulas whose nullary atoms named ``$Phi``, ``$Psi``
and ``$Theta`` stand for arbitrary formulas and whose quantifiers may bind
the variable placeholder ``$x``.  Biconditionals are expanded before
matching; each of them also yields half-schemes (``X.lr``, ``X.rl`` and,
for strong biconditionals, ``X.nlr``, ``X.nrl``) that are marked derived.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..syntax import (
    BOTTOM, And, Atom, Bottom, Box, Diamond, Exists, Forall, Imp, Or, SNeg,
    Var, children, is_free_for, neg, rebuild, substitute_var,
)

__all__ = [
    "Scheme", "SCHEMES", "BASE_IDS", "EXTENSION_IDS", "LOGICS",
    "match_scheme", "match_pattern", "instantiate", "logic_schemes",
    "quantifier_instance", "is_metavar",
]

PHI, PSI, THETA = Atom("$Phi"), Atom("$Psi"), Atom("$Theta")
X = "$x"


def is_metavar(f) -> bool:
    return isinstance(f, Atom) and not f.args and f.pred.startswith("$")


def _iff(a, b):
    return And(Imp(a, b), Imp(b, a))


def _siff(a, b):
    return And(_iff(a, b), _iff(SNeg(a), SNeg(b)))


@dataclass(frozen=True)
class Scheme:
    id: str
    pattern: object  # a pattern formula, or None for the quantifier schemes
    derived: bool = False
    extension: bool = False
    matcher: Callable | None = None

    def match(self, f):
        if self.matcher is not None:
            return self.matcher(f)
        return match_pattern(self.pattern, f)


def match_pattern(pattern, f, binding=None):
    """Binding of placeholders making *pattern* syntactically equal to *f*,
    or ``None``."""
    b = dict(binding or {})
    return b if _match(pattern, f, b) else None


def _match(p, f, b) -> bool:
    if is_metavar(p):
        key = p.pred[1:]
        if key in b:
            return b[key] == f
        b[key] = f
        return True
    if type(p) is not type(f):
        return False
    if isinstance(p, (Atom, Bottom)):
        return p == f
    if isinstance(p, (Forall, Exists)):
        if p.var.startswith("$"):
            key = p.var[1:]
            if b.setdefault(key, Var(f.var)) != Var(f.var):
                return False
        elif p.var != f.var:
            return False
        return _match(p.body, f.body, b)
    return all(_match(pk, fk, b) for pk, fk in zip(children(p), children(f)))


def _find_term(phi, inst, x):
    """Walk *phi* and *inst* in parallel and return the term standing where
    *phi* has a free ``x``.  ``None`` means no consistent candidate (or no
    free occurrence, in which case ``x`` itself is returned)."""
    found = []

    def walk(g, h, bound):
        if type(g) is not type(h):
            return False
        if isinstance(g, Atom):
            if g.pred != h.pred or len(g.args) != len(h.args):
                return False
            for a, c in zip(g.args, h.args):
                if a == Var(x) and x not in bound:
                    found.append(c)
            return True
        if isinstance(g, (Forall, Exists)):
            if g.var != h.var:
                return False
            return walk(g.body, h.body, bound | {g.var})
        return all(walk(a, c, bound) for a, c in zip(children(g), children(h)))

    if not walk(phi, inst, frozenset()):
        return None
    if not found:
        return Var(x)
    if any(t != found[0] for t in found):
        return None
    return found[0]


def quantifier_instance(phi, x, inst):
    """The term ``t`` with ``inst == phi(x/t)`` and ``t`` free for ``x``, or
    ``None``; the second value reports a capture (shape fits but ``t`` is not
    free for ``x``)."""
    t = _find_term(phi, inst, x)
    if t is None:
        return None, False
    if not is_free_for(t, x, phi):
        return None, True
    if substitute_var(phi, x, t) != inst:
        return None, False
    return t, False


def _match_q1(f):
    if isinstance(f, Imp) and isinstance(f.left, Forall):
        t, _ = quantifier_instance(f.left.body, f.left.var, f.right)
        if t is not None:
            return {"Phi": f.left.body, "x": Var(f.left.var), "t": t}
    return None


def _match_q2(f):
    if isinstance(f, Imp) and isinstance(f.right, Exists):
        t, _ = quantifier_instance(f.right.body, f.right.var, f.left)
        if t is not None:
            return {"Phi": f.right.body, "x": Var(f.right.var), "t": t}
    return None


def q_capture(scheme_id: str, f) -> bool:
    """Does *f* have the shape of Q1/Q2 with a captured instance term?"""
    if scheme_id == "Q1" and isinstance(f, Imp) and isinstance(f.left, Forall):
        return quantifier_instance(f.left.body, f.left.var, f.right)[1]
    if scheme_id == "Q2" and isinstance(f, Imp) and isinstance(f.right, Exists):
        return quantifier_instance(f.right.body, f.right.var, f.left)[1]
    return False


def _catalogue():
    out = {}

    def add(sid, pattern, extension=False):
        out[sid] = Scheme(sid, pattern, extension=extension)

    def add_iff(sid, a, b, strong=False):
        add(sid, _siff(a, b) if strong else _iff(a, b))
        halves = {"lr": Imp(a, b), "rl": Imp(b, a)}
        if strong:
            halves.update({"nlr": Imp(SNeg(a), SNeg(b)), "nrl": Imp(SNeg(b), SNeg(a))})
        for suffix, pat in halves.items():
            hid = f"{sid}.{suffix}"
            out[hid] = Scheme(hid, pat, derived=True)

    add("I1", Imp(PHI, Imp(PSI, PHI)))
    add("I2", Imp(Imp(PHI, Imp(PSI, THETA)), Imp(Imp(PHI, PSI), Imp(PHI, THETA))))
    add("C1", Imp(And(PHI, PSI), PHI))
    add("C2", Imp(And(PHI, PSI), PSI))
    add("C3", Imp(PHI, Imp(PSI, And(PHI, PSI))))
    add("D1", Imp(PHI, Or(PHI, PSI)))
    add("D2", Imp(PSI, Or(PHI, PSI)))
    add("D3", Imp(Imp(PHI, THETA), Imp(Imp(PSI, THETA), Imp(Or(PHI, PSI), THETA))))
    add("N1", Or(PHI, neg(PHI)))
    add("N2", Imp(BOTTOM, PHI))
    add_iff("SN1", SNeg(SNeg(PHI)), PHI)
    add_iff("SN2", SNeg(Imp(PHI, PSI)), And(PHI, SNeg(PSI)))
    add_iff("SN3", SNeg(Or(PHI, PSI)), And(SNeg(PHI), SNeg(PSI)))
    add_iff("SN4", SNeg(And(PHI, PSI)), Or(SNeg(PHI), SNeg(PSI)))
    add("SN5", SNeg(BOTTOM))
    add("K1", Imp(And(Box(PHI), Box(PSI)), Box(And(PHI, PSI))))
    add("K2", Box(Imp(PHI, PHI)))
    add_iff("M1", neg(Box(PHI)), Diamond(neg(PHI)))
    add_iff("M2", neg(Diamond(PHI)), Box(neg(PHI)))
    add_iff("M3", Box(PHI), SNeg(Diamond(SNeg(PHI))), strong=True)
    add_iff("M4", Diamond(PHI), SNeg(Box(SNeg(PHI))), strong=True)
    out["Q1"] = Scheme("Q1", None, matcher=_match_q1)
    out["Q2"] = Scheme("Q2", None, matcher=_match_q2)
    add_iff("Q3", SNeg(Forall(X, PHI)), Exists(X, SNeg(PHI)))
    add_iff("Q4", SNeg(Exists(X, PHI)), Forall(X, SNeg(PHI)))
    add("EXC", Or(PHI, SNeg(PHI)), extension=True)
    add("EXP", Imp(SNeg(PHI), Imp(PHI, PSI)), extension=True)
    add("BA", Imp(Diamond(Exists(X, PHI)), Exists(X, Diamond(PHI))), extension=True)
    add("BABOX", Imp(Forall(X, Box(PHI)), Box(Forall(X, PHI))), extension=True)
    return out


SCHEMES: dict = _catalogue()
BASE_IDS = ("I1", "I2", "C1", "C2", "C3", "D1", "D2", "D3", "N1", "N2",
            "SN1", "SN2", "SN3", "SN4", "SN5", "K1", "K2",
            "M1", "M2", "M3", "M4", "Q1", "Q2", "Q3", "Q4")
EXTENSION_IDS = ("EXC", "EXP", "BA", "BABOX")

LOGICS = {
    "QBK": (),
    "QBKo": ("EXC",),
    "QB3K": ("EXP",),
    "QB3Ko": ("EXC", "EXP"),
    "QBKsharp": ("BA",),
    "QBKsharp_box": ("BABOX",),
}


def logic_schemes(logic: str) -> frozenset:
    """Scheme ids available in a logic; ``+`` joins presets."""
    ids = {sid for sid, s in SCHEMES.items() if not s.extension}
    for part in logic.split("+"):
        if part not in LOGICS:
            raise ValueError(f"unknown logic {part!r}; known: {sorted(LOGICS)}")
        ids.update(LOGICS[part])
    return frozenset(ids)


def match_scheme(sid: str, f):
    """Instantiation of scheme *sid* producing *f*, or ``None``.

    Bindings map ``Phi``, ``Psi``, ``Theta`` to formulas and ``x``/``t`` to
    terms.
    """
    return SCHEMES[sid].match(f)


def _inst(p, b):
    if is_metavar(p):
        return b[p.pred[1:]]
    if isinstance(p, (Forall, Exists)):
        var = b["x"].name if p.var.startswith("$") else p.var
        return type(p)(var, _inst(p.body, b))
    kids = children(p)
    return rebuild(p, [_inst(k, b) for k in kids]) if kids else p


def instantiate(sid: str, binding: dict):
    """Build the instance of *sid* under *binding* (``x`` a variable or its
    name, ``t`` a term, for the quantifier schemes)."""
    b = dict(binding)
    if isinstance(b.get("x"), str):
        b["x"] = Var(b["x"])
    if sid in ("Q1", "Q2"):
        phi, x = b["Phi"], b["x"].name
        t = b.get("t", Var(x))
        inst = substitute_var(phi, x, t)
        return Imp(Forall(x, phi), inst) if sid == "Q1" else Imp(inst, Exists(x, phi))
    return _inst(SCHEMES[sid].pattern, b)

