"""Schematic theorems that derivations may cite as ``lemma:NAME``.

A lemma's statement uses the placeholders ``$A``, ``$B``, ``$C``; any
formulas may be substituted for them.  Each proved lemma carries a
theorem-mode derivation over the placeholders that uses only propositional
axioms and modus ponens, so substituting into it yields a derivation of the
instance.  Lemmas stated without proof are accepted only on request.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..syntax import And, Atom, Imp, Or, SNeg, neg, strong_iff
from .deduction import deduction_transform
from .derivation import Derivation, axiom, check_derivation, hyp, mp
from .schemes import match_pattern

__all__ = ["Lemma", "STORE", "ProofBuilder", "lemma_names"]

A, B, C = Atom("$A"), Atom("$B"), Atom("$C")


@dataclass(frozen=True)
class Lemma:
    name: str
    statement: object
    proof: Derivation | None
    logic: str = "QBK"
    summary: str = ""

    def match(self, f):
        return match_pattern(self.statement, f)


class ProofBuilder:
    """Accumulates a consequence-mode derivation from hypotheses with
    axioms and modus ponens; :meth:`discharge` applies the deduction
    transform to all hypotheses, last first."""

    def __init__(self, *hypotheses):
        self.hypotheses = list(hypotheses)
        self.lines = []

    def _add(self, f, j):
        self.lines.append((f, j))
        return len(self.lines) - 1

    def hyp(self, k):
        return self._add(self.hypotheses[k], hyp(k))

    def ax(self, sid, f):
        return self._add(f, axiom(sid))

    def mp(self, i, j):
        major = self.lines[j][0]
        if not isinstance(major, Imp) or major.left != self.lines[i][0]:
            raise ValueError(f"lines {i} and {j} do not fit modus ponens")
        return self._add(major.right, mp(i, j))

    def formula(self, i):
        return self.lines[i][0]

    def discharge(self) -> Derivation:
        d = Derivation("consequence", self.lines, self.hypotheses)
        while d.hypotheses:
            d = deduction_transform(d, store={})
        return Derivation("theorem", d.lines)


def _identity():
    b = ProofBuilder(A)
    b.hyp(0)
    return b.discharge()


def _trans():
    # (A -> B) -> ((B -> C) -> (A -> C))
    b = ProofBuilder(Imp(A, B), Imp(B, C), A)
    a = b.hyp(2)
    ab = b.hyp(0)
    bb = b.mp(a, ab)
    bc = b.hyp(1)
    b.mp(bb, bc)
    return b.discharge()


def _perm():
    # (A -> (B -> C)) -> (B -> (A -> C))
    b = ProofBuilder(Imp(A, Imp(B, C)), B, A)
    a = b.hyp(2)
    abc = b.hyp(0)
    bc = b.mp(a, abc)
    bb = b.hyp(1)
    b.mp(bb, bc)
    return b.discharge()


def _import():
    # (A -> (B -> C)) -> (A & B -> C)
    b = ProofBuilder(Imp(A, Imp(B, C)), And(A, B))
    ab = b.hyp(1)
    a = b.mp(ab, b.ax("C1", Imp(And(A, B), A)))
    bb = b.mp(ab, b.ax("C2", Imp(And(A, B), B)))
    bc = b.mp(a, b.hyp(0))
    b.mp(bb, bc)
    return b.discharge()


def _export():
    # (A & B -> C) -> (A -> (B -> C))
    b = ProofBuilder(Imp(And(A, B), C), A, B)
    a = b.hyp(1)
    bb = b.hyp(2)
    pair = b.mp(bb, b.mp(a, b.ax("C3", Imp(A, Imp(B, And(A, B))))))
    b.mp(pair, b.hyp(0))
    return b.discharge()


def _contra():
    # (A -> B) -> (~B -> ~A) with classical negation
    b = ProofBuilder(Imp(A, B), neg(B), A)
    bb = b.mp(b.hyp(2), b.hyp(0))
    b.mp(bb, b.hyp(1))
    return b.discharge()


def _dni():
    # A -> !!A
    b = ProofBuilder(A, neg(A))
    b.mp(b.hyp(0), b.hyp(1))
    return b.discharge()


def _dne():
    # !!A -> A, through excluded middle and ex falso
    inner = ProofBuilder(neg(neg(A)), neg(A))
    bot = inner.mp(inner.hyp(1), inner.hyp(0))
    inner.mp(bot, inner.ax("N2", Imp(inner.formula(bot), A)))
    step = deduction_transform(Derivation("consequence", inner.lines, inner.hypotheses), store={})
    # step proves !A -> A from !!A; finish by cases on A | !A
    b = ProofBuilder(neg(neg(A)))
    b.lines = list(step.lines)
    na_a = len(b.lines) - 1
    ident = _identity()
    off = len(b.lines)
    for f, j in ident.lines:
        refs = tuple(r + off for r in j.refs) if j.kind == "mp" else j.refs
        b.lines.append((f, type(j)(j.kind, refs, j.name)))
    a_a = len(b.lines) - 1
    d3 = b.ax("D3", Imp(Imp(A, A), Imp(Imp(neg(A), A), Imp(Or(A, neg(A)), A))))
    cases = b.mp(na_a, b.mp(a_a, d3))
    b.mp(b.ax("N1", Or(A, neg(A))), cases)
    return b.discharge()


def _build():
    proved = {
        "ID": (Imp(A, A), _identity, "A -> A"),
        "TRANS": (Imp(Imp(A, B), Imp(Imp(B, C), Imp(A, C))), _trans, "chain two implications"),
        "PERM": (Imp(Imp(A, Imp(B, C)), Imp(B, Imp(A, C))), _perm, "swap antecedents"),
        "IMPORT": (Imp(Imp(A, Imp(B, C)), Imp(And(A, B), C)), _import, "curried to conjunctive antecedent"),
        "EXPORT": (Imp(Imp(And(A, B), C), Imp(A, Imp(B, C))), _export, "conjunctive to curried antecedent"),
        "CONTRA": (Imp(Imp(A, B), Imp(neg(B), neg(A))), _contra, "contraposition"),
        "DNI": (Imp(A, neg(neg(A))), _dni, "double negation introduction"),
        "DNE": (Imp(neg(neg(A)), A), _dne, "double negation elimination"),
    }
    store = {}
    for name, (stmt, make, summary) in proved.items():
        proof = make()
        if proof.conclusion != stmt:
            raise AssertionError(f"lemma {name}: proof concludes something else")
        store[name] = Lemma(name, stmt, proof, "QBK", summary)
    stated = {
        "NNEG_SNEG": (strong_iff(neg(neg(A)), SNeg(neg(A))),
                      "double classical negation is strongly equivalent to strong negation of classical negation"),
        "IMP_DISJ": (strong_iff(Imp(A, B), Or(neg(A), B)),
                     "implication is strongly equivalent to the classical disjunction"),
    }
    for name, (stmt, summary) in stated.items():
        store[name] = Lemma(name, stmt, None, "QBK", summary)
    return store


STORE: dict = _build()


def lemma_names() -> list:
    return sorted(STORE)


def verify_store(store=None) -> dict:
    """Re-check every proved lemma; returns ``{name: CheckReport}``."""
    store = STORE if store is None else store
    return {name: check_derivation(lem.proof, store={}) for name, lem in store.items()
            if lem.proof is not None}
