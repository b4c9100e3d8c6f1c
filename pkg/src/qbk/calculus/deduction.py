"""Constructive deduction theorem: discharge a closed hypothesis."""

from __future__ import annotations

from ..errors import NotApplicable
from ..syntax import And, Exists, Forall, Imp, free_vars
from .derivation import Derivation, axiom, br1, br2, check_derivation, hyp, lemma, mp

__all__ = ["deduction_transform"]


class _Out:
    def __init__(self):
        self.lines = []

    def add(self, f, j) -> int:
        self.lines.append((f, j))
        return len(self.lines) - 1


def deduction_transform(d: Derivation, discharge=None, store=None) -> Derivation:
    """From a consequence-mode derivation of Psi from Gamma and Phi, build one
    of ``Phi -> Psi`` from Gamma.

    *discharge* is the index of Phi among the hypotheses (default: the last
    one) or Phi itself.  Phi must be a sentence so that the side conditions of
    the quantifier rules survive.
    """
    if d.mode != "consequence":
        raise NotApplicable("only consequence-mode derivations can be transformed")
    if not d.lines:
        raise NotApplicable("empty derivation")
    if discharge is None:
        k = len(d.hypotheses) - 1
    elif isinstance(discharge, int):
        k = discharge
    else:
        if discharge not in d.hypotheses:
            raise NotApplicable("formula is not a hypothesis")
        k = d.hypotheses.index(discharge)
    if not 0 <= k < len(d.hypotheses):
        raise NotApplicable("no hypothesis to discharge")
    phi = d.hypotheses[k]
    if free_vars(phi):
        raise NotApplicable("the discharged hypothesis must be a sentence")
    report = check_derivation(d, store=store)
    if not report.valid:
        raise NotApplicable("input derivation does not check: " + "; ".join(map(str, report.failures()[:3])))

    remap = {i: (i if i < k else i - 1) for i in range(len(d.hypotheses)) if i != k}
    out = _Out()
    target = {}  # source line -> output line holding phi -> formula
    for i, (f, j) in enumerate(d.lines):
        goal = Imp(phi, f)
        if j.kind == "hyp" and j.refs[0] == k:
            a = out.add(Imp(phi, Imp(Imp(phi, phi), phi)), axiom("I1"))
            b = out.add(Imp(Imp(phi, Imp(Imp(phi, phi), phi)),
                            Imp(Imp(phi, Imp(phi, phi)), Imp(phi, phi))), axiom("I2"))
            c = out.add(Imp(Imp(phi, Imp(phi, phi)), Imp(phi, phi)), mp(a, b))
            e = out.add(Imp(phi, Imp(phi, phi)), axiom("I1"))
            target[i] = out.add(goal, mp(e, c))
        elif j.kind in ("axiom", "lemma", "hyp"):
            src = hyp(remap[j.refs[0]]) if j.kind == "hyp" else j
            a = out.add(f, src)
            b = out.add(Imp(f, goal), axiom("I1"))
            target[i] = out.add(goal, mp(a, b))
        elif j.kind == "mp":
            a, b = j.refs
            minor, major = d.lines[a][0], d.lines[b][0]
            s = out.add(Imp(Imp(phi, major), Imp(Imp(phi, minor), goal)), axiom("I2"))
            t = out.add(Imp(Imp(phi, minor), goal), mp(target[b], s))
            target[i] = out.add(goal, mp(target[a], t))
        elif j.kind == "br1":
            src = d.lines[j.refs[0]][0]
            x = j.name
            a, body = src.left, src.right
            imp_ = out.add(Imp(Imp(phi, Imp(a, body)), Imp(And(phi, a), body)), lemma("IMPORT"))
            s = out.add(Imp(And(phi, a), body), mp(target[j.refs[0]], imp_))
            t = out.add(Imp(And(phi, a), Forall(x, body)), br1(s, x))
            exp_ = out.add(Imp(Imp(And(phi, a), Forall(x, body)), goal), lemma("EXPORT"))
            target[i] = out.add(goal, mp(t, exp_))
        elif j.kind == "br2":
            src = d.lines[j.refs[0]][0]
            x = j.name
            a, body = src.left, src.right
            p1 = out.add(Imp(Imp(phi, Imp(a, body)), Imp(a, Imp(phi, body))), lemma("PERM"))
            s = out.add(Imp(a, Imp(phi, body)), mp(target[j.refs[0]], p1))
            t = out.add(Imp(Exists(x, a), Imp(phi, body)), br2(s, x))
            p2 = out.add(Imp(Imp(Exists(x, a), Imp(phi, body)), goal), lemma("PERM"))
            target[i] = out.add(goal, mp(t, p2))
        else:
            raise NotApplicable(f"line {i}: rule {j.kind} cannot occur in consequence mode")
    # each source line ends with its own image, so the last output line is phi -> psi
    lines = out.lines
    hyps = [h for i, h in enumerate(d.hypotheses) if i != k]
    return Derivation("consequence", lines, hyps, logic=d.logic, signature=d.signature)

