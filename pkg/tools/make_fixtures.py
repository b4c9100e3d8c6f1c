"""Regenerate the JSON fixtures shipped in ``src/qbk/fixtures``."""

from __future__ import annotations

import json
from pathlib import Path

from qbk.calculus import Derivation, check_derivation
from qbk.calculus.derivation import axiom, br1, br2, lemma, mb, md, mp
from qbk.calculus.lemmas import STORE
from qbk.calculus.schemes import instantiate, match_scheme
from qbk.frontend import dump_derivation, dump_model
from qbk.nelson import remark28_fixture
from qbk.semantics import KripkeModel
from qbk.syntax import BOTTOM, And, Atom, Box, Diamond, Exists, Forall, Imp, SNeg, Signature, Var, neg

OUT = Path(__file__).resolve().parents[1] / "src" / "qbk" / "fixtures"


class Builder:
    """Theorem-mode derivation with checked steps and optional notes."""

    def __init__(self):
        self.lines = []
        self.notes = {}

    def _add(self, f, j, note=None):
        self.lines.append((f, j))
        if note:
            self.notes[len(self.lines) - 1] = note
        return len(self.lines) - 1

    def f(self, i):
        return self.lines[i][0]

    def ax(self, sid, f, note=None):
        assert match_scheme(sid, f) is not None, (sid, f)
        return self._add(f, axiom(sid), note)

    def lem(self, name, f, note=None):
        assert STORE[name].match(f) is not None, (name, f)
        return self._add(f, lemma(name), note)

    def mp(self, i, j, note=None):
        major = self.f(j)
        assert isinstance(major, Imp) and major.left == self.f(i)
        return self._add(major.right, mp(i, j), note)

    def mb(self, i, note=None):
        g = self.f(i)
        return self._add(Imp(Box(g.left), Box(g.right)), mb(i), note)

    def md(self, i, note=None):
        g = self.f(i)
        return self._add(Imp(Diamond(g.left), Diamond(g.right)), md(i), note)

    def br1(self, i, x, note=None):
        g = self.f(i)
        return self._add(Imp(g.left, Forall(x, g.right)), br1(i, x), note)

    def br2(self, i, x, note=None):
        g = self.f(i)
        return self._add(Imp(Exists(x, g.left), g.right), br2(i, x), note)

    def trans(self, i, j, note=None):
        a, b = self.f(i), self.f(j)
        t = self.lem("TRANS", Imp(a, Imp(b, Imp(a.left, b.right))))
        return self.mp(j, self.mp(i, t), note)

    def perm(self, i, note=None):
        g = self.f(i)
        a, b, c = g.left, g.right.left, g.right.right
        return self.mp(i, self.lem("PERM", Imp(g, Imp(b, Imp(a, c)))), note)

    def contra(self, i, note=None):
        g = self.f(i)
        return self.mp(i, self.lem("CONTRA", Imp(g, Imp(neg(g.right), neg(g.left)))), note)

    def half(self, sid, binding, first, note=None):
        both = instantiate(sid, binding)
        k = self.ax(sid, both)
        pick = "C1" if first else "C2"
        side = both.left if first else both.right
        return self.mp(k, self.ax(pick, Imp(both, side)), note)

    def derivation(self, logic):
        return Derivation("theorem", self.lines, [], logic)


def barcan_box():
    x = "x"
    phi = Atom("P", (Var(x),))
    nphi = neg(phi)
    b = Builder()
    # 1
    l1 = b.ax("BA", Imp(Diamond(Exists(x, nphi)), Exists(x, Diamond(nphi))),
              "milestone 1: the Barcan instance for !P(x)")
    # 2
    l2 = b.contra(l1, "milestone 2: contraposition of milestone 1")
    # 3
    q = b.ax("Q1", Imp(Forall(x, neg(Diamond(nphi))), neg(Diamond(nphi))))
    q = b.perm(q)
    q = b.br2(q, x)
    a3 = b.perm(q)
    b3 = b.half("M2", {"Phi": Exists(x, nphi)}, True)
    l3 = b.trans(b.trans(a3, l2), b3, "milestone 3: forall x.!<>!P(x) -> []!exists x.!P(x)")
    # 4
    m2 = b.half("M2", {"Phi": nphi}, False)
    q = b.ax("Q1", Imp(Forall(x, Box(neg(nphi))), Box(neg(nphi))))
    q = b.trans(q, m2)
    q = b.br1(q, x)
    l4 = b.trans(q, l3, "milestone 4: forall x.[]!!P(x) -> []!exists x.!P(x)")
    # 5
    q = b.ax("Q2", Imp(nphi, Exists(x, nphi)))
    q = b.contra(q)
    q = b.br1(q, x)
    lr = b.mb(q)
    q = b.ax("Q1", Imp(Forall(x, neg(nphi)), neg(nphi)))
    q = b.perm(q)
    q = b.br2(q, x)
    q = b.perm(q)
    rl = b.mb(q)
    c3 = b.ax("C3", Imp(b.f(lr), Imp(b.f(rl), And(b.f(lr), b.f(rl)))))
    l5 = b.mp(rl, b.mp(lr, c3), "milestone 5: []!exists x.!P(x) <-> []forall x.!!P(x)")
    # 6
    first = b.mp(l5, b.ax("C1", Imp(b.f(l5), b.f(l5).left)))
    l6 = b.trans(l4, first, "milestone 6: forall x.[]!!P(x) -> []forall x.!!P(x)")
    # 7
    q = b.lem("DNI", Imp(phi, neg(nphi)))
    q = b.mb(q)
    q = b.trans(b.ax("Q1", Imp(Forall(x, Box(phi)), Box(phi))), q)
    l7 = b.br1(q, x, "milestone 7: forall x.[]P(x) -> forall x.[]!!P(x)")
    # 8
    q = b.ax("Q1", Imp(Forall(x, neg(nphi)), neg(nphi)))
    q = b.trans(q, b.lem("DNE", Imp(neg(nphi), phi)))
    q = b.br1(q, x)
    l8 = b.mb(q, "milestone 8: []forall x.!!P(x) -> []forall x.P(x)")
    # 9
    b.trans(b.trans(l7, l6), l8, "milestone 9: forall x.[]P(x) -> []forall x.P(x)")
    return b


def converse_barcan():
    x = "x"
    phi = Atom("P", (Var(x),))
    b = Builder()
    b.ax("Q2", Imp(phi, Exists(x, phi)))
    b.md(0)
    b.br2(1, x)
    return b


def rn_pattern():
    top = SNeg(BOTTOM)
    b = Builder()
    b.ax("SN5", top)
    b.ax("I1", Imp(top, Imp(Imp(top, top), top)))
    b.mp(0, 1)
    b.mb(2)
    b.ax("K2", Box(Imp(top, top)))
    b.mp(4, 3)
    return b


def expanding_barcan_model():
    return KripkeModel(
        Signature({"P": 1}), ("u", "v"), {("u", "v")}, {"u": {"a"}, "v": {"a", "b"}},
        positive={"v": {"P": [("b",)]}})


def _write(name, data):
    (OUT / name).write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def _derivation_doc(builder, logic, description):
    d = builder.derivation(logic)
    report = check_derivation(d)
    assert report.valid, [str(r) for r in report.failures()]
    doc = dump_derivation(d)
    doc["description"] = description
    for i, note in builder.notes.items():
        doc["lines"][i]["note"] = note
    return doc


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    _write("remark28.json", dump_model(remark28_fixture().model))
    _write("expanding_barcan.json", dump_model(expanding_barcan_model()))
    _write("converse_barcan.json", _derivation_doc(
        converse_barcan(), "QBK", "the converse Barcan formula, derivable without extra axioms"))
    _write("rn_pattern.json", _derivation_doc(
        rn_pattern(), "QBK", "necessitation of a theorem through K2, MB and MP"))
    _write("barcan_box.json", _derivation_doc(
        barcan_box(), "QBKsharp",
        "the box form of the Barcan formula from the diamond form; notes mark the nine milestones"))


if __name__ == "__main__":
    main()
