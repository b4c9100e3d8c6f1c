"""Derivation fixtures, their single-line mutations and a generator of
random consequence-mode derivations."""

from __future__ import annotations

import dataclasses

from qbk.calculus import SCHEMES, Derivation, axiom, br1, br2, hyp, instantiate, mp
from qbk.cli import fixture_text
from qbk.frontend import load_derivation, parse_formula
from qbk.syntax import Exists, Forall, Imp, Var, free_vars, is_free_for
from strategies import UNARY, random_formula, random_term

FIXTURE_NAMES = ("converse-barcan", "rn-pattern", "barcan-box")


def fixture(name) -> Derivation:
    return load_derivation(fixture_text(name))


# (fixture, line, replacement formula or None, replacement rule or None, expected code)
MUTATIONS = [
    ("converse-barcan", 1, None, "mb:0", "mb-mismatch"),
    ("converse-barcan", 2, None, "br2:1,y", "br-shape"),
    ("converse-barcan", 0, None, "axiom:Q1", "no-match"),
    ("converse-barcan", 0, None, "axiom:BA", "scheme-not-in-logic"),
    ("converse-barcan", 2, None, "br1:1,x", "br-shape"),
    ("converse-barcan", 1, None, "md:1", "bad-index"),
    ("converse-barcan", 2, None, "mp:0,1", "mp-mismatch"),
    ("converse-barcan", 0, "(exists y. R(y, y)) -> exists x. exists y. R(x, y)", None, "side-condition"),
    ("converse-barcan", 2, "<>P(x) -> forall x. <>exists x. P(x)", "br1:1,x", "side-condition"),
    ("barcan-box", 50, "(exists x. P(x)) -> !!P(x)", "br2:49,x", "side-condition"),
    ("barcan-box", 0, None, "axiom:BABOX", "scheme-not-in-logic"),
    ("barcan-box", 1, None, "lemma:PERM", "no-match"),
    ("barcan-box", 1, None, "lemma:NOSUCH", "unknown-lemma"),
    ("barcan-box", 1, None, "lemma:NNEG_SNEG", "untrusted-lemma"),
    ("barcan-box", 2, None, "mp:1,0", "mp-mismatch"),
    ("barcan-box", 33, None, "md:32", "md-mismatch"),
    ("barcan-box", 3, None, "axiom:Q2", "no-match"),
    ("barcan-box", 21, "(forall x. exists y. R(x, y)) -> exists y. R(y, y)", None, "side-condition"),
    ("rn-pattern", 3, None, "mb:1", "mb-mismatch"),
    ("rn-pattern", 5, None, "mp:3,4", "mp-mismatch"),
    ("rn-pattern", 0, None, "hyp:0", "hyp-in-theorem-mode"),
    ("rn-pattern", 4, None, "axiom:K1", "no-match"),
    ("rn-pattern", 4, None, "axiom:XX", "unknown-scheme"),
    ("rn-pattern", 2, None, "mp:0,7", "bad-index"),
]


def mutate(d: Derivation, line, formula=None, rule=None) -> Derivation:
    lines = list(d.lines)
    f, j = lines[line]
    if formula is not None:
        f = parse_formula(formula)
    lines[line] = (f, rule if rule is not None else j)
    return dataclasses.replace(d, lines=lines)


# -- random axiom instances ---------------------------------------------------

def random_binding(rng, sid, sig=UNARY, depth=2, variables=("x", "y")):
    """A binding for scheme *sid* whose instance respects the side conditions."""
    b = {k: random_formula(rng, depth, sig, variables, leaf_bias=0.3) for k in ("Phi", "Psi", "Theta")}
    b["x"] = Var(rng.choice(variables))
    if sid in ("Q1", "Q2"):
        while True:
            t = random_term(rng, sig, variables)
            if is_free_for(t, b["x"].name, b["Phi"]):
                b["t"] = t
                return b
            b["Phi"] = random_formula(rng, depth, sig, variables, leaf_bias=0.3)
    return b


def random_instance(rng, sid, sig=UNARY, depth=2):
    return instantiate(sid, random_binding(rng, sid, sig, depth))


# -- random consequence-mode derivations ------------------------------------

def random_derivation(rng, steps=12, sig=UNARY, n_hyps=2):
    """A valid consequence-mode derivation from closed hypotheses using
    axioms, hypotheses, MP, BR1 and BR2."""
    hyps = []
    while len(hyps) < n_hyps:
        f = random_formula(rng, 2, sig, ("x",), leaf_bias=0.3)
        for v in sorted(free_vars(f)):
            f = Forall(v, f)
        hyps.append(f)
    lines = []

    def add(f, j):
        lines.append((f, j))
        return len(lines) - 1

    base = [s for s in SCHEMES if not SCHEMES[s].extension and not SCHEMES[s].derived]
    for k in range(n_hyps):
        add(hyps[k], hyp(k))
    for _ in range(steps):
        move = rng.choice(["ax", "weaken", "weaken", "mp", "br1", "br2"])
        if move == "ax":
            sid = rng.choice(base)
            add(random_instance(rng, sid, sig), axiom(sid))
        elif move == "weaken":
            i = rng.randrange(len(lines))
            a = lines[i][0]
            b = random_formula(rng, 1, sig, ("x", "y"))
            j = add(Imp(a, Imp(b, a)), axiom("I1"))
            add(Imp(b, a), mp(i, j))
        elif move == "mp":
            pairs = [(i, j) for j, (g, _) in enumerate(lines) if isinstance(g, Imp)
                     for i, (h, _) in enumerate(lines) if h == g.left]
            if pairs:
                i, j = rng.choice(pairs)
                add(lines[j][0].right, mp(i, j))
        else:
            imps = [i for i, (g, _) in enumerate(lines) if isinstance(g, Imp)]
            if not imps:
                continue
            i = rng.choice(imps)
            g = lines[i][0]
            x = rng.choice(["x", "y"])
            if move == "br1" and x not in free_vars(g.left):
                add(Imp(g.left, Forall(x, g.right)), br1(i, x))
            elif move == "br2" and x not in free_vars(g.right):
                add(Imp(Exists(x, g.left), g.right), br2(i, x))
    return Derivation("consequence", lines, hyps)
