import itertools
import random

import pytest
from hypothesis import given, strategies as st

from derivations import FIXTURE_NAMES, MUTATIONS, fixture, mutate, random_binding, random_derivation
from qbk.calculus import (
    BASE_IDS, EXTENSION_IDS, LOGICS, SCHEMES, STORE, Derivation, axiom, build_disjunction,
    check_derivation, deduction_transform, hyp, instantiate, logic_schemes, match_scheme,
    mp, verify_store,
)
from qbk.calculus.schemes import is_metavar
from qbk.errors import NotApplicable
from qbk.frontend import parse_formula
from qbk.semantics import Bounds, check_consequence_on_model, enumerate_models
from qbk.syntax import (
    BOTTOM, Atom, Const, Forall, Imp, Or, Signature, Var, is_free_for,
    replace_subformula, subformulas, variables_of,
)
from strategies import UNARY, formulas

c = Const("c")


# -- schemes ---------------------------------------------------------------------

def test_scheme_catalogue():
    assert len(BASE_IDS) == 25 and len(EXTENSION_IDS) == 4
    assert all(sid in SCHEMES for sid in BASE_IDS + EXTENSION_IDS)
    assert logic_schemes("QBKo") - logic_schemes("QBK") == {"EXC"}
    assert logic_schemes("QB3K+QBKsharp") - logic_schemes("QBK") == {"EXP", "BA"}
    with pytest.raises(ValueError):
        logic_schemes("S5")


def test_match_examples():
    f = parse_formula("~(P(c) -> Q(c)) <-> (P(c) & ~Q(c))", constants=["c"])
    b = match_scheme("SN2", f)
    assert b == {"Phi": Atom("P", (c,)), "Psi": Atom("Q", (c,))}
    b = match_scheme("Q1", parse_formula("(forall x. forall y. R(x, y)) -> forall y. R(c, y)", constants=["c"]))
    assert b["t"] == c and b["x"] == Var("x")
    assert match_scheme("Q1", parse_formula("(forall x. exists y. R(x, y)) -> exists y. R(y, y)")) is None


def test_half_schemes_are_derived():
    assert SCHEMES["SN1.lr"].derived and SCHEMES["M3.nrl"].derived
    assert match_scheme("SN1.lr", parse_formula("~~p -> p")) == {"Phi": Atom("p")}


def test_vacuous_quantifier_instance():
    f = parse_formula("(forall x. p) -> p")
    assert match_scheme("Q1", f) is not None


@pytest.mark.parametrize("sid", [s for s in SCHEMES])
@given(seed=st.integers(0, 10 ** 9))
def test_instantiate_then_match_round_trips(sid, seed):
    rng = random.Random(seed)
    b = random_binding(rng, sid)
    f = instantiate(sid, b)
    got = match_scheme(sid, f)
    assert got is not None
    assert instantiate(sid, got) == f


def brute_match(sid, f):
    """Try every assignment of subformulas (and terms) to the placeholders."""
    s = SCHEMES[sid]
    subs = list(dict.fromkeys(subformulas(f)))
    names = sorted(variables_of(f) | {"x"})
    if sid in ("Q1", "Q2"):
        for phi in subs:
            for x in names:
                for t in [Var(v) for v in names] + [c]:
                    if is_free_for(t, x, phi) and instantiate(sid, {"Phi": phi, "x": x, "t": t}) == f:
                        return True
        return False
    metas = sorted({a.pred[1:] for a in subformulas(s.pattern) if is_metavar(a)})
    for combo in itertools.product(subs, repeat=len(metas)):
        b = dict(zip(metas, combo))
        for x in names:
            b["x"] = Var(x)
            if instantiate(sid, b) == f:
                return True
    return False


@pytest.mark.parametrize("sid", [s for s in SCHEMES if SCHEMES[s].pattern is None or
                                 sum(1 for a in subformulas(SCHEMES[s].pattern) if is_metavar(a)) < 6])
@given(f=formulas(3, UNARY, ("x", "y")))
def test_match_agrees_with_brute_force(sid, f):
    got = match_scheme(sid, f)
    if got is not None:
        assert instantiate(sid, got) == f
    assert (got is not None) == brute_match(sid, f)


def test_match_on_all_small_formulas():
    atoms = [Atom("p"), BOTTOM, Atom("P", (Var("x"),))]
    level = list(atoms)
    from qbk.syntax import And, Box, Diamond, Exists, SNeg
    for _ in range(2):
        nxt = list(level)
        for a in level:
            nxt += [SNeg(a), Box(a), Diamond(a), Forall("x", a), Exists("x", a)]
            nxt += [op(a, b) for b in level for op in (And, Or, Imp)]
        level = list(dict.fromkeys(nxt))
    for f in level:
        for sid in SCHEMES:
            b = match_scheme(sid, f)
            if b is not None:
                assert instantiate(sid, b) == f


# -- derivations -----------------------------------------------------------------

@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixtures_check(name):
    d = fixture(name)
    report = check_derivation(d)
    assert report.valid, [str(r) for r in report.failures()]


def test_converse_barcan_conclusion_and_report():
    d = fixture("converse-barcan")
    assert d.conclusion == parse_formula("(exists x. <>P(x)) -> <>exists x. P(x)")
    report = check_derivation(d)
    assert report.lines[0].binding["Phi"] == parse_formula("P(x)")
    assert "Q2" in str(report.lines[0])


def test_barcan_box_needs_its_extension():
    d = fixture("barcan-box")
    assert d.conclusion == parse_formula("(forall x. []P(x)) -> []forall x. P(x)")
    d.logic = "QBK"
    report = check_derivation(d)
    assert not report.valid
    assert report.failures()[0].code == "scheme-not-in-logic"


@pytest.mark.parametrize("name, line, formula, rule, code", MUTATIONS)
def test_mutations_are_rejected(name, line, formula, rule, code):
    d = mutate(fixture(name), line, formula, rule)
    report = check_derivation(d)
    assert not report.valid
    first = report.failures()[0]
    assert (first.index, first.code) == (line, code)


def test_stated_lemmas_need_trust():
    a = parse_formula("p")
    f = parse_formula("(!!p -> ~!p) & (~!p -> !!p) & ((~!!p -> ~~!p) & (~~!p -> ~!!p))")
    from qbk.calculus import lemma
    d = Derivation("theorem", [(f, lemma("NNEG_SNEG"))])
    assert STORE["NNEG_SNEG"].match(f) == {"A": a}
    assert check_derivation(d).failures()[0].code == "untrusted-lemma"
    assert check_derivation(d, trust_stated=True).valid


def test_build_disjunction():
    a, b, t = Atom("a"), Atom("b"), Atom("t")
    assert build_disjunction([]) == BOTTOM
    assert build_disjunction([a]) == a
    assert build_disjunction([a, b, t]) == Or(a, Or(b, t))


def test_lemma_store_verifies():
    reports = verify_store()
    assert set(reports) == {n for n, lem in STORE.items() if lem.proof is not None}
    for name, r in reports.items():
        assert r.valid, name
        assert STORE[name].proof.conclusion == STORE[name].statement


@given(formulas(2, UNARY), formulas(2, UNARY), formulas(2, UNARY))
def test_lemma_proofs_instantiate(a, b, t):
    for name in ("TRANS", "PERM", "CONTRA"):
        lem = STORE[name]
        lines = []
        for f, j in lem.proof.lines:
            for meta, val in (("$A", a), ("$B", b), ("$C", t)):
                if any(s == Atom(meta) for s in subformulas(f)):
                    f = replace_subformula(f, Atom(meta), val)
            lines.append((f, j))
        assert check_derivation(Derivation("theorem", lines), store={}).valid


# -- deduction -------------------------------------------------------------------

def test_deduction_of_single_hypothesis():
    phi = parse_formula("forall x. P(x)")
    d = Derivation("consequence", [(phi, hyp(0))], [phi])
    out = deduction_transform(d)
    assert out.hypotheses == [] and out.conclusion == Imp(phi, phi)
    assert check_derivation(out).valid


def test_deduction_with_axiom_and_mp():
    phi, psi = parse_formula("p"), parse_formula("q")
    d = Derivation("consequence", [
        (phi, hyp(0)),
        (Imp(phi, Imp(psi, phi)), axiom("I1")),
        (Imp(psi, phi), mp(0, 1)),
    ], [phi])
    out = deduction_transform(d)
    assert out.conclusion == Imp(phi, Imp(psi, phi))
    assert check_derivation(out).valid


def test_deduction_keeps_quantifier_steps():
    phi = parse_formula("p")
    q1 = parse_formula("(forall x. P(x)) -> P(x)")
    d = Derivation("consequence", [
        (q1, axiom("Q1")),
        (parse_formula("(forall x. P(x)) -> forall x. P(x)"), "br1:0,x"),
        (phi, hyp(0)),
    ], [phi])
    d.lines.append((Imp(phi, Imp(d.lines[1][0], phi)), axiom("I1")))
    out = deduction_transform(d, discharge=phi)
    assert check_derivation(out).valid
    assert out.conclusion == Imp(phi, d.conclusion)


def test_deduction_preconditions():
    p = parse_formula("p")
    with pytest.raises(NotApplicable):
        deduction_transform(Derivation("theorem", [(p, axiom("N1"))]))
    bad = Derivation("consequence", [(p, axiom("I1"))], [p])
    with pytest.raises(NotApplicable):
        deduction_transform(bad)


@given(st.integers(0, 10 ** 9))
def test_random_deduction_round_trip(seed):
    rng = random.Random(seed)
    d = random_derivation(rng)
    assert check_derivation(d).valid
    k = rng.randrange(len(d.hypotheses))
    out = deduction_transform(d, discharge=k)
    assert check_derivation(out).valid
    assert out.conclusion == Imp(d.hypotheses[k], d.conclusion)
    assert out.hypotheses == d.hypotheses[:k] + d.hypotheses[k + 1:]


# -- presets and soundness -------------------------------------------------------

SUPERSETS = ["QBKo", "QB3K", "QBKsharp", "QBKsharp_box", "QB3Ko+QBKsharp"]


@given(st.integers(0, 10 ** 9))
def test_presets_are_monotone(seed):
    d = random_derivation(random.Random(seed))
    for logic in SUPERSETS:
        d.logic = logic
        assert check_derivation(d).valid


@pytest.mark.parametrize("name, cls", [
    ("converse-barcan", "QBK"), ("rn-pattern", "QBK"), ("barcan-box", "QBKsharp"),
])
def test_fixture_conclusions_are_valid_in_models(name, cls):
    d = fixture(name)
    sig = Signature({"P": 1})
    for m in enumerate_models(sig, Bounds(2, 2), cls):
        assert check_consequence_on_model(m, [], [d.conclusion]) is None


def test_barcan_box_fails_with_expanding_domains():
    d = fixture("barcan-box")
    sig = Signature({"P": 1})
    assert any(check_consequence_on_model(m, [], [d.conclusion]) is not None
               for m in enumerate_models(sig, Bounds(2, 2), "QBK"))


@given(st.integers(0, 10 ** 9))
def test_random_derivations_are_sound(seed):
    rng = random.Random(seed)
    d = random_derivation(rng, steps=8)
    for m in itertools.islice(enumerate_models(UNARY, Bounds(2, 1), "QBK"), 0, None, 7):
        assert check_consequence_on_model(m, d.hypotheses, [d.conclusion]) is None


def test_every_line_of_a_theorem_is_valid():
    d = fixture("barcan-box")
    sig = Signature({"P": 1})
    models = list(enumerate_models(sig, Bounds(2, 1), "QBKsharp"))
    for f, _ in d.lines:
        for m in models:
            assert check_consequence_on_model(m, [], [f]) is None


def test_logic_table_names():
    assert set(LOGICS) == {"QBK", "QBKo", "QB3K", "QB3Ko", "QBKsharp", "QBKsharp_box"}
