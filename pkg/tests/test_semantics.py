import json
import random

import pytest
from hypothesis import given, strategies as st

from oracles import brute_models, brute_witness, naive_eval
from qbk.errors import BoundsTooLarge, IndividualOutOfDomain, UnboundVariable
from qbk.frontend import dump_model, parse_formula
from qbk.nelson import remark28_fixture, tau
from qbk.semantics import (
    PRESETS, Bounds, KripkeModel, check_consequence_on_model, count_estimate,
    enumerate_models, evaluate, evaluate_all, model_class, random_model,
    search_countermodel, validate_model,
)
from qbk.semantics.model import Condition
from qbk.syntax import BOTTOM, Atom, Box, Imp, Signature, SNeg, Var, free_vars
from strategies import SIG, UNARY, formulas, models, sentences

PROP = Signature({"p": 0})


def expanding_model():
    return KripkeModel(Signature({"P": 1}), ("u", "v"), {("u", "v")},
                       {"u": {"a"}, "v": {"a", "b"}}, positive={"v": {"P": [("b",)]}})


BA = parse_formula("<>exists x. P(x) -> exists x. <>P(x)")


# -- model classes ---------------------------------------------------------------

def test_presets_expand_to_flags():
    C = Condition
    assert PRESETS["QBK"].conditions == frozenset()
    assert PRESETS["QN3"].conditions == {C.REFLEXIVE, C.TRANSITIVE, C.HEREDITARY, C.ATOM_CONSISTENT}
    assert model_class("QBK°") == PRESETS["QBKo"]
    assert model_class("QN4⊥") == PRESETS["QN4bot"]
    assert model_class("QBK♯").conditions == {C.CONSTANT_DOMAIN}
    assert model_class("QBS4+QBKo").conditions == {C.REFLEXIVE, C.TRANSITIVE, C.ATOM_COMPLETE}


def test_validate_examples():
    m = remark28_fixture().model
    assert validate_model(m, "QB3S4") == []
    problems = validate_model(m, "QBKo")
    assert [v.condition for v in problems] == ["AtomComplete"]
    assert [v.condition for v in validate_model(expanding_model(), "QBKsharp")] == ["ConstantDomain"]


@pytest.mark.parametrize("cls", sorted(PRESETS))
@given(seed=st.integers(0, 10 ** 6))
def test_random_models_belong_to_their_class(cls, seed):
    m = random_model(SIG, random.Random(seed), Bounds(3, 2), cls)
    assert validate_model(m, cls) == []


# -- evaluation ----------------------------------------------------------------

def test_remark_model_translation_not_verified():
    fx = remark28_fixture()
    assert not evaluate(fx.model, "x", tau(fx.phi), "+")


@given(models(SIG), formulas(3, SIG))
def test_bottom_and_duality(m, f):
    names = sorted(free_vars(f))
    for w in m.worlds:
        assert evaluate(m, w, BOTTOM, "-") and not evaluate(m, w, BOTTOM, "+")
        env = {x: sorted(m.domains[w])[0] for x in names}
        assert evaluate(m, w, SNeg(f), "+", env) == evaluate(m, w, f, "-", env)
        assert evaluate(m, w, SNeg(f), "-", env) == evaluate(m, w, f, "+", env)


@given(models(SIG), formulas(4, SIG), st.data())
def test_evaluate_matches_naive_oracle(m, f, data):
    names = sorted(free_vars(f))
    for w in m.worlds:
        dom = sorted(m.domains[w])
        env = {x: data.draw(st.sampled_from(dom)) for x in names}
        for pol in "+-":
            assert evaluate(m, w, f, pol, env) == naive_eval(m, w, f, pol, env)


@given(models(SIG), formulas(3, SIG))
def test_evaluate_all_matches_evaluate(m, f):
    names = sorted(free_vars(f))
    a = sorted(m.individuals())[0]
    env = {x: a for x in names}
    table = evaluate_all(m, f, env)
    for w in m.worlds:
        if a in m.domains[w] or not names:
            assert table[w] == (evaluate(m, w, f, "+", env), evaluate(m, w, f, "-", env))
        else:
            assert w not in table


@given(models(UNARY), formulas(3, UNARY))
def test_quantifiers_stay_inside_local_domains(m, f):
    names = sorted(free_vars(f))
    for w in m.worlds:
        trace = []
        env = {x: sorted(m.domains[w])[0] for x in names}
        naive_eval(m, w, f, "+", env, trace)
        assert all(a in m.domains[u] for u, a in trace)


def test_environment_errors():
    m = expanding_model()
    with pytest.raises(UnboundVariable):
        evaluate(m, "u", parse_formula("P(x)"))
    with pytest.raises(IndividualOutOfDomain):
        evaluate(m, "u", parse_formula("P(x)"), env={"x": "b"})
    assert evaluate(m, "v", parse_formula("P(x)"), env={"x": "b"})


# -- consequence -----------------------------------------------------------------

def test_barcan_refuted_on_expanding_model():
    assert check_consequence_on_model(expanding_model(), [], [BA]) == ("u", {})


def test_trivial_consequence_has_no_witness():
    sig = Signature({"P": 1}, frozenset({"c"}))
    pc = parse_formula("P(c)", sig)
    for m in enumerate_models(sig, Bounds(2, 2)):
        assert check_consequence_on_model(m, [pc], [pc]) is None


def test_empty_conclusions_ask_for_satisfiability():
    m = expanding_model()
    assert check_consequence_on_model(m, [], []) == ("u", {})
    assert check_consequence_on_model(m, [BOTTOM], []) is None


@given(models(UNARY), st.lists(sentences(2, UNARY), max_size=2), st.lists(formulas(2, UNARY), max_size=2))
def test_witness_matches_brute_force(m, gamma, delta):
    got = check_consequence_on_model(m, gamma, delta)
    expected = brute_witness(m, gamma, delta)
    if got is None:
        assert expected == []
    else:
        assert got in expected
        # the reported witness is the first one in world order
        assert m.worlds.index(got[0]) == min(m.worlds.index(w) for w, _ in expected)


@given(models(UNARY), st.lists(sentences(2, UNARY), max_size=2), sentences(2, UNARY), formulas(2, UNARY))
def test_semantic_deduction(m, gamma, phi, psi):
    left = check_consequence_on_model(m, gamma + [phi], [psi])
    right = check_consequence_on_model(m, gamma, [Imp(phi, psi)])
    assert (left is None) == (right is None)


# -- enumeration -----------------------------------------------------------------

def test_single_world_counts():
    assert len(list(enumerate_models(PROP, Bounds(1, 1), "QBK"))) == 8
    assert len(list(enumerate_models(PROP, Bounds(1, 1), "QB3K"))) == 6


@pytest.mark.parametrize("cls", ["QBK", "QB3K", "QBKo", "QBS4", "QBKsharp", "QN4bot", "QN3", "QBT"])
def test_enumeration_matches_brute_force(cls):
    got = list(enumerate_models(PROP, Bounds(2, 2), cls))
    expected = brute_models(PROP, 2, 2, cls)
    assert len(got) == len(expected)
    assert {_key(m) for m in got} == {_key(m) for m in expected}


@pytest.mark.parametrize("cls", ["QBK", "QBS4"])
def test_enumeration_with_constants_matches_brute_force(cls):
    sig = Signature({"P": 1}, frozenset({"c"}))
    got = list(enumerate_models(sig, Bounds(2, 1), cls))
    expected = brute_models(sig, 2, 1, cls)
    assert len(got) == len(expected)
    assert {_key(m) for m in got} == {_key(m) for m in expected}


def _key(m):
    return json.dumps(dump_model(m), sort_keys=True)


def test_constant_domain_enumeration():
    for m in enumerate_models(Signature({"P": 1}), Bounds(2, 2), "QBKsharp"):
        assert len({m.domains[w] for w in m.worlds}) == 1


def test_enumerated_models_satisfy_class_and_constants():
    sig = Signature({"P": 1}, frozenset({"c"}))
    for m in enumerate_models(sig, Bounds(2, 2), "QBS4"):
        assert validate_model(m, "QBS4") == []


def test_bounds_guard():
    with pytest.raises(BoundsTooLarge):
        list(enumerate_models(SIG, Bounds(3, 3), "QBK", cap=10 ** 6))
    assert count_estimate(PROP, Bounds(1, 1), "QBK") >= 8


# -- countermodel search ---------------------------------------------------------

def test_excluded_middle_fails_in_base_class():
    f = parse_formula("p | ~p")
    found = search_countermodel([], [f], Bounds(1, 1), "QBK")
    assert found is not None
    m, w, _ = found
    assert not m.ext("+", w, "p") and not m.ext("-", w, "p")
    assert search_countermodel([], [f], Bounds(3, 2), "QBKo") is None


def test_translated_remark_formula_found_at_one_world():
    fx = remark28_fixture()
    found = search_countermodel([], [tau(fx.phi)], Bounds(1, 1), "QB3S4")
    assert found is not None
    m, w, _ = found
    assert len(m.worlds) == 1 and m.access == {(w, w)}


def test_search_reports_assignment():
    f = parse_formula("P(x)")
    m, w, env = search_countermodel([], [f], Bounds(1, 1), "QBK")
    assert set(env) == {"x"} and env["x"] in m.domains[w]
    assert not evaluate(m, w, f, "+", env)


def test_parallel_search_agrees_with_serial():
    f = parse_formula("[]forall x. P(x) -> forall x. []P(x)")
    serial = search_countermodel([], [f], Bounds(2, 2), "QBK")
    parallel = search_countermodel([], [f], Bounds(2, 2), "QBK", workers=2)
    assert serial is None and parallel is None
    serial = search_countermodel([], [BA], Bounds(2, 2), "QBK")
    parallel = search_countermodel([], [BA], Bounds(2, 2), "QBK", workers=2)
    assert serial == parallel


@pytest.mark.parametrize("text, cls", [
    ("[]P(x) -> P(x)", "QBT"),
    ("[]P(x) -> [][]P(x)", "QBK4"),
    ("[]~P(x) -> ~P(x)", "QBT"),
])
def test_frame_correspondences(text, cls):
    f = parse_formula(text)
    assert search_countermodel([], [f], Bounds(3, 2), cls) is None
    assert search_countermodel([], [f], Bounds(3, 2), "QBK") is not None


def test_hereditary_atoms_persist():
    for m in enumerate_models(PROP, Bounds(3, 1), "QN4bot"):
        p = Atom("p")
        for u, v in m.access:
            for pol in "+-":
                if evaluate(m, u, p, pol):
                    assert evaluate(m, v, p, pol)


def test_box_of_variable_atom():
    m = expanding_model()
    assert not evaluate(m, "u", Box(Atom("P", (Var("x"),))), "+", {"x": "a"})
