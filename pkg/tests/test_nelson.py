import random

import pytest
from hypothesis import given, strategies as st

from oracles import naive_nelson
from qbk.errors import ClassViolation, NotNelson, NotNNF
from qbk.frontend import parse_formula, print_formula
from qbk.kernel.program import compile_model
from qbk.nelson import (
    derived_compiled, derived_model, is_nelson, nelson_evaluate, remark28_fixture, tau,
    tau_prime, tau_tilde,
)
from qbk.semantics import Bounds, KripkeModel, evaluate, random_model, validate_model
from qbk.syntax import Signature, free_vars
from qbk.transform import is_nnf, to_nnf
from strategies import formulas, models, sentences

SIG = Signature({"P": 1, "p": 0}, frozenset({"c"}))
nelson_formulas = formulas(3, SIG, ("x", "y"), modal=False)
nelson_sentences = sentences(3, SIG, ("x", "y"), modal=False)
nnf_sentences = nelson_sentences.map(lambda f: to_nnf(f, nelson=True))


def text(f):
    return print_formula(f)


# -- translations ----------------------------------------------------------------

@pytest.mark.parametrize("source, image", [
    ("P(x)", "[]P(x)"),
    ("~p", "~<>p"),
    ("(p -> ~p) -> ~p", "[]([]([]p -> ~<>p) -> ~<>p)"),
    ("forall x. exists y. P(y) & ~P(x)", "[]forall x. exists y. ([]P(y) & ~<>P(x))"),
])
def test_tau_examples(source, image):
    assert text(tau(parse_formula(source))) == image


@pytest.mark.parametrize("source, image", [
    ("~~p", "[]p"),
    ("~forall x. P(x)", "exists x. ~<>P(x)"),
    ("~exists x. P(x)", "[]forall x. ~<>P(x)"),
    ("~(p -> P(c))", "[]p & ~<>P(c)"),
])
def test_tau_tilde_examples(source, image):
    assert text(tau_tilde(parse_formula(source, constants=["c"]))) == image


@pytest.mark.parametrize("source, image", [
    ("~p", "[]!p"),
    ("(p -> ~p) -> ~p", "[]([]([]p -> []!p) -> []!p)"),
    ("~~p", "[]p"),
])
def test_tau_prime_examples(source, image):
    assert text(tau_prime(parse_formula(source))) == image


def test_translation_errors():
    with pytest.raises(NotNNF):
        tau(parse_formula("~(p & p)"))
    for translate in (tau, tau_tilde, tau_prime):
        with pytest.raises(NotNelson):
            translate(parse_formula("[]p"))
    assert not is_nelson(parse_formula("<>p")) and is_nelson(parse_formula("~(p -> p)"))


@given(nelson_formulas)
def test_tau_tilde_is_tau_after_nnf(f):
    assert tau_tilde(f) == tau(to_nnf(f, nelson=True))


@given(nelson_formulas)
def test_translations_keep_free_variables(f):
    g = to_nnf(f, nelson=True)
    assert free_vars(tau(g)) == free_vars(f)
    assert free_vars(tau_prime(f)) == free_vars(f)


# -- Nelson forcing --------------------------------------------------------------

def test_remark_model_expectations():
    fx = remark28_fixture()
    m, x = fx.model, fx.world
    premise = parse_formula("p -> ~p")
    assert nelson_evaluate(m, x, premise)
    assert nelson_evaluate(m, x, fx.phi) is fx.expectations["nelson_verified"] is False
    assert evaluate(m, x, tau(to_nnf(fx.phi, nelson=True))) is fx.expectations["tau_verified"] is False
    assert evaluate(m, x, tau_prime(fx.phi)) is fx.expectations["tau_prime_verified"] is True


def test_nelson_evaluation_needs_hereditary_model():
    sig = Signature({"p": 0})
    m = KripkeModel(sig, ("u", "v"), {("u", "u"), ("v", "v"), ("u", "v")},
                    {"u": {"a"}, "v": {"a"}}, positive={"u": {"p": [()]}})
    with pytest.raises(ClassViolation) as info:
        nelson_evaluate(m, "u", parse_formula("p"))
    assert "Hereditary" in str(info.value)


@given(models(SIG, Bounds(3, 2), "QN4bot"), nelson_formulas, st.data())
def test_nelson_forcing_matches_oracle(m, f, data):
    names = sorted(free_vars(f))
    for w in m.worlds:
        env = {x: data.draw(st.sampled_from(sorted(m.domains[w]))) for x in names}
        for pol in "+-":
            assert nelson_evaluate(m, w, f, pol, env) == naive_nelson(m, w, f, pol, env)


@given(models(SIG, Bounds(3, 2), "QN4bot"), nelson_sentences)
def test_hereditary(m, f):
    for u, v in m.access:
        for pol in "+-":
            if nelson_evaluate(m, u, f, pol):
                assert nelson_evaluate(m, v, f, pol)


# -- derived model ---------------------------------------------------------------

def test_derived_model_examples():
    fx = remark28_fixture()
    assert derived_model(fx.model) == fx.model
    sig = Signature({"P": 1})
    refl = {("u", "u"), ("v", "v"), ("u", "v")}
    doms = {"u": {"a"}, "v": {"a", "b"}}
    false_everywhere = KripkeModel(sig, ("u", "v"), refl, doms,
                                   negative={"u": {"P": [("a",)]}, "v": {"P": [("a",), ("b",)]}})
    d = derived_model(false_everywhere)
    assert d.negative == false_everywhere.negative
    chain = KripkeModel(sig, ("u", "v"), refl, doms, positive={"v": {"P": [("a",)]}})
    d = derived_model(chain)
    assert ("a",) not in d.ext("+", "u", "P") and ("a",) in d.ext("+", "v", "P")


def test_derived_model_requires_preorder():
    m = KripkeModel(Signature({"p": 0}), ("u",), set(), {"u": {"a"}})
    with pytest.raises(ClassViolation):
        derived_model(m)


@given(models(SIG, Bounds(3, 2), "QBS4"))
def test_derived_model_is_nelson_model(m):
    assert validate_model(derived_model(m), "QN4bot") == []


@given(models(SIG, Bounds(3, 2), "QB3S4"))
def test_derived_model_of_consistent_model_is_consistent(m):
    assert validate_model(derived_model(m), "QN3") == []


@given(models(SIG, Bounds(3, 2), "QN4bot"))
def test_derived_model_fixes_nelson_models(m):
    assert derived_model(m) == m


@given(models(SIG, Bounds(4, 3), "QBS4"))
def test_derived_compiled_matches_derived_model(m):
    fast = derived_compiled(compile_model(m))
    slow = compile_model(derived_model(m))
    assert fast.individuals == slow.individuals
    assert fast.pos == slow.pos and fast.neg == slow.neg


# -- embedding -------------------------------------------------------------------

@given(models(SIG, Bounds(3, 2), "QBS4"), nnf_sentences)
def test_embedding_on_random_models(m, f):
    d = derived_model(m)
    image = tau(f)
    for w in m.worlds:
        assert nelson_evaluate(d, w, f) == evaluate(m, w, image)


@given(models(SIG, Bounds(3, 2), "QBS4"), st.lists(nnf_sentences, max_size=2), nnf_sentences)
def test_consequence_witness_transfers(m, gamma, phi):
    d = derived_model(m)
    nelson_side = [w for w in m.worlds
                   if all(nelson_evaluate(d, w, g) for g in gamma) and not nelson_evaluate(d, w, phi)]
    modal_side = [w for w in m.worlds
                  if all(evaluate(m, w, tau(g)) for g in gamma) and not evaluate(m, w, tau(phi))]
    assert nelson_side == modal_side


def test_remark_formula_translation_is_nnf_ready():
    fx = remark28_fixture()
    assert is_nnf(fx.phi)
    assert fx.expectations["tau_image"] == tau(fx.phi)
    assert fx.expectations["tau_prime_image"] == tau_prime(fx.phi)


def test_random_models_are_seed_stable():
    a = random_model(SIG, random.Random(5), Bounds(3, 2), "QBS4")
    b = random_model(SIG, random.Random(5), Bounds(3, 2), "QBS4")
    assert a == b
