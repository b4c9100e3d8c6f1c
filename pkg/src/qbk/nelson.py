"""Nelson's constructive logics with strong negation and their embedding.

Nelson formulas are the modality-free formulas.  Their models are preordered
models whose extensions persist along the order (``QN4bot``), with
consistent atoms in the explosive variant (``QN3``).  Forcing differs from
the modal reading only where persistence is built in:

* implication is verified at ``w`` iff at every ``v >= w`` the antecedent is
  not verified or the consequent is;
* ``forall x`` is verified iff the body is verified at every ``v >= w`` for
  every individual of ``v``'s domain;
* ``exists x`` is falsified iff the body is falsified at every ``v >= w``
  for every individual of ``v``'s domain;

and all other clauses are the modal ones.  These are the clauses for which
atoms persist, the translation below agrees with forcing clause by clause,
and the one-point counterexample behaves as expected.

:func:`tau` sends a formula in negative normal form to the modal language;
:func:`tau_tilde` does the same for any Nelson formula by pushing strong
negation itself; :func:`tau_prime` is the older variant with classical
negation, which is not faithful and is kept only to exhibit that.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ClassViolation, NotNelson, NotNNF
from .kernel.program import CompiledModel, Program
from .semantics.evaluate import evaluate
from .semantics.model import KripkeModel, validate_model
from .syntax import (
    BOTTOM, And, Atom, Bottom, Box, Diamond, Exists, Forall, Imp, Or, SNeg,
    Signature, Var, children, neg,
)
from .transform import is_nnf

__all__ = [
    "is_nelson", "check_nelson", "tau", "tau_tilde", "tau_prime",
    "nelson_evaluate", "derived_model", "derived_compiled",
    "Remark28", "remark28_fixture", "UNFAITHFUL_LABEL",
]

UNFAITHFUL_LABEL = "known-unfaithful translation (classical-negation variant)"


def is_nelson(f) -> bool:
    """Is *f* free of modal operators?"""
    if isinstance(f, (Box, Diamond)):
        return False
    return all(is_nelson(k) for k in children(f))


def check_nelson(f):
    """Return *f* unchanged, raising :class:`NotNelson` if it has a modality."""
    if not is_nelson(f):
        raise NotNelson("modal operators do not belong to the Nelson language")
    return f


def tau(f):
    """Translate a Nelson formula in negative normal form."""
    check_nelson(f)
    if not is_nnf(f):
        raise NotNNF("strong negation must stand on atoms or _|_ only")
    return _tau(f)


def _tau(f):
    if isinstance(f, Atom):
        return Box(f)
    if isinstance(f, Bottom):
        return f
    if isinstance(f, SNeg):
        if isinstance(f.body, Atom):
            return SNeg(Diamond(f.body))
        return f  # ~_|_ is verified everywhere in both readings
    if isinstance(f, And):
        return And(_tau(f.left), _tau(f.right))
    if isinstance(f, Or):
        return Or(_tau(f.left), _tau(f.right))
    if isinstance(f, Imp):
        return Box(Imp(_tau(f.left), _tau(f.right)))
    if isinstance(f, Exists):
        return Exists(f.var, _tau(f.body))
    if isinstance(f, Forall):
        return Box(Forall(f.var, _tau(f.body)))
    raise TypeError(f"not a formula: {f!r}")


def _direct(f, negated_atom, negated_bottom):
    """Shared recursion of the direct translations; the two leaf rules for
    strong negation are the only difference between them."""

    def pos(g):
        if isinstance(g, Atom):
            return Box(g)
        if isinstance(g, Bottom):
            return g
        if isinstance(g, SNeg):
            return negative(g.body)
        if isinstance(g, And):
            return And(pos(g.left), pos(g.right))
        if isinstance(g, Or):
            return Or(pos(g.left), pos(g.right))
        if isinstance(g, Imp):
            return Box(Imp(pos(g.left), pos(g.right)))
        if isinstance(g, Exists):
            return Exists(g.var, pos(g.body))
        if isinstance(g, Forall):
            return Box(Forall(g.var, pos(g.body)))
        raise TypeError(f"not a formula: {g!r}")

    def negative(g):
        # translation of ~g
        if isinstance(g, Atom):
            return negated_atom(g)
        if isinstance(g, Bottom):
            return negated_bottom
        if isinstance(g, SNeg):
            return pos(g.body)
        if isinstance(g, Or):
            return And(negative(g.left), negative(g.right))
        if isinstance(g, And):
            return Or(negative(g.left), negative(g.right))
        if isinstance(g, Imp):
            return And(pos(g.left), negative(g.right))
        if isinstance(g, Exists):
            return Box(Forall(g.var, negative(g.body)))
        if isinstance(g, Forall):
            return Exists(g.var, negative(g.body))
        raise TypeError(f"not a formula: {g!r}")

    check_nelson(f)
    return pos(f)


def tau_tilde(f):
    """Translate any Nelson formula, handling strong negation case by case.

    Always equal to ``tau(to_nnf(f, nelson=True))``.
    """
    return _direct(f, lambda a: SNeg(Diamond(a)), SNeg(BOTTOM))


def tau_prime(f):
    """The classical-negation variant: ``~P`` becomes ``[]!P``.

    It is not a faithful embedding: ``(p -> ~p) -> ~p`` is refuted in Nelson
    semantics while its image holds on every reflexive transitive frame
    whose valuation of ``p`` persists.
    """
    return _direct(f, lambda a: Box(neg(a)), neg(BOTTOM))


# -- semantics ----------------------------------------------------------------

def _require(m: KripkeModel, cls: str):
    problems = validate_model(m, cls)
    if problems:
        raise ClassViolation(cls, problems)


def nelson_evaluate(m: KripkeModel, w, f, polarity="+", env=None) -> bool:
    """Nelson forcing of *f* at *w*; *m* must be a ``QN4bot`` model
    (``QN3`` models are a special case)."""
    check_nelson(f)
    _require(m, "QN4bot")
    return evaluate(m, w, f, polarity, env, semantics="nelson")


def _atom_probe(pred: str, k: int):
    xs = tuple(Var(f"x{i}") for i in range(k))
    atom = Atom(pred, xs)
    return Box(atom), Diamond(atom), [x.name for x in xs]


def derived_model(m: KripkeModel) -> KripkeModel:
    """The model with the same frame and domains in which a ground atom is
    verified where its box is verified in *m* and falsified where its
    diamond is falsified in *m*.  *m* must be reflexive and transitive."""
    _require(m, "QBS4")
    pos = {w: {} for w in m.worlds}
    negx = {w: {} for w in m.worlds}
    for pred, k in sorted(m.signature.predicates.items()):
        boxed, diamond, xs = _atom_probe(pred, k)
        for w in m.worlds:
            for tup in m.ground_tuples(w, pred):
                env = dict(zip(xs, tup))
                if evaluate(m, w, boxed, "+", env):
                    pos[w].setdefault(pred, []).append(tup)
                if evaluate(m, w, diamond, "-", env):
                    negx[w].setdefault(pred, []).append(tup)
    return KripkeModel(m.signature, m.worlds, m.access, m.domains, m.const_interp, pos, negx)


class _Probes:
    """Compiled ``[]P(x..)`` / ``<>P(x..)`` nodes for every predicate."""

    def __init__(self, sig: Signature):
        self.program = Program(sig)
        self.entries = []
        for pred in self.program.layout.preds:
            k = sig.predicates[pred]
            boxed, diamond, xs = _atom_probe(pred, k)
            roots = [self.program.add(boxed), self.program.add(diamond)]
            self.entries.append((k, roots, xs))


_PROBES: dict = {}


def derived_compiled(cm: CompiledModel) -> CompiledModel:
    """:func:`derived_model` on a compiled model, without class checks.

    Each extension is read off by running the kernel on the boxed and
    diamond atom at every tuple of individuals.
    """
    sig = cm.layout.signature
    probes = _PROBES.get(sig)
    if probes is None:
        probes = _PROBES[sig] = _Probes(sig)
    size = len(cm.individuals)
    pos, negx = [], []
    for k, roots, xs in probes.entries:
        pmasks = [0] * (size ** k)
        nmasks = [0] * (size ** k)
        for t, tup in enumerate(itertools.product(range(size), repeat=k)):
            (bv, _), (_, df) = probes.program.run(cm, roots, dict(zip(xs, tup)))
            inside = cm.domain_mask(tup)
            pmasks[t] = bv & inside
            nmasks[t] = df & inside
        pos.append(pmasks)
        negx.append(nmasks)
    return CompiledModel(cm.layout, cm.worlds, cm.succ, cm.individuals, cm.dom, cm.consts, pos, negx)


# -- the one-point counterexample ------------------------------------------

@dataclass(frozen=True)
class Remark28:
    """The one-point reflexive model with ``p`` neither verified nor
    falsified, the formula ``(p -> ~p) -> ~p`` and what should hold of them."""

    model: KripkeModel
    world: str
    phi: object
    expectations: dict


def remark28_fixture() -> Remark28:
    from .transform import to_nnf
    p = Atom("p")
    phi = Imp(Imp(p, SNeg(p)), SNeg(p))
    model = KripkeModel(Signature({"p": 0}), ("x",), {("x", "x")}, {"x": {"a"}})
    expectations = {
        "nelson_verified": False,
        "tau_verified": False,
        "tau_prime_verified": True,
        "tau_prime_image": Box(Imp(Box(Imp(Box(p), Box(neg(p)))), Box(neg(p)))),
        "tau_image": tau(to_nnf(phi, nelson=True)),
    }
    return Remark28(model, "x", phi, expectations)
