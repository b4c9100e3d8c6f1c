"""Verification and falsification of formulas at worlds of a model.

Open formulas are evaluated under an environment mapping variables to
individuals of the world's domain.  This is the same as substituting fresh
names for the individuals and evaluating the resulting sentence: the map
``x -> a`` corresponds to the substitution ``x -> name(a)``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from ..errors import IndividualOutOfDomain, UnboundVariable, UnknownSymbol
from ..kernel.program import Program
from ..syntax import check_formula, free_vars
from .model import KripkeModel

__all__ = ["evaluate", "evaluate_all", "check_consequence_on_model", "POLARITIES"]

POLARITIES = ("+", "-")


def _polarity(p) -> int:
    if p in ("+", "plus", "verify", True, 1):
        return 0
    if p in ("-", "minus", "falsify", False, -1):
        return 1
    raise ValueError(f"polarity must be '+' or '-', got {p!r}")


@lru_cache(maxsize=4096)
def _compiled(sig, formulas: tuple):
    prog = Program(sig)
    roots = [prog.add(f) for f in formulas]
    return prog, roots


def _env_indices(cm, env):
    out = {}
    for x, a in (env or {}).items():
        if a not in cm.ind_index:
            raise IndividualOutOfDomain(f"{x} -> {a!r} is not an individual of the model")
        out[x] = cm.ind_index[a]
    return out


def _check_env(m: KripkeModel, w, f, env):
    missing = free_vars(f) - set(env or {})
    if missing:
        raise UnboundVariable(f"free variables without a value: {sorted(missing)}")
    for x in free_vars(f):
        if env[x] not in m.domains[w]:
            raise IndividualOutOfDomain(f"{x} -> {env[x]!r} is outside the domain of {w}")


def evaluate(m: KripkeModel, w, f, polarity="+", env=None, semantics: str = "qbk") -> bool:
    """Is *f* verified (``+``) or falsified (``-``) at world *w* of *m*?

    ``semantics="nelson"`` switches implication and the quantifiers to their
    persistent readings; callers are expected to have checked the model class
    (see :func:`qbk.nelson.nelson_evaluate`).
    """
    if w not in m.domains:
        raise UnknownSymbol(f"unknown world {w!r}")
    check_formula(f, m.signature)
    _check_env(m, w, f, env)
    pol = _polarity(polarity)
    cm = m.compiled()
    prog, roots = _compiled(m.signature, (f,))
    masks = prog.run(cm, roots, _env_indices(cm, env), nelson=semantics == "nelson")
    return bool(masks[0][pol] >> cm.world_index[w] & 1)


def evaluate_all(m: KripkeModel, f, env=None, semantics: str = "qbk") -> dict:
    """Map every world to its ``(verified, falsified)`` pair for *f*.

    Worlds whose domain misses a value of *env* are left out.
    """
    check_formula(f, m.signature)
    missing = free_vars(f) - set(env or {})
    if missing:
        raise UnboundVariable(f"free variables without a value: {sorted(missing)}")
    cm = m.compiled()
    prog, roots = _compiled(m.signature, (f,))
    idx = _env_indices(cm, env)
    (v, fl), = prog.run(cm, roots, idx, nelson=semantics == "nelson")
    mask = cm.domain_mask([idx[x] for x in free_vars(f)])
    return {w: (bool(v >> i & 1), bool(fl >> i & 1))
            for i, w in enumerate(m.worlds) if mask >> i & 1}


def consequence_witness(cm, prog, gamma_roots, delta_roots, delta_vars):
    """Scan a compiled model for a world verifying all of Gamma and, under some
    assignment to *delta_vars*, none of Delta.

    Returns ``(world_index, {var: individual_index})`` of the first witness in
    world order, then in lexicographic order of assignments, or ``None``.
    """
    full = cm.full
    gamma = full
    if gamma_roots:
        for v, _ in prog.run(cm, gamma_roots):
            gamma &= v
    if not gamma:
        return None
    if not delta_vars:
        hit = gamma
        if delta_roots:
            for v, _ in prog.run(cm, delta_roots):
                hit &= ~v
        if not hit:
            return None
        return (hit & -hit).bit_length() - 1, {}
    results = []
    for combo in itertools.product(range(len(cm.individuals)), repeat=len(delta_vars)):
        env = dict(zip(delta_vars, combo))
        hit = gamma & cm.domain_mask(combo)
        if hit:
            for v, _ in prog.run(cm, delta_roots, env):
                hit &= ~v
        results.append((combo, hit))
    best = None
    for combo, hit in results:
        if hit:
            w = (hit & -hit).bit_length() - 1
            # results are in lexicographic order, so the first hit at the
            # lowest world is the one to keep
            if best is None or w < best[0]:
                best = (w, dict(zip(delta_vars, combo)))
    return best


def check_consequence_on_model(m: KripkeModel, gamma, delta):
    """Find ``(world, assignment)`` with all of *gamma* verified at the world
    and no member of *delta* verified under the assignment, or ``None``.

    *gamma* must consist of sentences.  The assignment maps the free
    variables of *delta* to individuals of the world's domain; an empty
    *delta* asks only for a world verifying *gamma*.
    """
    gamma, delta = tuple(gamma), tuple(delta)
    for g in gamma:
        if free_vars(g):
            raise ValueError(f"hypotheses must be sentences; free variables {sorted(free_vars(g))}")
    for f in gamma + delta:
        check_formula(f, m.signature)
    prog, roots = _compiled(m.signature, gamma + delta)
    dvars = sorted(set().union(*map(free_vars, delta))) if delta else []
    cm = m.compiled()
    hit = consequence_witness(cm, prog, roots[:len(gamma)], roots[len(gamma):], dvars)
    if hit is None:
        return None
    w, env = hit
    return m.worlds[w], {x: cm.individuals[a] for x, a in sorted(env.items())}

