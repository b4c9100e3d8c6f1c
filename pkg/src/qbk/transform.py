"""Negative normal form: strong negation pushed down to atoms and ``_|_``."""

from __future__ import annotations

from .syntax import (
    BOTTOM, And, Atom, Bottom, Box, Diamond, Exists, Forall, Formula, Imp, Or, SNeg,
    children, rebuild,
)


def is_nnf(f: Formula) -> bool:
    if isinstance(f, SNeg):
        return isinstance(f.body, (Atom, Bottom))
    return all(is_nnf(k) for k in children(f))


def to_nnf(f: Formula, nelson: bool = False) -> Formula:
    """Push every strong negation inwards in a single structural pass.

    By default the result agrees with *f* in both polarities, so a negated
    implication ``~(A -> B)`` becomes ``!!A & ~B``: ``!!A`` is verified
    exactly when ``A`` is and falsified exactly when ``A`` is not verified.
    With ``nelson=True`` it becomes ``A & ~B`` instead, the normal form used
    for Nelson formulas, which only preserves verification.

    Classical negation is just ``-> _|_``; ``~_|_`` is already normal and
    stays as is.
    """
    return _nnf(f, nelson)


def _nnf(f: Formula, nelson: bool) -> Formula:
    if isinstance(f, SNeg):
        return _negated(f.body, nelson)
    kids = children(f)
    if not kids:
        return f
    return rebuild(f, [_nnf(k, nelson) for k in kids])


def _negated(g: Formula, nelson: bool) -> Formula:
    """NNF of ``~g``."""
    if isinstance(g, (Atom, Bottom)):
        return SNeg(g)
    if isinstance(g, SNeg):
        return _nnf(g.body, nelson)
    if isinstance(g, Imp):
        left = _nnf(g.left, nelson)
        if not nelson:
            left = Imp(Imp(left, BOTTOM), BOTTOM)
        return And(left, _negated(g.right, nelson))
    if isinstance(g, Or):
        return And(_negated(g.left, nelson), _negated(g.right, nelson))
    if isinstance(g, And):
        return Or(_negated(g.left, nelson), _negated(g.right, nelson))
    if isinstance(g, Box):
        return Diamond(_negated(g.body, nelson))
    if isinstance(g, Diamond):
        return Box(_negated(g.body, nelson))
    if isinstance(g, Forall):
        return Exists(g.var, _negated(g.body, nelson))
    if isinstance(g, Exists):
        return Forall(g.var, _negated(g.body, nelson))
    raise TypeError(f"not a formula: {g!r}")
