"""Signatures, terms and formulas of the first-order modal language with
strong negation, plus free variables and the two substitution devices.

Formulas are immutable dataclasses compared structurally.  Only the ten
core constructors exist as nodes; classical negation and the two
biconditionals are built by :func:`neg`, :func:`iff` and :func:`strong_iff`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union

from .errors import ArityError, CaptureError, NotASubformula, UnknownSymbol

__all__ = [
    "Signature", "Var", "Const", "Term",
    "Atom", "Bottom", "And", "Or", "Imp", "SNeg", "Box", "Diamond",
    "Forall", "Exists", "Formula", "BOTTOM",
    "neg", "iff", "strong_iff",
    "Substitution", "free_vars", "is_sentence", "is_free_for",
    "substitute_var", "apply_substitution", "replace_subformula",
    "occurrences", "subformulas", "size", "depth", "check_formula",
    "constants_of", "predicates_of", "variables_of", "fresh_var",
]


@dataclass(frozen=True)
class Signature:
    predicates: Mapping[str, int] = field(default_factory=dict)
    constants: frozenset = frozenset()

    def __post_init__(self):
        preds = dict(self.predicates)
        consts = frozenset(self.constants)
        for name, arity in preds.items():
            if not isinstance(name, str) or not name:
                raise ValueError(f"bad predicate name {name!r}")
            if not isinstance(arity, int) or arity < 0:
                raise ValueError(f"bad arity {arity!r} for {name}")
        for c in consts:
            if not isinstance(c, str) or not c:
                raise ValueError(f"bad constant name {c!r}")
        clash = consts & preds.keys()
        if clash:
            raise ValueError(f"names used both as predicate and constant: {sorted(clash)}")
        object.__setattr__(self, "predicates", preds)
        object.__setattr__(self, "constants", consts)

    def __hash__(self):
        return hash((tuple(sorted(self.predicates.items())), self.constants))

    def arity(self, name: str) -> int:
        try:
            return self.predicates[name]
        except KeyError:
            raise UnknownSymbol(f"unknown predicate {name!r}") from None

    def merge(self, other: Signature) -> Signature:
        preds = dict(self.predicates)
        for name, arity in other.predicates.items():
            if preds.get(name, arity) != arity:
                raise ArityError(f"predicate {name} used with arities {preds[name]} and {arity}")
            preds[name] = arity
        return Signature(preds, self.constants | other.constants)

    def to_json(self) -> dict:
        return {"predicates": dict(sorted(self.predicates.items())),
                "constants": sorted(self.constants)}


# -- terms ------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Const:
    name: str

    def __str__(self):
        return self.name


Term = Union[Var, Const]


# -- formulas ---------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Atom:
    pred: str
    args: tuple = ()


@dataclass(frozen=True, slots=True)
class Bottom:
    pass


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Imp:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class SNeg:
    """Strong negation."""
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Box:
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Diamond:
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Atom, Bottom, And, Or, Imp, SNeg, Box, Diamond, Forall, Exists]
BOTTOM = Bottom()

BINARY = (And, Or, Imp)
UNARY = (SNeg, Box, Diamond)
QUANT = (Forall, Exists)


def neg(f: Formula) -> Formula:
    """Classical negation, ``f -> _|_``."""
    return Imp(f, BOTTOM)


def iff(a: Formula, b: Formula) -> Formula:
    return And(Imp(a, b), Imp(b, a))


def strong_iff(a: Formula, b: Formula) -> Formula:
    return And(iff(a, b), iff(SNeg(a), SNeg(b)))


def children(f: Formula) -> tuple:
    if isinstance(f, BINARY):
        return (f.left, f.right)
    if isinstance(f, (SNeg, Box, Diamond, Forall, Exists)):
        return (f.body,)
    return ()


def rebuild(f: Formula, kids) -> Formula:
    """Return a node of the same shape as *f* with new children."""
    if isinstance(f, BINARY):
        return type(f)(kids[0], kids[1])
    if isinstance(f, UNARY):
        return type(f)(kids[0])
    if isinstance(f, QUANT):
        return type(f)(f.var, kids[0])
    return f


# -- queries ----------------------------------------------------------------

def free_vars(f: Formula) -> frozenset:
    if isinstance(f, Atom):
        return frozenset(t.name for t in f.args if isinstance(t, Var))
    if isinstance(f, Bottom):
        return frozenset()
    if isinstance(f, QUANT):
        return free_vars(f.body) - {f.var}
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    return free_vars(f.body)


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def variables_of(f: Formula) -> frozenset:
    """Every variable occurring in *f*, free or bound."""
    if isinstance(f, Atom):
        return frozenset(t.name for t in f.args if isinstance(t, Var))
    if isinstance(f, QUANT):
        return variables_of(f.body) | {f.var}
    out = frozenset()
    for k in children(f):
        out |= variables_of(k)
    return out


def constants_of(f: Formula) -> frozenset:
    if isinstance(f, Atom):
        return frozenset(t.name for t in f.args if isinstance(t, Const))
    out = frozenset()
    for k in children(f):
        out |= constants_of(k)
    return out


def predicates_of(f: Formula) -> dict:
    """Map each predicate used in *f* to its arity; raises on inconsistent use."""
    out: dict = {}
    for g in subformulas(f):
        if isinstance(g, Atom):
            if out.setdefault(g.pred, len(g.args)) != len(g.args):
                raise ArityError(f"predicate {g.pred} used with arities "
                                 f"{out[g.pred]} and {len(g.args)}")
    return out


def subformulas(f: Formula) -> Iterator[Formula]:
    """Preorder walk over all subformula occurrences."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def depth(f: Formula) -> int:
    kids = children(f)
    return 1 + max(map(depth, kids)) if kids else 0


def fresh_var(avoid: Iterable[str], stem: str = "v") -> str:
    avoid = set(avoid)
    i = 0
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


def check_formula(f: Formula, sig: Signature) -> None:
    """Validate arities and constants of *f* against *sig*."""
    for g in subformulas(f):
        if not isinstance(g, Atom):
            continue
        arity = sig.arity(g.pred)
        if arity != len(g.args):
            raise ArityError(f"{g.pred} expects {arity} argument(s), got {len(g.args)}")
        for t in g.args:
            if isinstance(t, Const) and t.name not in sig.constants:
                raise UnknownSymbol(f"unknown constant {t.name!r}")


# -- substitution -----------------------------------------------------------

@dataclass(frozen=True)
class Substitution:
    """A map from variables to terms, the identity outside its support."""

    mapping: Mapping[str, Term] = field(default_factory=dict)

    def __post_init__(self):
        support = {x: t for x, t in dict(self.mapping).items() if t != Var(x)}
        object.__setattr__(self, "mapping", support)

    def __hash__(self):
        return hash(tuple(sorted((x, str(t), type(t).__name__) for x, t in self.mapping.items())))

    def __call__(self, x: str) -> Term:
        return self.mapping.get(x, Var(x))

    @property
    def basic(self) -> bool:
        # only meaningful for the variables in the support
        return all(isinstance(t, Const) for t in self.mapping.values())

    @classmethod
    def identity(cls) -> Substitution:
        return cls({})


def _captures(t: Term, bound: frozenset) -> bool:
    return isinstance(t, Var) and t.name in bound


def is_free_for(t: Term, x: str, f: Formula) -> bool:
    """True iff no free occurrence of *x* in *f* lies under a binder of *t*."""
    if isinstance(t, Const) or t == Var(x):
        return True

    def walk(g, bound):
        if isinstance(g, Atom):
            return not (t.name in bound and Var(x) in g.args)
        if isinstance(g, QUANT):
            # below a binder of x there are no free occurrences left
            return g.var == x or walk(g.body, bound | {g.var})
        return all(walk(k, bound) for k in children(g))

    return walk(f, frozenset())


def _subst(f: Formula, s: Mapping[str, Term], bound: frozenset) -> Formula:
    if isinstance(f, Atom):
        new = []
        for t in f.args:
            if isinstance(t, Var) and t.name in s and t.name not in bound:
                r = s[t.name]
                if _captures(r, bound):
                    raise CaptureError(f"{r} is not free for {t.name}: captured by a quantifier")
                new.append(r)
            else:
                new.append(t)
        return Atom(f.pred, tuple(new))
    if isinstance(f, Bottom):
        return f
    if isinstance(f, QUANT):
        return type(f)(f.var, _subst(f.body, s, bound | {f.var}))
    return rebuild(f, [_subst(k, s, bound) for k in children(f)])


def substitute_var(f: Formula, x: str, t: Term) -> Formula:
    """Replace the free occurrences of *x* in *f* by *t*."""
    if t == Var(x):
        return f
    return _subst(f, {x: t}, frozenset())


def apply_substitution(f: Formula, s: Substitution) -> Formula:
    """Simultaneous replacement of the free variables of *f* according to *s*."""
    if not s.mapping:
        return f
    return _subst(f, s.mapping, frozenset())


# -- subformula replacement -------------------------------------------------

def occurrences(theta: Formula, phi: Formula) -> list:
    """Paths (tuples of child indices) of the occurrences of *phi*, in preorder."""
    out = []

    def walk(g, path):
        if g == phi:
            out.append(path)
            return
        for i, k in enumerate(children(g)):
            walk(k, path + (i,))

    walk(theta, ())
    return out


def replace_subformula(theta: Formula, phi: Formula, psi: Formula, which="all") -> Formula:
    """Replace occurrences of *phi* in *theta* by *psi*.

    *which* is ``"all"`` or an iterable of 0-based occurrence numbers, counted
    in preorder among the occurrences returned by :func:`occurrences`.
    """
    paths = occurrences(theta, phi)
    if not paths:
        raise NotASubformula("formula does not occur in the target")
    if which == "all":
        chosen = set(paths)
    else:
        idx = list(which)
        bad = [i for i in idx if not 0 <= i < len(paths)]
        if bad or not idx:
            raise NotASubformula(f"occurrence numbers {bad or idx} out of range 0..{len(paths) - 1}")
        chosen = {paths[i] for i in idx}

    def walk(g, path):
        if path in chosen:
            return psi
        kids = children(g)
        if not kids:
            return g
        return rebuild(g, [walk(k, path + (i,)) for i, k in enumerate(kids)])

    return walk(theta, ())
