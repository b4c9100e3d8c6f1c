"""Kripke models with twin (verification/falsification) structures per world,
and the model classes selected by side conditions."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ..errors import InvariantViolation
from ..syntax import Signature

__all__ = [
    "Condition", "ModelClass", "KripkeModel", "Violation", "validate_model",
    "PRESETS", "model_class", "individual_key",
]


class Condition(enum.Enum):
    ATOM_COMPLETE = "AtomComplete"
    ATOM_CONSISTENT = "AtomConsistent"
    CONSTANT_DOMAIN = "ConstantDomain"
    REFLEXIVE = "Reflexive"
    TRANSITIVE = "Transitive"
    HEREDITARY = "Hereditary"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ModelClass:
    name: str
    conditions: frozenset = frozenset()

    def __contains__(self, cond: Condition) -> bool:
        return cond in self.conditions

    def __str__(self):
        return self.name


C = Condition
_S4 = {C.REFLEXIVE, C.TRANSITIVE}
PRESETS: dict = {
    "QBK": ModelClass("QBK"),
    "QBKo": ModelClass("QBKo", frozenset({C.ATOM_COMPLETE})),
    "QB3K": ModelClass("QB3K", frozenset({C.ATOM_CONSISTENT})),
    "QB3Ko": ModelClass("QB3Ko", frozenset({C.ATOM_COMPLETE, C.ATOM_CONSISTENT})),
    "QBT": ModelClass("QBT", frozenset({C.REFLEXIVE})),
    "QBK4": ModelClass("QBK4", frozenset({C.TRANSITIVE})),
    "QBS4": ModelClass("QBS4", frozenset(_S4)),
    "QB3S4": ModelClass("QB3S4", frozenset(_S4 | {C.ATOM_CONSISTENT})),
    "QBKsharp": ModelClass("QBKsharp", frozenset({C.CONSTANT_DOMAIN})),
    "QN4bot": ModelClass("QN4bot", frozenset(_S4 | {C.HEREDITARY})),
    "QN3": ModelClass("QN3", frozenset(_S4 | {C.HEREDITARY, C.ATOM_CONSISTENT})),
}
_ALIASES = {
    "QBK°": "QBKo", "QBK♯": "QBKsharp", "QBK#": "QBKsharp",
    "QN4⊥": "QN4bot", "QN4": "QN4bot",
}


def model_class(spec) -> ModelClass:
    """Resolve a preset name, or a ``+``-joined list of condition names."""
    if isinstance(spec, ModelClass):
        return spec
    name = _ALIASES.get(spec, spec)
    if name in PRESETS:
        return PRESETS[name]
    conds = set()
    for part in name.split("+"):
        part = _ALIASES.get(part, part)
        if part in PRESETS:
            conds |= PRESETS[part].conditions
        else:
            try:
                conds.add(Condition(part))
            except ValueError:
                raise ValueError(f"unknown model class or condition {part!r}") from None
    return ModelClass(name, frozenset(conds))


def individual_key(e):
    return (0, e, "") if isinstance(e, int) else (1, 0, str(e))


@dataclass(frozen=True)
class Violation:
    condition: str
    message: str

    def __str__(self):
        return f"{self.condition}: {self.message}"


def _freeze_ext(ext) -> dict:
    out = {}
    for w, preds in (ext or {}).items():
        out[w] = {p: frozenset(tuple(t) for t in tuples) for p, tuples in preds.items()}
    return out


@dataclass(eq=False)
class KripkeModel:
    """Frame, local domains, rigid constants and two extension maps per world.

    ``positive[w][P]`` is the set of tuples verifying ``P`` at ``w`` and
    ``negative[w][P]`` the set falsifying it; missing entries are empty.
    Structural invariants are checked on construction.
    """

    signature: Signature
    worlds: tuple
    access: frozenset
    domains: Mapping
    const_interp: Mapping = field(default_factory=dict)
    positive: Mapping = field(default_factory=dict)
    negative: Mapping = field(default_factory=dict)
    check: bool = True

    def __post_init__(self):
        self.worlds = tuple(self.worlds)
        self.access = frozenset(tuple(p) for p in self.access)
        self.domains = {w: frozenset(d) for w, d in self.domains.items()}
        self.const_interp = {w: dict(cs) for w, cs in (self.const_interp or {}).items()}
        self.positive = _freeze_ext(self.positive)
        self.negative = _freeze_ext(self.negative)
        self._compiled = None
        self._succ = None
        if self.check:
            self.check_structure()

    # -- structure ---------------------------------------------------------

    def check_structure(self) -> None:
        ws = self.worlds
        if not ws:
            raise InvariantViolation("worlds-nonempty", "a model needs at least one world")
        if len(set(ws)) != len(ws):
            raise InvariantViolation("world-ids", "duplicate world identifiers")
        wset = set(ws)
        for u, v in self.access:
            if u not in wset or v not in wset:
                raise InvariantViolation("access-worlds", f"pair ({u}, {v}) mentions an unknown world")
        for w in ws:
            if not self.domains.get(w):
                raise InvariantViolation("domain-nonempty", f"domain of {w} is empty or missing")
        extra = set(self.domains) - wset
        if extra:
            raise InvariantViolation("domain-worlds", f"domains given for unknown worlds {sorted(map(str, extra))}")
        for u, v in self.access:
            if not self.domains[u] <= self.domains[v]:
                raise InvariantViolation(
                    "expanding-domains", f"{u} R {v} but the domain of {u} is not included in that of {v}")
        consts = self.signature.constants
        for w in ws:
            interp = self.const_interp.get(w, {})
            missing = consts - interp.keys()
            if missing:
                raise InvariantViolation("constant-total", f"constants {sorted(missing)} uninterpreted at {w}")
            unknown = interp.keys() - consts
            if unknown:
                raise InvariantViolation("constant-declared", f"undeclared constants {sorted(unknown)} at {w}")
            for c, e in interp.items():
                if e not in self.domains[w]:
                    raise InvariantViolation("constant-in-domain", f"{c} denotes {e!r} outside the domain of {w}")
        for u, v in self.access:
            for c in consts:
                if self.const_interp[u][c] != self.const_interp[v][c]:
                    raise InvariantViolation("rigid-constants", f"{u} R {v} but {c} is interpreted differently")
        for label, ext in (("positive", self.positive), ("negative", self.negative)):
            extra = set(ext) - wset
            if extra:
                raise InvariantViolation("extension-worlds", f"{label} extension for unknown worlds")
            for w, preds in ext.items():
                for p, tuples in preds.items():
                    if p not in self.signature.predicates:
                        raise InvariantViolation("extension-predicate", f"{label} extension of undeclared {p} at {w}")
                    k = self.signature.predicates[p]
                    for t in tuples:
                        if len(t) != k:
                            raise InvariantViolation(
                                "extension-arity", f"{label} tuple {list(t)} for {p}/{k} at {w}")
                        if not set(t) <= self.domains[w]:
                            raise InvariantViolation(
                                "extension-in-domain", f"{label} tuple {list(t)} for {p} at {w} leaves the domain")

    # -- accessors ---------------------------------------------------------

    def successors(self, w) -> tuple:
        if self._succ is None:
            succ = {x: [] for x in self.worlds}
            for u, v in self.access:
                succ[u].append(v)
            order = {x: i for i, x in enumerate(self.worlds)}
            self._succ = {x: tuple(sorted(vs, key=order.__getitem__)) for x, vs in succ.items()}
        return self._succ[w]

    def ext(self, polarity: str, w, pred: str) -> frozenset:
        table = self.positive if polarity == "+" else self.negative
        return table.get(w, {}).get(pred, frozenset())

    def individuals(self) -> list:
        pool = set()
        for d in self.domains.values():
            pool |= d
        return sorted(pool, key=individual_key)

    def ground_tuples(self, w, pred: str) -> Iterable[tuple]:
        k = self.signature.predicates[pred]
        dom = sorted(self.domains[w], key=individual_key)
        return itertools.product(dom, repeat=k)

    def compiled(self):
        """Kernel representation, built on first use and cached."""
        if self._compiled is None:
            from ..kernel.program import compile_model
            self._compiled = compile_model(self)
        return self._compiled

    def __eq__(self, other):
        if not isinstance(other, KripkeModel):
            return NotImplemented
        return (self.signature == other.signature and self.worlds == other.worlds
                and self.access == other.access and self.domains == other.domains
                and self.const_interp == other.const_interp
                and _strip(self.positive) == _strip(other.positive)
                and _strip(self.negative) == _strip(other.negative))

    __hash__ = None


def _strip(ext):
    return {w: {p: t for p, t in preds.items() if t} for w, preds in ext.items()
            if any(preds.values())}


def validate_model(m: KripkeModel, cls) -> list:
    """Return the violations of the side conditions of *cls* (empty if none)."""
    cls = model_class(cls)
    out = []
    if C.REFLEXIVE in cls:
        for w in m.worlds:
            if (w, w) not in m.access:
                out.append(Violation("Reflexive", f"{w} does not see itself"))
    if C.TRANSITIVE in cls:
        for u, v in sorted(m.access, key=str):
            for x in m.successors(v):
                if (u, x) not in m.access:
                    out.append(Violation("Transitive", f"{u} R {v} R {x} but not {u} R {x}"))
    if C.CONSTANT_DOMAIN in cls:
        first = m.domains[m.worlds[0]]
        for w in m.worlds[1:]:
            if m.domains[w] != first:
                out.append(Violation("ConstantDomain", f"domain of {w} differs from that of {m.worlds[0]}"))
    preds = sorted(m.signature.predicates)
    if C.ATOM_COMPLETE in cls or C.ATOM_CONSISTENT in cls:
        for w in m.worlds:
            for p in preds:
                pos, neg = m.ext("+", w, p), m.ext("-", w, p)
                for t in m.ground_tuples(w, p):
                    if C.ATOM_COMPLETE in cls and t not in pos and t not in neg:
                        out.append(Violation("AtomComplete", f"{_atom(p, t)} neither verified nor falsified at {w}"))
                    if C.ATOM_CONSISTENT in cls and t in pos and t in neg:
                        out.append(Violation("AtomConsistent", f"{_atom(p, t)} both verified and falsified at {w}"))
    if C.HEREDITARY in cls:
        for u, v in sorted(m.access, key=str):
            for p in preds:
                for pol in "+-":
                    lost = m.ext(pol, u, p) - m.ext(pol, v, p)
                    for t in sorted(lost, key=lambda t: [individual_key(e) for e in t]):
                        out.append(Violation("Hereditary", f"{_atom(p, t)} in {pol} at {u} but not at {v}"))
    return out


def _atom(p, t):
    return f"{p}({', '.join(map(str, t))})" if t else p
