"""Compilation of formulas into node tables and of models into world bitmasks.

A compiled formula is a hash-consed DAG.  Evaluating a node yields a pair of
bitmasks ``(V, F)``: bit ``w`` of ``V`` is set iff the node is verified at
world ``w`` under the current environment, likewise ``F`` for falsification.
Bits at worlds whose domain misses an environment value are meaningless and
are always masked out by the enclosing quantifier.
"""

from __future__ import annotations

from ..errors import ArityError, UnknownSymbol
from ..syntax import (
    And, Atom, Bottom, Box, Const, Diamond, Exists, Forall, Imp, Or, SNeg,
    Signature, free_vars,
)

ATOM, BOT, AND, OR, IMP, NEG, BOX, DIA, ALL, EX = range(10)

_OPS = {And: AND, Or: OR, Imp: IMP, SNeg: NEG, Box: BOX, Diamond: DIA,
        Forall: ALL, Exists: EX}


class Layout:
    """Fixed numbering of predicates and constants for a signature."""

    __slots__ = ("signature", "preds", "pred_index", "consts", "const_index")

    def __init__(self, sig: Signature):
        self.signature = sig
        self.preds = tuple(sorted(sig.predicates))
        self.pred_index = {p: i for i, p in enumerate(self.preds)}
        self.consts = tuple(sorted(sig.constants))
        self.const_index = {c: i for i, c in enumerate(self.consts)}

    def arities(self):
        return [self.signature.predicates[p] for p in self.preds]


class Program:
    """Growing node table; ``add`` returns the node id of a formula."""

    def __init__(self, sig: Signature):
        self.layout = Layout(sig)
        self.ops: list = []
        self.lhs: list = []
        self.rhs: list = []
        self.aux: list = []
        self.args: list = []
        self.closed: list = []
        self.slots: dict = {}
        self._ids: dict = {}
        self._frozen = None
        self._backend = None

    def __len__(self):
        return len(self.ops)

    def _slot(self, name):
        return self.slots.setdefault(name, len(self.slots))

    def _node(self, key, op, lhs, rhs, aux, args, closed):
        nid = self._ids.get(key)
        if nid is None:
            nid = len(self.ops)
            self.ops.append(op)
            self.lhs.append(lhs)
            self.rhs.append(rhs)
            self.aux.append(aux)
            self.args.append(args)
            self.closed.append(closed)
            self._ids[key] = nid
            self._frozen = None
        return nid

    def add(self, f) -> int:
        cached = self._ids.get(f)
        if cached is not None:
            return cached
        closed = not free_vars(f)
        if isinstance(f, Atom):
            lay = self.layout
            if f.pred not in lay.pred_index:
                raise UnknownSymbol(f"unknown predicate {f.pred!r}")
            if lay.signature.predicates[f.pred] != len(f.args):
                raise ArityError(f"{f.pred} expects {lay.signature.predicates[f.pred]} argument(s)")
            enc = []
            for t in f.args:
                if isinstance(t, Const):
                    if t.name not in lay.const_index:
                        raise UnknownSymbol(f"unknown constant {t.name!r}")
                    enc.append(-lay.const_index[t.name] - 1)
                else:
                    enc.append(self._slot(t.name))
            return self._node(f, ATOM, -1, -1, lay.pred_index[f.pred], tuple(enc), closed)
        if isinstance(f, Bottom):
            return self._node(f, BOT, -1, -1, 0, (), True)
        op = _OPS[type(f)]
        if op in (AND, OR, IMP):
            a, b = self.add(f.left), self.add(f.right)
            return self._node(f, op, a, b, 0, (), closed)
        if op in (ALL, EX):
            a = self.add(f.body)
            return self._node(f, op, a, -1, self._slot(f.var), (), closed)
        a = self.add(f.body)
        return self._node(f, op, a, -1, 0, (), closed)

    def frozen(self, kb):
        """Snapshot of the current table for kernel backend *kb*."""
        if self._frozen is None or self._backend is not kb:
            self._backend = kb
            self._frozen = kb.make_program(
                self.ops, self.lhs, self.rhs, self.aux, self.args, self.closed,
                len(self.slots))
        return self._frozen

    def run(self, cmodel, roots, env=None, nelson=False, packed=False):
        """Evaluate the nodes *roots* on a compiled model at every world.

        Returns ``[(V, F), ...]``.  With *packed* the answer is a pair of
        opaque values holding all V masks and all F masks; they compare equal
        across runs on the same backend exactly when the masks do.
        """
        from . import backend
        env = env or {}
        slots = [-1] * max(1, len(self.slots))
        for name, val in env.items():
            if not 0 <= val < len(cmodel.individuals):
                raise ValueError(f"individual index {val} out of range for {name!r}")
            if name in self.slots:
                slots[self.slots[name]] = val
        kb = backend(cmodel.n)
        return kb.run(cmodel.kernel(kb), self.frozen(kb), list(roots), slots, nelson, packed)


class CompiledModel:
    """World-indexed bitmask form of a model over a layout.

    ``individuals`` is the global pool; environments map variables to pool
    indices.  ``pos[p][t]`` is the mask of worlds verifying predicate ``p`` of
    the tuple with mixed-radix index ``t``.
    """

    __slots__ = ("layout", "n", "worlds", "world_index", "succ", "individuals",
                 "ind_index", "dom", "consts", "pos", "neg", "_kernel", "_kbackend")

    def __init__(self, layout, worlds, succ, individuals, dom, consts, pos, neg):
        self.layout = layout
        self.n = len(worlds)
        self.worlds = tuple(worlds)
        self.world_index = {w: i for i, w in enumerate(worlds)}
        self.succ = succ
        self.individuals = tuple(individuals)
        self.ind_index = {e: i for i, e in enumerate(individuals)}
        self.dom = dom
        self.consts = consts
        self.pos = pos
        self.neg = neg
        self._kernel = None
        self._kbackend = None

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def tuple_index(self, tup) -> int:
        m = len(self.individuals)
        t = 0
        for e in tup:
            t = t * m + e
        return t

    def domain_mask(self, tup) -> int:
        mask = self.full
        for e in tup:
            mask &= self.dom[e]
        return mask

    def box(self, s: int) -> int:
        out = 0
        for w in range(self.n):
            if self.succ[w] & ~s == 0:
                out |= 1 << w
        return out

    def kernel(self, kb):
        if self._kernel is None or self._kbackend is not kb:
            self._kbackend = kb
            self._kernel = kb.make_model(
                self.n, self.succ, self.dom, self.consts, self.layout.arities(),
                self.pos, self.neg, len(self.individuals))
        return self._kernel


def compile_model(m, layout: Layout | None = None) -> CompiledModel:
    layout = layout or Layout(m.signature)
    worlds = m.worlds
    widx = {w: i for i, w in enumerate(worlds)}
    inds = m.individuals()
    iidx = {e: i for i, e in enumerate(inds)}
    succ = [0] * len(worlds)
    for u, v in m.access:
        succ[widx[u]] |= 1 << widx[v]
    dom = [0] * len(inds)
    for w, d in m.domains.items():
        for e in d:
            dom[iidx[e]] |= 1 << widx[w]
    consts = [[iidx[m.const_interp[w][c]] for w in worlds] for c in layout.consts]
    size = len(inds)
    pos, neg = [], []
    for p in layout.preds:
        k = m.signature.predicates[p]
        for table, out in ((m.positive, pos), (m.negative, neg)):
            masks = [0] * (size ** k)
            for w, preds in table.items():
                bit = 1 << widx[w]
                for tup in preds.get(p, ()):
                    t = 0
                    for e in tup:
                        t = t * size + iidx[e]
                    masks[t] |= bit
            out.append(masks)
    return CompiledModel(layout, worlds, succ, inds, dom, consts, pos, neg)
