"""Bounded model enumeration, random models and countermodel search.

Enumerated models use canonical names: worlds ``w0, w1, ...`` and
individuals ``d0, d1, ...``, the individuals in use always forming a prefix.
Isomorphic copies are not removed.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

from ..errors import BoundsTooLarge
from ..kernel.program import CompiledModel, Layout, Program
from ..syntax import Signature, check_formula, free_vars
from .evaluate import consequence_witness
from .model import Condition as C, KripkeModel, model_class

__all__ = [
    "Bounds", "enumerate_models", "iter_compiled", "count_estimate",
    "decompile", "random_model", "search_countermodel", "frames",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 10 ** 8
NEITHER, PLUS, MINUS, BOTH = 0, 1, 2, 3


@dataclass(frozen=True)
class Bounds:
    max_worlds: int = 3
    max_domain: int = 2

    def __post_init__(self):
        if self.max_worlds < 1 or self.max_domain < 1:
            raise ValueError("bounds must be at least 1")


def _statuses(cls) -> tuple:
    allowed = [NEITHER, PLUS, MINUS, BOTH]
    if C.ATOM_COMPLETE in cls:
        allowed.remove(NEITHER)
    if C.ATOM_CONSISTENT in cls:
        allowed.remove(BOTH)
    return tuple(allowed)


@lru_cache(maxsize=None)
def frames(n: int, reflexive: bool, transitive: bool) -> tuple:
    """All successor-mask lists on ``n`` worlds with the requested properties,
    in increasing order of the relation read as an ``n*n``-bit number."""
    out = []
    for rel in range(1 << (n * n)):
        succ = tuple((rel >> (u * n)) & ((1 << n) - 1) for u in range(n))
        if reflexive and any(not succ[u] >> u & 1 for u in range(n)):
            continue
        if transitive and any(succ[v] & ~succ[u] for u in range(n)
                              for v in range(n) if succ[u] >> v & 1):
            continue
        out.append(succ)
    return tuple(out)


def _frame_count(n, cls) -> int:
    if n <= 4:
        return len(frames(n, C.REFLEXIVE in cls, C.TRANSITIVE in cls))
    return 1 << (n * n)


def count_estimate(sig: Signature, bounds: Bounds, cls) -> int:
    """Upper bound on the number of models :func:`iter_compiled` visits."""
    cls = model_class(cls)
    d = bounds.max_domain
    s = len(_statuses(cls))
    atoms = sum(d ** k for k in sig.predicates.values())
    total = 0
    for n in range(1, bounds.max_worlds + 1):
        doms = (2 ** d - 1) if C.CONSTANT_DOMAIN in cls else (2 ** d - 1) ** n
        total += _frame_count(n, cls) * doms * d ** (len(sig.constants) * n) * s ** (n * atoms)
    return total


def _domain_assignments(n, succ, d, constant):
    if constant:
        for k in range(1, d + 1):
            yield (1 << k) - 1, ((1 << k) - 1,) * n
        return
    for doms in itertools.product(range(1, 1 << d), repeat=n):
        union = 0
        for x in doms:
            union |= x
        if union & (union + 1):
            continue  # individuals in use must be a prefix
        if any(succ[u] >> v & 1 and doms[u] & ~doms[v]
               for u in range(n) for v in range(n)):
            continue
        yield union, doms


def _constant_assignments(n, succ, doms, nconsts):
    per_world = [[e for e in range(doms[w].bit_length()) if doms[w] >> e & 1] for w in range(n)]
    choices = []
    for vals in itertools.product(*per_world):
        if all(vals[u] == vals[v] for u in range(n) for v in range(n) if succ[u] >> v & 1):
            choices.append(list(vals))
    return itertools.product(choices, repeat=nconsts)


def _hereditary(succ, n, masks) -> bool:
    for table in masks:
        for mask in table:
            for u in range(n):
                if mask >> u & 1 and succ[u] & ~mask:
                    return False
    return True


def _frame_models(layout, n, succ, bounds, cls, statuses):
    """Compiled models over one frame, in enumeration order."""
    arities = layout.arities()
    worlds = tuple(f"w{i}" for i in range(n))
    hereditary = C.HEREDITARY in cls
    for union, doms in _domain_assignments(n, succ, bounds.max_domain, C.CONSTANT_DOMAIN in cls):
        size = union.bit_length()
        inds = tuple(f"d{i}" for i in range(size))
        dom = [0] * size
        for w in range(n):
            for e in range(size):
                if doms[w] >> e & 1:
                    dom[e] |= 1 << w
        slots = []
        for w in range(n):
            elems = [e for e in range(size) if doms[w] >> e & 1]
            for p, k in enumerate(arities):
                for tup in itertools.product(elems, repeat=k):
                    t = 0
                    for e in tup:
                        t = t * size + e
                    slots.append((p, t, 1 << w))
        zero = [size ** k for k in arities]
        for consts in _constant_assignments(n, succ, doms, len(layout.consts)):
            consts = [list(c) for c in consts]
            for combo in itertools.product(statuses, repeat=len(slots)):
                pos = [[0] * z for z in zero]
                neg = [[0] * z for z in zero]
                for (p, t, bit), st in zip(slots, combo):
                    if st & PLUS:
                        pos[p][t] |= bit
                    if st & MINUS:
                        neg[p][t] |= bit
                if hereditary and not _hereditary(succ, n, (pos + neg)):
                    continue
                yield CompiledModel(layout, worlds, list(succ), inds, dom, consts, pos, neg)


def _all_frames(bounds, cls):
    for n in range(1, bounds.max_worlds + 1):
        for succ in frames(n, C.REFLEXIVE in cls, C.TRANSITIVE in cls):
            yield n, succ


def iter_compiled(sig: Signature, bounds: Bounds, cls="QBK", cap: int | None = DEFAULT_CAP):
    """Yield the models of :func:`enumerate_models` in compiled form."""
    cls = model_class(cls)
    if cap is not None:
        est = count_estimate(sig, bounds, cls)
        if est > cap:
            raise BoundsTooLarge(f"up to {est} models within bounds; cap is {cap}")
    layout = Layout(sig)
    statuses = _statuses(cls)
    for n, succ in _all_frames(bounds, cls):
        yield from _frame_models(layout, n, succ, bounds, cls, statuses)


def decompile(cm: CompiledModel) -> KripkeModel:
    """Turn a compiled model back into a :class:`KripkeModel`."""
    lay = cm.layout
    worlds, inds = cm.worlds, cm.individuals
    n, size = cm.n, len(inds)
    access = [(worlds[u], worlds[v]) for u in range(n) for v in range(n) if cm.succ[u] >> v & 1]
    domains = {w: [inds[e] for e in range(size) if cm.dom[e] >> i & 1] for i, w in enumerate(worlds)}
    const_interp = {w: {c: inds[cm.consts[j][i]] for j, c in enumerate(lay.consts)}
                    for i, w in enumerate(worlds)}
    pos = {w: {} for w in worlds}
    neg = {w: {} for w in worlds}
    for p, name in enumerate(lay.preds):
        k = lay.signature.predicates[name]
        for t, tup in enumerate(itertools.product(range(size), repeat=k)):
            for table, out in ((cm.pos, pos), (cm.neg, neg)):
                mask = table[p][t]
                for i, w in enumerate(worlds):
                    if mask >> i & 1:
                        out[w].setdefault(name, []).append(tuple(inds[e] for e in tup))
    return KripkeModel(lay.signature, worlds, access, domains, const_interp, pos, neg)


def enumerate_models(sig: Signature, bounds: Bounds = Bounds(), cls="QBK", cap: int | None = DEFAULT_CAP):
    """Every model over *sig* within *bounds* satisfying the class conditions.

    Raises :class:`BoundsTooLarge` when a cheap upper bound on the number of
    models exceeds *cap*.
    """
    for cm in iter_compiled(sig, bounds, cls, cap):
        yield decompile(cm)


# -- random models ----------------------------------------------------------

def _closure(succ, n):
    reach = [s | (1 << u) for u, s in enumerate(succ)]
    changed = True
    while changed:
        changed = False
        for u in range(n):
            acc = reach[u]
            for v in range(n):
                if acc >> v & 1:
                    acc |= reach[v]
            if acc != reach[u]:
                reach[u] = acc
                changed = True
    return reach


def random_model(sig: Signature, rng: random.Random, bounds: Bounds = Bounds(), cls="QBK",
                 density: float = 0.5) -> KripkeModel:
    """A random model of the class within the bounds."""
    cls = model_class(cls)
    n = rng.randint(1, bounds.max_worlds)
    succ = [0] * n
    for u in range(n):
        for v in range(n):
            if rng.random() < density:
                succ[u] |= 1 << v
    if C.REFLEXIVE in cls:
        succ = [s | (1 << u) for u, s in enumerate(succ)]
    if C.TRANSITIVE in cls:
        succ = _transitive(succ, n)
    d = bounds.max_domain
    if C.CONSTANT_DOMAIN in cls:
        base = rng.randint(1, (1 << d) - 1)
        doms = [base] * n
    else:
        doms = [rng.randint(1, (1 << d) - 1) for _ in range(n)]
        reach = _closure(succ, n)
        doms = [_union(doms[u] for u in range(n) if reach[u] >> v & 1) for v in range(n)]
    # constants: one value per weakly connected component
    comp = _components(succ, n)
    const_vals = {}
    for c in sorted(sig.constants):
        vals = [0] * n
        for members in comp:
            e = rng.randrange(d)
            for w in members:
                vals[w] = e
                if C.CONSTANT_DOMAIN in cls:
                    doms = [x | (1 << e) for x in doms]
                else:
                    doms[w] |= 1 << e
        const_vals[c] = vals
    if C.CONSTANT_DOMAIN not in cls:
        reach = _closure(succ, n)
        doms = [_union(doms[u] for u in range(n) if reach[u] >> v & 1) for v in range(n)]
    used = _union(doms)
    names = {e: f"d{i}" for i, e in enumerate(e for e in range(d) if used >> e & 1)}
    worlds = [f"w{i}" for i in range(n)]
    statuses = _statuses(cls)
    pos = {w: {} for w in worlds}
    neg = {w: {} for w in worlds}
    for i, w in enumerate(worlds):
        elems = [names[e] for e in range(d) if doms[i] >> e & 1]
        for p, k in sorted(sig.predicates.items()):
            for tup in itertools.product(elems, repeat=k):
                st = rng.choice(statuses)
                if st & PLUS:
                    pos[w].setdefault(p, set()).add(tup)
                if st & MINUS:
                    neg[w].setdefault(p, set()).add(tup)
    if C.HEREDITARY in cls:
        reach = _closure(succ, n)
        for table in (pos, neg):
            for v in range(n):
                for u in range(n):
                    if reach[u] >> v & 1 and u != v:
                        for p, ts in table[worlds[u]].items():
                            table[worlds[v]].setdefault(p, set()).update(ts)
        if C.ATOM_CONSISTENT in cls:
            clash = {(p, t) for w in worlds for p, ts in pos[w].items() for t in ts
                     if t in neg[w].get(p, ())}
            for w in worlds:
                for p, t in clash:
                    neg[w].get(p, set()).discard(t)
    access = [(worlds[u], worlds[v]) for u in range(n) for v in range(n) if succ[u] >> v & 1]
    domains = {worlds[i]: [names[e] for e in range(d) if doms[i] >> e & 1] for i in range(n)}
    const_interp = {worlds[i]: {c: names[const_vals[c][i]] for c in const_vals} for i in range(n)}
    return KripkeModel(sig, worlds, access, domains, const_interp, pos, neg)


def _transitive(succ, n):
    tc = list(succ)
    changed = True
    while changed:
        changed = False
        for u in range(n):
            acc = tc[u]
            for v in range(n):
                if tc[u] >> v & 1:
                    acc |= tc[v]
            if acc != tc[u]:
                tc[u] = acc
                changed = True
    return tc


def _union(xs):
    out = 0
    for x in xs:
        out |= x
    return out


def _components(succ, n):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u in range(n):
        for v in range(n):
            if succ[u] >> v & 1:
                parent[find(u)] = find(v)
    groups: dict = {}
    for w in range(n):
        groups.setdefault(find(w), []).append(w)
    return list(groups.values())


# -- countermodel search ----------------------------------------------------

def _prepare(gamma, delta, sig):
    prog = Program(sig)
    groots = [prog.add(g) for g in gamma]
    droots = [prog.add(f) for f in delta]
    dvars = sorted(set().union(*map(free_vars, delta))) if delta else []
    return prog, groots, droots, dvars


def _search_frame(args):
    sig, gamma, delta, bounds, cls, n, succ = args
    prog, groots, droots, dvars = _prepare(gamma, delta, sig)
    layout = prog.layout
    for cm in _frame_models(layout, n, succ, bounds, cls, _statuses(cls)):
        hit = consequence_witness(cm, prog, groots, droots, dvars)
        if hit is not None:
            # decompiled here so the result pickles across worker processes
            w, env = hit
            return decompile(cm), cm.worlds[w], {x: cm.individuals[a] for x, a in sorted(env.items())}
    return None


def _signature_for(gamma, delta, sig):
    if sig is not None:
        return sig
    from ..frontend import infer_signature
    return infer_signature(list(gamma) + list(delta))


def search_countermodel(gamma, delta, bounds: Bounds = Bounds(), cls="QBK",
                        sig: Signature | None = None, cap: int | None = DEFAULT_CAP,
                        workers: int = 1):
    """First model (in enumeration order) with a world verifying *gamma* and,
    under some assignment, no member of *delta*.

    Returns ``(model, world, assignment)`` or ``None``.  ``None`` only means
    that no countermodel exists within the bounds.  With several workers the
    frames are checked in parallel but the answer is the same as with one.
    """
    gamma, delta = tuple(gamma), tuple(delta)
    cls = model_class(cls)
    sig = _signature_for(gamma, delta, sig)
    for g in gamma:
        if free_vars(g):
            raise ValueError(f"hypotheses must be sentences; free variables {sorted(free_vars(g))}")
    for f in gamma + delta:
        check_formula(f, sig)
    if cap is not None:
        est = count_estimate(sig, bounds, cls)
        if est > cap:
            raise BoundsTooLarge(f"up to {est} models within bounds; cap is {cap}")
    tasks = [(sig, gamma, delta, bounds, cls, n, succ) for n, succ in _all_frames(bounds, cls)]
    found = None
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for res in pool.map(_search_frame, tasks):
                if res is not None:
                    found = res
                    break
            pool.shutdown(cancel_futures=True)
    else:
        for task in tasks:
            found = _search_frame(task)
            if found is not None:
                break
    return found
