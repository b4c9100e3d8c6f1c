"""Pure-Python evaluation kernel over arbitrary-precision world masks."""

from __future__ import annotations

import sys

from .program import ALL, AND, ATOM, BOT, BOX, DIA, EX, IMP, NEG, OR

NAME = "python"
MAX_WORLDS = sys.maxsize


class _Model:
    __slots__ = ("n", "full", "succ", "dom", "consts", "pos", "neg", "m")

    def __init__(self, n, succ, dom, consts, arities, pos, neg, m):
        self.n = n
        self.full = (1 << n) - 1
        self.succ = list(succ)
        self.dom = list(dom)
        self.consts = [list(c) for c in consts]
        self.pos = [list(p) for p in pos]
        self.neg = [list(p) for p in neg]
        self.m = m


class _Program:
    __slots__ = ("ops", "lhs", "rhs", "aux", "args", "closed", "nslots")

    def __init__(self, ops, lhs, rhs, aux, args, closed, nslots):
        self.ops = tuple(ops)
        self.lhs = tuple(lhs)
        self.rhs = tuple(rhs)
        self.aux = tuple(aux)
        self.args = tuple(args)
        self.closed = tuple(closed)
        self.nslots = nslots


def make_model(n, succ, dom, consts, arities, pos, neg, m):
    return _Model(n, succ, dom, consts, arities, pos, neg, m)


def make_program(ops, lhs, rhs, aux, args, closed, nslots):
    return _Program(ops, lhs, rhs, aux, args, closed, nslots)


def run(model, prog, roots, env, nelson=False, packed=False):
    env = list(env)
    memo: dict = {}
    n, full, succ, dom = model.n, model.full, model.succ, model.dom
    ops, lhs, rhs, aux, args, closed = (prog.ops, prog.lhs, prog.rhs,
                                        prog.aux, prog.args, prog.closed)

    def box(s):
        out = 0
        for w in range(n):
            if succ[w] & ~s == 0:
                out |= 1 << w
        return out

    def dia(s):
        out = 0
        for w in range(n):
            if succ[w] & s:
                out |= 1 << w
        return out

    def atom(node):
        p = aux[node]
        enc = args[node]
        pos, neg, size = model.pos[p], model.neg[p], model.m
        if any(a >= 0 and env[a] < 0 for a in enc):
            raise ValueError("a root has a free variable with no value")
        if all(a >= 0 for a in enc):
            t = 0
            for a in enc:
                t = t * size + env[a]
            return pos[t], neg[t]
        v = f = 0
        for w in range(n):
            t = 0
            for a in enc:
                t = t * size + (env[a] if a >= 0 else model.consts[-a - 1][w])
            bit = 1 << w
            v |= pos[t] & bit
            f |= neg[t] & bit
        return v, f

    def ev(node):
        # open nodes are memoized under the current environment
        key = node if closed[node] else (node, *env)
        hit = memo.get(key)
        if hit is not None:
            return hit
        op = ops[node]
        if op == ATOM:
            r = atom(node)
        elif op == BOT:
            r = (0, full)
        elif op == NEG:
            v, f = ev(lhs[node])
            r = (f, v)
        elif op in (AND, OR, IMP):
            v1, f1 = ev(lhs[node])
            v2, f2 = ev(rhs[node])
            if op == AND:
                r = (v1 & v2, f1 | f2)
            elif op == OR:
                r = (v1 | v2, f1 & f2)
            else:
                v = ~v1 & full | v2
                r = (box(v) if nelson else v, v1 & f2)
        elif op == BOX:
            v, f = ev(lhs[node])
            r = (box(v), dia(f))
        elif op == DIA:
            v, f = ev(lhs[node])
            r = (dia(v), box(f))
        else:
            slot = aux[node]
            saved = env[slot]
            meet_v, join_v = full, 0
            meet_f, join_f = full, 0
            for a in range(model.m):
                d = dom[a]
                if not d:
                    continue
                env[slot] = a
                v, f = ev(lhs[node])
                meet_v &= v | ~d
                join_v |= v & d
                meet_f &= f | ~d
                join_f |= f & d
            env[slot] = saved
            if op == ALL:
                r = (box(meet_v) if nelson else meet_v, join_f)
            else:
                r = (join_v, box(meet_f) if nelson else meet_f)
            r = (r[0] & full, r[1] & full)
        memo[key] = r
        return r

    out = [ev(r) for r in roots]
    if packed:
        return tuple(v for v, _ in out), tuple(f for _, f in out)
    return out
