# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernel over 64-bit world masks (at most 64 worlds)."""

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, calloc, free
from cpython.bytes cimport PyBytes_FromStringAndSize

NAME = "cython"
MAX_WORLDS = 64

cdef enum:
    TABLE_WORLDS = 10
    ATOM = 0
    BOT = 1
    AND = 2
    OR = 3
    IMP = 4
    NEG = 5
    BOX = 6
    DIA = 7
    ALL = 8
    EX = 9


cdef class CModel:
    cdef int n, m, npreds, nconsts
    cdef uint64_t full
    cdef uint64_t* succ
    cdef uint64_t* dom
    cdef int* consts
    cdef int* offset
    cdef uint64_t* pos
    cdef uint64_t* neg
    cdef uint64_t* box_tab  # box and diamond of every mask, for small frames
    cdef uint64_t* dia_tab

    def __cinit__(self):
        self.box_tab = NULL
        self.dia_tab = NULL
        self.succ = NULL
        self.dom = NULL
        self.consts = NULL
        self.offset = NULL
        self.pos = NULL
        self.neg = NULL

    def __dealloc__(self):
        free(self.box_tab)
        free(self.dia_tab)
        free(self.succ)
        free(self.dom)
        free(self.consts)
        free(self.offset)
        free(self.pos)
        free(self.neg)


cdef class CProgram:
    cdef int size, nslots
    cdef int* ops
    cdef int* lhs
    cdef int* rhs
    cdef int* aux
    cdef int* argoff
    cdef int* argc
    cdef int* args
    cdef char* closed

    def __cinit__(self):
        self.ops = NULL
        self.lhs = NULL
        self.rhs = NULL
        self.aux = NULL
        self.argoff = NULL
        self.argc = NULL
        self.args = NULL
        self.closed = NULL

    def __dealloc__(self):
        free(self.ops)
        free(self.lhs)
        free(self.rhs)
        free(self.aux)
        free(self.argoff)
        free(self.argc)
        free(self.args)
        free(self.closed)


def make_model(int n, succ, dom, consts, arities, pos, neg, int m):
    if n > 64:
        raise ValueError("the compiled kernel handles at most 64 worlds")
    cdef CModel M = CModel()
    cdef int i, j, total = 0
    M.n = n
    M.m = m
    M.full = (<uint64_t>0xFFFFFFFFFFFFFFFF) if n == 64 else ((<uint64_t>1 << n) - 1)
    M.npreds = len(pos)
    M.nconsts = len(consts)
    M.succ = <uint64_t*>malloc(max(n, 1) * sizeof(uint64_t))
    M.dom = <uint64_t*>malloc(max(m, 1) * sizeof(uint64_t))
    M.consts = <int*>malloc(max(M.nconsts * n, 1) * sizeof(int))
    M.offset = <int*>malloc((M.npreds + 1) * sizeof(int))
    for i in range(n):
        M.succ[i] = succ[i]
    for i in range(m):
        M.dom[i] = dom[i]
    for i in range(M.nconsts):
        row = consts[i]
        for j in range(n):
            M.consts[i * n + j] = row[j]
    for i in range(M.npreds):
        M.offset[i] = total
        total += len(pos[i])
    M.offset[M.npreds] = total
    M.pos = <uint64_t*>malloc(max(total, 1) * sizeof(uint64_t))
    M.neg = <uint64_t*>malloc(max(total, 1) * sizeof(uint64_t))
    for i in range(M.npreds):
        pr = pos[i]
        nr = neg[i]
        for j in range(len(pr)):
            M.pos[M.offset[i] + j] = pr[j]
            M.neg[M.offset[i] + j] = nr[j]
    if n <= TABLE_WORLDS:
        M.box_tab = <uint64_t*>malloc((<size_t>1 << n) * sizeof(uint64_t))
        M.dia_tab = <uint64_t*>malloc((<size_t>1 << n) * sizeof(uint64_t))
        for j in range(1 << n):
            M.box_tab[j] = scan_box(M, j)
            M.dia_tab[j] = scan_dia(M, j)
    return M


def make_program(ops, lhs, rhs, aux, args, closed, int nslots):
    cdef CProgram P = CProgram()
    cdef int i, j, size = len(ops), total = 0
    P.size = size
    P.nslots = nslots
    for a in args:
        total += len(a)
    P.ops = <int*>malloc(max(size, 1) * sizeof(int))
    P.lhs = <int*>malloc(max(size, 1) * sizeof(int))
    P.rhs = <int*>malloc(max(size, 1) * sizeof(int))
    P.aux = <int*>malloc(max(size, 1) * sizeof(int))
    P.argoff = <int*>malloc(max(size, 1) * sizeof(int))
    P.argc = <int*>malloc(max(size, 1) * sizeof(int))
    P.args = <int*>malloc(max(total, 1) * sizeof(int))
    P.closed = <char*>malloc(max(size, 1) * sizeof(char))
    total = 0
    for i in range(size):
        P.ops[i] = ops[i]
        P.lhs[i] = lhs[i]
        P.rhs[i] = rhs[i]
        P.aux[i] = aux[i]
        P.closed[i] = 1 if closed[i] else 0
        a = args[i]
        P.argoff[i] = total
        P.argc[i] = len(a)
        for j in range(len(a)):
            P.args[total + j] = a[j]
        total += len(a)
    return P


cdef inline uint64_t box_of(CModel M, uint64_t s) noexcept nogil:
    if M.box_tab != NULL:
        return M.box_tab[s]
    return scan_box(M, s)


cdef inline uint64_t dia_of(CModel M, uint64_t s) noexcept nogil:
    if M.dia_tab != NULL:
        return M.dia_tab[s]
    return scan_dia(M, s)


cdef uint64_t scan_box(CModel M, uint64_t s) noexcept nogil:
    cdef uint64_t out = 0
    cdef int w
    for w in range(M.n):
        if (M.succ[w] & ~s) == 0:
            out |= (<uint64_t>1) << w
    return out


cdef uint64_t scan_dia(CModel M, uint64_t s) noexcept nogil:
    cdef uint64_t out = 0
    cdef int w
    for w in range(M.n):
        if (M.succ[w] & s) != 0:
            out |= (<uint64_t>1) << w
    return out


cdef struct Ctx:
    int* env
    int envcode      # mixed-radix code of env (radix m + 1), or -1 without open memo
    int nenv
    int* stride
    char* done
    uint64_t* memo_v
    uint64_t* memo_f
    bint nelson
    bint unbound     # set when an atom reads a variable with no value


cdef void ev(CModel M, CProgram P, Ctx* C, int node, uint64_t* ov, uint64_t* of) noexcept nogil:
    cdef int op = P.ops[node]
    cdef uint64_t v1, f1, v2, f2, v, f, d, bit
    cdef uint64_t meet_v, join_v, meet_f, join_f
    cdef int i, k, a, t, w, off, slot, saved, p
    cdef int key = -1
    if P.closed[node]:
        key = node * C.nenv
    elif C.envcode >= 0:
        key = node * C.nenv + C.envcode
    if key >= 0 and C.done[key]:
        ov[0] = C.memo_v[key]
        of[0] = C.memo_f[key]
        return
    if op == ATOM:
        p = P.aux[node]
        off = M.offset[p]
        k = P.argc[node]
        a = 1
        for i in range(k):
            slot = P.args[P.argoff[node] + i]
            if slot < 0:
                a = 0
            elif C.env[slot] < 0:
                C.unbound = 1
        if C.unbound:
            v = 0
            f = 0
        elif a:
            t = 0
            for i in range(k):
                t = t * M.m + C.env[P.args[P.argoff[node] + i]]
            v = M.pos[off + t]
            f = M.neg[off + t]
        else:
            v = 0
            f = 0
            for w in range(M.n):
                t = 0
                for i in range(k):
                    a = P.args[P.argoff[node] + i]
                    if a >= 0:
                        t = t * M.m + C.env[a]
                    else:
                        t = t * M.m + M.consts[(-a - 1) * M.n + w]
                bit = (<uint64_t>1) << w
                v |= M.pos[off + t] & bit
                f |= M.neg[off + t] & bit
    elif op == BOT:
        v = 0
        f = M.full
    elif op == NEG:
        ev(M, P, C, P.lhs[node], &v1, &f1)
        v = f1
        f = v1
    elif op == AND or op == OR or op == IMP:
        ev(M, P, C, P.lhs[node], &v1, &f1)
        ev(M, P, C, P.rhs[node], &v2, &f2)
        if op == AND:
            v = v1 & v2
            f = f1 | f2
        elif op == OR:
            v = v1 | v2
            f = f1 & f2
        else:
            v = (~v1 & M.full) | v2
            if C.nelson:
                v = box_of(M, v)
            f = v1 & f2
    elif op == BOX:
        ev(M, P, C, P.lhs[node], &v1, &f1)
        v = box_of(M, v1)
        f = dia_of(M, f1)
    elif op == DIA:
        ev(M, P, C, P.lhs[node], &v1, &f1)
        v = dia_of(M, v1)
        f = box_of(M, f1)
    else:
        slot = P.aux[node]
        saved = C.env[slot]
        meet_v = M.full
        join_v = 0
        meet_f = M.full
        join_f = 0
        for a in range(M.m):
            d = M.dom[a]
            if d == 0:
                continue
            if C.envcode >= 0:
                C.envcode += (a - C.env[slot]) * C.stride[slot]
            C.env[slot] = a
            ev(M, P, C, P.lhs[node], &v1, &f1)
            meet_v &= v1 | ~d
            join_v |= v1 & d
            meet_f &= f1 | ~d
            join_f |= f1 & d
        if C.envcode >= 0:
            C.envcode += (saved - C.env[slot]) * C.stride[slot]
        C.env[slot] = saved
        if op == ALL:
            v = box_of(M, meet_v) if C.nelson else meet_v
            f = join_f
        else:
            v = join_v
            f = box_of(M, meet_f) if C.nelson else meet_f
        v &= M.full
        f &= M.full
    if key >= 0:
        C.done[key] = 1
        C.memo_v[key] = v
        C.memo_f[key] = f
    ov[0] = v
    of[0] = f


# open nodes get a memo row per environment while the table stays this small
MEMO_LIMIT = 1 << 22


def run(CModel M, CProgram P, roots, env, bint nelson=False, bint packed=False):
    """Masks of *roots*: a list of ``(V, F)`` pairs, or with *packed* two
    byte strings holding the native 64-bit V and F masks in root order."""
    cdef Ctx C
    cdef int i, nroots = len(roots), nslots = max(P.nslots, len(env), 1)
    cdef long long nenv = 1, cells
    cdef uint64_t v, f
    for i in range(nslots):
        nenv *= M.m + 1
        if nenv * max(P.size, 1) > MEMO_LIMIT:
            nenv = 0
            break
    if nenv == 0:
        nenv = 1
        C.envcode = -1
    else:
        C.envcode = 0
    C.nenv = nenv
    cells = nenv * max(P.size, 1)
    cdef int* root_ids = <int*>malloc(max(nroots, 1) * sizeof(int))
    cdef uint64_t* out_v = <uint64_t*>malloc(max(nroots, 1) * sizeof(uint64_t))
    cdef uint64_t* out_f = <uint64_t*>malloc(max(nroots, 1) * sizeof(uint64_t))
    C.env = <int*>malloc(nslots * sizeof(int))
    C.stride = <int*>malloc(nslots * sizeof(int))
    C.done = <char*>calloc(cells, sizeof(char))
    C.memo_v = <uint64_t*>malloc(cells * sizeof(uint64_t))
    C.memo_f = <uint64_t*>malloc(cells * sizeof(uint64_t))
    C.nelson = nelson
    C.unbound = 0
    try:
        for i in range(nslots):
            C.env[i] = env[i] if i < len(env) else -1
            C.stride[i] = 1 if i == 0 else C.stride[i - 1] * (M.m + 1)
        if C.envcode >= 0:
            for i in range(nslots):
                C.envcode += (C.env[i] + 1) * C.stride[i]
        for i in range(nroots):
            root_ids[i] = roots[i]
            if root_ids[i] < 0 or root_ids[i] >= P.size:
                raise IndexError("root node out of range")
        with nogil:
            for i in range(nroots):
                ev(M, P, &C, root_ids[i], &out_v[i], &out_f[i])
        if C.unbound:
            raise ValueError("a root has a free variable with no value")
        if packed:
            return (PyBytes_FromStringAndSize(<char*>out_v, nroots * sizeof(uint64_t)),
                    PyBytes_FromStringAndSize(<char*>out_f, nroots * sizeof(uint64_t)))
        return [(out_v[i], out_f[i]) for i in range(nroots)]
    finally:
        free(root_ids)
        free(out_v)
        free(out_f)
        free(C.env)
        free(C.stride)
        free(C.done)
        free(C.memo_v)
        free(C.memo_f)
