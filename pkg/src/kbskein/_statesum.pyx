# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled state enumeration kernel.

Each state index ``s`` encodes one smoothing per crossing (bit ``c`` clear:
A-smoothing, set: B-smoothing).  For every state in ``[start, start+count)``
the kernel traces the closed components and writes a packed key (see
``kbskein._keys``) into ``out``.
"""
from libc.stdlib cimport malloc, free
from libc.string cimport memset

cdef inline long long _gcd(long long a, long long b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


def enumerate_states(const int[:] port_arc, const int[:] port_end,
                     const int[:] arc_e0, const int[:] arc_e1,
                     const long long[:] arc_cx, const long long[:] arc_cy,
                     long long start, long long count,
                     unsigned long long[:] out):
    cdef Py_ssize_t narcs = arc_e0.shape[0]
    cdef long long s, st
    cdef Py_ssize_t a, cur, i
    cdef int fwd, arrive, leave, local, base, bit, ncross, nA
    cdef long long tx, ty, px, py, cls_p, cls_q, g
    cdef int triv, ness, have_cls, status = 0
    cdef unsigned long long key
    cdef char* used = <char*> malloc(narcs + 1)
    if used == NULL:
        raise MemoryError()
    ncross = port_arc.shape[0] // 4
    with nogil:
        for i in range(count):
            st = start + i
            nA = 0
            for a in range(ncross):
                if not ((st >> a) & 1):
                    nA += 1
            memset(used, 0, narcs)
            triv = 0
            ness = 0
            have_cls = 0
            cls_p = 0
            cls_q = 0
            for a in range(narcs):
                if used[a]:
                    continue
                tx = 0
                ty = 0
                cur = a
                fwd = 1
                while True:
                    used[cur] = 1
                    if fwd:
                        tx += arc_cx[cur]
                        ty += arc_cy[cur]
                        arrive = arc_e1[cur]
                    else:
                        tx -= arc_cx[cur]
                        ty -= arc_cy[cur]
                        arrive = arc_e0[cur]
                    base = arrive & ~3
                    local = arrive & 3
                    bit = (st >> (arrive >> 2)) & 1
                    if bit:
                        leave = base | (3 - local)
                    else:
                        leave = base | (local ^ 1)
                    cur = port_arc[leave]
                    fwd = port_end[leave] == 0
                    if cur == a:
                        break
                if tx == 0 and ty == 0:
                    triv += 1
                    continue
                g = _gcd(tx, ty)
                if g != 1:
                    status = 1
                    break
                if tx < 0 or (tx == 0 and ty < 0):
                    tx = -tx
                    ty = -ty
                if have_cls:
                    if tx != cls_p or ty != cls_q:
                        status = 2
                        break
                else:
                    have_cls = 1
                    cls_p = tx
                    cls_q = ty
                ness += 1
            if status:
                break
            key = (<unsigned long long> nA) << 56
            key |= (<unsigned long long> triv) << 44
            key |= (<unsigned long long> ness) << 32
            key |= (<unsigned long long> (cls_p + 32768)) << 16
            key |= <unsigned long long> (cls_q + 32768)
            out[i] = key
    free(used)
    return status
