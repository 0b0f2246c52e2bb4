# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled ball scan over the Bruhat-Tits tree.

Same enumeration order and fixed-vertex test as ``_ballscan_py``; every
modulus must stay below 2**62 so that sums of two residues fit in 64 bits.
"""

from libc.stdlib cimport malloc, free

cdef extern from *:
    """
    static inline unsigned long long fq_mulmod(unsigned long long a,
                                               unsigned long long b,
                                               unsigned long long m) {
        return (unsigned long long)(((unsigned __int128)a * b) % m);
    }
    """
    unsigned long long fq_mulmod(unsigned long long a, unsigned long long b,
                                 unsigned long long m) nogil

ctypedef unsigned long long u64

MAX_MODULUS = 1 << 62

cdef enum:
    KIND_A = 0
    KIND_B = 1

ctypedef struct Prepared:
    u64 al
    u64 be
    u64 ga
    u64 de
    u64 pk
    u64 mod


cdef inline bint fixes_a(Prepared* g, u64 c, u64 q) nogil:
    cdef u64 m = g.mod
    cdef u64 t = q * g.pk
    cdef u64 u = (g.al + fq_mulmod(g.be, c, m)) % m
    if fq_mulmod(q, u, m) % t:
        return 0
    if fq_mulmod(fq_mulmod(q, q, m), g.be, m) % t:
        return 0
    cdef u64 x = (g.de + m - fq_mulmod(c, g.be, m)) % m
    if fq_mulmod(x, q, m) % t:
        return 0
    cdef u64 y = (g.ga + fq_mulmod(g.de, c, m)) % m
    y = (y + m - fq_mulmod(c, u, m)) % m
    return y % t == 0


cdef inline bint fixes_b(Prepared* g, u64 s, u64 q) nogil:
    cdef u64 m = g.mod
    cdef u64 t = q * g.pk
    cdef u64 x = (g.al + m - fq_mulmod(s, g.ga, m)) % m
    if fq_mulmod(q, x, m) % t:
        return 0
    cdef u64 w = (fq_mulmod(g.ga, s, m) + g.de) % m
    if fq_mulmod(q, w, m) % t:
        return 0
    if fq_mulmod(fq_mulmod(q, q, m), g.ga, m) % t:
        return 0
    cdef u64 y = (fq_mulmod(g.al, s, m) + g.be) % m
    y = (y + m - fq_mulmod(s, w, m)) % m
    return y % t == 0


cdef Prepared* _load(gens) except NULL:
    cdef Py_ssize_t n = len(gens)
    cdef Prepared* arr = <Prepared*> malloc((n if n else 1) * sizeof(Prepared))
    if arr == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        al, be, ga, de, pk, mod = gens[i]
        if mod >= MAX_MODULUS:
            free(arr)
            raise OverflowError("modulus too large for the compiled kernel")
        arr[i].al = al
        arr[i].be = be
        arr[i].ga = ga
        arr[i].de = de
        arr[i].pk = pk
        arr[i].mod = mod
    return arr


cdef long long _scan(Prepared* arr, Py_ssize_t n, u64 p, int radius,
                     bint count_only, int* out_d, int* out_kind, u64* out_c) nogil:
    cdef u64 q = 1
    cdef u64 c, s
    cdef int d
    cdef Py_ssize_t i
    cdef bint ok
    cdef long long total = 0
    for d in range(radius + 1):
        c = 0
        while c < q:
            ok = 1
            for i in range(n):
                if not fixes_a(&arr[i], c, q):
                    ok = 0
                    break
            if ok:
                if not count_only:
                    out_d[0] = d
                    out_kind[0] = KIND_A
                    out_c[0] = c
                    return 1
                total += 1
            c += 1
        if d:
            c = 0
            while c < q // p:
                s = p * c
                ok = 1
                for i in range(n):
                    if not fixes_b(&arr[i], s, q):
                        ok = 0
                        break
                if ok:
                    if not count_only:
                        out_d[0] = d
                        out_kind[0] = KIND_B
                        out_c[0] = c
                        return 1
                    total += 1
                c += 1
        q *= p
    return total


def first_fixed(gens, p, radius):
    """First vertex (d, kind, c) fixed by every prepared element, or None."""
    cdef Py_ssize_t n = len(gens)
    cdef Prepared* arr = _load(gens)
    cdef int d = 0, kind = 0
    cdef u64 c = 0
    cdef long long found
    cdef u64 pp = p
    cdef int r = radius
    try:
        with nogil:
            found = _scan(arr, n, pp, r, 0, &d, &kind, &c)
    finally:
        free(arr)
    if found:
        return (d, kind, c)
    return None


def count_fixed(gens, p, radius):
    """Number of vertices in the ball fixed by every prepared element."""
    cdef Py_ssize_t n = len(gens)
    cdef Prepared* arr = _load(gens)
    cdef int d = 0, kind = 0
    cdef u64 c = 0
    cdef long long total
    cdef u64 pp = p
    cdef int r = radius
    try:
        with nogil:
            total = _scan(arr, n, pp, r, 1, &d, &kind, &c)
    finally:
        free(arr)
    return total
