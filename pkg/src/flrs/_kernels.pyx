# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Gauss-Jordan elimination over small finite fields (compiled)."""
import numpy as np

ctypedef long long i64

# arithmetic modes
# 0: characteristic 2 with log tables (xor add)
# 1: odd characteristic with log tables and a full addition table
# 2: odd characteristic with log tables and a Zech table
# 3: prime field, arithmetic mod p


cdef struct Spec:
    int mode
    i64 p
    i64 q
    i64 n
    i64 half
    const i64 *ex
    const i64 *lg
    const i64 *aux


cdef inline i64 f_mul(Spec *s, i64 a, i64 b) nogil:
    if a == 0 or b == 0:
        return 0
    if s.mode == 3:
        return (a * b) % s.p
    return s.ex[s.lg[a] + s.lg[b]]


cdef inline i64 f_add(Spec *s, i64 a, i64 b) nogil:
    cdef i64 la, z
    if s.mode == 0:
        return a ^ b
    if s.mode == 3:
        a += b
        return a - s.p if a >= s.p else a
    if a == 0:
        return b
    if b == 0:
        return a
    if s.mode == 1:
        return s.aux[a * s.q + b]
    la = s.lg[a]
    z = s.aux[(s.lg[b] - la + s.n) % s.n]
    if z < 0:
        return 0
    return s.ex[la + z]


cdef inline i64 f_neg(Spec *s, i64 a) nogil:
    if a == 0 or s.mode == 0:
        return a
    if s.mode == 3:
        return s.p - a
    return s.ex[s.lg[a] + s.half]


cdef inline i64 f_inv(Spec *s, i64 a) nogil:
    cdef i64 r = 1, b = a, e
    if s.mode == 3:
        e = s.p - 2
        while e:
            if e & 1:
                r = (r * b) % s.p
            b = (b * b) % s.p
            e >>= 1
        return r
    return s.ex[s.n - s.lg[a]]


def rref(i64[:, ::1] M, int mode, i64 p, i64 q, i64 n, i64 half,
         const i64[::1] ex, const i64[::1] lg, const i64[::1] aux, int ncols=-1):
    """Reduce M in place; returns the list of pivot columns (searched among the first ncols)."""
    cdef Spec s
    cdef Py_ssize_t rows = M.shape[0], cols = M.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef i64 inv, f, t
    s.mode = mode
    s.p = p
    s.q = q
    s.n = n
    s.half = half
    s.ex = &ex[0]
    s.lg = &lg[0]
    s.aux = &aux[0]
    if ncols < 0 or ncols > cols:
        ncols = cols
    pivots = []
    with nogil:
        for c in range(ncols):
            if r >= rows:
                break
            piv = -1
            for i in range(r, rows):
                if M[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(cols):
                    t = M[r, j]
                    M[r, j] = M[piv, j]
                    M[piv, j] = t
            inv = f_inv(&s, M[r, c])
            if M[r, c] != 1:
                for j in range(c, cols):
                    M[r, j] = f_mul(&s, M[r, j], inv)
            for i in range(rows):
                if i != r and M[i, c] != 0:
                    f = f_neg(&s, M[i, c])
                    for j in range(c, cols):
                        if M[r, j] != 0:
                            M[i, j] = f_add(&s, M[i, j], f_mul(&s, f, M[r, j]))
            with gil:
                pivots.append(c)
            r += 1
    return pivots
