# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: packed matrix products over a table-defined finite
ring and the orbit scan of a group action on matrices.

Mirrors the pure-Python interface in ``_core_py``; see there for the data
layout.  Keys fit in 64 bits for every instance the selector routes here.
"""

from libc.stdlib cimport malloc, free


def pack_key(m, N):
    cdef long long key = 0
    for v in m:
        key = key * N + v
    return key


def unpack_key(key, N, size):
    cdef long long k = key
    cdef int n = N
    out = [0] * size
    cdef Py_ssize_t i
    for i in range(size - 1, -1, -1):
        out[i] = k % n
        k //= n
    return out


def mat_mul_packed(a, b, int h, int N, mul, add):
    cdef int i, j, k, acc
    cdef int[64] ca, cb
    cdef Py_ssize_t idx
    for idx in range(h * h):
        ca[idx] = a[idx]
        cb[idx] = b[idx]
    out = [0] * (h * h)
    cdef int[:] mul_v = mul
    cdef int[:] add_v = add
    for i in range(h):
        for j in range(h):
            acc = 0
            for k in range(h):
                acc = add_v[acc * N + mul_v[ca[i * h + k] * N + cb[k * h + j]]]
            out[i * h + j] = acc
    return out


def orbit_scan(seed_key, int h, int N, int n_g,
               us_flat, vinvs_flat, mul, add):
    cdef int[:] us = us_flat
    cdef int[:] vs = vinvs_flat
    cdef int[:] mul_v = mul
    cdef int[:] add_v = add
    cdef long long seed = seed_key
    cdef int hh = h * h
    cdef int g, i, j, k, acc, base
    cdef long long key
    cdef int stab = 0
    cdef int *m0 = <int *> malloc(hh * sizeof(int))
    cdef int *t1 = <int *> malloc(hh * sizeof(int))
    cdef int *t2 = <int *> malloc(hh * sizeof(int))
    if m0 == NULL or t1 == NULL or t2 == NULL:
        raise MemoryError()
    try:
        key = seed
        for i in range(hh - 1, -1, -1):
            m0[i] = key % N
            key //= N
        orbit = set()
        for g in range(n_g):
            base = g * hh
            for i in range(h):
                for j in range(h):
                    acc = 0
                    for k in range(h):
                        acc = add_v[acc * N + mul_v[us[base + i * h + k] * N + m0[k * h + j]]]
                    t1[i * h + j] = acc
            for i in range(h):
                for j in range(h):
                    acc = 0
                    for k in range(h):
                        acc = add_v[acc * N + mul_v[t1[i * h + k] * N + vs[base + k * h + j]]]
                    t2[i * h + j] = acc
            key = 0
            for i in range(hh):
                key = key * N + t2[i]
            orbit.add(key)
            if key == seed:
                stab += 1
        return orbit, stab
    finally:
        free(m0)
        free(t1)
        free(t2)
