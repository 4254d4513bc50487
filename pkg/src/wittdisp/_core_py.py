"""Pure-Python hot kernels: packed matrix products over a finite ring given
by lookup tables, and the group-orbit scan built on them.

Elements of the coefficient ring are identified with their enumeration index
(0 is the zero element), and an h x h matrix is a flat row-major list of
indices.  ``mul`` and ``add`` are flat N x N lookup tables.  A matrix packs
into a single integer key in base N, most significant entry first, so key
order equals lexicographic matrix order.

The compiled extension ``_core_cy`` implements the same interface; this
module is the fallback selected at import time by :mod:`wittdisp.kernels`.
"""

from __future__ import annotations


def pack_key(m, N: int) -> int:
    key = 0
    for v in m:
        key = key * N + v
    return key


def unpack_key(key: int, N: int, size: int):
    out = [0] * size
    for i in range(size - 1, -1, -1):
        out[i] = key % N
        key //= N
    return out


def mat_mul_packed(a, b, h: int, N: int, mul, add):
    out = [0] * (h * h)
    for i in range(h):
        ih = i * h
        for j in range(h):
            acc = 0
            for k in range(h):
                acc = add[acc * N + mul[a[ih + k] * N + b[k * h + j]]]
            out[ih + j] = acc
    return out


def orbit_scan(seed_key: int, h: int, N: int, n_g: int,
               us_flat, vinvs_flat, mul, add):
    """Apply every group element to the seed matrix.

    ``us_flat`` and ``vinvs_flat`` hold n_g flat h*h matrices each: the left
    factor and the (already inverted) twisted right factor of the action.
    Returns (set of packed orbit keys, stabilizer count).
    """
    hh = h * h
    m0 = unpack_key(seed_key, N, hh)
    orbit = set()
    stab = 0
    for g in range(n_g):
        base = g * hh
        u = us_flat[base:base + hh]
        v = vinvs_flat[base:base + hh]
        t = mat_mul_packed(u, m0, h, N, mul, add)
        t = mat_mul_packed(t, v, h, N, mul, add)
        key = pack_key(t, N)
        orbit.add(key)
        if key == seed_key:
            stab += 1
    return orbit, stab
