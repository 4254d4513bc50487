"""Exact linear algebra over the prime field F_p.

Matrices are lists of row lists with integer entries reduced mod p.  These
routines back every kernel/image computation in the package: semilinear maps
are always encoded as F_p-linear maps on fixed coordinate bases, so ranks,
kernels and solution spaces reduce to Gaussian elimination here.
"""

from __future__ import annotations


def _inv_mod(a: int, p: int) -> int:
    return pow(a, p - 2, p)


def rref(rows, p):
    """Reduced row echelon form.

    Returns (matrix, pivot_columns).  The input is not modified.
    """
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if m[i][c] % p:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = _inv_mod(m[r][c] % p, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] % p:
                f = m[i][c] % p
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows, p) -> int:
    return len(rref(rows, p)[1])


def kernel_basis(rows, p):
    """Basis of {x : A x = 0}, as a list of vectors.

    The basis is in the standard free-variable form induced by the reduced
    echelon pivots, so it is deterministic for a given input.
    """
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(rows, p)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-red[r][fc]) % p
        basis.append(v)
    return basis


def solve(rows, rhs, p):
    """One solution of A x = b, or None.

    Free variables are set to zero, which makes the particular solution
    deterministic (the lexicographically adapted representative).
    """
    if not rows:
        return [] if not any(rhs) else None
    ncols = len(rows[0])
    aug = [list(r) + [b % p] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, p)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols] % p
    return x


def mat_mul(a, b, p):
    if not a or not b:
        return []
    nb = len(b[0])
    return [[sum(ra[k] * b[k][j] for k in range(len(b))) % p for j in range(nb)]
            for ra in a]


def mat_vec(a, v, p):
    return [sum(r[k] * v[k] for k in range(len(v))) % p for r in a]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def is_invertible(rows, p) -> bool:
    return bool(rows) and len(rows) == len(rows[0]) and rank(rows, p) == len(rows)


def mat_inv(rows, p):
    """Inverse of a square matrix, or None when singular."""
    n = len(rows)
    aug = [list(r) + [1 if i == j else 0 for j in range(n)]
           for i, r in enumerate(rows)]
    red, pivots = rref(aug, p)
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in red[:n]]


def image_span(rows, p):
    """Row-space basis of the transpose, i.e. a basis of the column span."""
    cols = [list(c) for c in zip(*rows)] if rows else []
    red, pivots = rref(cols, p)
    return [red[i] for i in range(len(pivots))]


def in_span(basis_rows, v, p) -> bool:
    """Whether v lies in the row span of basis_rows."""
    if not basis_rows:
        return not any(x % p for x in v)
    stacked = [list(r) for r in basis_rows]
    r0 = rank(stacked, p)
    stacked.append(list(v))
    return rank(stacked, p) == r0
