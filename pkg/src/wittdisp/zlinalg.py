"""Exact linear algebra over Z/p^N and finite abelian p-groups.

The additive group of W_n(R) is a Z/p^n-module, not an F_p-vector space
(coordinates add with carries), so every kernel, image or quotient of
W_n(R)-module maps is computed here: matrices over Z/p^N are brought to
Smith normal form (diagonal p-powers; always possible over the local
principal ideal ring Z/p^N), and subgroups of (Z/p^N)^k are kept as
echelon bases with annihilator closure, which give exact membership tests
and canonical coset representatives.

``abelian_basis`` computes a basis of a finite abelian p-group presented by
enumeration: generators g_1..g_t with orders p^(e_i) such that every element
is uniquely sum c_i g_i with 0 <= c_i < p^(e_i).  This turns Witt-vector
groups into coordinate tuples on which the matrix machinery applies.
"""

from __future__ import annotations

from math import prod


def pval(a: int, p: int, N: int) -> int:
    a %= p ** N
    if a == 0:
        return N
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


def _unit_inv(a: int, p: int, N: int) -> int:
    pN = p ** N
    phi = pN // p * (p - 1)
    return pow(a % pN, phi - 1, pN)


def smith_form(A, p: int, N: int):
    """U A V = diag(p^d_0, ..., p^d_{r-1}, 0, ...) over Z/p^N.

    Returns (d, U, V); d lists the pivot valuation exponents.  Pivot choice
    is deterministic (minimal valuation, ties by position), so the
    factorization is reproducible.
    """
    pN = p ** N
    m = len(A)
    k = len(A[0]) if m else 0
    A = [[x % pN for x in row] for row in A]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    d = []
    t = 0
    while t < min(m, k):
        best = None
        for i in range(t, m):
            for j in range(t, k):
                if A[i][j]:
                    v = pval(A[i][j], p, N)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best and best[0] == 0:
                break
        if best is None:
            break
        v, bi, bj = best
        if bi != t:
            A[t], A[bi] = A[bi], A[t]
            U[t], U[bi] = U[bi], U[t]
        if bj != t:
            for row in A:
                row[t], row[bj] = row[bj], row[t]
            for row in V:
                row[t], row[bj] = row[bj], row[t]
        inv = _unit_inv(A[t][t] // (p ** v), p, N)
        A[t] = [(x * inv) % pN for x in A[t]]
        U[t] = [(x * inv) % pN for x in U[t]]
        for i in range(m):
            if i != t and A[i][t]:
                f = A[i][t] // (p ** v)
                A[i] = [(x - f * y) % pN for x, y in zip(A[i], A[t])]
                U[i] = [(x - f * y) % pN for x, y in zip(U[i], U[t])]
        for j in range(k):
            if j != t and A[t][j]:
                f = A[t][j] // (p ** v)
                for row in A:
                    row[j] = (row[j] - f * row[t]) % pN
                for row in V:
                    row[j] = (row[j] - f * row[t]) % pN
        d.append(v)
        t += 1
    return d, U, V


def kernel_generators(A, p: int, N: int):
    """Generators of {x : A x = 0 over Z/p^N} as (vector, order_exponent).

    The i-th Smith pivot p^(d_i) contributes V . (p^(N-d_i) e_i) of order
    p^(d_i); columns beyond the rank are free of full order p^N.  Solutions
    are exactly the integer combinations with coefficients below the orders.
    """
    pN = p ** N
    if not A or not A[0]:
        return []
    k = len(A[0])
    d, U, V = smith_form(A, p, N)
    gens = []
    for i in range(k):
        di = d[i] if i < len(d) else N
        if di == 0:
            continue
        scale = p ** (N - di)
        vec = [(V[r][i] * scale) % pN for r in range(k)]
        gens.append((vec, di))
    return gens


def solve_mod(A, b, p: int, N: int):
    """One solution of A x = b over Z/p^N, or None; free variables zero."""
    pN = p ** N
    if not A or not A[0]:
        return [] if not any(v % pN for v in b) else None
    k = len(A[0])
    d, U, V = smith_form(A, p, N)
    c = [sum(U[i][j] * b[j] for j in range(len(b))) % pN for i in range(len(A))]
    y = [0] * k
    for i in range(len(A)):
        if i < len(d) and i < k:
            if pval(c[i], p, N) < d[i]:
                return None
            y[i] = c[i] // (p ** d[i])
        elif c[i]:
            return None
    return [sum(V[r][j] * y[j] for j in range(k)) % pN for r in range(k)]


class Subgroup:
    """A subgroup of (Z/p^N)^width with canonical coset representatives.

    Maintained as an echelon basis: one row per pivot column, pivot entry
    p^v times 1, zero entries left of the pivot, annihilator closure
    (p^(N-v) times each row lies in the span), and every row reduced at the
    other pivot columns.  ``reduce`` is then a complete membership test and
    its output is the unique canonical representative of the coset.
    """

    def __init__(self, width: int, p: int, N: int, gens=()):
        self.width = width
        self.p = p
        self.N = N
        self.pN = p ** N
        self.rows: dict[int, list] = {}
        for g in gens:
            self.add(g)

    def reduce(self, vec):
        p, pN = self.p, self.pN
        vec = [x % pN for x in vec]
        for c in sorted(self.rows):
            if vec[c]:
                row = self.rows[c]
                v = pval(row[c], p, self.N)
                f = vec[c] // (p ** v)
                if f:
                    vec = [(x - f * y) % pN for x, y in zip(vec, row)]
        return vec

    def contains(self, vec) -> bool:
        return not any(self.reduce(vec))

    def add(self, vec) -> bool:
        """Insert a generator; returns True if the subgroup grew."""
        p, N, pN = self.p, self.N, self.pN
        grew = False
        queue = [list(vec)]
        while queue:
            cur = self.reduce(queue.pop())
            lead = None
            for j, x in enumerate(cur):
                if x:
                    lead = j
                    break
            if lead is None:
                continue
            v = pval(cur[lead], p, N)
            inv = _unit_inv(cur[lead] // (p ** v), p, N)
            cur = [(x * inv) % pN for x in cur]
            old = self.rows.get(lead)
            # reduce() clears the column whenever the existing pivot divides,
            # so a survivor here has strictly smaller valuation
            self.rows[lead] = cur
            grew = True
            if old is not None:
                queue.append(old)
            if v:
                queue.append([(x * (p ** (N - v))) % pN for x in cur])
        if grew:
            self._interreduce()
        return grew

    def _interreduce(self):
        p, pN = self.p, self.pN
        for c in sorted(self.rows):
            pivot = self.rows[c]
            v = pval(pivot[c], p, self.N)
            for c2, row in self.rows.items():
                if c2 < c and row[c]:
                    f = row[c] // (p ** v)
                    if f:
                        self.rows[c2] = [(x - f * y) % pN
                                         for x, y in zip(row, pivot)]

    def order(self) -> int:
        return prod(self.p ** (self.N - pval(row[c], self.p, self.N))
                    for c, row in self.rows.items())


def abelian_basis(elements, add, zero, p: int, pmul=None):
    """Basis of a finite abelian p-group given by enumeration.

    Returns (gens, exps, coords): orders p^exps, and ``coords`` maps every
    element to its unique coefficient tuple (0 <= c_i < p^exps[i]).
    Candidates are scanned by decreasing additive order, then enumeration
    position, so the basis is deterministic.
    """

    def scalar(k, x):
        acc, base = zero, x
        while k:
            if k & 1:
                acc = add(acc, base)
            base = add(base, base)
            k >>= 1
        return acc

    times_p = pmul if pmul is not None else (lambda x: scalar(p, x))

    def quotient_order(x, coords):
        k, y = 0, x
        while y not in coords:
            y = times_p(y)
            k += 1
        return k, y

    gens: list = []
    exps: list = []
    coords = {zero: ()}
    while len(coords) < len(elements):
        # a generator of maximal order in the quotient keeps the span pure,
        # which is what makes the adjustment below solvable
        best = None
        for i, x in enumerate(elements):
            if x in coords:
                continue
            k, y = quotient_order(x, coords)
            if best is None or k > best[0]:
                best = (k, i, x, y)
        k, _, x, y = best
        c = coords[y]
        adj = x
        for i, ci in enumerate(c):
            if ci:
                if ci % (p ** k):
                    raise AssertionError("group basis adjustment failed")
                di = (ci // (p ** k)) % (p ** exps[i])
                if di:
                    adj = add(adj, scalar(p ** exps[i] - di, gens[i]))
        if scalar(p ** k, adj) != zero:
            raise AssertionError("adjusted generator has the wrong order")
        new_coords = {}
        for old, oc in coords.items():
            acc = old
            new_coords[old] = oc + (0,)
            for t in range(1, p ** k):
                acc = add(acc, adj)
                new_coords[acc] = oc + (t,)
        coords = new_coords
        gens.append(adj)
        exps.append(k)
    if len(coords) != len(elements):
        raise AssertionError("basis construction did not exhaust the group")
    return gens, exps, coords


class ZCoords:
    """Additive coordinates of one finite group, with the embedding of the
    coordinate tuple into (Z/p^N)^width that scales coordinate i by
    p^(N - e_i); the embedding is an injective group homomorphism, so all
    matrix computations can run uniformly mod p^N."""

    def __init__(self, gens, exps, coords, p: int, N: int):
        self.gens = list(gens)
        self.exps = list(exps)
        self.p = p
        self.N = N
        self.width = len(self.gens)
        self._to = coords
        self._from = {v: k for k, v in coords.items()}
        self.zero = self._from[(0,) * self.width]

    def to_raw(self, x):
        return self._to[x]

    def from_raw(self, t):
        key = tuple(c % (self.p ** e) for c, e in zip(t, self.exps))
        return self._from[key]

    def scaled(self, x):
        return [c * self.p ** (self.N - e)
                for c, e in zip(self._to[x], self.exps)]

    def unscaled(self, vec):
        t = []
        for v, e in zip(vec, self.exps):
            s = self.p ** (self.N - e)
            if v % s:
                raise ValueError("vector is not in the embedded coordinate image")
            t.append((v // s) % (self.p ** e))
        return self._from[tuple(t)]


class TupleCoords:
    """Coordinates for tuples of group elements (one ZCoords per slot)."""

    def __init__(self, parts):
        self.parts = list(parts)
        self.width = sum(z.width for z in self.parts)
        self.p = self.parts[0].p if self.parts else 0
        self.N = self.parts[0].N if self.parts else 0

    def scaled(self, xs):
        out = []
        for z, x in zip(self.parts, xs):
            out.extend(z.scaled(x))
        return out

    def unscaled(self, vec):
        out = []
        pos = 0
        for z in self.parts:
            out.append(z.unscaled(vec[pos:pos + z.width]))
            pos += z.width
        return tuple(out)

    def zero_tuple(self):
        return tuple(z.zero for z in self.parts)

    def generators(self):
        """(slot, generator element, full tuple) for every slot generator."""
        out = []
        zeros = self.zero_tuple()
        for i, z in enumerate(self.parts):
            for g in z.gens:
                t = list(zeros)
                t[i] = g
                out.append((i, g, tuple(t)))
        return out
