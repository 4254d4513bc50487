"""Universal addition and multiplication polynomials for p-typical Witt
vectors of a fixed length.

The polynomials are generated once over the integers by the ghost-component
recursion

    w_k(Z) = sum_{i<=k} p^i Z_i^(p^(k-i)),
    S_k = (w_k(X) + w_k(Y) - sum_{i<k} p^i S_i^(p^(k-i))) / p^k,
    P_k = (w_k(X) w_k(Y)  - sum_{i<k} p^i P_i^(p^(k-i))) / p^k,

with every division exact in Z[X_0..X_{n-1}, Y_0..Y_{n-1}].  Reduction mod p
then yields the evaluation tables used for arithmetic in characteristic p.
Coefficients are arbitrary-precision integers throughout generation, so the
tables are correct by construction; the ghost identities are re-checked
symbolically as a zero-polynomial test.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

# A sparse integer polynomial: {exponent tuple -> nonzero int coefficient}.
Poly = dict


class WittGuardError(RuntimeError):
    """Raised when a requested table exceeds the resource guard."""


DEFAULT_LEVEL_CAPS = {2: 5, 3: 4, 5: 3}


def _var(nvars: int, i: int) -> Poly:
    e = [0] * nvars
    e[i] = 1
    return {tuple(e): 1}


def padd(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for e, c in b.items():
        nc = out.get(e, 0) + c
        if nc:
            out[e] = nc
        else:
            out.pop(e, None)
    return out


def pneg(a: Poly) -> Poly:
    return {e: -c for e, c in a.items()}


def psub(a: Poly, b: Poly) -> Poly:
    return padd(a, pneg(b))


def pscale(k: int, a: Poly) -> Poly:
    if k == 0:
        return {}
    return {e: k * c for e, c in a.items()}


def pmul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            nc = out.get(e, 0) + ca * cb
            if nc:
                out[e] = nc
            else:
                out.pop(e, None)
    return out


def ppow(a: Poly, e: int, nvars: int) -> Poly:
    result: Poly = {(0,) * nvars: 1}
    base = a
    while e:
        if e & 1:
            result = pmul(result, base)
        base = pmul(base, base)
        e >>= 1
    return result


def pdiv_exact(a: Poly, k: int) -> Poly:
    out = {}
    for e, c in a.items():
        q, r = divmod(c, k)
        if r:
            raise ArithmeticError(f"inexact division by {k} in Witt recursion")
        out[e] = q
    return out


def ghost(polys, k: int, p: int, nvars: int) -> Poly:
    """w_k applied to a length >= k+1 list of polynomials."""
    out: Poly = {}
    for i in range(k + 1):
        out = padd(out, pscale(p ** i, ppow(polys[i], p ** (k - i), nvars)))
    return out


@dataclass(frozen=True)
class WittPolynomialTable:
    """Sum/product polynomials for W_n, over Z and reduced mod p.

    ``sum_reduced[i]`` / ``prod_reduced[i]`` are lists of (coefficient,
    exponent-tuple) pairs over the 2n variables X_0..X_{n-1}, Y_0..Y_{n-1}.
    """

    p: int
    n: int
    sum_polys: tuple
    prod_polys: tuple
    sum_reduced: tuple
    prod_reduced: tuple


def _reduce_mod_p(poly: Poly, p: int):
    terms = []
    for e, c in sorted(poly.items()):
        c %= p
        if c:
            terms.append((c, e))
    return tuple(terms)


@lru_cache(maxsize=None)
def witt_tables(p: int, n: int, level_cap: int | None = None) -> WittPolynomialTable:
    """Generate (and memoize) the Witt polynomial table for W_n over F_p."""
    if n < 1:
        raise ValueError("level must be >= 1")
    cap = level_cap if level_cap is not None else DEFAULT_LEVEL_CAPS.get(p, 2)
    if n > cap:
        raise WittGuardError(
            f"Witt table level {n} for p={p} exceeds the guard ({cap}); "
            "raise level_cap explicitly if this size is intended")
    nvars = 2 * n
    xs = [_var(nvars, i) for i in range(n)]
    ys = [_var(nvars, n + i) for i in range(n)]
    sums: list[Poly] = []
    prods: list[Poly] = []
    for k in range(n):
        gx, gy = ghost(xs, k, p, nvars), ghost(ys, k, p, nvars)
        num_s = padd(gx, gy)
        num_p = pmul(gx, gy)
        for i in range(k):
            num_s = psub(num_s, pscale(p ** i, ppow(sums[i], p ** (k - i), nvars)))
            num_p = psub(num_p, pscale(p ** i, ppow(prods[i], p ** (k - i), nvars)))
        sums.append(pdiv_exact(num_s, p ** k))
        prods.append(pdiv_exact(num_p, p ** k))
    return WittPolynomialTable(
        p=p, n=n,
        sum_polys=tuple(sums), prod_polys=tuple(prods),
        sum_reduced=tuple(_reduce_mod_p(s, p) for s in sums),
        prod_reduced=tuple(_reduce_mod_p(s, p) for s in prods),
    )


def ghost_identity_defects(table: WittPolynomialTable):
    """Expand w_k(S) - w_k(X) - w_k(Y) and w_k(P) - w_k(X)w_k(Y) for all k.

    Both must be the zero polynomial; the caller asserts emptiness.  This
    re-derives the ghost sides independently of the recursion's bookkeeping,
    so it exercises the full polynomial arithmetic.
    """
    p, n = table.p, table.n
    nvars = 2 * n
    xs = [_var(nvars, i) for i in range(n)]
    ys = [_var(nvars, n + i) for i in range(n)]
    defects = []
    for k in range(n):
        gx, gy = ghost(xs, k, p, nvars), ghost(ys, k, p, nvars)
        ds = psub(ghost(list(table.sum_polys), k, p, nvars), padd(gx, gy))
        dp = psub(ghost(list(table.prod_polys), k, p, nvars), pmul(gx, gy))
        defects.append((ds, dp))
    return defects
