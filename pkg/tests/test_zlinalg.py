import random
from itertools import product
from math import prod

import pytest

from wittdisp.zlinalg import (smith_form, kernel_generators, solve_mod,
                              Subgroup, abelian_basis, pval)
from wittdisp.rings import ring_make
from wittdisp.witt import witt_ring


def mat_apply(A, x, pN):
    return [sum(A[i][j] * x[j] for j in range(len(x))) % pN for i in range(len(A))]


@pytest.mark.parametrize("p,N", [(2, 3), (3, 2), (2, 1)])
def test_smith_form_random(p, N):
    rng = random.Random(7)
    pN = p ** N
    for _ in range(150):
        m, k = rng.randrange(1, 5), rng.randrange(1, 5)
        A = [[rng.randrange(pN) for _ in range(k)] for _ in range(m)]
        d, U, V = smith_form(A, p, N)
        UA = [[sum(U[i][t] * A[t][j] for t in range(m)) % pN for j in range(k)]
              for i in range(m)]
        D = [[sum(UA[i][t] * V[t][j] for t in range(k)) % pN for j in range(k)]
             for i in range(m)]
        for i in range(m):
            for j in range(k):
                expected = pow(p, d[i], pN) if (i == j and i < len(d)) else 0
                assert D[i][j] == expected % pN


@pytest.mark.parametrize("p,N", [(2, 3), (3, 2)])
def test_kernel_and_solve(p, N):
    rng = random.Random(21)
    pN = p ** N
    for _ in range(120):
        m, k = rng.randrange(1, 4), rng.randrange(1, 4)
        A = [[rng.randrange(pN) for _ in range(k)] for _ in range(m)]
        for g, order in kernel_generators(A, p, N):
            assert not any(mat_apply(A, g, pN))
            assert pval(0, p, N) == N
            # the generator really has the stated order
            assert all((x * p ** order) % pN == 0 for x in g)
        x0 = [rng.randrange(pN) for _ in range(k)]
        b = mat_apply(A, x0, pN)
        x = solve_mod(A, b, p, N)
        assert x is not None and mat_apply(A, x, pN) == b
        # kernel generators + particular solution cover x0
        assert solve_mod(A, mat_apply(A, x0, pN), p, N) is not None


def test_solve_none_when_inconsistent():
    # 2x = 1 has no solution mod 8
    assert solve_mod([[2]], [1], 2, 3) is None


@pytest.mark.parametrize("p,N", [(2, 3), (3, 2)])
def test_subgroup_cosets(p, N):
    rng = random.Random(5)
    pN = p ** N
    for _ in range(100):
        width = rng.randrange(1, 4)
        gens = [[rng.randrange(pN) for _ in range(width)]
                for _ in range(rng.randrange(0, 4))]
        S = Subgroup(width, p, N, gens)
        brute = set()
        for coeffs in product(range(pN), repeat=len(gens)):
            v = tuple(sum(c * g[i] for c, g in zip(coeffs, gens)) % pN
                      for i in range(width))
            brute.add(v)
        assert S.order() == len(brute)
        for v in list(brute)[:16]:
            assert S.contains(list(v))
        x = [rng.randrange(pN) for _ in range(width)]
        rep = S.reduce(x)
        for s in list(brute)[:8]:
            shifted = [(a + b) % pN for a, b in zip(x, s)]
            assert S.reduce(shifted) == rep


def test_abelian_basis_product_group():
    elems = [(a, b) for a in range(4) for b in range(2)]
    add = lambda x, y: ((x[0] + y[0]) % 4, (x[1] + y[1]) % 2)
    gens, exps, coords = abelian_basis(elems, add, (0, 0), 2)
    assert sorted(exps, reverse=True) == [2, 1]
    assert len(coords) == 8


@pytest.mark.parametrize("key,n,expected", [
    ("GF(2)", 3, [3]),
    ("GF(4)", 2, [2, 2]),
    ("GF(2)[x]/x^3", 2, [2, 2, 1, 1]),
    ("GF(2)*GF(4)", 2, [2, 2, 2]),
    ("GF(9)", 2, [2, 2]),
])
def test_witt_additive_structure(key, n, expected):
    W = witt_ring(ring_make(key), n)
    zc = W.zcoords()
    assert sorted(zc.exps, reverse=True) == sorted(expected, reverse=True)
    assert prod(W.p ** e for e in zc.exps) == W.size
    # coordinates honestly reconstruct elements
    for x in W.elements[:: max(1, W.size // 17)]:
        raw = zc.to_raw(x)
        assert zc.from_raw(raw) == x
        assert zc.unscaled(zc.scaled(x)) == x


def test_ideal_coords():
    W = witt_ring(ring_make("GF(2)"), 2)
    zc = W.ideal_zcoords()
    assert prod(W.p ** e for e in zc.exps) == W.size
    for a in W.ideal_elements():
        assert zc.from_raw(zc.to_raw(a)) == a
