import random

import pytest

from wittdisp.rings import ring_make
from wittdisp.witt import witt_ring
from wittdisp.pairs import (canonical_raw_pair, scramble_pair, normal_decompose,
                            check_pair_axioms, four_term_check, PairError, RawPair)
from wittdisp.displays import random_display


CASES = [("GF(2)", 1, 1, 0), ("GF(2)", 1, 2, 1), ("GF(2)", 2, 2, 1),
         ("GF(4)", 2, 2, 1), ("GF(8)", 1, 2, 2), ("GF(3)", 2, 2, 2),
         ("GF(9)", 1, 2, 1), ("GF(2)[x]/x^2", 2, 1, 1),
         ("GF(2)[x]/x^3", 2, 2, 1), ("GF(4)[x]/x^2", 1, 2, 1),
         ("GF(2)*GF(4)", 1, 2, 1), ("GF(2)*GF(4)", 2, 2, 1),
         ("GF(3)*GF(9)", 1, 1, 1)]


@pytest.mark.parametrize("key,n,h,d", CASES)
def test_canonical_pair_axioms_and_four_term(key, n, h, d):
    pair = canonical_raw_pair(ring_make(key), n, h, d)
    check_pair_axioms(pair)
    four_term_check(pair)


@pytest.mark.parametrize("key,n,h,d", CASES)
def test_normal_decomposition(key, n, h, d):
    pair = canonical_raw_pair(ring_make(key), n, h, d)
    nd = normal_decompose(pair)
    assert nd.d == d
    assert len(nd.L_lifts) == h - d
    assert len(nd.T_lifts) == d


def test_degenerate_rank_zero():
    pair = canonical_raw_pair(ring_make("GF(2)"), 1, 0, 0)
    nd = normal_decompose(pair)
    assert nd.L_lifts == [] and nd.T_lifts == [] and nd.d == 0


@pytest.mark.parametrize("key", ["GF(2)", "GF(4)"])
def test_scrambled_basis_decomposes(key):
    # a level-2 pair presented through a recorded random basis change of P
    R = ring_make(key)
    rng = random.Random(31)
    pair = canonical_raw_pair(R, 2, 2, 1)
    for _ in range(3):
        S = random_display(rng, R, 2, 2, 0).matrix
        scrambled = scramble_pair(pair, S)
        nd = normal_decompose(scrambled)
        assert nd.d == 1


def test_broken_pair_is_rejected():
    R = ring_make("GF(2)")
    pair = canonical_raw_pair(R, 2, 2, 1)
    broken = RawPair(ring=R, n=2, h=2, d0=1,
                     iota_fn=lambda q: pair.p_zero(),
                     eps_fn=pair.eps_fn)
    with pytest.raises(PairError):
        normal_decompose(broken)


def test_axiom_violation_detected():
    R = ring_make("GF(2)")
    pair = canonical_raw_pair(R, 2, 2, 0)

    def bad_eps(a, x):
        l, t = pair.eps_fn(a, x)
        return (tuple(reversed(l)), t)

    broken = RawPair(ring=R, n=2, h=2, d0=0, iota_fn=pair.iota_fn, eps_fn=bad_eps)
    with pytest.raises(PairError):
        check_pair_axioms(broken)
