import pytest

from wittdisp.wittpoly import (witt_tables, ghost_identity_defects,
                               WittGuardError, DEFAULT_LEVEL_CAPS)


def test_level_one_polynomials():
    t = witt_tables(2, 1)
    # S_0 = X_0 + Y_0, P_0 = X_0 Y_0
    assert t.sum_polys[0] == {(1, 0): 1, (0, 1): 1}
    assert t.prod_polys[0] == {(1, 1): 1}


def test_p2_carry_polynomial():
    t = witt_tables(2, 2)
    # over the integers S_1 = X_1 + Y_1 - X_0 Y_0
    assert t.sum_polys[1] == {(0, 1, 0, 0): 1, (0, 0, 0, 1): 1, (1, 0, 1, 0): -1}
    # reduced mod 2: X_1 + Y_1 + X_0 Y_0
    assert set(t.sum_reduced[1]) == {(1, (0, 1, 0, 0)), (1, (0, 0, 0, 1)),
                                     (1, (1, 0, 1, 0))}


def test_p3_carry_polynomial():
    t = witt_tables(3, 2)
    # S_1 = X_1 + Y_1 - X_0^2 Y_0 - X_0 Y_0^2 over the integers
    assert t.sum_polys[1] == {(0, 1, 0, 0): 1, (0, 0, 0, 1): 1,
                              (2, 0, 1, 0): -1, (1, 0, 2, 0): -1}


@pytest.mark.parametrize("p", [2, 3, 5])
def test_ghost_identities_zero_polynomials(p):
    for n in range(1, DEFAULT_LEVEL_CAPS[p] + 1):
        table = witt_tables(p, n)
        for ds, dp in ghost_identity_defects(table):
            assert not ds and not dp


def test_resource_guard():
    with pytest.raises(WittGuardError):
        witt_tables(2, 9)
    with pytest.raises(WittGuardError):
        witt_tables(7, 4)
    # explicit cap override is allowed
    witt_tables(7, 2, level_cap=2)


def test_tables_memoized():
    assert witt_tables(2, 3) is witt_tables(2, 3)
