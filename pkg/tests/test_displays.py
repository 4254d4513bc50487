import random

import pytest

from wittdisp.rings import ring_make, field_embedding, identity_hom
from wittdisp.witt import witt_ring, mat_id, mat_mul
from wittdisp.displays import (display_from_matrix, etale_unit, mult_unit,
                               direct_sum, random_display, truncate,
                               truncate_to, base_change, is_nilpotent,
                               fsharp, vsharp, vsharp_full_check, DisplayError,
                               hom_space, hom_displays, isom_displays,
                               compose_homs, identity_hom as id_hom,
                               verify_hom, is_isomorphism,
                               q_fp_basis, iota, epsilon, F_apply, F1_apply,
                               p_vec, _p_fp_basis)


R2 = ring_make("GF(2)")
R4 = ring_make("GF(4)")
R8 = ring_make("GF(2)[x]/x^3")


def test_unit_displays():
    E = etale_unit(1, R2)
    M = mult_unit(1, R2)
    assert (E.h, E.d) == (1, 0)
    assert (M.h, M.d) == (1, 1)
    W = E.W
    assert E.matrix == ((W.one,),)


def test_non_invertible_matrix_rejected():
    W = witt_ring(R2, 2)
    # determinant with zero residue
    with pytest.raises(DisplayError):
        display_from_matrix(R2, 2, 1, 0, ((W.p_mul(W.one),),))
    with pytest.raises(DisplayError):
        display_from_matrix(R2, 1, 2, 3, mat_id(witt_ring(R2, 1), 2))


def test_vsharp_units():
    E, M = etale_unit(1, R2), mult_unit(1, R2)
    W = witt_ring(R2, 1)
    # on the etale unit F_1 is bijective, so V is forced invertible
    assert vsharp(E) == ((W.one,),)
    # on the multiplicative unit V = p = 0 at level 1
    assert vsharp(M) == ((W.zero,),)
    # at level 2 the multiplicative V is p times a unit: residue zero
    M2 = mult_unit(2, R2)
    assert vsharp(M2)[0][0][0] == R2.zero


def test_fv_relations_on_random_displays():
    rng = random.Random(17)
    W = witt_ring(R2, 2)
    p_id = tuple(tuple(W.p_mul(c) for c in row) for row in mat_id(W, 0)) if False else None
    for _ in range(20):
        h = rng.choice([1, 2, 3])
        d = rng.randrange(h + 1)
        D = random_display(rng, R2, 2, h, d)
        V = vsharp(D)           # includes the defining-equation verification
        F = fsharp(D)
        pid = tuple(tuple(W.p_mul(c) for c in row) for row in mat_id(W, h))
        assert mat_mul(W, F, V) == pid
        assert mat_mul(W, V, F) == pid
        assert vsharp_full_check(D, element_cap=256)


def test_predisplay_axioms_elementwise():
    rng = random.Random(3)
    for ring in (R2, R4, R8):
        D = random_display(rng, ring, 2, 2, 1)
        W = D.W
        for q in q_fp_basis(D):
            assert F_apply(D, iota(D, q)) == p_vec(D, F1_apply(D, q))
        for b in W.fp_basis():
            a = (ring.zero,) + b
            f1a = W.f1(a)
            for x in _p_fp_basis(D):
                lhs = F1_apply(D, epsilon(D, a, x))
                rhs = tuple(W.mul(f1a, c) for c in F_apply(D, x))
                assert lhs == rhs


def test_nilpotence():
    assert is_nilpotent(mult_unit(1, R2))
    assert is_nilpotent(mult_unit(2, R2))
    assert not is_nilpotent(etale_unit(1, R2))
    assert not is_nilpotent(etale_unit(3, R2))
    assert not is_nilpotent(direct_sum(etale_unit(1, R2), mult_unit(1, R2)))
    # over a non-perfect ring and over products the fibre criterion applies
    assert is_nilpotent(mult_unit(2, R8))
    assert not is_nilpotent(etale_unit(2, ring_make("GF(2)*GF(4)")))


def test_nilpotence_is_isomorphism_invariant():
    from wittdisp.moduli import ModuliInstance
    inst = ModuliInstance(2, 2, 2, 1)
    rng = random.Random(9)
    G = inst.group_elements()
    X = inst.x_matrices()
    for _ in range(12):
        m = X[rng.randrange(len(X))]
        g = G[rng.randrange(len(G))]
        assert is_nilpotent(inst.display(m)) == \
            is_nilpotent(inst.display(inst.act(g, m)))


def test_direct_sum_unit_objects():
    S = direct_sum(etale_unit(1, R2), mult_unit(1, R2))
    assert (S.h, S.d) == (2, 1)
    assert S.matrix == mat_id(S.W, 2)


def test_direct_sum_nilpotence():
    rng = random.Random(23)
    for _ in range(20):
        h1, h2 = rng.choice([1, 2]), rng.choice([1, 2])
        D1 = random_display(rng, R2, 1, h1, h1)   # type d = h: nilpotent
        D2 = random_display(rng, R2, 1, h2, h2)
        assert is_nilpotent(D1) and is_nilpotent(D2)
        assert is_nilpotent(direct_sum(D1, D2))


def test_truncate():
    assert truncate(etale_unit(2, R2)) == etale_unit(1, R2)
    D = random_display(random.Random(1), R4, 2, 2, 1)
    with pytest.raises(DisplayError):
        truncate(truncate(D))
    assert truncate_to(etale_unit(2, R4), 1) == etale_unit(1, R4)


def test_base_change_and_truncation_commute():
    emb = field_embedding(R2, R4)
    rng = random.Random(7)
    for _ in range(20):
        h = rng.choice([1, 2])
        d = rng.randrange(h + 1)
        D = random_display(rng, R2, 2, h, d)
        a = truncate(base_change(D, emb))
        b = base_change(truncate(D), emb)
        assert a == b


def test_base_change_identity_and_units():
    ident = identity_hom(R2)
    D = random_display(random.Random(2), R2, 2, 2, 1)
    assert base_change(D, ident) == D
    emb = field_embedding(R2, R4)
    assert base_change(etale_unit(2, R2), emb) == etale_unit(2, R4)


def test_base_change_preserves_nilpotence():
    emb = field_embedding(R2, R4)
    rng = random.Random(11)
    for _ in range(20):
        h = rng.choice([1, 2])
        d = rng.randrange(h + 1)
        D = random_display(rng, R2, 1, h, d)
        assert is_nilpotent(D) == is_nilpotent(base_change(D, emb))


@pytest.mark.parametrize("ring", [R2, R4, R8])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_hom_unit_objects_vanishes(ring, n):
    space = hom_space(etale_unit(n, ring), mult_unit(n, ring))
    assert space.size == 1
    assert space.generators == []


def test_hom_composition_is_hom():
    rng = random.Random(13)
    D1 = random_display(rng, R4, 2, 2, 1)
    D2 = random_display(rng, R4, 2, 2, 1)
    D3 = random_display(rng, R4, 2, 2, 1)
    for h1 in hom_displays(D1, D2):
        for h2 in hom_displays(D2, D3):
            comp = compose_homs(h2, h1)
            assert verify_hom(comp)


def test_isom_self_is_identity():
    D = random_display(random.Random(5), R4, 2, 2, 1)
    assert isom_displays(D, D) == id_hom(D)
    assert is_isomorphism(id_hom(D))


def test_isom_orbit_pair():
    from wittdisp.moduli import ModuliInstance
    inst = ModuliInstance(2, 1, 2, 1)
    X = inst.x_matrices()
    G = inst.group_elements()
    m = X[0]
    m2 = inst.act(G[-1], m)
    iso = isom_displays(inst.display(m), inst.display(m2))
    assert iso is not None and verify_hom(iso) and is_isomorphism(iso)


def test_hom_shape_mismatch():
    assert isom_displays(etale_unit(1, R2), mult_unit(1, R2)) is None
    with pytest.raises(DisplayError):
        hom_displays(etale_unit(1, R2), etale_unit(2, R2))
