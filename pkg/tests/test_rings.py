import pytest

from wittdisp.rings import (ring_make, parse_ring_spec, GaloisField,
                            TruncatedPolyRing, ProductRing, RingError,
                            field_embedding, identity_hom, find_irreducible)


SMALL_KEYS = ["GF(2)", "GF(3)", "GF(4)", "GF(5)", "GF(8)", "GF(9)", "GF(25)",
              "GF(27)", "GF(2)[x]/x^2", "GF(2)[x]/x^3", "GF(4)[x]/x^2",
              "GF(3)[x]/x^2", "GF(2)*GF(4)", "GF(3)*GF(9)",
              "GF(2)*GF(2)[x]/x^2"]


def test_parse_and_sizes():
    assert ring_make("GF(2)").size == 2
    assert ring_make("GF(2^3)").size == 8
    assert ring_make("GF(8)").size == 8
    assert ring_make("GF(2)[x]/x^3").size == 8
    assert ring_make("GF(4)[x]/x^2").size == 16
    assert ring_make("GF(2)*GF(4)").size == 8
    spec = parse_ring_spec("GF(2)*GF(4)*GF(2)[x]/x^2")
    assert spec.kind == "product" and len(spec.factors) == 3


def test_parse_errors():
    with pytest.raises(RingError):
        ring_make("GF(6)")
    with pytest.raises(RingError):
        ring_make("GF(2)[x]/x^0")
    with pytest.raises(RingError):
        ring_make("nonsense")
    with pytest.raises(RingError):
        GaloisField(4, 1)
    # reducible modulus: x^2 + 1 = (x+1)^2 over F_2
    with pytest.raises(RingError):
        GaloisField(2, 2, (1, 0, 1))


def test_mixed_characteristic_product_rejected():
    with pytest.raises(RingError):
        ring_make("GF(2)*GF(3)")


@pytest.mark.parametrize("key", SMALL_KEYS)
def test_ring_axioms_exhaustive(key):
    R = ring_make(key)
    assert R.size <= 64
    els = R.elements
    one, zero = R.one, R.zero
    for a in els:
        assert R.add(a, zero) == a
        assert R.mul(a, one) == a
        assert R.add(a, R.neg(a)) == zero
    for a in els:
        for b in els:
            assert R.add(a, b) == R.add(b, a)
            assert R.mul(a, b) == R.mul(b, a)
    sample = els if R.size <= 16 else els[::3]
    for a in sample:
        for b in sample:
            for c in sample:
                assert R.add(R.add(a, b), c) == R.add(a, R.add(b, c))
                assert R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c))
                assert R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c))


@pytest.mark.parametrize("key", SMALL_KEYS)
def test_frobenius_is_endomorphism(key):
    R = ring_make(key)
    for a in R.elements:
        for b in R.elements:
            assert R.frobenius(R.add(a, b)) == R.add(R.frobenius(a), R.frobenius(b))
            assert R.frobenius(R.mul(a, b)) == R.mul(R.frobenius(a), R.frobenius(b))


@pytest.mark.parametrize("key", SMALL_KEYS)
def test_perfect_iff_frobenius_bijective(key):
    R = ring_make(key)
    image = {R.frobenius(a) for a in R.elements}
    assert R.is_perfect == (len(image) == R.size)


def test_gf2_trivialities():
    R = ring_make("GF(2)")
    assert R.is_perfect
    assert R.frobenius(R.one) == R.one


def test_truncated_poly_not_perfect():
    R = ring_make("GF(2)[x]/x^3")
    assert R.size == 8
    assert not R.is_perfect
    # the class of x has no square root: squares only hit even exponents
    image = {R.frobenius(a) for a in R.elements}
    assert R.x() not in image
    assert len(image) == 4


def test_gf4_frobenius_order_two():
    R = ring_make("GF(4)")
    g = R.generator()
    # g^2 = g + 1 for the modulus x^2 + x + 1
    assert R.frobenius(g) == R.add(g, R.one)
    assert R.frobenius(R.frobenius(g)) == g
    assert R.is_perfect


def test_element_enumeration_is_lexicographic():
    R = ring_make("GF(4)")
    els = R.elements
    assert els == sorted(els)
    for i, a in enumerate(els):
        assert R.index(a) == i
        assert R.element(i) == a


def test_units_and_inverses():
    R = ring_make("GF(2)[x]/x^3")
    units = [a for a in R.elements if R.is_unit(a)]
    assert len(units) == 4        # residue must be nonzero
    for u in units:
        assert R.mul(u, R.inverse(u)) == R.one
    with pytest.raises(RingError):
        R.inverse(R.x())


def test_residue_fields():
    R = ring_make("GF(4)")
    fields = R.residue_fields()
    assert len(fields) == 1 and fields[0][0] is R
    Rt = ring_make("GF(2)[x]/x^3")
    (k, pi), = Rt.residue_fields()
    assert k.key == "GF(2)"
    assert pi(Rt.x()) == k.zero
    assert pi(Rt.one) == k.one
    Rp = ring_make("GF(2)*GF(4)")
    fields = Rp.residue_fields()
    assert [k.key for k, _ in fields] == ["GF(2)", "GF(2^2)"]
    for k, pi in fields:
        assert pi(Rp.one) == k.one


def test_field_embedding():
    F2, F4 = ring_make("GF(2)"), ring_make("GF(4)")
    emb = field_embedding(F2, F4)
    assert emb(F2.one) == F4.one
    F16 = ring_make("GF(16)")
    emb2 = field_embedding(F4, F16)
    g = F4.generator()
    # embeddings are ring homomorphisms (checked at construction); spot check
    assert emb2(F4.mul(g, g)) == F16.mul(emb2(g), emb2(g))
    with pytest.raises(RingError):
        field_embedding(F4, ring_make("GF(8)"))


def test_find_irreducible_deterministic():
    assert find_irreducible(2, 2) == (1, 1, 1)
    # lexicographically first cubic: x^3 + x^2 + 1
    assert find_irreducible(2, 3) == (1, 0, 1, 1)
    for p, r in [(2, 4), (3, 2), (3, 3), (5, 2), (5, 3)]:
        mod = find_irreducible(p, r)
        assert len(mod) == r + 1 and mod[-1] == 1


def test_identity_hom():
    R = ring_make("GF(9)")
    ident = identity_hom(R)
    for a in R.elements[:5]:
        assert ident(a) == a
