import pytest

from wittdisp.galois_ring import GaloisRing, galois_ring_oracle, OracleError
from wittdisp.rings import ring_make
from wittdisp.witt import witt_ring


def test_galois_ring_arithmetic():
    GR = GaloisRing(2, 2, 1)       # Z/4
    assert GR.mul((3,), (3,)) == (1,)
    assert GR.add((3,), (2,)) == (1,)
    GR4 = GaloisRing(2, 2, 2)      # GR(4, 2), 16 elements
    assert GR4.size == 16
    x = (0, 1)
    # modulus x^2 + x + 1 lifts; x^2 = -x - 1 = 3x + 3
    assert GR4.mul(x, x) == (3, 3)


def test_oracle_z4():
    W, GR, phi = galois_ring_oracle(2, 2, 1)
    one = W.one
    two = W.add(one, one)
    assert phi[one] == (1,)
    assert phi[two] == (2,)
    # (0,1) is p times the Teichmuller unit
    z, o = ring_make("GF(2)").zero, ring_make("GF(2)").one
    assert phi[(z, o)] == (2,)


def test_oracle_z8():
    W, GR, phi = galois_ring_oracle(2, 3, 1)
    # the additive order of 1 is 8
    acc = W.zero
    seen = set()
    for _ in range(8):
        acc = W.add(acc, W.one)
        seen.add(acc)
    assert len(seen) == 8 and acc == W.zero


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("r", [1, 2])
def test_oracle_grid(p, n, r):
    galois_ring_oracle(p, n, r)


def test_w1_is_the_field():
    W, GR, phi = galois_ring_oracle(3, 1, 2)
    assert W.size == 9 == GR.size
