"""Galois rings GR(p^n, r) and the independent cross-check of W_n(F_q).

GR(p^n, r) = Z/p^n [x] / (monic lift of an irreducible degree-r polynomial)
is built here from plain modular arithmetic, with no reference to Witt
polynomials.  For a perfect field F_q the map

    phi(x_0, ..., x_{n-1}) = sum_i p^i t(s^{-i}(x_i)),

with t the Teichmuller section of GR and s the p-power Frobenius of F_q, is
a ring isomorphism W_n(F_q) -> GR(p^n, r).  Verifying phi therefore checks
the generated Witt sum/product polynomials against an independent model;
any failure signals a table bug.
"""

from __future__ import annotations

from .rings import GaloisField, find_irreducible, ring_make, RingSpec
from .witt import witt_ring


class OracleError(AssertionError):
    pass


class GaloisRing:
    """GR(p^n, r): tuples of r integers mod p^n, constant coefficient first."""

    def __init__(self, p: int, n: int, r: int, modulus=None):
        self.p, self.n, self.r = p, n, r
        self.pn = p ** n
        self.modulus = tuple(int(c) % self.pn for c in (modulus or find_irreducible(p, r)))
        self.size = self.pn ** r

    @property
    def zero(self):
        return (0,) * self.r

    @property
    def one(self):
        return (1,) + (0,) * (self.r - 1)

    def add(self, a, b):
        pn = self.pn
        return tuple((x + y) % pn for x, y in zip(a, b))

    def scale(self, k: int, a):
        pn = self.pn
        return tuple((k * x) % pn for x in a)

    def mul(self, a, b):
        pn = self.pn
        conv = [0] * (2 * self.r - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] = (conv[i + j] + ai * bj) % pn
        # reduce by the monic modulus (length r+1, leading coefficient 1)
        for deg in range(len(conv) - 1, self.r - 1, -1):
            lead = conv[deg] % pn
            if lead:
                shift = deg - self.r
                for i in range(self.r + 1):
                    conv[shift + i] = (conv[shift + i] - lead * self.modulus[i]) % pn
            conv.pop()
        conv += [0] * (self.r - len(conv))
        return tuple(c % pn for c in conv)

    def pow(self, a, e: int):
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def elements(self):
        from itertools import product
        return [tuple(t) for t in product(range(self.pn), repeat=self.r)]

    def residue(self, a):
        return tuple(x % self.p for x in a)

    def teichmuller_section(self, field: GaloisField):
        """Map each residue to its Teichmuller representative (u^q = u)."""
        q = self.p ** self.r
        section = {}
        for u in self.elements():
            if self.pow(u, q) == u:
                res = self.residue(u)
                if res in section:
                    raise OracleError("duplicate Teichmuller representative")
                section[res] = u
        if len(section) != q:
            raise OracleError("Teichmuller set has the wrong size")
        # keys above are coordinate tuples of the field with the same modulus
        return {field.element(field.index(k)): v for k, v in section.items()}


def galois_ring_oracle(p: int, n: int, r: int = 1, exhaustive_pair_cap: int = 40000):
    """Certify W_n(GF(p^r)) against an independently built GR(p^n, r).

    Returns (witt_handle, galois_ring, phi) where phi maps every Witt vector
    to its Galois-ring image.  Additivity and multiplicativity of phi are
    checked on all pairs when the square of the ring size stays below
    ``exhaustive_pair_cap``; beyond that the check runs on a generating set,
    which is equivalent: a map additive against every additive generator at
    every point is a group homomorphism, and both sides of the product
    identity are biadditive, so generator pairs suffice.

    Raises OracleError on any failure, which indicates a defect in the Witt
    polynomial tables.
    """
    modulus = find_irreducible(p, r)
    field = ring_make(RingSpec(kind="field", p=p, r=r, modulus=modulus))
    W = witt_ring(field, n)
    GR = GaloisRing(p, n, r, modulus)
    tau = GR.teichmuller_section(field)

    def inv_frob_iter(a, i):
        for _ in range(i % max(r, 1)):
            a = field.inv_frobenius(a)
        return a

    phi = {}
    for x in W.elements:
        acc = GR.zero
        for i, coord in enumerate(x):
            acc = GR.add(acc, GR.scale(p ** i, tau[inv_frob_iter(coord, i)]))
        phi[x] = acc
    if len(set(phi.values())) != W.size or W.size != GR.size:
        raise OracleError("candidate map is not a bijection")
    if phi[W.one] != GR.one:
        raise OracleError("candidate map does not fix 1")

    xs = W.elements
    if len(xs) * len(xs) <= exhaustive_pair_cap:
        for x in xs:
            for y in xs:
                if phi[W.add(x, y)] != GR.add(phi[x], phi[y]):
                    raise OracleError(f"additivity fails at {x}, {y}")
                if phi[W.mul(x, y)] != GR.mul(phi[x], phi[y]):
                    raise OracleError(f"multiplicativity fails at {x}, {y}")
    else:
        gens = [W.teichmuller(b) for b in field.basis()]
        # the Teichmuller lifts of an F_p-basis must generate additively
        reached = {W.zero}
        frontier = [W.zero]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    s = W.add(x, g)
                    if s not in reached:
                        reached.add(s)
                        nxt.append(s)
            frontier = nxt
        if len(reached) != len(xs):
            raise OracleError("additive generators do not span")
        for g in gens:
            pg = phi[g]
            for x in xs:
                if phi[W.add(x, g)] != GR.add(phi[x], pg):
                    raise OracleError(f"additivity fails at {x}, {g}")
        for g1 in gens:
            for g2 in gens:
                if phi[W.mul(g1, g2)] != GR.mul(phi[g1], phi[g2]):
                    raise OracleError(f"multiplicativity fails at {g1}, {g2}")
    return W, GR, phi
