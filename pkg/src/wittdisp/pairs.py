"""Raw truncated pairs and their normal decompositions.

A raw pair carries the linear data (P, Q, iota, epsilon) of a level-n
pre-display concretely: P-elements are h-tuples over W_n(R), Q-elements are
pairs (l, a) with l over W_n(R) and a over the ideal I_{n+1}, and the maps
are closures.  Presenting the same pair in a scrambled P-basis replaces the
closures, which is how decompositions of non-standard presentations are
exercised.

Checks run on additive generating sets (the maps are additive, so that is
equivalent to all elements), with kernels, images and quotients computed in
additive Z/p^n-coordinates:

* pair axioms: iota . epsilon and epsilon . (1 x iota) are the
  multiplication maps;
* the 4-term sequence 0 -> J (x)_R Coker(iota) -> Q -> P -> Coker(iota) -> 0
  is exact (membership and subgroup-order computations);
* a normal decomposition exists: greedy free lifts of an R-basis of
  Coker(iota) to T < P and of Coker(epsilon) to L < Q, with both structure
  bijections L + T -> P and L + (I (x) T) -> Q certified by order counts.

Lifts are scanned in a fixed generator order (over a product ring, factor by
factor through the idempotents), so the decomposition is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .rings import FiniteRing, ProductRing
from .witt import WittRing, witt_ring, mat_vec_mul, mat_inverse
from .zlinalg import Subgroup, TupleCoords


class PairError(ValueError):
    pass


@dataclass
class RawPair:
    ring: FiniteRing
    n: int
    h: int
    d0: int                      # number of ideal slots in Q
    iota_fn: object              # Q-elem -> P-elem
    eps_fn: object               # (ideal elem, P-elem) -> Q-elem

    @property
    def W(self) -> WittRing:
        return witt_ring(self.ring, self.n)

    @property
    def WI(self) -> WittRing:
        return witt_ring(self.ring, self.n + 1)

    # -- elements ---------------------------------------------------------

    def p_zero(self):
        return tuple(self.W.zero for _ in range(self.h))

    def q_zero(self):
        return (tuple(self.W.zero for _ in range(self.h - self.d0)),
                tuple((self.ring.zero,) + self.W.zero for _ in range(self.d0)))

    def p_add(self, x, y):
        W = self.W
        return tuple(W.add(a, b) for a, b in zip(x, y))

    def q_add(self, q1, q2):
        W, WI = self.W, self.WI
        return (tuple(W.add(a, b) for a, b in zip(q1[0], q2[0])),
                tuple(WI.add(a, b) for a, b in zip(q1[1], q2[1])))

    def p_scale(self, w, x):
        W = self.W
        return tuple(W.mul(w, c) for c in x)

    def q_scale(self, w, q):
        W = self.W
        return (tuple(W.mul(w, c) for c in q[0]),
                tuple(W.ideal_action(w, a) for a in q[1]))

    # -- coordinates --------------------------------------------------------

    def p_coords(self) -> TupleCoords:
        return TupleCoords([self.W.zcoords()] * self.h)

    def q_coords(self) -> TupleCoords:
        return TupleCoords([self.W.zcoords()] * (self.h - self.d0) +
                           [self.W.ideal_zcoords()] * self.d0)

    def q_flat(self, q):
        return tuple(q[0]) + tuple(q[1])

    def q_unflat(self, flat):
        return (tuple(flat[:self.h - self.d0]), tuple(flat[self.h - self.d0:]))

    def p_generators(self):
        return [g for *_, g in self.p_coords().generators()]

    def q_generators(self):
        return [self.q_unflat(g) for *_, g in self.q_coords().generators()]

    def ideal_generators(self):
        zc = self.W.ideal_zcoords()
        return list(zc.gens)


def canonical_raw_pair(ring: FiniteRing, n: int, h: int, d: int) -> RawPair:
    """The pair attached to free modules L = W^(h-d), T = W^d."""
    W = witt_ring(ring, n)
    cut = h - d

    def iota_fn(q):
        l, a = q
        return tuple(l) + tuple(W.restrict(ak) for ak in a)

    def eps_fn(a, x):
        ia = W.restrict(a)
        return (tuple(W.mul(ia, x[j]) for j in range(cut)),
                tuple(W.ideal_action(x[cut + k], a) for k in range(d)))

    return RawPair(ring=ring, n=n, h=h, d0=d, iota_fn=iota_fn, eps_fn=eps_fn)


def scramble_pair(pair: RawPair, S) -> RawPair:
    """Present the pair in the P-basis given by an invertible W-matrix S."""
    W = pair.W
    S = tuple(tuple(row) for row in S)
    S_inv = mat_inverse(W, S)
    base_iota, base_eps = pair.iota_fn, pair.eps_fn

    def iota_fn(q):
        return mat_vec_mul(W, S_inv, base_iota(q))

    def eps_fn(a, x):
        return base_eps(a, mat_vec_mul(W, S, x))

    return RawPair(ring=pair.ring, n=pair.n, h=pair.h, d0=pair.d0,
                   iota_fn=iota_fn, eps_fn=eps_fn)


# ---------------------------------------------------------------------------
# axioms and the 4-term sequence


def check_pair_axioms(pair: RawPair) -> None:
    """iota . epsilon and epsilon . (1 x iota) are the multiplication maps.

    Checked on generator pairs; both sides are additive in each argument."""
    W = pair.W
    for a in pair.ideal_generators():
        ia = W.restrict(a)
        for x in pair.p_generators():
            if pair.iota_fn(pair.eps_fn(a, x)) != pair.p_scale(ia, x):
                raise PairError("iota . epsilon is not multiplication")
        for q in pair.q_generators():
            if pair.eps_fn(a, pair.iota_fn(q)) != pair.q_scale(ia, q):
                raise PairError("epsilon . (1 x iota) is not multiplication")


def _image_subgroup(pair: RawPair):
    pz = pair.p_coords()
    gens = [pz.scaled(pair.iota_fn(q)) for q in pair.q_generators()]
    return Subgroup(pz.width, pair.ring.p, pair.n, gens), pz


def _eps_image_subgroup(pair: RawPair):
    qz = pair.q_coords()
    gens = []
    for a in pair.ideal_generators():
        for x in pair.p_generators():
            gens.append(qz.scaled(pair.q_flat(pair.eps_fn(a, x))))
    return Subgroup(qz.width, pair.ring.p, pair.n, gens), qz


def _free_lifts(pair: RawPair, which: str):
    """Greedy free R-basis lifts of Coker(iota) (in P) or Coker(epsilon)
    (in Q); PairError if the cokernel is not free over R.

    A candidate is accepted when its scalar orbit for the active ring factor
    enlarges the span by the full factor size; over a product the scan runs
    factor by factor and the per-factor bases are summed.
    """
    ring = pair.ring
    W = pair.W
    p, n = ring.p, pair.n
    if which == "P":
        image, coords = _image_subgroup(pair)
        candidates = pair.p_generators()
        embed = lambda x: x
        scale = pair.p_scale
    else:
        image, coords = _eps_image_subgroup(pair)
        candidates = [pair.q_flat(q) for q in pair.q_generators()]
        embed = pair.q_unflat
        scale = lambda w, flat: pair.q_flat(pair.q_scale(w, embed(flat)))
    if isinstance(ring, ProductRing):
        factor_data = []
        for fi, (f, s, e) in enumerate(ring._slices()):
            basis = []
            for c in range(f.dim):
                parts = [g.zero for g in ring.factors]
                vec = [0] * f.dim
                vec[c] = 1
                parts[fi] = tuple(vec)
                basis.append(ring.embed(parts))
            factor_data.append((f.size, basis))
    else:
        factor_data = [(ring.size, ring.basis())]

    per_factor = []
    for fsize, fbasis in factor_data:
        span = Subgroup(coords.width, p, n)
        span.rows = {c: list(r) for c, r in image.rows.items()}
        base = span.order()
        # reachable target for this factor
        full = Subgroup(coords.width, p, n)
        full.rows = {c: list(r) for c, r in span.rows.items()}
        for cand in candidates:
            for rb in fbasis:
                full.add(coords.scaled(scale(W.teichmuller(rb), cand)))
        target = full.order()
        lifts = []
        for cand in candidates:
            if base == target:
                break
            probe = Subgroup(coords.width, p, n)
            probe.rows = {c: list(r) for c, r in span.rows.items()}
            for rb in fbasis:
                probe.add(coords.scaled(scale(W.teichmuller(rb), cand)))
            if probe.order() == base * fsize:
                lifts.append(cand)
                span = probe
                base = probe.order()
        if base != target:
            raise PairError(f"cokernel of the {which}-side map is not free over R")
        per_factor.append(lifts)
    ranks = {len(l) for l in per_factor}
    if len(ranks) != 1:
        raise PairError(
            f"cokernel of the {which}-side map is projective but not free "
            f"(factor ranks {sorted(len(l) for l in per_factor)})")
    t = ranks.pop()
    if len(per_factor) == 1:
        combined = per_factor[0]
    else:
        combined = []
        for k in range(t):
            acc = per_factor[0][k]
            if which == "P":
                for lifts in per_factor[1:]:
                    acc = pair.p_add(acc, lifts[k])
            else:
                acc_q = embed(acc)
                for lifts in per_factor[1:]:
                    acc_q = pair.q_add(acc_q, embed(lifts[k]))
                acc = pair.q_flat(acc_q)
            combined.append(acc)
    if which == "P":
        return combined, t
    return [embed(c) for c in combined], t


def four_term_check(pair: RawPair) -> None:
    """Exactness of 0 -> J (x)_R Coker(iota) -> Q -> P -> Coker(iota) -> 0.

    The first map is epsilon restricted to the top filtration step J of the
    ideal; it only depends on the class mod iota because i(J) = 0.  Checked
    by order counts: the image of (J-generators x T-lifts) must have the
    full order |R|^d of J (x) Coker(iota) and must fill ker(iota) exactly.
    """
    ring = pair.ring
    W = pair.W
    p, n = ring.p, pair.n
    taus, d = _free_lifts(pair, "P")
    image, pz = _image_subgroup(pair)
    qz = pair.q_coords()
    j_gens = [(ring.zero,) + W.from_vec([0] * (W.fp_dim - ring.dim) + list(c))
              for c in ring.basis()]
    bar_eps = Subgroup(qz.width, p, n)
    for tau in taus:
        for j in j_gens:
            bar_eps.add(qz.scaled(pair.q_flat(pair.eps_fn(j, tau))))
    expected = ring.size ** d
    if bar_eps.order() != expected:
        raise PairError("J (x) Coker(iota) does not inject into Q")
    q_size = W.size ** pair.h
    ker_iota_order = q_size // image.order()
    if ker_iota_order != expected:
        raise PairError("ker(iota) has the wrong order")
    # containment: the generators of the image annihilate iota
    for tau in taus:
        for j in j_gens:
            if pair.iota_fn(pair.eps_fn(j, tau)) != pair.p_zero():
                raise PairError("image of the J-part does not land in ker(iota)")


@dataclass
class NormalDecomposition:
    L_lifts: list
    T_lifts: list
    d: int


def normal_decompose(pair: RawPair) -> NormalDecomposition:
    """Constructive normal decomposition with certified bijections."""
    check_pair_axioms(pair)
    four_term_check(pair)
    ring = pair.ring
    W = pair.W
    p, n = ring.p, pair.n
    taus, d = _free_lifts(pair, "P")
    lams, l_rank = _free_lifts(pair, "Q")
    if l_rank + d != pair.h:
        raise PairError("decomposition ranks do not add up to the rank of P")
    pz = pair.p_coords()
    qz = pair.q_coords()
    wgens = W.zcoords().gens
    # L + T -> P: (l, t) -> iota(l) + t
    span = Subgroup(pz.width, p, n)
    for lam in lams:
        for b in wgens:
            span.add(pz.scaled(pair.iota_fn(pair.q_scale(b, lam))))
    for tau in taus:
        for b in wgens:
            span.add(pz.scaled(pair.p_scale(b, tau)))
    if span.order() != W.size ** pair.h:
        raise PairError("L + T -> P is not bijective")
    # L + (I x T) -> Q: (l, a) -> l + epsilon(a x t)
    igens = pair.ideal_generators()
    span_q = Subgroup(qz.width, p, n)
    for lam in lams:
        for b in wgens:
            span_q.add(qz.scaled(pair.q_flat(pair.q_scale(b, lam))))
    for tau in taus:
        for a in igens:
            span_q.add(qz.scaled(pair.q_flat(pair.eps_fn(a, tau))))
    if span_q.order() != W.size ** pair.h:
        raise PairError("L + (I x T) -> Q is not bijective")
    return NormalDecomposition(L_lifts=lams, T_lifts=taus, d=d)
