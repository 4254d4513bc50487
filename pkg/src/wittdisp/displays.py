"""Truncated displays of level n over a finite F_p-algebra, in normal
representation.

A display of rank h and type d is stored as an invertible h x h structure
matrix M over W_n(R).  The underlying pair is the canonical one attached to
free modules L = W^(h-d) and T = W^d:

    P = L + T,          Q = L + (I_{n+1} tensor T),

with iota restricting ideal coordinates into W_n and epsilon multiplying
into the ideal part.  M is the matrix of the f-linear map Psi on L + T whose
restriction to L is F_1 and to T is F (columns ordered L-block first), so

    F_1(l, a) = M . (f(l) ++ f1(a)),      F(x) = M Delta_p . f(x),

where Delta_p scales the L-columns by p.  The linearization of F_1 on the
untwisted coordinates is M itself, which is why invertibility of M is
exactly the display condition.

V-sharp is the unique W_n(R)-linear map P -> P^(1) with V(F_1 x) = 1 tensor x;
in matrix form it is Delta' M^(-1) with Delta' scaling the T-rows by p.  The
closed form is never trusted blind: every construction re-checks the defining
equation on an F_p-basis of Q (both sides are additive, so that is equivalent
to checking all of Q) and the relations F V = V F = p.

Homomorphisms between displays are block matrices (A B; C D) with C valued in
the ideal I_{n+1}; commuting with F and F_1 reduces to the single linearized
matrix equation u M = M' v, with u = (A B; i(C) D) and
v = (f(A) p f(B); f1(C) f(D)).  That equation is additive in the blocks, so
in additive coordinates it is Z/p^n-linear (the underlying groups are
Z/p^n-modules, not F_p-spaces), and the full finite homomorphism group is
computed exactly as an integer matrix kernel mod p^n.  Isomorphisms are the
solutions whose induced maps on Coker(iota) and Coker(epsilon) - the
residues of the A and D blocks - are invertible.

Every identity checked on a "basis" below is checked on an additive
generating set; since both sides of each identity are additive maps, this
is equivalent to checking every element.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iproduct

from .rings import FiniteRing, RingHom
from .witt import (WittRing, witt_ring, mat_id, mat_mul, mat_vec_mul,
                   mat_frobenius, mat_inverse, det, is_invertible, mat_map)


class DisplayError(ValueError):
    pass


class GuardError(RuntimeError):
    pass


@dataclass(frozen=True)
class TruncatedDisplay:
    ring: FiniteRing
    n: int
    h: int
    d: int
    matrix: tuple

    @property
    def W(self) -> WittRing:
        return witt_ring(self.ring, self.n)

    @property
    def WI(self) -> WittRing:
        """Handle one level up; ideal coordinates live in W_{n+1}."""
        return witt_ring(self.ring, self.n + 1)

    def __repr__(self):
        return (f"TruncatedDisplay({self.ring.key}, n={self.n}, "
                f"h={self.h}, d={self.d})")


def display_from_matrix(ring: FiniteRing, n: int, h: int, d: int, matrix) -> TruncatedDisplay:
    """Wrap a structure matrix, checking shape and invertibility."""
    if not (0 <= d <= h):
        raise DisplayError(f"type d={d} out of range for rank h={h}")
    W = witt_ring(ring, n)
    matrix = tuple(tuple(row) for row in matrix)
    if len(matrix) != h or any(len(row) != h for row in matrix):
        raise DisplayError(f"structure matrix must be {h}x{h}")
    for row in matrix:
        for entry in row:
            if len(entry) != n:
                raise DisplayError("matrix entry has the wrong Witt length")
    if h and not is_invertible(W, matrix):
        raise DisplayError("structure matrix is not invertible over W_n(R)")
    return TruncatedDisplay(ring=ring, n=n, h=h, d=d, matrix=matrix)


def etale_unit(n: int, ring: FiniteRing) -> TruncatedDisplay:
    """Rank 1, type 0: P = Q = W, F_1 = f and F = p f."""
    W = witt_ring(ring, n)
    return display_from_matrix(ring, n, 1, 0, ((W.one,),))


def mult_unit(n: int, ring: FiniteRing) -> TruncatedDisplay:
    """Rank 1, type 1: Q = I_{n+1}, F_1 = f1 and F = f."""
    W = witt_ring(ring, n)
    return display_from_matrix(ring, n, 1, 1, ((W.one,),))


def random_display(rng, ring: FiniteRing, n: int, h: int, d: int) -> TruncatedDisplay:
    """Uniformly random structure matrix (unit residue determinant)."""
    W = witt_ring(ring, n)
    R = ring
    while True:
        mat = tuple(
            tuple(tuple(R.element(rng.randrange(R.size)) for _ in range(n))
                  for _ in range(h))
            for _ in range(h))
        if h == 0 or is_invertible(W, mat):
            return TruncatedDisplay(ring=ring, n=n, h=h, d=d, matrix=mat)


# ---------------------------------------------------------------------------
# the canonical pair attached to the normal representation


def q_fp_basis(D: TruncatedDisplay):
    """F_p-basis of Q = L + I^d: unit coordinates slot by slot."""
    W, WI = D.W, D.WI
    zero_l = tuple(W.zero for _ in range(D.h - D.d))
    zero_a = tuple((D.ring.zero,) + W.zero for _ in range(D.d))
    out = []
    for j in range(D.h - D.d):
        for b in W.fp_basis():
            l = list(zero_l)
            l[j] = b
            out.append((tuple(l), zero_a))
    for k in range(D.d):
        for b in W.fp_basis():
            a = list(zero_a)
            a[k] = (D.ring.zero,) + b
            out.append((zero_l, tuple(a)))
    return out


def q_add(D: TruncatedDisplay, q1, q2):
    W, WI = D.W, D.WI
    return (tuple(W.add(x, y) for x, y in zip(q1[0], q2[0])),
            tuple(WI.add(x, y) for x, y in zip(q1[1], q2[1])))


def q_zero(D: TruncatedDisplay):
    W = D.W
    return (tuple(W.zero for _ in range(D.h - D.d)),
            tuple((D.ring.zero,) + W.zero for _ in range(D.d)))


def iota(D: TruncatedDisplay, q):
    """Q -> P: keep L, restrict ideal coordinates into W_n."""
    W = D.W
    l, a = q
    return tuple(l) + tuple(W.restrict(ak) for ak in a)


def epsilon(D: TruncatedDisplay, a, x):
    """The multiplication map I_{n+1} tensor P -> Q on a pure tensor."""
    W = D.W
    ia = W.restrict(a)
    l_part = tuple(W.mul(ia, x[j]) for j in range(D.h - D.d))
    t_part = tuple(W.ideal_action(x[D.h - D.d + k], a) for k in range(D.d))
    return (l_part, t_part)


def p_vec(D: TruncatedDisplay, x):
    W = D.W
    return tuple(W.p_mul(c) for c in x)


def sigma_vec(D: TruncatedDisplay, x):
    """Coordinates of 1 tensor x in P^(1): the Frobenius of each coordinate."""
    W = D.W
    return tuple(W.frobenius(c) for c in x)


@lru_cache(maxsize=None)
def fsharp(D: TruncatedDisplay):
    """Linearization of F: the structure matrix with L-columns scaled by p."""
    W = D.W
    cut = D.h - D.d
    return tuple(
        tuple(W.p_mul(entry) if j < cut else entry
              for j, entry in enumerate(row))
        for row in D.matrix)


def F_apply(D: TruncatedDisplay, x):
    return mat_vec_mul(D.W, fsharp(D), sigma_vec(D, x))


def F1_apply(D: TruncatedDisplay, q):
    W = D.W
    l, a = q
    coords = tuple(W.frobenius(c) for c in l) + tuple(W.f1(ak) for ak in a)
    return mat_vec_mul(W, D.matrix, coords)


@lru_cache(maxsize=None)
def vsharp(D: TruncatedDisplay):
    """Matrix of V: P -> P^(1), derived as Delta' M^(-1) and then verified
    against the defining equation V(F_1 x) = 1 tensor x on an F_p-basis of Q
    (both sides are additive in x, so the basis check covers all of Q), plus
    the two compositions F V = V F = p."""
    W = D.W
    cut = D.h - D.d
    minv = mat_inverse(W, D.matrix)
    V = tuple(
        tuple(W.p_mul(entry) if i >= cut else entry for entry in row)
        for i, row in enumerate(minv))
    for q in q_fp_basis(D):
        lhs = mat_vec_mul(W, V, F1_apply(D, q))
        rhs = sigma_vec(D, iota(D, q))
        if lhs != rhs:
            raise DisplayError("derived V-matrix fails its defining equation")
    FV = mat_mul(W, fsharp(D), V)
    VF = mat_mul(W, V, fsharp(D))
    p_id = tuple(tuple(W.p_mul(c) for c in row) for row in mat_id(W, D.h))
    if FV != p_id or VF != p_id:
        raise DisplayError("F V = V F = p fails for the derived V-matrix")
    return V


def vsharp_full_check(D: TruncatedDisplay, element_cap: int = 4096) -> bool:
    """Literal check of V(F_1 x) = 1 tensor x over every element of Q when Q
    is small enough; falls back to the basis check inside :func:`vsharp`."""
    V = vsharp(D)
    W = D.W
    q_size = W.size ** D.h
    if q_size > element_cap:
        return True
    W.build_tables()
    VM = mat_mul(W, V, D.matrix)   # V . F_1(q) = (V M) theta(q), exactly
    from itertools import product
    ws = W.elements
    for l in product(ws, repeat=D.h - D.d):
        fl = tuple(W.frobenius(c) for c in l)
        for zs in product(ws, repeat=D.d):
            theta = fl + zs
            lhs = mat_vec_mul(W, VM, theta)
            q = (tuple(l), tuple(W.verschiebung(z) for z in zs))
            if lhs != sigma_vec(D, iota(D, q)):
                return False
    return True


# ---------------------------------------------------------------------------
# truncation, base change, direct sum, nilpotence


def truncate(D: TruncatedDisplay) -> TruncatedDisplay:
    """Drop one Witt coordinate: level n+1 -> n, same rank and type."""
    if D.n < 2:
        raise DisplayError("cannot truncate below level 1")
    Wlow = witt_ring(D.ring, D.n - 1)
    matrix = tuple(tuple(Wlow.restrict(c) for c in row) for row in D.matrix)
    return TruncatedDisplay(ring=D.ring, n=D.n - 1, h=D.h, d=D.d, matrix=matrix)


def truncate_to(D: TruncatedDisplay, level: int) -> TruncatedDisplay:
    while D.n > level:
        D = truncate(D)
    return D


def base_change(D: TruncatedDisplay, alpha: RingHom) -> TruncatedDisplay:
    """Apply W_n(alpha) entrywise; alpha was verified to be a homomorphism."""
    if alpha.dom != D.ring:
        raise DisplayError("base-change source ring mismatch")
    matrix = mat_map(D.W, alpha, D.matrix)
    return display_from_matrix(alpha.cod, D.n, D.h, D.d, matrix)


def direct_sum(D1: TruncatedDisplay, D2: TruncatedDisplay) -> TruncatedDisplay:
    """Block sum, regrouped so the L-blocks of both summands come first."""
    if D1.ring != D2.ring or D1.n != D2.n:
        raise DisplayError("direct sum needs matching ring and level")
    W = D1.W
    h = D1.h + D2.h
    d = D1.d + D2.d
    l1, l2 = D1.h - D1.d, D2.h - D2.d
    # row/column layout: [L1, L2, T1, T2]
    def embed1(i):
        return i if i < l1 else l1 + l2 + (i - l1)

    def embed2(i):
        return l1 + i if i < l2 else l1 + l2 + D1.d + (i - l2)

    rows = [[W.zero] * h for _ in range(h)]
    for i in range(D1.h):
        for j in range(D1.h):
            rows[embed1(i)][embed1(j)] = D1.matrix[i][j]
    for i in range(D2.h):
        for j in range(D2.h):
            rows[embed2(i)][embed2(j)] = D2.matrix[i][j]
    return display_from_matrix(D1.ring, D1.n, h, d, tuple(tuple(r) for r in rows))


def _field_mat_mul(k, a, b):
    h = len(a)
    return [[_field_dot(k, a[i], [b[r][j] for r in range(h)]) for j in range(h)]
            for i in range(h)]


def _field_dot(k, row, col):
    acc = k.zero
    for x, y in zip(row, col):
        acc = k.add(acc, k.mul(x, y))
    return acc


def is_nilpotent(D: TruncatedDisplay) -> bool:
    """Whether the display is nilpotent.

    Nilpotence only depends on the level-1 truncation, and over a field it
    holds exactly when the h-fold twisted composite of the residue matrix of
    V vanishes.  The check runs over every residue field of the base ring.
    """
    D1 = truncate_to(D, 1)
    V = vsharp(D1)
    h = D.h
    if h == 0:
        return True
    residue = [[entry[0] for entry in row] for row in V]
    for k_field, pi in D.ring.residue_fields():
        A = [[pi(c) for c in row] for row in residue]
        comp = A
        twisted = A
        for _ in range(1, h):
            twisted = [[k_field.frobenius(c) for c in row] for row in twisted]
            comp = _field_mat_mul(k_field, twisted, comp)
        if any(c != k_field.zero for row in comp for c in row):
            return False
    return True


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class DisplayHom:
    """Blocks (A B; C D): A: L->L', B: T->L', C: L->I tensor T', D: T->T'.

    A, B, D have entries in W_n(R); C has entries in the ideal I_{n+1}."""

    src: TruncatedDisplay
    dst: TruncatedDisplay
    A: tuple
    B: tuple
    C: tuple
    D: tuple


def _zero_matrix(W, rows, cols):
    return tuple(tuple(W.zero for _ in range(cols)) for _ in range(rows))


def _zero_ideal_matrix(D: TruncatedDisplay, rows, cols):
    z = (D.ring.zero,) + D.W.zero
    return tuple(tuple(z for _ in range(cols)) for _ in range(rows))


def identity_hom(D: TruncatedDisplay) -> DisplayHom:
    W = D.W
    return DisplayHom(src=D, dst=D,
                      A=mat_id(W, D.h - D.d),
                      B=_zero_matrix(W, D.h - D.d, D.d),
                      C=_zero_ideal_matrix(D, D.d, D.h - D.d),
                      D=mat_id(W, D.d))


def u_matrix(hom: DisplayHom):
    """The induced map on P as an h' x h matrix: (A B; i(C) D)."""
    W = hom.src.W
    top = tuple(tuple(hom.A[i]) + tuple(hom.B[i]) for i in range(len(hom.A)))
    bot = tuple(tuple(W.restrict(c) for c in hom.C[i]) + tuple(hom.D[i])
                for i in range(len(hom.D)))
    return top + bot


def vhat_matrix(hom: DisplayHom):
    """Matrix of the induced map on the untwisted Q-coordinates:
    (f(A) p f(B); f1(C) f(D))."""
    W = hom.src.W
    top = tuple(
        tuple(W.frobenius(c) for c in hom.A[i]) +
        tuple(W.p_mul(W.frobenius(c)) for c in hom.B[i])
        for i in range(len(hom.A)))
    bot = tuple(
        tuple(W.f1(c) for c in hom.C[i]) +
        tuple(W.frobenius(c) for c in hom.D[i])
        for i in range(len(hom.D)))
    return top + bot


def apply_P(hom: DisplayHom, x):
    return mat_vec_mul(hom.src.W, u_matrix(hom), x)


def apply_Q(hom: DisplayHom, q):
    """The induced map on Q, determined by the blocks."""
    W = hom.src.W
    src, dst = hom.src, hom.dst
    l, a = q
    cut_dst = dst.h - dst.d
    l_out = []
    for i in range(cut_dst):
        acc = W.zero
        for j, lj in enumerate(l):
            acc = W.add(acc, W.mul(hom.A[i][j], lj))
        for k, ak in enumerate(a):
            acc = W.add(acc, W.mul(W.restrict(ak), hom.B[i][k]))
        l_out.append(acc)
    a_out = []
    WI = src.WI
    for i in range(dst.d):
        acc = (src.ring.zero,) + W.zero
        for j, lj in enumerate(l):
            acc = WI.add(acc, W.ideal_action(lj, hom.C[i][j]))
        for k, ak in enumerate(a):
            acc = WI.add(acc, W.ideal_action(hom.D[i][k], ak))
        a_out.append(acc)
    return (tuple(l_out), tuple(a_out))


def verify_hom(hom: DisplayHom) -> bool:
    """Element-level commutation with F and F_1 on F_p-bases of P and Q.

    All maps involved are additive, so the basis check is equivalent to the
    check on every element."""
    src, dst = hom.src, hom.dst
    for b in _p_fp_basis(src):
        if apply_P(hom, F_apply(src, b)) != F_apply(dst, apply_P(hom, b)):
            return False
    for q in q_fp_basis(src):
        if apply_P(hom, F1_apply(src, q)) != F1_apply(dst, apply_Q(hom, q)):
            return False
    return True


def _p_fp_basis(D: TruncatedDisplay):
    W = D.W
    out = []
    for j in range(D.h):
        for b in W.fp_basis():
            v = [W.zero] * D.h
            v[j] = b
            out.append(tuple(v))
    return out


def _residue_det_is_unit(ring, W, block):
    if not block:
        return True
    res = [[entry[0] for entry in row] for row in block]
    return ring.is_unit(_ring_det(ring, res))


def _ring_det(ring, rows):
    h = len(rows)
    if h == 0:
        return ring.one
    if h == 1:
        return rows[0][0]
    acc = ring.zero
    rest = rows[1:]
    for j in range(h):
        minor = [[row[c] for c in range(h) if c != j] for row in rest]
        term = ring.mul(rows[0][j], _ring_det(ring, minor))
        acc = ring.add(acc, term) if j % 2 == 0 else ring.sub(acc, term)
    return acc


def is_isomorphism(hom: DisplayHom) -> bool:
    """A hom is an isomorphism iff it induces isomorphisms on Coker(iota)
    and Coker(epsilon), i.e. the residues of the D and A blocks are
    invertible over R."""
    src, dst = hom.src, hom.dst
    if src.h != dst.h or src.d != dst.d:
        return False
    ring, W = src.ring, src.W
    return (_residue_det_is_unit(ring, W, hom.A) and
            _residue_det_is_unit(ring, W, hom.D))


# -- the Hom solver ----------------------------------------------------------
#
# Commutation with F and F_1 reduces to the single matrix equation
# u M = M' v on the linearized Q-coordinates (the F-equation follows by
# multiplying with Delta_p on the right).  The equation is additive in the
# blocks, therefore Z/p^n-linear in their additive coordinates; the solution
# set is computed exactly as the kernel of an integer matrix mod p^n.


def _entry_descriptors(D1: TruncatedDisplay, D2: TruncatedDisplay):
    """(block, i, j, coords) for every matrix position of a hom D1 -> D2."""
    zc = D1.W.zcoords()
    zci = D1.W.ideal_zcoords()
    shapes = [
        ("A", D2.h - D2.d, D1.h - D1.d, zc),
        ("B", D2.h - D2.d, D1.d, zc),
        ("C", D2.d, D1.h - D1.d, zci),
        ("D", D2.d, D1.d, zc),
    ]
    out = []
    for name, rows, cols, coords in shapes:
        for i in range(rows):
            for j in range(cols):
                out.append((name, i, j, coords))
    return out


def _hom_from_tvec(D1, D2, entries, tvec):
    """Build the hom whose entry coefficients are given by tvec."""
    W = D1.W
    blocks = {
        "A": [[None] * (D1.h - D1.d) for _ in range(D2.h - D2.d)],
        "B": [[None] * D1.d for _ in range(D2.h - D2.d)],
        "C": [[None] * (D1.h - D1.d) for _ in range(D2.d)],
        "D": [[None] * D1.d for _ in range(D2.d)],
    }
    pos = 0
    for name, i, j, coords in entries:
        blocks[name][i][j] = coords.from_raw(tvec[pos:pos + coords.width])
        pos += coords.width
    return DisplayHom(src=D1, dst=D2,
                      A=tuple(tuple(r) for r in blocks["A"]),
                      B=tuple(tuple(r) for r in blocks["B"]),
                      C=tuple(tuple(r) for r in blocks["C"]),
                      D=tuple(tuple(r) for r in blocks["D"]))


def _hom_defect_coords(hom: DisplayHom):
    """u M - M' v in scaled additive coordinates; zero iff hom commutes."""
    D1, D2 = hom.src, hom.dst
    W = D1.W
    zc = W.zcoords()
    lhs = mat_mul(W, u_matrix(hom), D1.matrix)
    rhs = mat_mul(W, D2.matrix, vhat_matrix(hom))
    out = []
    for i in range(D2.h):
        for j in range(D1.h):
            out.extend(zc.scaled(W.sub(lhs[i][j], rhs[i][j])))
    return out


class HomSpace:
    """The finite group Hom(D1, D2) with an exact parametrization.

    ``generators`` are verified nonzero homomorphisms generating the group;
    ``size`` is the exact number of homomorphisms.  ``enumerate_homs`` yields
    every homomorphism once, deterministically.
    """

    def __init__(self, src, dst, entries, kernel_gens, gen_orders):
        self.src = src
        self.dst = dst
        self._entries = entries
        self._kernel = kernel_gens
        self._orders = gen_orders
        p, n = src.ring.p, src.n
        red = 1
        for _, _, _, coords in entries:
            for e in coords.exps:
                red *= p ** (n - e)
        total = 1
        for o in gen_orders:
            total *= p ** o
        self.size = total // red if red else 0
        self.generators = []
        for vec, _ in kernel_gens:
            hom = _hom_from_tvec(src, dst, entries, vec)
            if not _is_zero_hom(hom):
                self.generators.append(hom)

    def enumerate_homs(self):
        """Every homomorphism exactly once (canonical block keys dedupe the
        coefficient redundancy of non-free coordinate groups)."""
        p, n = self.src.ring.p, self.src.n
        pn = p ** n
        if not self._kernel:
            yield _hom_from_tvec(self.src, self.dst, self._entries,
                                 [0] * sum(c.width for *_, c in self._entries))
            return
        width = len(self._kernel[0][0])
        seen = set()
        ranges = [range(p ** o) for _, o in self._kernel]
        for coeffs in iproduct(*ranges):
            t = [0] * width
            for c, (vec, _) in zip(coeffs, self._kernel):
                if c:
                    for i in range(width):
                        t[i] = (t[i] + c * vec[i]) % pn
            hom = _hom_from_tvec(self.src, self.dst, self._entries, t)
            key = (hom.A, hom.B, hom.C, hom.D)
            if key not in seen:
                seen.add(key)
                yield hom


def _is_zero_hom(hom: DisplayHom) -> bool:
    W = hom.src.W
    zero_i = (hom.src.ring.zero,) + W.zero
    return (all(c == W.zero for row in hom.A for c in row) and
            all(c == W.zero for row in hom.B for c in row) and
            all(c == zero_i for row in hom.C for c in row) and
            all(c == W.zero for row in hom.D for c in row))


def hom_space(D1: TruncatedDisplay, D2: TruncatedDisplay) -> HomSpace:
    if D1.ring != D2.ring or D1.n != D2.n:
        raise DisplayError("hom solver needs matching ring and level")
    from .zlinalg import kernel_generators
    p, n = D1.ring.p, D1.n
    entries = _entry_descriptors(D1, D2)
    if not entries:
        return HomSpace(D1, D2, entries, [], [])
    columns = []
    pos_total = sum(c.width for *_, c in entries)
    pos = 0
    for name, i, j, coords in entries:
        for g in range(coords.width):
            tvec = [0] * pos_total
            tvec[pos + g] = 1
            columns.append(_hom_defect_coords(
                _hom_from_tvec(D1, D2, entries, tvec)))
        pos += coords.width
    rows = [[columns[c][r] for c in range(len(columns))]
            for r in range(len(columns[0]))]
    kernel = kernel_generators(rows, p, n)
    space = HomSpace(D1, D2, entries, kernel, [o for _, o in kernel])
    for hom in space.generators:
        if not verify_hom(hom):
            raise DisplayError("solver produced a non-commuting map")
    return space


def hom_displays(D1: TruncatedDisplay, D2: TruncatedDisplay):
    """Verified generators of the homomorphism group Hom(D1, D2).

    The group is finite; over a level-1 base it is an F_p-vector space and
    the generators are a basis.  An empty list means Hom = 0.
    """
    return hom_space(D1, D2).generators


def isom_displays(D1: TruncatedDisplay, D2: TruncatedDisplay,
                  budget: int = 1 << 16, tries: int = 4096, seed: int = 20240901):
    """An isomorphism D1 -> D2, or None when provably none exists.

    Enumerates the Hom group in its canonical parametrization order while it
    fits the budget; otherwise a seeded randomized search, whose positive
    answers are certified by the isomorphism verifier but which raises
    GuardError instead of answering None.
    """
    if D1.h != D2.h or D1.d != D2.d:
        return None
    if D1 == D2:
        return identity_hom(D1)
    space = hom_space(D1, D2)
    if not space.generators:
        return None
    if space.size <= budget:
        for hom in space.enumerate_homs():
            if is_isomorphism(hom):
                assert verify_hom(hom)
                return hom
        return None
    import random
    rng = random.Random(seed)
    p, n = D1.ring.p, D1.n
    pn = p ** n
    width = len(space._kernel[0][0])
    for _ in range(tries):
        t = [0] * width
        for vec, o in space._kernel:
            c = rng.randrange(p ** o)
            if c:
                for i in range(width):
                    t[i] = (t[i] + c * vec[i]) % pn
        hom = _hom_from_tvec(D1, D2, space._entries, t)
        if is_isomorphism(hom):
            assert verify_hom(hom)
            return hom
    raise GuardError(
        f"isom search space of size {space.size} exceeds the exhaustive "
        "budget and the randomized search found no certificate")


def compose_homs(h2: DisplayHom, h1: DisplayHom) -> DisplayHom:
    """Composite h2 . h1 (blockwise, with the ideal action on C-blocks)."""
    if h1.dst != h2.src:
        raise DisplayError("homs do not compose")
    W = h1.src.W
    WI = h1.src.WI
    src, mid, dst = h1.src, h1.dst, h2.dst

    def wmat_mul(a, b, rows, inner, cols):
        return tuple(
            tuple(_wsum(W, [W.mul(a[i][k], b[k][j]) for k in range(inner)])
                  for j in range(cols))
            for i in range(rows))

    lm, tm = mid.h - mid.d, mid.d
    ls, ts = src.h - src.d, src.d
    ld, td = dst.h - dst.d, dst.d
    iC1 = tuple(tuple(W.restrict(c) for c in row) for row in h1.C)
    iC2 = tuple(tuple(W.restrict(c) for c in row) for row in h2.C)
    A = _mat_add(W, wmat_mul(h2.A, h1.A, ld, lm, ls),
                 wmat_mul(h2.B, iC1, ld, tm, ls))
    B = _mat_add(W, wmat_mul(h2.A, h1.B, ld, lm, ts),
                 wmat_mul(h2.B, h1.D, ld, tm, ts))
    D = _mat_add(W, wmat_mul(iC2, h1.B, td, lm, ts),
                 wmat_mul(h2.D, h1.D, td, tm, ts))
    C_rows = []
    for i in range(td):
        row = []
        for j in range(ls):
            acc = (src.ring.zero,) + W.zero
            for m in range(lm):
                acc = WI.add(acc, W.ideal_action(h1.A[m][j], h2.C[i][m]))
            for m in range(tm):
                acc = WI.add(acc, W.ideal_action(h2.D[i][m], h1.C[m][j]))
            row.append(acc)
        C_rows.append(tuple(row))
    return DisplayHom(src=src, dst=dst, A=A, B=B, C=tuple(C_rows), D=D)


def _wsum(W, items):
    acc = W.zero
    for x in items:
        acc = W.add(acc, x)
    return acc


def _mat_add(W, a, b):
    return tuple(tuple(W.add(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))
