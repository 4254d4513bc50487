"""Finite-groupoid classification of truncated displays over F_q.

For fixed (q, n, h, d) the displays of rank h and type d over F_q are the
invertible h x h matrices over W_n(F_q); the isomorphisms between them are
the invertible block matrices

    g = (A B; C D),   A in GL(L), B: T -> L, C: L -> I_{n+1} (x) T, D in GL(T),

acting by twisted conjugation

    act(g, M) = u M v^(-1),   u = (A B; i(C) D),
                              v = (f(A)  p f(B); f1(C)  f(D)).

The action formula is a derivation, not an axiom: on every instance a sample
of (g, M) is re-verified by checking element-wise that g commutes with F and
F_1 between display(M) and display(act(g, M)) and is invertible; any failure
aborts.  Isomorphism classes are the orbits (matrices over a finite field
admit no further identifications), orbit/stabilizer enumeration is exact,
and the groupoid mass identity

    sum over classes of 1/|Aut|  =  |X| / |G|

is checked against closed-form counts

    |X| = q^((n-1) h^2) |GL_h(F_q)|,
    |G| = |GL_(h-d)(W_n)| |GL_d(W_n)| q^(2 n d (h-d)).

Orbit seeds are scanned in lexicographic matrix order, so representatives,
class tables and output files are deterministic.  The inner loop (two matrix
products over lookup tables per group element) runs on the kernel backend
selected in :mod:`wittdisp.kernels`.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from math import prod

from . import kernels
from .rings import GaloisField, ring_make, RingSpec, find_irreducible
from .witt import (WittRing, witt_ring, mat_id, mat_mul, mat_inverse, det,
                   is_invertible, mat_frobenius, mat_to_index, mat_from_index)
from .displays import (TruncatedDisplay, display_from_matrix, DisplayHom,
                       verify_hom, is_isomorphism, is_nilpotent, GuardError)


class ModuliError(RuntimeError):
    pass


def gl_count(q: int, k: int) -> int:
    return prod(q ** k - q ** i for i in range(k))


def glw_count(q: int, n: int, k: int) -> int:
    """|GL_k(W_n(F_q))|: unit residue determinant, free higher coordinates."""
    return q ** ((n - 1) * k * k) * gl_count(q, k)


def x_count_formula(q: int, n: int, h: int) -> int:
    return glw_count(q, n, h)


def g_count_formula(q: int, n: int, h: int, d: int) -> int:
    return glw_count(q, n, h - d) * glw_count(q, n, d) * q ** (2 * n * d * (h - d))


@dataclass(frozen=True)
class GroupElement:
    A: tuple
    B: tuple
    C: tuple   # entries in the ideal I_{n+1}
    D: tuple


@dataclass
class ClassRow:
    rep: tuple            # structure matrix
    orbit_size: int
    aut_order: int
    nilpotent: bool
    slopes: tuple | None  # Fractions, or None when the level is insufficient
    dual_rep: tuple | None = None


@dataclass
class ClassTable:
    p: int
    r: int
    q: int
    n: int
    h: int
    d: int
    x_count: int
    g_count: int
    rows: list

    @property
    def mass_lhs(self) -> Fraction:
        return sum((Fraction(1, row.aut_order) for row in self.rows), Fraction(0))

    @property
    def mass_rhs(self) -> Fraction:
        return Fraction(self.x_count, self.g_count)


class ModuliInstance:
    """All data of the classification groupoid for one (q, n, h, d)."""

    def __init__(self, p: int, n: int, h: int, d: int, r: int = 1,
                 budget: int = 10 ** 7):
        if not (0 <= d <= h):
            raise ModuliError(f"type d={d} out of range for rank h={h}")
        self.p, self.r, self.n, self.h, self.d = p, r, n, h, d
        self.q = p ** r
        self.budget = budget
        self.ring: GaloisField = ring_make(
            RingSpec(kind="field", p=p, r=r, modulus=find_irreducible(p, r)))
        self.W = witt_ring(self.ring, n)
        self.N = self.W.size
        x_size = x_count_formula(self.q, n, h)
        g_size = g_count_formula(self.q, n, h, d)
        if x_size > budget or g_size > budget:
            raise GuardError(
                f"instance (q={self.q}, n={n}, h={h}, d={d}) has |X| = {x_size}, "
                f"|G| = {g_size}; enumeration budget is {budget}")
        self._X = None
        self._G = None
        self._tables = None
        self._action = None

    # -- enumeration -----------------------------------------------------

    def x_matrices(self):
        """Invertible h x h matrices over W, in lexicographic index order."""
        if self._X is None:
            W, h = self.W, self.h
            out = []
            if h == 0:
                out.append(())
            else:
                for flat in iproduct(range(self.N), repeat=h * h):
                    m = mat_from_index(W, list(flat), h)
                    if is_invertible(W, m):
                        out.append(m)
            if len(out) != x_count_formula(self.q, self.n, self.h):
                raise ModuliError("exhaustive |X| disagrees with the closed form")
            self._X = out
        return self._X

    def _gl_matrices(self, k: int):
        W = self.W
        if k == 0:
            return [()]
        out = []
        for flat in iproduct(range(self.N), repeat=k * k):
            m = mat_from_index(W, list(flat), k)
            if is_invertible(W, m):
                out.append(m)
        return out

    def group_elements(self):
        if self._G is None:
            W = self.W
            h, d = self.h, self.d
            cut = h - d
            As = self._gl_matrices(cut)
            Ds = self._gl_matrices(d)
            Bs = list(iproduct(range(self.N), repeat=cut * d))
            ideal = self.W.ideal_elements()
            Cs = list(iproduct(range(len(ideal)), repeat=d * cut))
            out = []
            for A in As:
                for Bflat in Bs:
                    B = tuple(tuple(W.element(Bflat[i * d + j]) for j in range(d))
                              for i in range(cut))
                    for Cflat in Cs:
                        C = tuple(tuple(ideal[Cflat[i * cut + j]] for j in range(cut))
                                  for i in range(d))
                        for D in Ds:
                            out.append(GroupElement(A=A, B=B, C=C, D=D))
            if len(out) != g_count_formula(self.q, self.n, self.h, self.d):
                raise ModuliError("exhaustive |G| disagrees with the closed form")
            self._G = out
        return self._G

    # -- group structure ----------------------------------------------------

    def g_identity(self) -> GroupElement:
        W = self.W
        cut = self.h - self.d
        zero_i = (self.ring.zero,) + W.zero
        return GroupElement(
            A=mat_id(W, cut),
            B=tuple(tuple(W.zero for _ in range(self.d)) for _ in range(cut)),
            C=tuple(tuple(zero_i for _ in range(cut)) for _ in range(self.d)),
            D=mat_id(W, self.d))

    def _act_W_on_C(self, X, C):
        """(X . C)[i][j] = sum_m X[i][m] . C[m][j] with the ideal action."""
        W, WI = self.W, witt_ring(self.ring, self.n + 1)
        rows = len(X)
        cols = len(C[0]) if C else 0
        zero_i = (self.ring.zero,) + W.zero
        out = []
        for i in range(rows):
            row = []
            for j in range(cols):
                acc = zero_i
                for m in range(len(C)):
                    acc = WI.add(acc, W.ideal_action(X[i][m], C[m][j]))
                row.append(acc)
            out.append(tuple(row))
        return tuple(out)

    def _act_C_on_W(self, C, X):
        """(C . X)[i][j] = sum_m X[m][j] . C[i][m] with the ideal action."""
        W, WI = self.W, witt_ring(self.ring, self.n + 1)
        rows = len(C)
        cols = len(X[0]) if X else 0
        zero_i = (self.ring.zero,) + W.zero
        out = []
        for i in range(rows):
            row = []
            for j in range(cols):
                acc = zero_i
                for m in range(len(X)):
                    acc = WI.add(acc, W.ideal_action(X[m][j], C[i][m]))
                row.append(acc)
            out.append(tuple(row))
        return tuple(out)

    def _i_of(self, C):
        W = self.W
        return tuple(tuple(W.restrict(c) for c in row) for row in C)

    def g_mul(self, g2: GroupElement, g1: GroupElement) -> GroupElement:
        """Composite g2 . g1 as maps; blockwise with the ideal action on C."""
        W = self.W

        def madd(a, b):
            return tuple(tuple(W.add(x, y) for x, y in zip(ra, rb))
                         for ra, rb in zip(a, b))

        def cadd(a, b):
            WI = witt_ring(self.ring, self.n + 1)
            return tuple(tuple(WI.add(x, y) for x, y in zip(ra, rb))
                         for ra, rb in zip(a, b))

        A = madd(mat_mul(W, g2.A, g1.A), mat_mul(W, g2.B, self._i_of(g1.C)))
        B = madd(mat_mul(W, g2.A, g1.B), mat_mul(W, g2.B, g1.D))
        C = cadd(self._act_C_on_W(g2.C, g1.A), self._act_W_on_C(g2.D, g1.C))
        D = madd(mat_mul(W, self._i_of(g2.C), g1.B), mat_mul(W, g2.D, g1.D))
        return GroupElement(A=A, B=B, C=C, D=D)

    def g_inverse(self, g: GroupElement) -> GroupElement:
        """Blockwise inverse; the C-block solves C . A' + D . C' = 0."""
        W = self.W
        cut = self.h - self.d
        u_inv = mat_inverse(W, self.u_matrix(g))
        A = tuple(tuple(u_inv[i][j] for j in range(cut)) for i in range(cut))
        B = tuple(tuple(u_inv[i][cut + j] for j in range(self.d)) for i in range(cut))
        D = tuple(tuple(u_inv[cut + i][cut + j] for j in range(self.d))
                  for i in range(self.d))
        D_inv = mat_inverse(W, g.D)
        WI = witt_ring(self.ring, self.n + 1)
        neg_CA = tuple(tuple(WI.neg(c) for c in row)
                       for row in self._act_C_on_W(g.C, A))
        C = self._act_W_on_C(D_inv, neg_CA)
        inv = GroupElement(A=A, B=B, C=C, D=D)
        ident = self.g_identity()
        if self.g_mul(g, inv) != ident or self.g_mul(inv, g) != ident:
            raise ModuliError("group inverse construction failed")
        return inv

    # -- the action --------------------------------------------------------

    def u_matrix(self, g: GroupElement):
        W = self.W
        cut = self.h - self.d
        top = tuple(tuple(g.A[i]) + tuple(g.B[i]) for i in range(cut))
        bot = tuple(tuple(W.restrict(c) for c in g.C[i]) + tuple(g.D[i])
                    for i in range(self.d))
        return top + bot

    def vhat_matrix(self, g: GroupElement):
        W = self.W
        top = tuple(
            tuple(W.frobenius(c) for c in g.A[i]) +
            tuple(W.p_mul(W.frobenius(c)) for c in g.B[i])
            for i in range(self.h - self.d))
        bot = tuple(
            tuple(W.f1(c) for c in g.C[i]) +
            tuple(W.frobenius(c) for c in g.D[i])
            for i in range(self.d))
        return top + bot

    def act(self, g: GroupElement, m):
        W = self.W
        return mat_mul(W, mat_mul(W, self.u_matrix(g), m),
                       mat_inverse(W, self.vhat_matrix(g)))

    def display(self, m) -> TruncatedDisplay:
        return display_from_matrix(self.ring, self.n, self.h, self.d, m)

    def hom_from_group_element(self, g: GroupElement, src, dst) -> DisplayHom:
        return DisplayHom(src=src, dst=dst, A=g.A, B=g.B, C=g.C, D=g.D)

    def verify_action_formula(self, sample_size: int = 4, seed: int = 77):
        """Certify the twisted-conjugation formula: on sampled (g, M) the
        blocks of g must commute element-wise with (F, F_1) between
        display(M) and display(act(g, M)), and be invertible.  A failure is
        a derivation bug and aborts."""
        import random
        G = self.group_elements()
        X = self.x_matrices()
        rng = random.Random(seed)
        pairs = [(g, m) for g in G[:sample_size] for m in X[:sample_size]]
        for _ in range(sample_size * sample_size):
            pairs.append((G[rng.randrange(len(G))], X[rng.randrange(len(X))]))
        for g, m in pairs:
            src = self.display(m)
            dst = self.display(self.act(g, m))
            hom = self.hom_from_group_element(g, src, dst)
            if not verify_hom(hom) or not is_isomorphism(hom):
                raise AssertionError(
                    "action formula failed its isomorphism certificate")

    # -- orbits ------------------------------------------------------------

    def _build_tables(self):
        if self._tables is None:
            W, N = self.W, self.N
            add = array("i", [0] * (N * N))
            mul = array("i", [0] * (N * N))
            elems = W.elements
            for i, x in enumerate(elems):
                for j, y in enumerate(elems):
                    add[i * N + j] = W.index(W.add(x, y))
                    mul[i * N + j] = W.index(W.mul(x, y))
            self._tables = (add, mul)
        return self._tables

    def enumerate_orbits(self, verify_sample: int = 4,
                         nilpotence_consistency: bool = True) -> ClassTable:
        """Deterministic orbit decomposition with exact stabilizer orders."""
        from .dieudonne import from_display, newton_polygon, NewtonPrecisionError
        self.verify_action_formula(sample_size=verify_sample)
        W, N, h = self.W, self.N, self.h
        add, mul = self._build_tables()
        G = self.group_elements()
        X = self.x_matrices()
        us = array("i", [0] * (len(G) * h * h))
        vinvs = array("i", [0] * (len(G) * h * h))
        for gi, g in enumerate(G):
            u_idx = mat_to_index(W, self.u_matrix(g))
            vinv_idx = mat_to_index(W, mat_inverse(W, self.vhat_matrix(g)))
            base = gi * h * h
            for k in range(h * h):
                us[base + k] = u_idx[k]
                vinvs[base + k] = vinv_idx[k]
        keys = [kernels.pack_key(mat_to_index(W, m), N) for m in X]
        key_set = set(keys)
        visited: set = set()
        rows = []
        evaluations = 0
        for key, m in zip(keys, X):
            if key in visited:
                continue
            evaluations += len(G)
            if evaluations > self.budget:
                raise GuardError(
                    f"orbit enumeration exceeded the budget of {self.budget} "
                    "group-action evaluations")
            orbit, stab = kernels.orbit_scan(key, h, N, len(G), us, vinvs, mul, add)
            if not orbit <= key_set:
                raise ModuliError("orbit left the space of invertible matrices")
            if len(orbit) * stab != len(G):
                raise ModuliError("orbit-stabilizer identity fails")
            visited |= orbit
            D = self.display(m)
            nilp = is_nilpotent(D)
            if nilpotence_consistency:
                for okey in orbit:
                    om = mat_from_index(W, kernels.unpack_key(okey, N, h * h), h)
                    if is_nilpotent(self.display(om)) != nilp:
                        raise ModuliError("nilpotence is not constant on an orbit")
            try:
                slopes = newton_polygon(from_display(D)).slopes
            except NewtonPrecisionError:
                slopes = None
            rows.append(ClassRow(rep=m, orbit_size=len(orbit), aut_order=stab,
                                 nilpotent=nilp, slopes=slopes))
        if sum(r.orbit_size for r in rows) != len(X):
            raise ModuliError("orbit sizes do not add up to |X|")
        return ClassTable(p=self.p, r=self.r, q=self.q, n=self.n, h=self.h,
                          d=self.d, x_count=len(X), g_count=len(G), rows=rows)

    def orbit_rep(self, m) -> tuple:
        """Lexicographically smallest matrix in the orbit of m."""
        W, N, h = self.W, self.N, self.h
        add, mul = self._build_tables()
        G = self.group_elements()
        best = None
        for g in G:
            key = kernels.pack_key(mat_to_index(W, self.act(g, m)), N)
            if best is None or key < best:
                best = key
        return mat_from_index(W, kernels.unpack_key(best, N, h * h), h)


def mass_check(table: ClassTable):
    """(lhs, rhs, equal): enumerated 1/|Aut| mass against the closed form."""
    lhs = table.mass_lhs
    rhs = table.mass_rhs
    return lhs, rhs, lhs == rhs


def count_nilpotent_locus(table: ClassTable):
    """(number of nilpotent classes, total nilpotent points)."""
    classes = sum(1 for row in table.rows if row.nilpotent)
    points = sum(row.orbit_size for row in table.rows if row.nilpotent)
    return classes, points


def cross_check_isom(inst: ModuliInstance) -> bool:
    """Same-orbit and the Hom-solver isomorphism test must agree on every
    pair of points; raises ModuliError with the offending pair otherwise."""
    from .displays import isom_displays
    X = inst.x_matrices()
    table = inst.enumerate_orbits()
    W, N, h = inst.W, inst.N, inst.h
    add, mul = inst._build_tables()
    orbit_id = {}
    G = inst.group_elements()
    us_flat = array("i", [0] * (len(G) * h * h))
    vinvs_flat = array("i", [0] * (len(G) * h * h))
    for gi, g in enumerate(G):
        u_idx = mat_to_index(W, inst.u_matrix(g))
        vinv_idx = mat_to_index(W, mat_inverse(W, inst.vhat_matrix(g)))
        base = gi * h * h
        for k in range(h * h):
            us_flat[base + k] = u_idx[k]
            vinvs_flat[base + k] = vinv_idx[k]
    for idx, row in enumerate(table.rows):
        key = kernels.pack_key(mat_to_index(W, row.rep), N)
        orbit, _ = kernels.orbit_scan(key, h, N, len(G), us_flat, vinvs_flat, mul, add)
        for okey in orbit:
            orbit_id[okey] = idx
    for i, m1 in enumerate(X):
        k1 = kernels.pack_key(mat_to_index(W, m1), N)
        for m2 in X[i:]:
            k2 = kernels.pack_key(mat_to_index(W, m2), N)
            same = orbit_id[k1] == orbit_id[k2]
            iso = isom_displays(inst.display(m1), inst.display(m2))
            if same != (iso is not None):
                raise ModuliError(
                    f"orbit membership and isom solver disagree on {m1}, {m2}")
    return True


def dual_class_rep(inst: ModuliInstance, rep, dual_inst: ModuliInstance):
    """Orbit representative (in the type h-d instance) of the dual class."""
    from .dieudonne import from_display, dual, to_display
    D = inst.display(rep)
    dual_display = to_display(dual(from_display(D)))
    if dual_display.d != dual_inst.d:
        raise ModuliError("dual display has an unexpected type")
    return dual_inst.orbit_rep(dual_display.matrix)
