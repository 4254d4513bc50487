"""Truncated Dieudonne modules over a finite field F_q and their
equivalence with truncated displays.

A module is a free W_n(F_q)-module M = W^h together with an f-linear F and
an f^(-1)-linear V satisfying F V = V F = p; both are stored through their
linearizations in a fixed basis:

    F(x) = Fsharp . sigma(x),        V(x) = sigma^(-1)(Vsharp . x),

so the defining relations become the plain matrix identities
Fsharp Vsharp = Vsharp Fsharp = p.  At level 1 the extra exactness
conditions Ker F = Im V and Ker V = Im F are required and checked by exact
linear algebra.

The equivalence with displays uses that multiplication by p identifies
W_n(k) with the ideal I_{n+1,k} over a perfect base: a display with
structure matrix M and type d maps to

    Fsharp = M Delta_p,     Vsharp = Delta' M^(-1),

and the inverse construction recovers a normal representation from the
quintuple (P, Q = P, iota = sigma^(-1)(Vsharp), eps = sigma^(-1)(Fsharp),
F_1 = sigma) by lifting bases of the two cokernels.  The fibre of this
correspondence is a torsor under unipotent substitutions M -> M (1 + N)
with N supported on the top filtration step of the T-rows/L-columns block;
such substitutions change neither Fsharp nor Vsharp.  ``reduce_display``
picks the canonical fibre representative, and ``to_display`` returns it, so
``to_display . from_display`` is the identity exactly on reduced structure
matrices (and an isomorphism in general).

Newton polygons are computed from V: the slopes of the W_n-linear r-fold
twisted power of Vsharp (q = p^r), halved by r, with the multiplicative
unit at slope 1, the etale unit at slope 0 and slope sum equal to the type
d.  Coefficients of the characteristic polynomial that vanish at working
precision only bound the polygon, so the computation refuses (raising
NewtonPrecisionError) unless the hull is certified by the known
coefficients, the structural endpoint (h, r d), and the fact that slopes of
a Dieudonne module lie in [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import rank, mat_vec, mat_mul as fp_mat_mul
from .rings import GaloisField, FiniteRing
from .witt import (WittRing, witt_ring, mat_id, mat_mul, mat_vec_mul,
                   mat_frobenius, mat_inv_frobenius, mat_inverse, det)
from .zlinalg import Subgroup, solve_mod, kernel_generators, TupleCoords
from .displays import TruncatedDisplay, display_from_matrix, fsharp, vsharp


class DieudonneError(ValueError):
    pass


class NewtonPrecisionError(RuntimeError):
    """The working level does not determine the Newton polygon."""


@dataclass(frozen=True)
class DieudonneModule:
    field: GaloisField
    n: int
    h: int
    fsharp: tuple
    vsharp: tuple

    @property
    def W(self) -> WittRing:
        return witt_ring(self.field, self.n)

    def __repr__(self):
        return f"DieudonneModule({self.field.key}, n={self.n}, h={self.h})"


def _p_identity(W: WittRing, h: int):
    return tuple(tuple(W.p_mul(c) for c in row) for row in mat_id(W, h))


def _frobenius_fp(W: WittRing, inverse=False):
    f = W.inv_frobenius if inverse else W.frobenius
    cols = [W.to_vec(f(b)) for b in W.fp_basis()]
    return [[cols[j][i] for j in range(len(cols))] for i in range(W.fp_dim)]


def _blockdiag(block, h):
    k = len(block)
    out = [[0] * (h * k) for _ in range(h * k)]
    for s in range(h):
        for i in range(k):
            for j in range(k):
                out[s * k + i][s * k + j] = block[i][j]
    return out


def _witt_matrix_fp_level1(W: WittRing, mat):
    """F_p-matrix of a W_1(R)-matrix.  Valid only at level 1, where the
    additive group of W_1(R) = R really is an F_p-vector space."""
    assert W.n == 1
    h = len(mat)
    w = W.fp_dim
    out = [[0] * (h * w) for _ in range(h * w)]
    basis = W.fp_basis()
    for i in range(h):
        for j in range(h):
            cols = [W.to_vec(W.mul(mat[i][j], b)) for b in basis]
            for r in range(w):
                for c in range(w):
                    out[i * w + r][j * w + c] = cols[c][r]
    return out


def _semilinear_fp(W: WittRing, mat, h: int, inverse=False):
    """F_p-matrix of x -> mat . sigma(x) (or sigma^(-1)(mat . x)); level 1."""
    lin = _witt_matrix_fp_level1(W, mat)
    frob = _blockdiag(_frobenius_fp(W, inverse=inverse), h)
    if inverse:
        return fp_mat_mul(frob, lin, W.p)
    return fp_mat_mul(lin, frob, W.p)


def _field_rank(field: GaloisField, rows) -> int:
    """Rank over F_q, computed through the F_p-representation."""
    if not rows:
        return 0
    p, r = field.p, field.r
    fp_rows = []
    for row in rows:
        blocks = [_mult_matrix_field(field, c) for c in row]
        for i in range(r):
            fp_rows.append([b[i][j] for b in blocks for j in range(r)])
    return rank(fp_rows, p) // r


def _mult_matrix_field(field: GaloisField, c):
    cols = [field.mul(c, b) for b in field.basis()]
    return [[cols[j][i] for j in range(field.r)] for i in range(field.r)]


def module_type(mod: DieudonneModule) -> int:
    """The type d: the F_q-rank of the residue of Fsharp."""
    res = [[entry[0] for entry in row] for row in mod.fsharp]
    return _field_rank(mod.field, res)


def dieudonne_module(field: FiniteRing, n: int, h: int, fsharp_mat, vsharp_mat,
                     check: bool = True) -> DieudonneModule:
    if not isinstance(field, GaloisField):
        raise DieudonneError(
            "Dieudonne modules are implemented over finite fields "
            f"(a perfect base is required; got {field.key})")
    W = witt_ring(field, n)
    fsharp_mat = tuple(tuple(row) for row in fsharp_mat)
    vsharp_mat = tuple(tuple(row) for row in vsharp_mat)
    mod = DieudonneModule(field=field, n=n, h=h,
                          fsharp=fsharp_mat, vsharp=vsharp_mat)
    if check:
        validate_module(mod)
    return mod


def validate_module(mod: DieudonneModule) -> None:
    """F V = V F = p, and the level-1 exactness Ker F = Im V, Ker V = Im F."""
    W = mod.W
    pid = _p_identity(W, mod.h)
    if mat_mul(W, mod.fsharp, mod.vsharp) != pid:
        raise DieudonneError("F V = p fails")
    if mat_mul(W, mod.vsharp, mod.fsharp) != pid:
        raise DieudonneError("V F = p fails")
    if mod.n == 1:
        p = mod.field.p
        F_fp = _semilinear_fp(W, mod.fsharp, mod.h)
        V_fp = _semilinear_fp(W, mod.vsharp, mod.h, inverse=True)
        dim = mod.h * W.fp_dim
        rF, rV = rank(F_fp, p), rank(V_fp, p)
        if rF + rV != dim:
            raise DieudonneError("level-1 condition Ker F = Im V fails")
        if any(any(v) for v in fp_mat_mul(F_fp, V_fp, p)) or \
           any(any(v) for v in fp_mat_mul(V_fp, F_fp, p)):
            raise DieudonneError("level-1 condition Ker F = Im V fails")


# ---------------------------------------------------------------------------
# the equivalence with displays


def from_display(D: TruncatedDisplay) -> DieudonneModule:
    """The module (P, F = F_1 eps, V = iota F_1^(-1)) of a display over a
    perfect field, via the p-multiplication identification of W_n with the
    ideal I_{n+1}."""
    if not D.ring.is_perfect:
        raise DieudonneError(f"base ring {D.ring.key} is not perfect")
    return dieudonne_module(D.ring, D.n, D.h, fsharp(D), vsharp(D))


def reduce_display(D: TruncatedDisplay) -> TruncatedDisplay:
    """Canonical representative of D within the fibre of ``from_display``.

    Substitutions M -> M (1 + N), with N valued in the last Witt filtration
    step and supported on the (T-rows, L-columns) block, leave both Fsharp
    and Vsharp unchanged.  Each L-column is replaced by the canonical
    representative of its coset modulo the subgroup generated by
    (T-column . top-filtration scalar), which picks one representative per
    fibre; the choice is independent of how the input arose because the
    T-columns themselves are fibre-invariant.
    """
    W = D.W
    ring = D.ring
    cut = D.h - D.d
    if cut == 0 or D.d == 0:
        return D
    pz = TupleCoords([W.zcoords()] * D.h)
    gens = []
    for j_col in range(cut, D.h):
        col = tuple(D.matrix[i][j_col] for i in range(D.h))
        for c in ring.basis():
            j_elem = W.from_vec([0] * (W.fp_dim - ring.dim) + list(c))
            gens.append(pz.scaled(tuple(W.mul(j_elem, e) for e in col)))
    lattice = Subgroup(pz.width, W.p, W.n, gens)
    new_cols = []
    for j in range(cut):
        col = tuple(D.matrix[i][j] for i in range(D.h))
        new_cols.append(pz.unscaled(lattice.reduce(pz.scaled(col))))
    rows = []
    for i in range(D.h):
        row = []
        for j in range(D.h):
            row.append(new_cols[j][i] if j < cut else D.matrix[i][j])
        rows.append(tuple(row))
    return display_from_matrix(ring, D.n, D.h, D.d, tuple(rows))


def _q_elem_from_coeffs(pz: TupleCoords, q_gens, coeffs):
    """Element of the product group from solve_mod coefficients (which are
    indexed exactly like the slot-major generator list)."""
    out = []
    pos = 0
    for z in pz.parts:
        out.append(z.from_raw([c % (z.p ** e)
                               for c, e in zip(coeffs[pos:pos + z.width], z.exps)]))
        pos += z.width
    return tuple(out)


def to_display(mod: DieudonneModule) -> TruncatedDisplay:
    """Reconstruct a display from the module.

    Follows the quintuple (P, Q = P, iota = sigma^(-1)(Vsharp),
    eps = sigma^(-1)(Fsharp), F_1 = sigma): lift a basis of Coker(iota) to
    T and complete it by iota-images to a basis of P, take F_1 of the
    iota-preimages as the L-columns and F(T) as the T-columns, and reduce to
    the canonical fibre representative.  The level-1 exactness conditions
    are re-checked before constructing anything.  The resulting display is
    certified: conjugating its operators by the constructed basis must
    reproduce the input matrices exactly.
    """
    validate_module(mod)
    field, W, h, n = mod.field, mod.W, mod.h, mod.n
    p = field.p
    d = module_type(mod)
    iota_mat = mat_inv_frobenius(W, mod.vsharp)
    pz = TupleCoords([W.zcoords()] * h)

    def apply_iota(x):
        return mat_vec_mul(W, iota_mat, x)

    # candidate elements, slot-major; [1] first in each slot so that inputs
    # in standard position reproduce the standard basis
    slot_gens = [W.one] + [g for g in W.zcoords().gens if g != W.one]
    zeros = pz.zero_tuple()
    candidates = []
    for s in range(h):
        for g in slot_gens:
            t = list(zeros)
            t[s] = g
            candidates.append(tuple(t))

    # the image of iota as a subgroup, in scaled coordinates
    q_gens = [g for *_ , g in pz.generators()]
    image = Subgroup(pz.width, p, n, [pz.scaled(apply_iota(g)) for g in q_gens])
    iota_cols = [pz.scaled(apply_iota(g)) for g in q_gens]
    iota_matrix = [[iota_cols[c][r] for c in range(len(iota_cols))]
                   for r in range(pz.width)]

    # T: greedy lifts of an F_q-basis of Coker(iota).  The cokernel is
    # killed by p, hence an F_q-vector space; a candidate is accepted when
    # its scalar orbit enlarges the span by a full factor q.
    taus = []
    span = Subgroup(pz.width, p, n, list(iota_cols))
    base_order = span.order()
    q_size = field.size
    for cand in candidates:
        if len(taus) == d:
            break
        probe = Subgroup(pz.width, p, n)
        probe.rows = {c: list(r) for c, r in span.rows.items()}
        for c in field.basis():
            probe.add(pz.scaled(tuple(W.mul(W.teichmuller(c), e) for e in cand)))
        if probe.order() == base_order * q_size:
            taus.append(cand)
            span = probe
            base_order = probe.order()
    if len(taus) != d:
        raise DieudonneError("cokernel of iota is not free of the expected rank")

    # complete to a basis of P inside the image of iota (full |W|-factor
    # growth).  Standard slot generators come first for canonicity;
    # arbitrary iota-images complete the search in the general case.
    span = Subgroup(pz.width, p, n)
    for t in taus:
        for b in W.zcoords().gens:
            span.add(pz.scaled(tuple(W.mul(b, e) for e in t)))
    base_order = span.order()
    us = []
    lams = []

    def try_candidate(u_elems, lam_coeffs):
        nonlocal span, base_order
        probe = Subgroup(pz.width, p, n)
        probe.rows = {c: list(r) for c, r in span.rows.items()}
        for b in W.zcoords().gens:
            probe.add(pz.scaled(tuple(W.mul(b, e) for e in u_elems)))
        if probe.order() != base_order * W.size:
            return False
        lam = _q_elem_from_coeffs(pz, q_gens, lam_coeffs)
        us.append(u_elems)
        lams.append(lam)
        span = probe
        base_order = probe.order()
        return True

    for cand in candidates:
        if len(us) == h - d:
            break
        lam_coeffs = solve_mod(iota_matrix, pz.scaled(cand), p, n)
        if lam_coeffs is not None:
            try_candidate(cand, lam_coeffs)
    if len(us) < h - d:
        for g in q_gens:
            if len(us) == h - d:
                break
            u_elems = apply_iota(g)
            coeffs = solve_mod(iota_matrix, pz.scaled(u_elems), p, n)
            if coeffs is not None:
                try_candidate(u_elems, coeffs)
    if len(us) != h - d or base_order != W.size ** h:
        raise DieudonneError("could not complete a basis inside the image of iota")

    # columns of the new structure matrix: F_1(lambda) = sigma(lambda) on L,
    # F(tau) on T; base columns u on L, tau on T
    y_cols = [tuple(W.frobenius(e) for e in lam) for lam in lams]
    y_cols += [mat_vec_mul(W, mod.fsharp, tuple(W.frobenius(e) for e in t))
               for t in taus]
    base_cols = us + taus
    S = tuple(tuple(base_cols[j][i] for j in range(h)) for i in range(h))
    Y = tuple(tuple(y_cols[j][i] for j in range(h)) for i in range(h))
    S_inv = mat_inverse(W, S)
    M = mat_mul(W, S_inv, Y)
    D = reduce_display(display_from_matrix(field, n, h, d, M))
    # certificate: the display seen through S must reproduce the module
    f_back = mat_mul(W, mat_mul(W, S, fsharp(D)),
                     mat_inverse(W, mat_frobenius(W, S)))
    v_back = mat_mul(W, mat_mul(W, mat_frobenius(W, S), vsharp(D)),
                     mat_inverse(W, S))
    if f_back != mod.fsharp or v_back != mod.vsharp:
        raise DieudonneError("reconstructed display fails its certificate")
    return D


# ---------------------------------------------------------------------------
# reduction, duality, sums


def reduce_mod_p(mod: DieudonneModule) -> DieudonneModule:
    """M/pM with the residual operators; a level-1 module."""
    if mod.n < 2:
        raise DieudonneError("reduction needs level >= 2")
    f1 = tuple(tuple((entry[0],) for entry in row) for row in mod.fsharp)
    v1 = tuple(tuple((entry[0],) for entry in row) for row in mod.vsharp)
    return dieudonne_module(mod.field, 1, mod.h, f1, v1)


def dual(mod: DieudonneModule) -> DieudonneModule:
    """Linear dual: F and V swap through transposition, d becomes h - d."""
    ft = tuple(tuple(mod.vsharp[j][i] for j in range(mod.h)) for i in range(mod.h))
    vt = tuple(tuple(mod.fsharp[j][i] for j in range(mod.h)) for i in range(mod.h))
    return dieudonne_module(mod.field, mod.n, mod.h, ft, vt)


def module_direct_sum(m1: DieudonneModule, m2: DieudonneModule) -> DieudonneModule:
    if m1.field != m2.field or m1.n != m2.n:
        raise DieudonneError("sum needs matching field and level")
    W = m1.W
    h = m1.h + m2.h

    def block(a, b):
        rows = []
        for i in range(h):
            row = []
            for j in range(h):
                if i < m1.h and j < m1.h:
                    row.append(a[i][j])
                elif i >= m1.h and j >= m1.h:
                    row.append(b[i - m1.h][j - m1.h])
                else:
                    row.append(W.zero)
            rows.append(tuple(row))
        return tuple(rows)

    return dieudonne_module(m1.field, m1.n, h,
                            block(m1.fsharp, m2.fsharp),
                            block(m1.vsharp, m2.vsharp))


# ---------------------------------------------------------------------------
# Newton polygons


@dataclass(frozen=True)
class NewtonPolygon:
    slopes: tuple

    def __post_init__(self):
        s = list(self.slopes)
        if any(not (0 <= x <= 1) for x in s) or s != sorted(s):
            raise DieudonneError(f"invalid slope sequence {s}")

    @property
    def pairs(self):
        """(slope, multiplicity) pairs, slopes ascending."""
        out = []
        for s in self.slopes:
            if out and out[-1][0] == s:
                out[-1] = (s, out[-1][1] + 1)
            else:
                out.append((s, 1))
        return out

    def __repr__(self):
        inner = ", ".join(f"{s}x{m}" for s, m in self.pairs)
        return f"NewtonPolygon({inner})"


def _principal_minor_sums(W: WittRing, mat, h):
    """e_k(mat) for k = 1..h: sums of principal k x k minors."""
    from itertools import combinations
    out = []
    for k in range(1, h + 1):
        acc = W.zero
        for idx in combinations(range(h), k):
            sub = tuple(tuple(mat[i][j] for j in idx) for i in idx)
            acc = W.add(acc, det(W, sub))
        out.append(acc)
    return out


def _lower_hull(points):
    hull = []
    for pt in sorted(points):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def _hull_height(hull, x):
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        if x1 <= x <= x2:
            return Fraction(y1) + Fraction(y2 - y1, x2 - x1) * (x - x1)
    raise ValueError("abscissa outside hull range")


def newton_polygon(mod: DieudonneModule) -> NewtonPolygon:
    """Newton polygon of the module, from the V-operator.

    The r-fold twisted power B = sigma^(r-1)(Vsharp) ... sigma(Vsharp) Vsharp
    is W_n-linear; the polygon is the p-adic lower hull of its characteristic
    polynomial's coefficient valuations, with slopes divided by r.  The hull
    ends at the structurally exact point (h, r d).  Coefficients that vanish
    at level n only carry the bound "valuation >= n"; if the hull cannot be
    certified below those bounds the level is insufficient and
    NewtonPrecisionError is raised.
    """
    field, W, h = mod.field, mod.W, mod.h
    if h == 0:
        return NewtonPolygon(slopes=())
    r = field.r
    d = module_type(mod)
    B = mod.vsharp
    twisted = mod.vsharp
    for _ in range(r - 1):
        twisted = mat_frobenius(W, twisted)
        B = mat_mul(W, twisted, B)
    minors = _principal_minor_sums(W, B, h)
    n = mod.n
    points = [(0, Fraction(0))]
    censored = []
    for j, e in enumerate(minors, start=1):
        # a_j = +/- e_j; valuations ignore the sign
        if e == W.zero:
            if j < h:
                censored.append(j)
        else:
            points.append((j, Fraction(W.valuation(e))))
    terminal = (h, Fraction(r * d))
    if minors[-1] != W.zero:
        if points[-1][0] == h and points[-1][1] != terminal[1]:
            raise DieudonneError("determinant valuation disagrees with the type")
    else:
        points.append(terminal)
    hull = _lower_hull(points)
    for j in censored:
        if _hull_height(hull, j) > n:
            raise NewtonPrecisionError(
                f"level {n} does not determine the Newton polygon "
                f"(coefficient {j} vanishes at working precision)")
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = Fraction(y2 - y1, (x2 - x1) * r)
        slopes.extend([s] * (x2 - x1))
    if sum(slopes) != d:
        raise DieudonneError("slope sum disagrees with the type")
    return NewtonPolygon(slopes=tuple(slopes))


# ---------------------------------------------------------------------------
# isogeny cokernels


@dataclass(frozen=True)
class FiniteDieudonneModule:
    """A finite p-power-torsion quotient with its induced operators.

    ``reps`` lists one canonical representative per coset; F_map, V_map and
    p_map give the index of the image representative for each rep;
    torsion_exponent is the least m with p^m = 0 on the quotient."""

    field: GaloisField
    order: int
    torsion_exponent: int
    reps: tuple
    F_map: tuple
    V_map: tuple
    p_map: tuple


COKERNEL_GUARD = 4096


def isogeny_cokernel(u_matrix, src: DieudonneModule, dst: DieudonneModule) -> FiniteDieudonneModule:
    """Cokernel of an isogeny u: src -> dst of Dieudonne modules.

    u must commute with F and V, and its determinant must be nonzero at the
    working level; that is the finite-level meaning of injectivity for a map
    of lattices (multiplication by p, say, is injective on the lattice but
    kills p^(n-1) at level n).  A nonzero determinant forces every
    elementary divisor exponent below the working level, so the level-n
    quotient is the honest cokernel of the lattice map with its induced
    F and V; the relations F V = V F = p are re-verified on the quotient.
    """
    if src.field != dst.field or src.n != dst.n:
        raise DieudonneError("isogeny endpoints must share field and level")
    W = src.W
    p, n = src.field.p, src.n
    u_matrix = tuple(tuple(row) for row in u_matrix)
    if mat_mul(W, u_matrix, src.fsharp) != mat_mul(W, dst.fsharp, mat_frobenius(W, u_matrix)):
        raise DieudonneError("u does not commute with F")
    if mat_mul(W, dst.vsharp, u_matrix) != mat_mul(W, mat_frobenius(W, u_matrix), src.vsharp):
        raise DieudonneError("u does not commute with V")
    if det(W, u_matrix) == W.zero:
        raise DieudonneError(
            "u is not injective at working precision (determinant vanishes)")
    pz = TupleCoords([W.zcoords()] * dst.h)
    src_gens = [g for *_, g in TupleCoords([W.zcoords()] * src.h).generators()]
    image = Subgroup(pz.width, p, n,
                     [pz.scaled(mat_vec_mul(W, u_matrix, g)) for g in src_gens])
    order = (W.size ** dst.h) // image.order()
    if order > COKERNEL_GUARD:
        raise DieudonneError(f"cokernel of order {order} exceeds the guard")

    def rep_of(elems):
        return tuple(image.reduce(pz.scaled(elems)))

    zero_rep = rep_of(pz.zero_tuple())
    reps = {zero_rep}
    frontier = [zero_rep]
    amb_gens = [g for *_, g in pz.generators()]
    while frontier:
        nxt = []
        for r in frontier:
            r_el = pz.unscaled(list(r))
            for g in amb_gens:
                s = rep_of(tuple(W.add(a, b) for a, b in zip(r_el, g)))
                if s not in reps:
                    reps.add(s)
                    nxt.append(s)
        frontier = nxt
    if len(reps) != order:
        raise DieudonneError("cokernel enumeration disagrees with its order")
    rep_list = sorted(reps)
    rep_index = {r: i for i, r in enumerate(rep_list)}

    def induced(op):
        out = []
        for r in rep_list:
            x = pz.unscaled(list(r))
            out.append(rep_index[rep_of(op(x))])
        return tuple(out)

    F_map = induced(lambda x: mat_vec_mul(W, dst.fsharp, tuple(W.frobenius(e) for e in x)))
    V_map = induced(lambda x: tuple(W.inv_frobenius(e)
                                    for e in mat_vec_mul(W, dst.vsharp, x)))
    p_map = induced(lambda x: tuple(W.p_mul(e) for e in x))
    for i in range(order):
        if F_map[V_map[i]] != p_map[i] or V_map[F_map[i]] != p_map[i]:
            raise DieudonneError("F V = V F = p fails on the cokernel")
    expo = 0
    cur = list(range(order))
    zero_idx = rep_index[zero_rep]
    while any(i != zero_idx for i in cur):
        cur = [p_map[i] for i in cur]
        expo += 1
        if expo > n:
            raise DieudonneError("cokernel torsion exceeds the working level")
    reps_elems = tuple(pz.unscaled(list(r)) for r in rep_list)
    return FiniteDieudonneModule(field=src.field, order=order,
                                 torsion_exponent=expo, reps=reps_elems,
                                 F_map=F_map, V_map=V_map, p_map=p_map)
