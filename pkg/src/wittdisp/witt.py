"""Truncated p-typical Witt vectors W_n(R) over a finite F_p-algebra R.

A Witt vector of length n is a tuple of n ring elements.  Addition and
multiplication evaluate the universal integer polynomials reduced mod p.
The structural maps implemented here:

* ``frobenius``       - coordinatewise p-th power, a ring endomorphism of W_n;
* ``verschiebung``    - the additive shift W_n -> I_{n+1} < W_{n+1};
* ``f1``              - the inverse shift I_{n+1} -> W_n (divided Frobenius);
* ``restrict``        - W_{n+1} -> W_n, drop the last coordinate;
* ``frame_frobenius`` - W_{n+1} -> W_n, p-th powers then restrict;
* ``teichmuller``     - the multiplicative section a -> (a, 0, ..., 0);
* ``ideal_action``    - the W_n(R)-module structure of the ideal I_{n+1}:
  a scalar s acts on v(z) through any lift of s to W_{n+1}, which works out
  to s . v(z) = v(f(s) z).  The divided Frobenius is f-linear for it:
  f1(s . a) = f(s) f1(a).

Multiplication by p satisfies p.x = v(f(restrict(x))) in characteristic p,
and the frame identities f(v(x)) = p.x and p.f1 = frame_frobenius hold on
ideal elements.
"""

from __future__ import annotations

from .rings import FiniteRing, RingError
from .wittpoly import witt_tables, DEFAULT_LEVEL_CAPS


class WittError(ValueError):
    pass


class WittRing:
    """Arithmetic handle for W_n(R); obtain instances via :func:`witt_ring`."""

    def __init__(self, ring: FiniteRing, n: int):
        if n < 1:
            raise WittError("level must be >= 1")
        self.ring = ring
        self.n = n
        self.p = ring.p
        ring.build_mul_table()
        self._add_tab = None
        self._mul_tab = None
        # one level of headroom over the public cap: the ideal I_{n+1} of a
        # level-n computation lives in W_{n+1}
        cap = DEFAULT_LEVEL_CAPS.get(ring.p, 2) + 1
        self._table = witt_tables(ring.p, n, level_cap=max(cap, n if n <= cap else cap))
        self.size = ring.size ** n

    # -- basic ring structure -------------------------------------------

    @property
    def zero(self):
        return (self.ring.zero,) * self.n

    @property
    def one(self):
        return (self.ring.one,) + (self.ring.zero,) * (self.n - 1)

    def _check(self, x):
        if len(x) != self.n:
            raise WittError(f"level mismatch: expected {self.n}, got {len(x)}")

    def _eval(self, terms, values):
        ring = self.ring
        zero = ring.zero
        acc = zero
        pow_cache: dict = {}
        for c, exps in terms:
            m = ring.one
            dead = False
            for vi, e in enumerate(exps):
                if not e:
                    continue
                base = values[vi]
                if base == zero:
                    dead = True
                    break
                key = (vi, e)
                pw = pow_cache.get(key)
                if pw is None:
                    pw = ring.pow(base, e)
                    pow_cache[key] = pw
                m = ring.mul(m, pw)
            if dead:
                continue
            acc = ring.add(acc, ring.scale(c, m))
        return acc

    def add(self, x, y):
        tab = self._add_tab
        if tab is not None:
            return tab[(x, y)]
        self._check(x)
        self._check(y)
        values = x + y
        return tuple(self._eval(self._table.sum_reduced[i], values) for i in range(self.n))

    def mul(self, x, y):
        tab = self._mul_tab
        if tab is not None:
            return tab[(x, y)]
        self._check(x)
        self._check(y)
        values = x + y
        return tuple(self._eval(self._table.prod_reduced[i], values) for i in range(self.n))

    def build_tables(self, cap: int = 64) -> None:
        """Precompute full addition/multiplication tables (small W only)."""
        if self._add_tab is None and self.size <= cap:
            elems = self.elements
            add_tab, mul_tab = {}, {}
            for x in elems:
                for y in elems:
                    add_tab[(x, y)] = self.add(x, y)
                    mul_tab[(x, y)] = self.mul(x, y)
            self._add_tab = add_tab
            self._mul_tab = mul_tab

    def neg(self, x):
        try:
            neg_one = self._neg_one
        except AttributeError:
            neg_one = self._neg_one = self.int_witt(self.p ** self.n - 1)
        return self.mul(neg_one, x)

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def int_witt(self, k: int):
        """The image of the integer k in W_n(R)."""
        k %= self.p ** self.n
        result = self.zero
        one = self.one
        for bit in bin(k)[2:]:
            result = self.add(result, result)
            if bit == "1":
                result = self.add(result, one)
        return result

    def scale_int(self, k: int, x):
        return self.mul(self.int_witt(k), x)

    def pow(self, x, e: int):
        result = self.one
        base = x
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    # -- structural maps -------------------------------------------------

    def frobenius(self, x):
        self._check(x)
        ring = self.ring
        return tuple(ring.frobenius(c) for c in x)

    def inv_frobenius(self, x):
        self._check(x)
        ring = self.ring
        return tuple(ring.inv_frobenius(c) for c in x)

    def teichmuller(self, a):
        return (a,) + (self.ring.zero,) * (self.n - 1)

    def verschiebung(self, x):
        """Shift up into the augmentation ideal of W_{n+1}(R)."""
        self._check(x)
        return (self.ring.zero,) + tuple(x)

    def f1(self, a):
        """Divided Frobenius I_{n+1} -> W_n; a must have zero head coordinate."""
        if len(a) != self.n + 1:
            raise WittError(f"expected a length-{self.n + 1} ideal element")
        if a[0] != self.ring.zero:
            raise WittError("not an ideal element: leading coordinate is nonzero")
        return tuple(a[1:])

    def restrict(self, x):
        """W_{n+1}(R) -> W_n(R), dropping the last coordinate."""
        if len(x) != self.n + 1:
            raise WittError(f"expected a length-{self.n + 1} vector")
        return tuple(x[:-1])

    def frame_frobenius(self, x):
        """W_{n+1}(R) -> W_n(R): coordinatewise p-th powers, then restrict."""
        if len(x) != self.n + 1:
            raise WittError(f"expected a length-{self.n + 1} vector")
        ring = self.ring
        return tuple(ring.frobenius(c) for c in x[:-1])

    def p_mul(self, x):
        """p.x = v(f(restrict(x))): shift up the Frobenius of the truncation."""
        self._check(x)
        ring = self.ring
        return (ring.zero,) + tuple(ring.frobenius(c) for c in x[:-1])

    def ideal_action(self, s, a):
        """s . a for s in W_n(R) and a in I_{n+1}: multiply by any lift of s."""
        return self.verschiebung(self.mul(self.frobenius(s), self.f1(a)))

    def ideal_add(self, a, b):
        return witt_ring(self.ring, self.n + 1).add(a, b)

    # -- units -----------------------------------------------------------

    def is_unit(self, x) -> bool:
        return self.ring.is_unit(x[0])

    def inverse(self, x):
        """Inverse of a unit, by lifting the residue inverse p-adically."""
        if not self.is_unit(x):
            raise WittError(f"not a unit in W_{self.n}({self.ring.key}): {x}")
        y = self.teichmuller(self.ring.inverse(x[0]))
        two = self.int_witt(2)
        for _ in range(self.n):
            y = self.mul(y, self.sub(two, self.mul(x, y)))
        if self.mul(x, y) != self.one:
            raise WittError("unit inversion failed to converge")
        return y

    # -- enumeration and coordinates --------------------------------------

    @property
    def elements(self):
        try:
            return self._elements
        except AttributeError:
            from itertools import product
            self._elements = [tuple(t) for t in product(self.ring.elements, repeat=self.n)]
            return self._elements

    def index(self, x) -> int:
        idx = 0
        for c in x:
            idx = idx * self.ring.size + self.ring.index(c)
        return idx

    def element(self, idx: int):
        coords = []
        for _ in range(self.n):
            coords.append(self.ring.element(idx % self.ring.size))
            idx //= self.ring.size
        return tuple(reversed(coords))

    def ideal_elements(self):
        """All elements of I_{n+1}(R) as length n+1 vectors."""
        return [(self.ring.zero,) + tuple(x) for x in self.elements]

    @property
    def fp_dim(self) -> int:
        return self.n * self.ring.dim

    def to_vec(self, x):
        return [c for coord in x for c in coord]

    def from_vec(self, vec):
        m = self.ring.dim
        return tuple(tuple(vec[i * m:(i + 1) * m]) for i in range(self.n))

    def fp_basis(self):
        out = []
        for i in range(self.fp_dim):
            v = [0] * self.fp_dim
            v[i] = 1
            out.append(self.from_vec(v))
        return out

    def valuation(self, x) -> int:
        """Index of the first nonzero coordinate (n for zero).

        Over a perfect base this is the p-adic valuation, since there
        p^i W_n(R) consists exactly of the vectors supported past index i.
        """
        for i, c in enumerate(x):
            if c != self.ring.zero:
                return i
        return self.n

    def map_coords(self, hom, x):
        """Apply a ring homomorphism coordinatewise: W_n(alpha)."""
        return tuple(hom(c) for c in x)

    # -- additive coordinates ----------------------------------------------

    ZBASIS_GUARD = 4096

    def zcoords(self):
        """Additive-group coordinates of W_n(R); see zlinalg.ZCoords.

        The additive group is a Z/p^n-module but not an F_p-space for
        n >= 2, so all kernel/image computations go through these
        coordinates."""
        try:
            return self._zcoords
        except AttributeError:
            from .zlinalg import abelian_basis, ZCoords
            if self.size > self.ZBASIS_GUARD:
                raise WittError(
                    f"additive basis guard: |W_{self.n}({self.ring.key})| = "
                    f"{self.size} > {self.ZBASIS_GUARD}")
            gens, exps, coords = abelian_basis(
                self.elements, self.add, self.zero, self.p, pmul=self.p_mul)
            self._zcoords = ZCoords(gens, exps, coords, self.p, self.n)
            return self._zcoords

    def ideal_zcoords(self):
        """Additive coordinates of the ideal I_{n+1}(R) inside W_{n+1}(R)."""
        try:
            return self._ideal_zcoords
        except AttributeError:
            from .zlinalg import abelian_basis, ZCoords
            if self.size > self.ZBASIS_GUARD:
                raise WittError(
                    f"additive basis guard: |I_{self.n + 1}({self.ring.key})| = "
                    f"{self.size} > {self.ZBASIS_GUARD}")
            WI = witt_ring(self.ring, self.n + 1)
            ideal = self.ideal_elements()
            zero = (self.ring.zero,) + self.zero
            gens, exps, coords = abelian_basis(
                ideal, WI.add, zero, self.p, pmul=WI.p_mul)
            # v is additive, so the ideal's exponent is at most p^n
            self._ideal_zcoords = ZCoords(gens, exps, coords, self.p, self.n)
            return self._ideal_zcoords

    def __repr__(self):
        return f"W_{self.n}({self.ring.key})"


_WITT_CACHE: dict[tuple[str, int], WittRing] = {}


def witt_ring(ring: FiniteRing, n: int) -> WittRing:
    key = (ring.key, n)
    W = _WITT_CACHE.get(key)
    if W is None:
        W = _WITT_CACHE[key] = WittRing(ring, n)
    return W


# ---------------------------------------------------------------------------
# matrices over W_n(R)


def mat_id(W: WittRing, h: int):
    return tuple(tuple(W.one if i == j else W.zero for j in range(h)) for i in range(h))


def mat_mul(W: WittRing, a, b):
    h = len(a)
    inner = len(b)
    cols = len(b[0]) if inner else 0
    out = []
    for i in range(h):
        row = []
        for j in range(cols):
            acc = W.zero
            for k in range(inner):
                acc = W.add(acc, W.mul(a[i][k], b[k][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_vec_mul(W: WittRing, a, x):
    return tuple(
        _dot(W, row, x) for row in a
    )


def _dot(W: WittRing, row, x):
    acc = W.zero
    for c, v in zip(row, x):
        acc = W.add(acc, W.mul(c, v))
    return acc


def mat_frobenius(W: WittRing, a):
    return tuple(tuple(W.frobenius(c) for c in row) for row in a)


def mat_inv_frobenius(W: WittRing, a):
    return tuple(tuple(W.inv_frobenius(c) for c in row) for row in a)


def mat_map(W: WittRing, hom, a):
    return tuple(tuple(W.map_coords(hom, c) for c in row) for row in a)


def det(W: WittRing, a):
    """Determinant by cofactor expansion (matrices here are small)."""
    h = len(a)
    if h == 0:
        return W.one
    if h == 1:
        return a[0][0]
    acc = W.zero
    rest = a[1:]
    for j in range(h):
        minor = tuple(tuple(row[:j] + row[j + 1:]) for row in rest)
        term = W.mul(a[0][j], det(W, minor))
        acc = W.add(acc, term) if j % 2 == 0 else W.sub(acc, term)
    return acc


def is_invertible(W: WittRing, a) -> bool:
    return W.is_unit(det(W, a))


def mat_inverse(W: WittRing, a):
    """Inverse over the commutative ring W via the adjugate."""
    h = len(a)
    d = det(W, a)
    dinv = W.inverse(d)  # raises for non-units
    if h == 0:
        return ()
    adj = []
    for i in range(h):
        row = []
        for j in range(h):
            minor = tuple(tuple(a[r][c] for c in range(h) if c != i)
                          for r in range(h) if r != j)
            cof = det(W, minor)
            if (i + j) % 2:
                cof = W.neg(cof)
            row.append(W.mul(dinv, cof))
        adj.append(tuple(row))
    return tuple(adj)


def mat_restrict(W_target: WittRing, a):
    return tuple(tuple(W_target.restrict(c) for c in row) for row in a)


def mat_to_index(W: WittRing, a):
    return [W.index(c) for row in a for c in row]


def mat_from_index(W: WittRing, flat, h: int):
    return tuple(tuple(W.element(flat[i * h + j]) for j in range(h)) for i in range(h))
