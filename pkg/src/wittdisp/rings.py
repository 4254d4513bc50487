"""Finite commutative F_p-algebras with exact arithmetic.

Three kinds of rings are supported, plus finite products of them:

* ``GF(p^r)`` - a prime or Galois field given by a monic irreducible modulus,
* ``GF(p^r)[x]/x^k`` - a truncated polynomial ring over such a field,
* ``A*B`` - a finite product of the above.

Every ring is a finite F_p-vector space with a fixed coordinate basis, and an
element is the tuple of its F_p-coordinates.  Elements are enumerated in
lexicographic order of the coordinate vector (first coordinate most
significant), which fixes a deterministic index for every element; all
downstream enumeration (Witt vectors, matrices, orbits) inherits this order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct

from .linalg import mat_vec


class RingError(ValueError):
    pass


# ---------------------------------------------------------------------------
# dense polynomial helpers over F_p (coefficient tuples, low degree first)


def _poly_trim(c):
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def _poly_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a, m, p):
    """Remainder of a modulo the monic polynomial m."""
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and len(a) > 0:
        lead = a[-1] % p
        if lead:
            shift = len(a) - 1 - dm
            for i in range(len(m)):
                a[shift + i] = (a[shift + i] - lead * m[i]) % p
        a.pop()
    return _poly_trim(a)


def _is_irreducible(coeffs, p) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    d = len(coeffs) - 1
    if d <= 0 or coeffs[-1] % p != 1:
        return False
    if d == 1:
        return True
    for dd in range(1, d // 2 + 1):
        for tail in iproduct(range(p), repeat=dd):
            divisor = tuple(tail) + (1,)
            if not _poly_mod(coeffs, divisor, p):
                return False
    return True


@lru_cache(maxsize=None)
def find_irreducible(p: int, r: int):
    """Lexicographically smallest monic irreducible of degree r over F_p.

    Deterministic by construction, so Galois fields need no external modulus
    tables.
    """
    if r == 1:
        return (0, 1)
    for tail in iproduct(range(p), repeat=r):
        cand = tuple(tail) + (1,)
        if _is_irreducible(cand, p):
            return cand
    raise RingError(f"no irreducible polynomial of degree {r} over F_{p}")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------


class FiniteRing:
    """Base class: a finite F_p-algebra on a fixed F_p-coordinate basis."""

    p: int
    dim: int
    key: str
    _mul_tab = None

    # subclasses set self.p, self.dim, self.key and implement mul/one

    def build_mul_table(self, cap: int = 64) -> None:
        """Precompute the multiplication table for small rings; pure speed."""
        if self._mul_tab is None and self.size <= cap:
            tab = {}
            for a in self.elements:
                for b in self.elements:
                    tab[(a, b)] = self._mul_impl(a, b)
            self._mul_tab = tab

    def mul(self, a, b):
        tab = self._mul_tab
        if tab is not None:
            return tab[(a, b)]
        return self._mul_impl(a, b)

    def _mul_impl(self, a, b):
        raise NotImplementedError

    @property
    def size(self) -> int:
        return self.p ** self.dim

    @property
    def zero(self):
        return (0,) * self.dim

    @property
    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def scale(self, c: int, a):
        p = self.p
        c %= p
        return tuple((c * x) % p for x in a)

    def pow(self, a, e: int):
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def frobenius(self, a):
        """The p-power map a -> a^p, a ring endomorphism in characteristic p."""
        return self.pow(a, self.p)

    def inv_frobenius(self, a):
        if not self.is_perfect:
            raise RingError(f"{self.key}: Frobenius is not invertible")
        # Frobenius has finite order on a finite perfect ring.
        prev, cur = a, self.frobenius(a)
        while cur != a:
            prev, cur = cur, self.frobenius(cur)
        return prev

    # -- enumeration ---------------------------------------------------

    @property
    def elements(self):
        try:
            return self._elements
        except AttributeError:
            self._elements = [tuple(t) for t in iproduct(range(self.p), repeat=self.dim)]
            return self._elements

    def index(self, a) -> int:
        idx = 0
        for c in a:
            idx = idx * self.p + c
        return idx

    def element(self, idx: int):
        coords = []
        for _ in range(self.dim):
            coords.append(idx % self.p)
            idx //= self.p
        return tuple(reversed(coords))

    def basis(self):
        return [tuple(1 if j == i else 0 for j in range(self.dim)) for i in range(self.dim)]

    # -- units ---------------------------------------------------------

    def _inverse_table(self):
        try:
            return self._inv_tab
        except AttributeError:
            tab = {}
            one = self.one
            for a in self.elements:
                for b in self.elements:
                    if self.mul(a, b) == one:
                        tab[a] = b
                        break
            self._inv_tab = tab
            return tab

    def is_unit(self, a) -> bool:
        return a in self._inverse_table()

    def inverse(self, a):
        try:
            return self._inverse_table()[a]
        except KeyError:
            raise RingError(f"{self.key}: not a unit: {a}") from None

    @property
    def is_perfect(self) -> bool:
        """True exactly when a -> a^p is a bijection (checked on elements)."""
        try:
            return self._is_perfect
        except AttributeError:
            image = {self.frobenius(a) for a in self.elements}
            self._is_perfect = len(image) == self.size
            return self._is_perfect

    def residue_fields(self):
        raise NotImplementedError

    def __repr__(self):
        return self.key

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        return isinstance(other, FiniteRing) and self.key == other.key


class GaloisField(FiniteRing):
    """GF(p^r) as F_p[g]/(modulus); coordinates are 1, g, ..., g^(r-1)."""

    def __init__(self, p: int, r: int, modulus=None):
        if not _is_prime(p):
            raise RingError(f"p = {p} is not prime")
        if r < 1:
            raise RingError("extension degree must be >= 1")
        if modulus is None:
            modulus = find_irreducible(p, r)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != r + 1 or modulus[-1] != 1:
            raise RingError(f"modulus must be monic of degree {r}")
        if not _is_irreducible(modulus, p):
            raise RingError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.r = r
        self.dim = r
        self.modulus = modulus
        self.key = f"GF({p}^{r})" if r > 1 else f"GF({p})"

    @property
    def one(self):
        return (1,) + (0,) * (self.dim - 1)

    def generator(self):
        if self.r == 1:
            return self.one
        return tuple(1 if i == 1 else 0 for i in range(self.dim))

    def _mul_impl(self, a, b):
        prod = _poly_mul(a, b, self.p)
        rem = _poly_mod(prod, self.modulus, self.p)
        return rem + (0,) * (self.dim - len(rem))

    def inverse(self, a):
        if a == self.zero:
            raise RingError(f"{self.key}: not a unit: {a}")
        return self.pow(a, self.size - 2)

    def is_unit(self, a) -> bool:
        return a != self.zero

    @property
    def is_perfect(self) -> bool:
        return True

    def residue_fields(self):
        return [(self, identity_hom(self))]


class TruncatedPolyRing(FiniteRing):
    """F_q[x]/(x^k): k coefficients over the base field, constant term first."""

    def __init__(self, base: GaloisField, k: int):
        if not isinstance(base, GaloisField):
            raise RingError("truncated polynomial rings need a field base")
        if k < 1:
            raise RingError("truncation exponent must be >= 1")
        self.base = base
        self.k = k
        self.p = base.p
        self.dim = base.dim * k
        self.key = f"{base.key}[x]/x^{k}"

    def _coeff(self, a, j):
        bd = self.base.dim
        return a[j * bd:(j + 1) * bd]

    def _from_coeffs(self, coeffs):
        return tuple(c for co in coeffs for c in co)

    @property
    def one(self):
        return self._from_coeffs([self.base.one] + [self.base.zero] * (self.k - 1))

    def x(self):
        if self.k == 1:
            return self.zero
        coeffs = [self.base.zero] * self.k
        coeffs[1] = self.base.one
        return self._from_coeffs(coeffs)

    def _mul_impl(self, a, b):
        base = self.base
        out = [base.zero] * self.k
        for i in range(self.k):
            ai = self._coeff(a, i)
            if ai == base.zero:
                continue
            for j in range(self.k - i):
                bj = self._coeff(b, j)
                if bj != base.zero:
                    out[i + j] = base.add(out[i + j], base.mul(ai, bj))
        return self._from_coeffs(out)

    @property
    def is_perfect(self) -> bool:
        # x has no p-th root once k >= 2: p-th powers only involve x^(p*j).
        return self.k == 1

    def residue_fields(self):
        bd = self.base.dim
        rows = [[0] * self.dim for _ in range(bd)]
        for i in range(bd):
            rows[i][i] = 1
        return [(self.base, RingHom(self, self.base, rows))]


class ProductRing(FiniteRing):
    """A finite product of fields and truncated polynomial rings."""

    def __init__(self, factors):
        factors = list(factors)
        if len(factors) < 2:
            raise RingError("a product needs at least two factors")
        p = factors[0].p
        if any(f.p != p for f in factors):
            raise RingError("product factors must share the same characteristic")
        if any(isinstance(f, ProductRing) for f in factors):
            raise RingError("products do not nest; list all factors at top level")
        self.factors = factors
        self.p = p
        self.dim = sum(f.dim for f in factors)
        self.key = "*".join(f.key for f in factors)

    def _slices(self):
        out = []
        start = 0
        for f in self.factors:
            out.append((f, start, start + f.dim))
            start += f.dim
        return out

    def project(self, a, i):
        _, s, e = self._slices()[i]
        return a[s:e]

    def embed(self, parts):
        return tuple(c for part in parts for c in part)

    @property
    def one(self):
        return self.embed([f.one for f in self.factors])

    def _mul_impl(self, a, b):
        return self.embed([f.mul(a[s:e], b[s:e]) for f, s, e in self._slices()])

    def is_unit(self, a) -> bool:
        return all(f.is_unit(a[s:e]) for f, s, e in self._slices())

    def inverse(self, a):
        return self.embed([f.inverse(a[s:e]) for f, s, e in self._slices()])

    @property
    def is_perfect(self) -> bool:
        return all(f.is_perfect for f in self.factors)

    def residue_fields(self):
        out = []
        for i, (f, s, e) in enumerate(self._slices()):
            proj_rows = [[0] * self.dim for _ in range(f.dim)]
            for j in range(f.dim):
                proj_rows[j][s + j] = 1
            proj = RingHom(self, f, proj_rows)
            for k_field, pi in f.residue_fields():
                out.append((k_field, pi.compose(proj)))
        return out


# ---------------------------------------------------------------------------
# ring homomorphisms


class RingHom:
    """An F_p-linear map between rings, checked to be a ring homomorphism."""

    def __init__(self, dom: FiniteRing, cod: FiniteRing, matrix, check: bool = True):
        self.dom = dom
        self.cod = cod
        self.matrix = [list(r) for r in matrix]
        if check and not self._is_hom():
            raise RingError(f"not a ring homomorphism {dom.key} -> {cod.key}")

    def __call__(self, a):
        return tuple(mat_vec(self.matrix, list(a), self.dom.p))

    def _is_hom(self) -> bool:
        if self(self.dom.one) != self.cod.one:
            return False
        basis = self.dom.basis()
        for a in basis:
            for b in basis:
                if self(self.dom.mul(a, b)) != self.cod.mul(self(a), self(b)):
                    return False
        return True

    def compose(self, inner: "RingHom") -> "RingHom":
        from .linalg import mat_mul
        assert inner.cod == self.dom
        return RingHom(inner.dom, self.cod,
                       mat_mul(self.matrix, inner.matrix, self.dom.p), check=False)

    def __repr__(self):
        return f"RingHom({self.dom.key} -> {self.cod.key})"


def identity_hom(ring: FiniteRing) -> RingHom:
    rows = [[1 if i == j else 0 for j in range(ring.dim)] for i in range(ring.dim)]
    return RingHom(ring, ring, rows, check=False)


def field_embedding(src: GaloisField, dst: GaloisField) -> RingHom:
    """The embedding GF(p^a) -> GF(p^b) sending the generator of src to the
    lexicographically first root of src's modulus in dst."""
    if src.p != dst.p or dst.r % src.r:
        raise RingError(f"no embedding {src.key} -> {dst.key}")
    if src.key == dst.key:
        return identity_hom(src)
    for cand in dst.elements:
        acc = dst.zero
        for c in reversed(src.modulus):
            acc = dst.add(dst.mul(acc, cand), dst.scale(c, dst.one))
        if acc == dst.zero:
            # column i of the matrix is cand^i
            cols = []
            power = dst.one
            for _ in range(src.dim):
                cols.append(power)
                power = dst.mul(power, cand)
            rows = [[cols[j][i] for j in range(src.dim)] for i in range(dst.dim)]
            return RingHom(src, dst, rows)
    raise RingError(f"modulus of {src.key} has no root in {dst.key}")


# ---------------------------------------------------------------------------
# ring specifications


@dataclass(frozen=True)
class RingSpec:
    """Parsed description of a supported ring."""

    kind: str                    # "field" | "trunc" | "product"
    p: int = 0
    r: int = 0
    modulus: tuple = ()
    k: int = 0
    base: "RingSpec | None" = None
    factors: tuple = field(default_factory=tuple)


def _parse_term(term: str) -> RingSpec:
    term = term.strip()
    if "[x]/x" in term:
        head, _, tail = term.partition("[x]/x")
        tail = tail.lstrip("^")
        try:
            k = int(tail)
        except ValueError:
            raise RingError(f"bad truncation exponent in {term!r}") from None
        base = _parse_term(head)
        if base.kind != "field":
            raise RingError("truncated polynomial base must be a field")
        return RingSpec(kind="trunc", p=base.p, k=k, base=base)
    if not (term.startswith("GF(") and term.endswith(")")):
        raise RingError(f"cannot parse ring spec {term!r}")
    inner = term[3:-1]
    if "^" in inner:
        ps, _, rs = inner.partition("^")
        try:
            p, r = int(ps), int(rs)
        except ValueError:
            raise RingError(f"cannot parse ring spec {term!r}") from None
    else:
        try:
            q = int(inner)
        except ValueError:
            raise RingError(f"cannot parse ring spec {term!r}") from None
        p, r = q, 1
        if not _is_prime(q):
            for cand in range(2, q):
                if _is_prime(cand):
                    rr, qq = 0, q
                    while qq % cand == 0:
                        qq //= cand
                        rr += 1
                    if qq == 1:
                        p, r = cand, rr
                        break
            else:
                raise RingError(f"{q} is not a prime power")
            if p ** r != q:
                raise RingError(f"{q} is not a prime power")
    if not _is_prime(p):
        raise RingError(f"p = {p} is not prime")
    return RingSpec(kind="field", p=p, r=r, modulus=find_irreducible(p, r))


def parse_ring_spec(text: str) -> RingSpec:
    """Parse "GF(p^r)", "GF(p^r)[x]/x^k" and "A*B" product specs."""
    parts = [s for s in text.split("*") if s.strip()]
    if not parts:
        raise RingError(f"empty ring spec {text!r}")
    terms = [_parse_term(s) for s in parts]
    if len(terms) == 1:
        return terms[0]
    return RingSpec(kind="product", p=terms[0].p, factors=tuple(terms))


_RING_CACHE: dict[str, FiniteRing] = {}


def ring_make(spec) -> FiniteRing:
    """Build the ring described by a RingSpec or a spec string."""
    if isinstance(spec, str):
        spec = parse_ring_spec(spec)
    if spec.kind == "field":
        ring: FiniteRing = GaloisField(spec.p, spec.r, spec.modulus or None)
    elif spec.kind == "trunc":
        ring = TruncatedPolyRing(ring_make(spec.base), spec.k)  # type: ignore[arg-type]
    elif spec.kind == "product":
        ring = ProductRing([ring_make(f) for f in spec.factors])
    else:
        raise RingError(f"unknown ring kind {spec.kind!r}")
    return _RING_CACHE.setdefault(ring.key, ring)


def GF(q: int, r: int | None = None) -> GaloisField:
    """Convenience constructor: GF(4) or GF(2, 2)."""
    if r is not None:
        return ring_make(RingSpec(kind="field", p=q, r=r, modulus=find_irreducible(q, r)))  # type: ignore[return-value]
    return ring_make(f"GF({q})")  # type: ignore[return-value]
