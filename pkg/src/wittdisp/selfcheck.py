"""The acceptance grid: every check the library promises, runnable as one
pass/fail matrix (used by the ``selftest`` CLI command and by the test
suite).

Each check returns (name, passed, detail).  All randomized checks take an
explicit seed with a fixed default, so two runs produce identical results.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

from .rings import ring_make
from .witt import witt_ring, mat_id, mat_mul
from .wittpoly import witt_tables, ghost_identity_defects, DEFAULT_LEVEL_CAPS
from .galois_ring import galois_ring_oracle, OracleError
from . import displays as dsp
from . import dieudonne as dd


QUICK_RING_KEYS = ["GF(2)", "GF(4)", "GF(2)[x]/x^3"]

SMALL_RING_KEYS = [
    "GF(2)", "GF(3)", "GF(4)", "GF(5)", "GF(8)", "GF(9)", "GF(25)", "GF(27)",
    "GF(64)", "GF(2)[x]/x^2", "GF(2)[x]/x^3", "GF(4)[x]/x^2", "GF(8)[x]/x^2",
    "GF(3)[x]/x^2", "GF(2)*GF(4)", "GF(3)*GF(9)", "GF(2)*GF(2)[x]/x^2",
]


def _suite_instances(seed: int = 20240601, count: int = 200):
    """The fixed randomized display suite over {F_2, F_4, F_2[x]/x^3}."""
    rng = random.Random(seed)
    rings = [ring_make(k) for k in QUICK_RING_KEYS]
    out = []
    for i in range(count):
        ring = rings[i % len(rings)]
        n = rng.choice([1, 2])
        h = rng.choice([1, 2, 3])
        d = rng.randrange(h + 1)
        out.append(dsp.random_display(rng, ring, n, h, d))
    return out


# -- criterion 1: Witt correctness -------------------------------------------


def check_ghost_identities(full: bool = True):
    primes = (2, 3, 5) if full else (2,)
    for p in primes:
        for n in range(1, DEFAULT_LEVEL_CAPS[p] + 1):
            table = witt_tables(p, n)
            for ds_, dp_ in ghost_identity_defects(table):
                if ds_ or dp_:
                    return False, f"ghost defect at p={p}, n={n}"
    return True, f"zero polynomials for p in {primes} within guards"


def check_galois_ring_oracle(full: bool = True):
    rs = (1, 2) if full else (1,)
    ns = (1, 2, 3)
    for p in (2, 3):
        for n in ns:
            for r in rs:
                try:
                    galois_ring_oracle(p, n, r)
                except OracleError as exc:
                    return False, f"oracle failed at ({p},{n},{r}): {exc}"
    return True, f"W_n(F_q) matches GR(p^n, r) for p in (2,3), n <= 3, r in {rs}"


def check_frame_identities(full: bool = True):
    keys = SMALL_RING_KEYS if full else QUICK_RING_KEYS
    for key in keys:
        ring = ring_make(key)
        if ring.size > 64:
            continue
        n = 2
        W = witt_ring(ring, n)
        Wlow = witt_ring(ring, n - 1)
        for x in W.elements:
            # f(v(x)) = p.x, with v into level n+1 and f the frame map down
            vx = W.verschiebung(x)
            if W.frame_frobenius(vx) != W.p_mul(x):
                return False, f"f(v(x)) != p.x over {key}"
            if W.f1(vx) != x:
                return False, f"f1(v(x)) != x over {key}"
        for a in W.ideal_elements():
            # p.f1(a) = f(a) on the ideal
            if W.p_mul(W.f1(a)) != W.frame_frobenius(a):
                return False, f"p.f1 != f on ideal over {key}"
    return True, f"frame identities exhaustive on {len(keys)} rings"


# -- criteria 2 and 3: pre-display axioms and the V-operator ------------------


def check_predisplay_axioms(seed: int = 20240601, count: int = 200):
    for D in _suite_instances(seed, count):
        W = D.W
        for q in dsp.q_fp_basis(D):
            if dsp.F_apply(D, dsp.iota(D, q)) != dsp.p_vec(D, dsp.F1_apply(D, q)):
                return False, f"F iota != p F_1 on {D}"
        ideal_gens = [(D.ring.zero,) + b for b in W.fp_basis()]
        from .displays import _p_fp_basis
        for a in ideal_gens:
            f1a = W.f1(a)
            for x in _p_fp_basis(D):
                lhs = dsp.F1_apply(D, dsp.epsilon(D, a, x))
                rhs = tuple(W.mul(f1a, c) for c in dsp.F_apply(D, x))
                if lhs != rhs:
                    return False, f"F_1 eps != f_1 (x) F on {D}"
    return True, f"both axioms hold on {count} seeded instances"


def check_vsharp_contract(seed: int = 20240601, count: int = 200):
    for D in _suite_instances(seed, count):
        try:
            dsp.vsharp(D)        # derives, checks V(F_1 x) = 1 (x) x, FV = VF = p
        except dsp.DisplayError as exc:
            return False, f"{D}: {exc}"
        if not dsp.vsharp_full_check(D):
            return False, f"defining equation fails on some element of Q for {D}"
    return True, f"V-operator contract holds on {count} seeded instances"


# -- criterion 4: Hom(etale, multiplicative) = 0 -----------------------------


def check_unit_hom_vanishes(full: bool = True):
    ns = (1, 2, 3)
    for key in QUICK_RING_KEYS:
        ring = ring_make(key)
        for n in ns if (full or key == "GF(2)") else (1, 2):
            space = dsp.hom_space(dsp.etale_unit(n, ring), dsp.mult_unit(n, ring))
            if space.size != 1 or space.generators:
                return False, f"Hom != 0 over {key} at level {n}"
    return True, "Hom(etale, mult) = 0 over F_2, F_4, F_2[x]/x^3 for n <= 3"


# -- criteria 5, 6, 8, 9: the moduli grid ------------------------------------


def _grid(full: bool = True):
    primes = (2, 3) if full else (2,)
    out = []
    for p in primes:
        for n in (1, 2):
            for h in (1, 2):
                for d in range(h + 1):
                    out.append((p, n, h, d))
    out.extend((2, 1, 3, d) for d in range(4))
    return out


def check_mass_formula(full: bool = True, tables_out: dict | None = None):
    from .moduli import ModuliInstance, mass_check
    for p, n, h, d in _grid(full):
        inst = ModuliInstance(p, n, h, d)
        table = inst.enumerate_orbits()
        lhs, rhs, equal = mass_check(table)
        if not equal:
            return False, f"mass {lhs} != {rhs} at (p,n,h,d)=({p},{n},{h},{d})"
        if (p, n, h, d) == (2, 1, 2, 1) and lhs != Fraction(3, 2):
            return False, f"(2,1,2,1) mass is {lhs}, expected 3/2"
        if tables_out is not None:
            tables_out[(p, n, h, d)] = table
    return True, "sum 1/|Aut| = |X|/|G| on the whole grid (exact rationals)"


def check_isom_oracle_agreement():
    from .moduli import ModuliInstance, cross_check_isom
    for p, n, h in ((2, 1, 2), (2, 2, 1)):
        for d in range(h + 1):
            cross_check_isom(ModuliInstance(p, n, h, d))
    return True, "orbit membership and the Hom solver agree on all pairs"


def check_nilpotence_slopes(tables: dict | None = None):
    from .moduli import ModuliInstance
    seen_supersingular = False
    for h in (1, 2):
        for d in range(h + 1):
            if tables and (2, 2, h, d) in tables:
                table = tables[(2, 2, h, d)]
            else:
                table = ModuliInstance(2, 2, h, d).enumerate_orbits()
            for row in table.rows:
                if row.slopes is None:
                    continue
                if row.nilpotent != (min(row.slopes) > 0):
                    return False, (f"nilpotence/slope mismatch at level 2, "
                                   f"h={h}, d={d}: {row.slopes}")
                if h == 2 and tuple(row.slopes) == (Fraction(1, 2), Fraction(1, 2)):
                    seen_supersingular = True
    if not seen_supersingular:
        return False, "no class with slopes (1/2, 1/2) found at level 2, h = 2"
    return True, "nilpotent iff all slopes positive; slopes (1/2,1/2) realized"


def check_duality(seed: int = 20240915):
    R2 = ring_make("GF(2)")
    for n in (1, 2):
        me = dd.from_display(dsp.etale_unit(n, R2))
        mm = dd.from_display(dsp.mult_unit(n, R2))
        if dd.dual(me) != mm or dd.dual(mm) != me:
            return False, f"duality does not swap the unit objects at level {n}"
    rng = random.Random(seed)
    for _ in range(20):
        ring = ring_make(rng.choice(["GF(2)", "GF(4)"]))
        n = rng.choice([1, 2])
        h = rng.choice([1, 2, 3])
        d = rng.randrange(h + 1)
        mod = dd.from_display(dsp.random_display(rng, ring, n, h, d))
        ddm = dd.dual(dd.dual(mod))
        if ddm != mod:
            return False, "dual . dual is not the identity on linearizations"
        if dd.module_type(dd.dual(mod)) != h - dd.module_type(mod):
            return False, "dual does not exchange d and h - d"
    return True, "dual swaps the unit objects, is involutive, sends d to h-d"


def check_dieudonne_round_trip(seed: int = 20240820, count: int = 50):
    rng = random.Random(seed)
    for i in range(count):
        ring = ring_make("GF(2)" if i % 2 else "GF(4)")
        n = rng.choice([1, 2])
        h = rng.choice([1, 2, 3])
        d = rng.randrange(h + 1)
        D = dd.reduce_display(dsp.random_display(rng, ring, n, h, d))
        mod = dd.from_display(D)
        if dd.to_display(mod) != D:
            return False, f"exact round trip failed on a reduced matrix ({ring.key}, n={n}, h={h}, d={d})"
        if i % 5 == 0:
            Du = dsp.random_display(rng, ring, n, min(h, 2), d if d <= min(h, 2) else 0)
            back = dd.to_display(dd.from_display(Du))
            if dsp.isom_displays(Du, back) is None:
                return False, "module-to-display output is not isomorphic to the source"
    return True, f"{count} exact round trips on canonical forms; iso in general"


def check_classify_determinism(tmpdir: str | None = None):
    import os
    import subprocess
    import sys
    import tempfile
    workdir = tmpdir or tempfile.mkdtemp(prefix="wittdisp-")
    outs = []
    for name in ("a.json", "b.json"):
        path = os.path.join(workdir, name)
        proc = subprocess.run(
            [sys.executable, "-m", "wittdisp.cli", "classify",
             "--p", "2", "--n", "1", "--h", "2", "--out", path],
            capture_output=True, text=True)
        if proc.returncode != 0:
            return False, f"classify exited with {proc.returncode}: {proc.stderr}"
        with open(path, "rb") as handle:
            outs.append(handle.read())
    if outs[0] != outs[1]:
        return False, "two classify runs differ byte-wise"
    return True, "classify output files are byte-identical across runs"


def run_suite(profile: str = "quick"):
    """Run the acceptance grid; yields (name, passed, detail, seconds)."""
    full = profile == "full"
    tables: dict = {}

    def mass_with_capture():
        return check_mass_formula(full=full, tables_out=tables)

    def nilp_with_tables():
        return check_nilpotence_slopes(tables=tables)

    checks = [
        ("witt-ghost-identities", lambda: check_ghost_identities(full=full)),
        ("witt-galois-ring-oracle", lambda: check_galois_ring_oracle(full=full)),
        ("witt-frame-identities", lambda: check_frame_identities(full=full)),
        ("predisplay-axioms", check_predisplay_axioms),
        ("vsharp-contract", check_vsharp_contract),
        ("unit-hom-vanishes", lambda: check_unit_hom_vanishes(full=full)),
        ("mass-formula", mass_with_capture),
        ("isom-oracle-agreement", check_isom_oracle_agreement),
        ("dieudonne-round-trip", check_dieudonne_round_trip),
        ("nilpotence-vs-slopes", nilp_with_tables),
        ("duality", check_duality),
        ("classify-determinism", check_classify_determinism),
    ]
    for name, fn in checks:
        start = time.time()
        try:
            passed, detail = fn()
        except Exception as exc:  # noqa: BLE001 - report, do not crash the matrix
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        yield name, passed, detail, time.time() - start
