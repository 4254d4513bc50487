"""Command-line surface.

Subcommands:

* ``witt``      evaluate Witt-vector expressions over a ring,
* ``classify``  enumerate isomorphism classes of displays over F_q and
                export the class table,
* ``analyze``   report the invariants of one display file,
* ``selftest``  run the acceptance grid.

Exit codes: 0 success, 1 failed checks, 2 usage or parse errors, 3 resource
guard exceeded.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from .rings import ring_make, RingError
from .witt import witt_ring, WittError
from .wittpoly import WittGuardError
from .displays import GuardError, DisplayError, hom_space, is_isomorphism
from . import formats

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_GUARD = 3


class CliError(Exception):
    def __init__(self, message, code=EXIT_USAGE):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# witt expressions


_TOKEN = re.compile(r"\s*(w\[[^\]]*\]|f1|f|v|teich|\d+|[+*()])")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise CliError(f"cannot tokenize expression at: {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _ExprParser:
    """Grammar: expr := term ('+' term)*; term := atom ('*' atom)*;
    atom := w[...] | f(expr) | v(expr) | f1(expr) | teich(INT) | (expr).

    Values are (level, vector); binary operators require equal levels."""

    def __init__(self, tokens, ring, default_level):
        self.tokens = tokens
        self.pos = 0
        self.ring = ring
        self.default_level = default_level

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise CliError(f"expected {expected!r}, got {tok!r}")
        self.pos += 1
        return tok

    def parse(self):
        value = self.expr()
        if self.peek() is not None:
            raise CliError(f"trailing input at {self.peek()!r}")
        return value

    def expr(self):
        level, vec = self.term()
        while self.peek() == "+":
            self.take("+")
            l2, v2 = self.term()
            if l2 != level:
                raise CliError(f"level mismatch in +: {level} vs {l2}")
            vec = witt_ring(self.ring, level).add(vec, v2)
        return level, vec

    def term(self):
        level, vec = self.atom()
        while self.peek() == "*":
            self.take("*")
            l2, v2 = self.atom()
            if l2 != level:
                raise CliError(f"level mismatch in *: {level} vs {l2}")
            vec = witt_ring(self.ring, level).mul(vec, v2)
        return level, vec

    def atom(self):
        tok = self.peek()
        if tok is None:
            raise CliError("unexpected end of expression")
        if tok.startswith("w["):
            self.take()
            vec = formats.parse_witt_literal(tok, self.ring)
            return len(vec), vec
        if tok == "(":
            self.take("(")
            value = self.expr()
            self.take(")")
            return value
        if tok in ("f", "v", "f1"):
            self.take()
            self.take("(")
            level, vec = self.expr()
            self.take(")")
            W = witt_ring(self.ring, level)
            if tok == "f":
                return level, W.frobenius(vec)
            if tok == "v":
                return level + 1, W.verschiebung(vec)
            if level < 2:
                raise CliError("f1 needs an ideal element at level >= 2")
            Wlow = witt_ring(self.ring, level - 1)
            try:
                return level - 1, Wlow.f1(vec)
            except WittError as exc:
                raise CliError(str(exc)) from None
        if tok == "teich":
            self.take()
            self.take("(")
            arg = self.take()
            self.take(")")
            try:
                idx = int(arg)
            except ValueError:
                raise CliError(f"teich expects an element index, got {arg!r}") from None
            if not (0 <= idx < self.ring.size):
                raise CliError(f"element index {idx} out of range for {self.ring.key}")
            W = witt_ring(self.ring, self.default_level)
            return self.default_level, W.teichmuller(self.ring.element(idx))
        raise CliError(f"unexpected token {tok!r}")


def cmd_witt(args) -> int:
    ring = ring_make(args.ring)
    tokens = _tokenize(args.expression)
    level, vec = _ExprParser(tokens, ring, args.n).parse()
    W = witt_ring(ring, level)
    print(formats.to_witt_literal(W, vec))
    return EXIT_OK


# ---------------------------------------------------------------------------
# classify


def cmd_classify(args) -> int:
    from .moduli import (ModuliInstance, mass_check, count_nilpotent_locus,
                         dual_class_rep)
    if args.ring:
        ring = ring_make(args.ring)
        from .rings import GaloisField
        if not isinstance(ring, GaloisField):
            raise CliError("classify needs a finite field ring")
        p, r = ring.p, ring.r
    else:
        if args.p is None:
            raise CliError("classify needs --p or --ring")
        p, r = args.p, 1
    n, h = args.n, args.h
    ds = [args.d] if args.d is not None else list(range(h + 1))
    instances = {}

    def instance(dq):
        if dq not in instances:
            instances[dq] = ModuliInstance(p, n, h, dq, r=r, budget=args.budget)
        return instances[dq]

    tables = []
    all_ok = True
    for d in ds:
        inst = instance(d)
        table = inst.enumerate_orbits(verify_sample=4)
        dual_inst = instance(h - d)
        for row in table.rows:
            row.dual_rep = dual_class_rep(inst, row.rep, dual_inst)
        lhs, rhs, equal = mass_check(table)
        nil_classes, nil_points = count_nilpotent_locus(table)
        all_ok = all_ok and equal
        print(f"d={d}: classes={len(table.rows)} mass={lhs}"
              f" {'==' if equal else '!='} |X|/|G|={rhs}"
              f" nilpotent_classes={nil_classes} nilpotent_points={nil_points}")
        tables.append(table)
    ring_key = instance(ds[0]).ring.key
    if args.format == "json":
        payload = formats.json_dumps(formats.class_tables_document(tables, ring_key))
    elif args.format == "csv":
        payload = formats.class_tables_csv(tables, ring_key)
    else:
        payload = formats.class_tables_text(tables)
    if args.out:
        formats.atomic_write(args.out, payload)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(payload)
    return EXIT_OK if all_ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# analyze


def cmd_analyze(args) -> int:
    from .dieudonne import (from_display, to_display, dual, newton_polygon,
                            NewtonPrecisionError, DieudonneError)
    from .displays import is_nilpotent
    from .rings import GaloisField
    try:
        with open(args.file) as handle:
            doc = json.load(handle)
        D = formats.display_from_json(doc)
    except (OSError, json.JSONDecodeError, formats.FormatError, RingError,
            DisplayError) as exc:
        raise CliError(f"cannot load display: {exc}") from None
    report: dict = {
        "ring": D.ring.key,
        "n": D.n,
        "h": D.h,
        "d": D.d,
        "nilpotent": is_nilpotent(D),
    }
    notices = []
    if isinstance(D.ring, GaloisField):
        mod = from_display(D)
        try:
            np_ = newton_polygon(mod)
            report["slopes"] = [str(s) for s in np_.slopes]
        except NewtonPrecisionError as exc:
            notices.append(f"newton polygon omitted: {exc}")
        dual_display = to_display(dual(mod))
        report["dual_matrix"] = formats.matrix_to_json(D.W, dual_display.matrix)
    else:
        notices.append(
            "dieudonne invariants omitted: base ring is not a perfect field")
    space = hom_space(D, D)
    if space.size <= args.budget:
        report["aut_order"] = sum(1 for hom_ in space.enumerate_homs()
                                  if is_isomorphism(hom_))
    else:
        notices.append(f"aut order omitted: endomorphism space of size "
                       f"{space.size} exceeds the budget")
    if args.format == "json":
        report["notices"] = notices
        print(formats.json_dumps(report), end="")
    else:
        for key in ("ring", "n", "h", "d", "nilpotent"):
            print(f"{key}: {report[key]}")
        if "slopes" in report:
            print("slopes: " + ", ".join(report["slopes"]))
        if "dual_matrix" in report:
            print("dual: " + json.dumps(report["dual_matrix"]))
        if "aut_order" in report:
            print(f"aut_order: {report['aut_order']}")
        for notice in notices:
            print(f"note: {notice}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# selftest


def cmd_selftest(args) -> int:
    from .selfcheck import run_suite
    failed = 0
    for name, passed, detail, seconds in run_suite(args.profile):
        status = "PASS" if passed else "FAIL"
        print(f"{status} {name:28s} [{seconds:6.2f}s] {detail}")
        if not passed:
            failed += 1
    print(f"{'OK' if not failed else 'FAILED'}: "
          f"{failed} failing check(s)" if failed else "OK: all checks passed")
    return EXIT_OK if not failed else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wittdisp",
        description="Exact arithmetic for truncated Witt vectors, displays "
                    "and Dieudonne modules over finite rings.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_witt = sub.add_parser("witt", help="evaluate a Witt-vector expression")
    p_witt.add_argument("expression",
                        help="e.g. 'w[1,0] + w[1,0]' or 'f1(v(w[1,1]))'")
    p_witt.add_argument("--ring", default="GF(2)",
                        help="ring spec: GF(p^r), GF(p^r)[x]/x^k, or products A*B")
    p_witt.add_argument("--n", type=int, default=2,
                        help="level used by teich(...) literals")

    p_cls = sub.add_parser("classify", help="classify displays over F_q")
    p_cls.add_argument("--p", type=int, help="prime (field F_p)")
    p_cls.add_argument("--ring", help="field spec GF(p^r) (overrides --p)")
    p_cls.add_argument("--n", type=int, default=1, help="level")
    p_cls.add_argument("--h", type=int, required=True, help="rank")
    p_cls.add_argument("--d", type=int, default=None,
                       help="type (default: all 0..h)")
    p_cls.add_argument("--format", choices=("json", "csv", "text"),
                       default="json")
    p_cls.add_argument("--out", default=None, help="output file (atomic write)")
    p_cls.add_argument("--seed", type=int, default=77,
                       help="seed for the action-formula verification sample")
    p_cls.add_argument("--budget", type=int, default=10 ** 7,
                       help="enumeration budget (group-action evaluations)")
    p_cls.add_argument("--workers", type=int, default=1,
                       help="reserved; enumeration currently runs in-process")

    p_an = sub.add_parser("analyze", help="report invariants of a display file")
    p_an.add_argument("file", help="display JSON file")
    p_an.add_argument("--format", choices=("text", "json"), default="text")
    p_an.add_argument("--budget", type=int, default=1 << 16,
                      help="cap on the endomorphism space for aut counting")

    p_st = sub.add_parser("selftest", help="run the acceptance grid")
    p_st.add_argument("--profile", choices=("quick", "full"), default="quick")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "witt": cmd_witt,
        "classify": cmd_classify,
        "analyze": cmd_analyze,
        "selftest": cmd_selftest,
    }
    try:
        return handlers[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (RingError, WittError, DisplayError, formats.FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GuardError, WittGuardError) as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
