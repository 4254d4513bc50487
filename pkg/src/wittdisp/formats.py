"""Wire formats: Witt-vector literals, display files, class tables.

Witt vectors serialize as ``w[i0,i1,...]`` where ``i_k`` is the enumeration
index of the k-th coordinate in its ring (for a prime field the index is the
value itself).  Displays and class tables are JSON documents carrying a
``schema`` tag; class tables can also be written as CSV.  Files are written
atomically (temp file and rename) and with sorted keys, so identical
configurations produce byte-identical outputs.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from fractions import Fraction

from .rings import FiniteRing, ring_make
from .witt import WittRing, witt_ring

DISPLAY_SCHEMA = "wittdisp/display-v1"
CLASSTABLE_SCHEMA = "wittdisp/classtable-v1"


class FormatError(ValueError):
    pass


def to_witt_literal(W: WittRing, x) -> str:
    return "w[" + ",".join(str(W.ring.index(c)) for c in x) + "]"


def parse_witt_literal(text: str, ring: FiniteRing):
    text = text.strip()
    if not (text.startswith("w[") and text.endswith("]")):
        raise FormatError(f"bad Witt literal {text!r}")
    body = text[2:-1].strip()
    if not body:
        raise FormatError("empty Witt literal")
    coords = []
    for part in body.split(","):
        try:
            idx = int(part)
        except ValueError:
            raise FormatError(f"bad coordinate {part!r} in {text!r}") from None
        if not (0 <= idx < ring.size):
            raise FormatError(f"coordinate index {idx} out of range for {ring.key}")
        coords.append(ring.element(idx))
    return tuple(coords)


def matrix_to_json(W: WittRing, matrix):
    return [[to_witt_literal(W, entry) for entry in row] for row in matrix]


def matrix_from_json(data, W: WittRing, h: int):
    if len(data) != h or any(len(row) != h for row in data):
        raise FormatError(f"matrix must be {h}x{h}")
    out = []
    for row in data:
        parsed = []
        for lit in row:
            x = parse_witt_literal(lit, W.ring)
            if len(x) != W.n:
                raise FormatError(f"entry {lit!r} has length {len(x)}, expected {W.n}")
            parsed.append(x)
        out.append(tuple(parsed))
    return tuple(out)


def display_to_json(D) -> dict:
    return {
        "schema": DISPLAY_SCHEMA,
        "ring": D.ring.key,
        "n": D.n,
        "h": D.h,
        "d": D.d,
        "matrix": matrix_to_json(D.W, D.matrix),
    }


def display_from_json(data: dict):
    from .displays import display_from_matrix
    if data.get("schema") != DISPLAY_SCHEMA:
        raise FormatError(f"expected schema {DISPLAY_SCHEMA}")
    ring = ring_make(data["ring"])
    n, h, d = int(data["n"]), int(data["h"]), int(data["d"])
    W = witt_ring(ring, n)
    matrix = matrix_from_json(data["matrix"], W, h)
    return display_from_matrix(ring, n, h, d, matrix)


def _fraction_str(fr: Fraction) -> str:
    return f"{fr.numerator}/{fr.denominator}" if fr.denominator != 1 else str(fr.numerator)


def _slopes_json(slopes):
    if slopes is None:
        return None
    return [_fraction_str(Fraction(s)) for s in slopes]


def class_table_to_json(table, ring_key: str) -> dict:
    W = witt_ring(ring_make(ring_key), table.n)
    rows = []
    for row in table.rows:
        rows.append({
            "rep_matrix": matrix_to_json(W, row.rep),
            "orbit_size": row.orbit_size,
            "aut_order": row.aut_order,
            "d": table.d,
            "nilpotent": row.nilpotent,
            "slopes": _slopes_json(row.slopes),
            "dual_rep": matrix_to_json(W, row.dual_rep) if row.dual_rep else None,
        })
    return {
        "schema": CLASSTABLE_SCHEMA,
        "p": table.p,
        "r": table.r,
        "q": table.q,
        "ring": ring_key,
        "n": table.n,
        "h": table.h,
        "d": table.d,
        "x_count": table.x_count,
        "g_count": table.g_count,
        "mass": _fraction_str(table.mass_rhs),
        "classes": rows,
    }


def class_tables_document(tables, ring_key: str) -> dict:
    return {
        "schema": CLASSTABLE_SCHEMA,
        "tables": [class_table_to_json(t, ring_key) for t in tables],
    }


def json_dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


CSV_COLUMNS = ["rep_matrix", "orbit_size", "aut_order", "d", "nilpotent",
               "slopes", "dual_rep"]


def _matrix_csv(W: WittRing, matrix) -> str:
    return "[" + ",".join(
        "[" + ",".join(to_witt_literal(W, e) for e in row) + "]"
        for row in matrix) + "]"


def class_tables_csv(tables, ring_key: str) -> str:
    W_cache = {}
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for table in tables:
        W = W_cache.setdefault(table.n, witt_ring(ring_make(ring_key), table.n))
        for row in table.rows:
            slopes = ("" if row.slopes is None
                      else ";".join(_fraction_str(Fraction(s)) for s in row.slopes))
            writer.writerow([
                _matrix_csv(W, row.rep),
                row.orbit_size,
                row.aut_order,
                table.d,
                int(row.nilpotent),
                slopes,
                _matrix_csv(W, row.dual_rep) if row.dual_rep else "",
            ])
    return buf.getvalue()


def class_tables_text(tables) -> str:
    lines = []
    for table in tables:
        lines.append(f"q={table.q} n={table.n} h={table.h} d={table.d}: "
                     f"|X|={table.x_count} |G|={table.g_count} "
                     f"mass={_fraction_str(table.mass_rhs)}")
        for i, row in enumerate(table.rows):
            slopes = ("-" if row.slopes is None else
                      ",".join(_fraction_str(Fraction(s)) for s in row.slopes))
            lines.append(f"  class {i}: orbit={row.orbit_size} "
                         f"aut={row.aut_order} nilpotent={row.nilpotent} "
                         f"slopes=[{slopes}]")
    return "\n".join(lines) + "\n"


def atomic_write(path: str, text: str) -> None:
    """Write via a temp file in the same directory and rename into place."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".wittdisp-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def load_class_tables(path: str):
    """Reload a JSON class-table file; returns the parsed document."""
    with open(path) as handle:
        doc = json.load(handle)
    if doc.get("schema") != CLASSTABLE_SCHEMA:
        raise FormatError(f"expected schema {CLASSTABLE_SCHEMA}")
    return doc


def verify_class_table_doc(doc) -> None:
    """Re-check a loaded table: representatives must parse to invertible
    matrices and the recorded invariants must recompute equal."""
    from .displays import display_from_matrix, is_nilpotent
    from .dieudonne import from_display, newton_polygon, NewtonPrecisionError
    tables = doc["tables"] if "tables" in doc else [doc]
    for tab in tables:
        ring = ring_make(tab["ring"])
        W = witt_ring(ring, tab["n"])
        mass = Fraction(0)
        for row in tab["classes"]:
            matrix = matrix_from_json(row["rep_matrix"], W, tab["h"])
            D = display_from_matrix(ring, tab["n"], tab["h"], row["d"], matrix)
            if is_nilpotent(D) != row["nilpotent"]:
                raise FormatError("stored nilpotence flag does not recompute")
            try:
                slopes = _slopes_json(newton_polygon(from_display(D)).slopes)
            except NewtonPrecisionError:
                slopes = None
            if slopes != row["slopes"]:
                raise FormatError("stored slopes do not recompute")
            mass += Fraction(1, row["aut_order"])
        num, _, den = tab["mass"].partition("/")
        if mass != Fraction(int(num), int(den or 1)):
            raise FormatError("stored mass does not recompute")
