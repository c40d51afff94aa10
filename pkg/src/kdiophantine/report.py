"""Table and plot-data rows for N3(p), the number of 3-Diophantine triples."""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass

from .curves import represent
from .field import make_field
from .tuples import closed_form_N3, count_tuples

# Published reference values: p -> (N3, a, (a+1)/3); a is None when p = 2 mod 3.
REFERENCE_TABLE = {
    5: (2, None, None),
    7: (11, 2, 1),
    11: (60, None, None),
    13: (110, -1, 0),
    17: (280, None, None),
    19: (407, -4, -1),
    23: (770, None, None),
    29: (1638, None, None),
    31: (2031, 2, 1),
    37: (3572, 5, 2),
    41: (4940, None, None),
    43: (5739, -4, -1),
    101: (80850, None, None),
    229: (97472, 11, 4),
}

TABLE1_HEADER = ["p", "class_mod3", "n3_brute", "n3_formula", "a", "error_term", "elapsed_ms", "note"]


@dataclass
class TableRow:
    p: int
    class_mod3: int
    n3_brute: int
    n3_formula: int
    a: int | None
    error_term: int | None
    elapsed_ms: float
    note: str = ""

    def as_csv(self) -> list[str]:
        return [
            str(self.p),
            str(self.class_mod3),
            str(self.n3_brute),
            str(self.n3_formula),
            "" if self.a is None else str(self.a),
            "" if self.error_term is None else str(self.error_term),
            f"{self.elapsed_ms:.3f}",
            self.note,
        ]

    def as_dict(self) -> dict:
        return asdict(self)


def discrepancy_note(p: int, n3: int) -> str:
    ref = REFERENCE_TABLE.get(p)
    if ref is None or ref[0] == n3:
        return ""
    return f"reference table prints {ref[0]}; enumeration and closed form give {n3}"


def table_row(p: int, workers: int = 1, timing: bool = True) -> TableRow:
    F = make_field(p)
    t0 = time.perf_counter()
    report = count_tuples(3, 3, F, workers=workers, verify=False)
    elapsed = (time.perf_counter() - t0) * 1000.0 if timing else 0.0
    formula = closed_form_N3(F)
    a = err = None
    if p % 3 == 1:
        a = represent(F).a
        err = (a + 1) // 3
    note = discrepancy_note(p, report.brute_count)
    if report.brute_count != formula:
        note = (note + "; " if note else "") + "enumeration disagrees with closed form"
    return TableRow(p, p % 3, report.brute_count, formula, a, err, elapsed, note)


def plot_rows(primes, kind: str = "linear", workers: int = 1) -> list[tuple[str, str]]:
    """(p, N3) pairs, or (ln p, ln N3) to 6 significant digits for ``kind='loglog'``."""
    rows = []
    for p in primes:
        n3 = count_tuples(3, 3, make_field(p), workers=workers, verify=False).brute_count
        if kind == "linear":
            rows.append((str(p), str(n3)))
        elif kind == "loglog":
            rows.append((f"{math.log(p):.6g}", f"{math.log(n3):.6g}"))
        else:
            raise ValueError(f"unknown plot kind {kind!r}")
    return rows


PLOT_HEADERS = {"linear": ("p", "n3"), "loglog": ("ln_p", "ln_n3")}
