"""
Jury's tabular stability test, the exact baseline for the l1 engine.

Rows are written in ascending powers x^0..x^m. Each derived row comes from the
row r above it (length m + 1) as

    r'_i = r_0 * r_i - r_m * r_{m-i},   i = 0..m-1,

and is followed by its reversal, except for the final three-entry row. No
division happens, so exact tables stay exact.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import pandas as pd

from .engine import NecessaryChecks, necessary_margins
from .poly import MonicPolynomial
from .scalar import format_scalar

logger = logging.getLogger(__name__)


class JuryVerdict(str, Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    SINGULAR = "Singular"


@dataclass(frozen=True)
class JuryTable:
    polynomial: MonicPolynomial
    rows: tuple
    verdict: JuryVerdict
    necessary_checks: NecessaryChecks
    on_boundary: bool = False
    # 1-based row whose condition decided a non-stable verdict
    deciding_row: Optional[int] = None

    @property
    def derived_rows(self) -> tuple:
        """Rows 3, 5, ... (the ones carrying a condition), plus the final row."""
        return tuple(self.rows[i] for i in range(2, len(self.rows), 2))


def _next_row(row: tuple) -> tuple:
    m = len(row) - 1
    first, last = row[0], row[m]
    return tuple(first * row[i] - last * row[m - i] for i in range(m))


def _build_rows(p: MonicPolynomial) -> list:
    row = p.full_coeffs()
    rows = [row, tuple(reversed(row))]
    while len(row) > 3:
        row = _next_row(row)
        rows.append(row)
        if len(row) > 3:
            rows.append(tuple(reversed(row)))
    return rows


def jury_table(p: MonicPolynomial) -> JuryTable:
    """
    Full Jury table with its verdict.

    The three necessary conditions are checked first: a strict failure means
    Unstable, an equality means Unstable on the boundary (a root of modulus
    one). Then each derived row must satisfy |r_0| > |r_m|; a strict failure
    is Unstable, an equality is Singular (the next row would start with zero).
    """
    rows = _build_rows(p)
    margins = necessary_margins(p)
    checks = NecessaryChecks(*(m > 0 for m in margins))

    verdict = JuryVerdict.STABLE
    on_boundary = False
    deciding_row = None
    if any(m < 0 for m in margins):
        verdict, deciding_row = JuryVerdict.UNSTABLE, 1
    elif any(m == 0 for m in margins):
        verdict, deciding_row, on_boundary = JuryVerdict.UNSTABLE, 1, True
    else:
        for index in range(2, len(rows), 2):
            row = rows[index]
            head, tail = abs(row[0]), abs(row[-1])
            if head > tail:
                continue
            deciding_row = index + 1
            verdict = JuryVerdict.UNSTABLE if head < tail else JuryVerdict.SINGULAR
            break

    logger.debug(f"Jury {p}: {verdict.value} ({len(rows)} rows)")
    return JuryTable(
        polynomial=p,
        rows=tuple(rows),
        verdict=verdict,
        necessary_checks=checks,
        on_boundary=on_boundary,
        deciding_row=deciding_row,
    )


def jury_verdict(p: MonicPolynomial) -> JuryVerdict:
    return jury_table(p).verdict


def table_frame(table: JuryTable) -> pd.DataFrame:
    """One row per table row; columns Step, x^0..x^n; missing cells blank."""
    n = table.polynomial.degree
    columns = [f"x^{k}" for k in range(n + 1)]
    records = []
    for step, row in enumerate(table.rows, start=1):
        cells = [format_scalar(v) for v in row] + [""] * (n + 1 - len(row))
        records.append([step] + cells)
    return pd.DataFrame(records, columns=["Step"] + columns)


def table_csv(table: JuryTable) -> str:
    return table_frame(table).to_csv(index=False, lineterminator="\n")


def table_text(table: JuryTable) -> str:
    """Aligned text table, a rule after each row pair."""
    frame = table_frame(table)
    header_cells = list(frame.columns)
    body = [[str(c) for c in record] for record in frame.itertuples(index=False)]
    widths = [max(len(header_cells[i]), *(len(r[i]) for r in body)) for i in range(len(header_cells))]

    def line(cells):
        return "  ".join(cell.rjust(width) for cell, width in zip(cells, widths)).rstrip()

    rule = "-" * len(line(header_cells))
    out = [line(header_cells), "=" * len(rule)]
    for index, cells in enumerate(body):
        out.append(line(cells))
        if index % 2 == 1 and index != len(body) - 1:
            out.append(rule)
    out.append("=" * len(rule))
    out.append(f"verdict: {table.verdict.value}")
    return "\n".join(out) + "\n"
