"""One-sided two-state cellular automata started from ...000111...

Cell ``i`` at time ``t+1`` is ``f`` applied to cells ``i-n+1 .. i`` at time
``t``.  Rows are stored as Python ints, bit ``i`` holding cell ``i``; cells at
negative indices are always 0 and never stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidRule


@dataclass(frozen=True)
class CARule:
    """Rule of arity n.  ``table[v]`` is f at the neighbourhood whose bits read
    v in binary, leftmost cell (x_{i-n+1}) most significant.  So bit j of v is
    the cell j places to the left of the updated one.
    """

    n: int
    table: tuple[int, ...]

    def __post_init__(self):
        table = tuple(int(b) for b in self.table)
        object.__setattr__(self, "table", table)
        if self.n < 1:
            raise InvalidRule(f"arity must be >= 1, got {self.n}")
        if len(table) != 1 << self.n:
            raise InvalidRule(f"table needs {1 << self.n} entries, got {len(table)}")
        if any(b not in (0, 1) for b in table):
            raise InvalidRule("table entries must be 0 or 1")
        if table[0] != 0:
            raise InvalidRule("f(0,...,0) must be 0")

    def __call__(self, *cells: int) -> int:
        """f(x_{i-n+1}, ..., x_i)."""
        v = 0
        for c in cells:
            v = (v << 1) | (c & 1)
        return self.table[v]


XOR = CARule(2, (0, 1, 1, 0))
SHIFT = CARule(2, (0, 0, 1, 1))


def all_rules(n: int):
    """Every valid rule of arity n, in increasing table order."""
    size = 1 << n
    for code in range(1 << (size - 1)):
        yield CARule(n, (0,) + tuple((code >> (size - 2 - i)) & 1 for i in range(size - 1)))


@dataclass(frozen=True)
class CARows:
    rule: CARule
    width: int
    rows: tuple[int, ...]

    @property
    def T(self) -> int:
        return len(self.rows)

    def cell(self, t: int, i: int) -> int:
        if i < 0:
            return 0
        return (self.rows[t] >> i) & 1

    def row_string(self, t: int) -> str:
        r = self.rows[t]
        return "".join("1" if (r >> i) & 1 else "0" for i in range(self.width))

    def to_array(self) -> np.ndarray:
        """(T, W) boolean array, time first."""
        from .games import rows_to_array

        return rows_to_array(self.rows, self.width)

    def ones(self):
        """(i, t) coordinates of every 1-cell, in the order of transcribed cell lists."""
        return {(i, t) for t in range(self.T) for i in range(self.width) if (self.rows[t] >> i) & 1}


def step_row(rule: CARule, row: int, width: int) -> int:
    full = (1 << width) - 1
    # (row << j) puts x_{i-j} at bit i, with zeros shifted in from the left edge
    shifted = [(row << j) & full for j in range(rule.n)]
    out = 0
    for v, bit in enumerate(rule.table):
        if not bit:
            continue
        term = full
        for j in range(rule.n):
            term &= shifted[j] if (v >> j) & 1 else ~shifted[j]
        out |= term
    return out & full


def ca_rows(rule: CARule, T: int, W: int) -> CARows:
    if T < 1 or W < 1:
        raise ValueError(f"need T >= 1 and W >= 1, got T={T}, W={W}")
    row = (1 << W) - 1
    rows = [row]
    for _ in range(T - 1):
        row = step_row(rule, row, W)
        rows.append(row)
    return CARows(rule, W, tuple(rows))


def occurrences(rows: CARows, pattern: str):
    """All (t, i) where ``pattern`` starts at cell i of row t and ends inside the window.

    Starts may be negative (the implicit zeros left of cell 0 take part), but
    an occurrence must overlap the window.
    """
    _check_pattern(pattern, rows.width)
    lead = len(pattern) - 1
    for t in range(rows.T):
        s = "0" * lead + rows.row_string(t)
        start = s.find(pattern)
        while start != -1:
            yield t, start - lead
            start = s.find(pattern, start + 1)


def find_pattern(rule: CARule, pattern: str, T: int, W: int) -> Optional[tuple[int, int]]:
    """Earliest row, then leftmost start, at which ``pattern`` occurs; None if absent."""
    _check_pattern(pattern, W)
    return next(occurrences(ca_rows(rule, T, W), pattern), None)


def _check_pattern(pattern: str, width: int) -> None:
    if not pattern or set(pattern) - {"0", "1"}:
        raise ValueError(f"pattern must be a nonempty 0/1 string, got {pattern!r}")
    if len(pattern) > width:
        raise ValueError(f"pattern of length {len(pattern)} cannot fit in width {width}")

