"""Potential-response types of the infection outcome.

Within a belief stratum ``B=b`` every participant carries a vector of potential
outcomes ``Y^{a,m}`` over ``(a, m)`` in ``{0,1} x {-1,0,1}``.  Because belief
only acts on ``Y`` through the message, the blinded outcome ``Y^{a,-1}``
coincides with ``Y^{a,b}``, so only the four columns ``Y^{0,0}, Y^{0,1},
Y^{1,0}, Y^{1,1}`` are free and there are 16 types per stratum.

Rows are kept in the canonical published order (sorted by the number of ones,
then in descending lexicographic order), so that index sets such as zero-sets
can be quoted as constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product

# Column layout of every table row.
COLUMNS: tuple[tuple[int, int], ...] = ((0, 0), (0, 1), (1, 0), (1, 1), (0, -1), (1, -1))

N_TYPES = 16

# Hard-coded copies of the published tables, used to guard the generator.
_TABLE_B0 = (
    (0, 0, 0, 0, 0, 0),
    (1, 0, 0, 0, 1, 0),
    (0, 1, 0, 0, 0, 0),
    (0, 0, 1, 0, 0, 1),
    (0, 0, 0, 1, 0, 0),
    (1, 1, 0, 0, 1, 0),
    (1, 0, 1, 0, 1, 1),
    (1, 0, 0, 1, 1, 0),
    (0, 1, 1, 0, 0, 1),
    (0, 1, 0, 1, 0, 0),
    (0, 0, 1, 1, 0, 1),
    (1, 1, 1, 0, 1, 1),
    (1, 1, 0, 1, 1, 0),
    (1, 0, 1, 1, 1, 1),
    (0, 1, 1, 1, 0, 1),
    (1, 1, 1, 1, 1, 1),
)

_TABLE_B1 = (
    (0, 0, 0, 0, 0, 0),
    (1, 0, 0, 0, 0, 0),
    (0, 1, 0, 0, 1, 0),
    (0, 0, 1, 0, 0, 0),
    (0, 0, 0, 1, 0, 1),
    (1, 1, 0, 0, 1, 0),
    (1, 0, 1, 0, 0, 0),
    (1, 0, 0, 1, 0, 1),
    (0, 1, 1, 0, 1, 0),
    (0, 1, 0, 1, 1, 1),
    (0, 0, 1, 1, 0, 1),
    (1, 1, 1, 0, 1, 0),
    (1, 1, 0, 1, 1, 1),
    (1, 0, 1, 1, 0, 1),
    (0, 1, 1, 1, 1, 1),
    (1, 1, 1, 1, 1, 1),
)

PUBLISHED_TABLES = {0: _TABLE_B0, 1: _TABLE_B1}


class Assumption(str, Enum):
    """Individual-level monotonicity assumptions expressible as zero-sets."""

    M_NONNEG = "M_nonneg"
    M_NONPOS = "M_nonpos"
    A_NONNEG = "A_nonneg"
    A_NONPOS = "A_nonpos"


_PUBLISHED_ZERO_SETS = {
    Assumption.M_NONNEG: frozenset({1, 3, 6, 7, 8, 11, 13}),
    Assumption.M_NONPOS: frozenset({2, 4, 7, 8, 9, 12, 14}),
    Assumption.A_NONNEG: frozenset({1, 2, 5, 7, 8, 11, 12}),
    Assumption.A_NONPOS: frozenset({3, 4, 7, 8, 10, 13, 14}),
}


@dataclass(frozen=True)
class ResponseTypeTable:
    """The 16 response types of one belief stratum.

    Attributes
    ----------
    b : int
        Conditioning belief stratum.
    rows : tuple of 6-tuples
        Binary potential outcomes, one tuple per type, in ``COLUMNS`` order.
    """

    b: int
    rows: tuple[tuple[int, ...], ...]

    def column(self, a: int, m: int) -> tuple[int, ...]:
        j = COLUMNS.index((a, m))
        return tuple(row[j] for row in self.rows)


@dataclass(frozen=True)
class ZeroSet:
    """Row indices forced to probability zero by a monotonicity assumption."""

    assumption: Assumption
    indices: frozenset[int]


def _free_patterns() -> list[tuple[int, int, int, int]]:
    patterns = list(product((0, 1), repeat=4))
    patterns.sort(key=lambda p: (sum(p), tuple(-x for x in p)))
    return patterns


def enumerate_types(b: int) -> ResponseTypeTable:
    """Generate the response-type table for belief stratum ``b``.

    The blinded columns copy the message column equal to the belief:
    ``Y^{a,-1} = Y^{a,b}``.
    """
    if b not in (0, 1):
        raise ValueError(f"belief stratum must be 0 or 1, got {b!r}")
    rows = []
    for y00, y01, y10, y11 in _free_patterns():
        free = {(0, 0): y00, (0, 1): y01, (1, 0): y10, (1, 1): y11}
        rows.append((y00, y01, y10, y11, free[(0, b)], free[(1, b)]))
    return ResponseTypeTable(b=b, rows=tuple(rows))


_TABLES = {b: enumerate_types(b) for b in (0, 1)}


def table(b: int) -> ResponseTypeTable:
    """Cached table for stratum ``b``."""
    return _TABLES[b]


def q_set(tbl: ResponseTypeTable, a: int, m: int) -> frozenset[int]:
    """Indices of the types with ``Y^{a,m} = 1`` in the given table."""
    if a not in (0, 1) or m not in (-1, 0, 1):
        raise ValueError(f"invalid (a, m) = {(a, m)!r}")
    return frozenset(i for i, v in enumerate(tbl.column(a, m)) if v == 1)


def violates(row: tuple[int, ...], assumption: Assumption) -> bool:
    """Whether a single response type breaks an individual-level assumption."""
    y = dict(zip(COLUMNS, row))
    if assumption is Assumption.M_NONNEG:
        return any(y[(a, 0)] > y[(a, 1)] for a in (0, 1))
    if assumption is Assumption.M_NONPOS:
        return any(y[(a, 1)] > y[(a, 0)] for a in (0, 1))
    if assumption is Assumption.A_NONNEG:
        return any(y[(0, m)] > y[(1, m)] for m in (0, 1))
    return any(y[(1, m)] > y[(0, m)] for m in (0, 1))


def zero_set(assumption: Assumption | str) -> ZeroSet:
    """Zero-set implied by ``assumption``, derived by scanning the table.

    The scan is checked against the published index lists.
    """
    assumption = Assumption(assumption)
    scanned = frozenset(i for i, row in enumerate(table(0).rows) if violates(row, assumption))
    if scanned != _PUBLISHED_ZERO_SETS[assumption]:
        raise AssertionError(f"zero-set scan for {assumption.value} disagrees with published list")
    return ZeroSet(assumption=assumption, indices=scanned)


def published_zero_set(assumption: Assumption | str) -> frozenset[int]:
    return _PUBLISHED_ZERO_SETS[Assumption(assumption)]


def combine(zero_sets) -> frozenset[int]:
    """Union of several zero-sets (or ``None``)."""
    if zero_sets is None:
        return frozenset()
    if isinstance(zero_sets, ZeroSet):
        return zero_sets.indices
    out: frozenset[int] = frozenset()
    for z in zero_sets:
        out |= z.indices
    return out


def tables_as_csv() -> str:
    """Both tables as CSV text, one row per (b, type)."""
    header = "b,type," + ",".join(f"y_{a}_{m}".replace("-", "m") for a, m in COLUMNS)
    lines = [header]
    for b in (0, 1):
        for i, row in enumerate(table(b).rows):
            lines.append(f"{b},{i}," + ",".join(str(v) for v in row))
    return "\n".join(lines) + "\n"
