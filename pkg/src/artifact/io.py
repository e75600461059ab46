"""File formats and rendering of bound results.

Two CSV layouts are read: micro-data with header ``a,b,s,y`` (``s``
optional, one row per participant) and counts with header
``a,b,s,y,count``.  Results render to JSON (full precision, infinities as
``Infinity``) or to a fixed-width text table of percentages.
"""

from __future__ import annotations

import csv
import json
import math
from collections.abc import Iterable, Mapping
from pathlib import Path

from .bounds import BoundsResult, Estimand
from .observed import TrialRecord

# VE-scale values below this are displayed as minus infinity.
DISPLAY_FLOOR = -10.0
MINUS_INF = "−∞"
MISSING = "---"


def _bit(value: str, name: str, line: int) -> int:
    v = value.strip()
    if v not in ("0", "1"):
        raise ValueError(f"line {line}: column {name} must be 0 or 1, got {value!r}")
    return int(v)


def read_records(path: str | Path) -> list[TrialRecord]:
    """Read micro-data or count CSV into records (counts become weights)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        fields = [f.strip() for f in (reader.fieldnames or [])]
        missing = {"a", "b", "y"} - set(fields)
        if missing:
            raise ValueError(f"{path}: missing column(s) {', '.join(sorted(missing))}")
        has_s, has_count = "s" in fields, "count" in fields
        records = []
        for line, row in enumerate(reader, start=2):
            row = {k.strip(): v for k, v in row.items() if k is not None}
            weight = 1
            if has_count:
                weight = int(row["count"])
                if weight < 0:
                    raise ValueError(f"line {line}: negative count")
            s = _bit(row["s"], "s", line) if has_s else None
            records.append(
                TrialRecord(a=_bit(row["a"], "a", line), b=_bit(row["b"], "b", line), y=_bit(row["y"], "y", line), s=s, weight=weight)
            )
    if not records:
        raise ValueError(f"{path}: no data rows")
    return records


def write_counts(path: str | Path, counts: Mapping[tuple, int]) -> None:
    """Write a count table keyed ``(a, s, b, y)`` or ``(a, b, y)``."""
    with_s = len(next(iter(counts))) == 4
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["a", "b", "s", "y", "count"] if with_s else ["a", "b", "y", "count"])
        for key in sorted(counts):
            if with_s:
                a, s, b, y = key
                w.writerow([a, b, s, y, counts[key]])
            else:
                a, b, y = key
                w.writerow([a, b, y, counts[key]])


def write_micro(path: str | Path, columns: Mapping[str, Iterable[int]]) -> None:
    """Write one row per participant from parallel ``a, b, s, y`` arrays."""
    names = [n for n in ("a", "b", "s", "y") if n in columns]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(names)
        w.writerows(zip(*(list(map(int, columns[n])) for n in names)))


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------
def render_json(results: Iterable[BoundsResult]) -> str:
    return json.dumps([r.to_dict() for r in results], indent=2)


def parse_json(text: str) -> list[BoundsResult]:
    return [BoundsResult.from_dict(d) for d in json.loads(text)]


def format_value(value: float | None, ve_scale: bool = True) -> str:
    """One-decimal percentage; very negative VE-scale values show as minus infinity."""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return MISSING
    if ve_scale and value < DISPLAY_FLOOR:
        return MINUS_INF
    if math.isinf(value):
        return MINUS_INF if value < 0 else "∞"
    return f"{100 * value:.1f}"


def _ci(pair, ve_scale):
    if pair is None:
        return ""
    return f"({format_value(pair[0], ve_scale)}, {format_value(pair[1], ve_scale)})"


def _is_ve(estimand: str) -> bool:
    try:
        return Estimand(estimand).ve_scale
    except ValueError:
        return True


def render_table(results: Iterable[BoundsResult]) -> str:
    """Fixed-width text table, values in percent."""
    header = ("estimand", "method", "lower", "upper", "feasible", "point", "lower CI", "upper CI", "note")
    rows = []
    for r in results:
        ve = _is_ve(r.estimand)
        feasible = "yes" if r.feasible else "no"
        note = r.error or r.note or ""
        rows.append(
            (
                r.estimand,
                r.method,
                format_value(r.lower, ve),
                format_value(r.upper, ve),
                feasible,
                format_value(r.point_estimate, ve) if r.point_estimate is not None else "",
                _ci(r.ci_lower, ve),
                _ci(r.ci_upper, ve),
                note,
            )
        )
    widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def write_coverage_csv(path_or_file, rows) -> None:
    """CSV with columns figure, n, estimand, method, endpoint, coverage."""
    def emit(fh):
        w = csv.writer(fh)
        w.writerow(["figure", "n", "estimand", "method", "endpoint", "coverage"])
        for r in rows:
            w.writerow([r.figure, r.n, r.estimand, r.method, r.endpoint, f"{r.coverage:.4f}"])

    if hasattr(path_or_file, "write"):
        emit(path_or_file)
    else:
        with open(path_or_file, "w", newline="", encoding="utf-8") as fh:
            emit(fh)
