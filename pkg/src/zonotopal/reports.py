"""Deterministic report assembly and rendering.

Reports are plain dictionaries with stringified rationals so that identical
problem files and seeds produce byte-identical output.  Timing data is kept
out of the canonical serialization and only attached on request.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


def fmt_rational(value: Fraction) -> str:
    return str(Fraction(value))


def fmt_vector(vec) -> list[str]:
    return [fmt_rational(v) for v in vec]


def fmt_subset(subset: Iterable[int]) -> list[int]:
    return sorted(subset)


def fmt_subsets(subsets: Iterable[Iterable[int]]) -> list[list[int]]:
    return sorted((fmt_subset(s) for s in subsets), key=lambda s: (len(s), s))


def fmt_table(table: Mapping[int, int] | None) -> dict[str, int] | None:
    if table is None:
        return None
    return {str(k): table[k] for k in sorted(table)}


def fmt_matrix(rows: Sequence[Sequence]) -> list[list[str]]:
    return [[fmt_rational(v) for v in row] for row in rows]


def canonical_json(report: dict) -> str:
    """Stable serialization used for golden files; excludes timings."""
    slim = {k: v for k, v in report.items() if k != "timings"}
    return json.dumps(slim, indent=2, sort_keys=True) + "\n"


def render_json(report: dict, timings: bool = False) -> str:
    if timings:
        payload = dict(report)
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    return canonical_json(report)


def _lines_for(value, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines: list[str] = []
    if isinstance(value, dict):
        for key in value:
            sub = value[key]
            if isinstance(sub, (dict, list)) and sub and not _is_flat_list(sub):
                lines.append(f"{pad}{key}:")
                lines.extend(_lines_for(sub, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_inline(sub)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)) and item and not _is_flat_list(item):
                lines.append(f"{pad}-")
                lines.extend(_lines_for(item, indent + 1))
            else:
                lines.append(f"{pad}- {_inline(item)}")
    else:
        lines.append(f"{pad}{_inline(value)}")
    return lines


def _is_flat_list(value) -> bool:
    return isinstance(value, list) and all(
        not isinstance(item, (dict, list)) for item in value
    )


def _inline(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, list):
        return "[" + ", ".join(_inline(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_inline(v)}" for k, v in value.items()) + "}"
    return str(value)


def render_text(report: dict, timings: bool = False) -> str:
    """Human-readable rendering with one block per report section."""
    lines: list[str] = []
    for section, payload in report.items():
        if section == "timings" and not timings:
            continue
        lines.append(f"[{section}]")
        lines.extend(_lines_for(payload, 1))
        lines.append("")
    return "\n".join(lines)
