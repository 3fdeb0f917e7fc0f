# ---------------------------------------------------------------------------
# File    : report.py
# Purpose : Long-format result reports and their table / JSON-lines rendering.
# License : MIT
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------
from __future__ import annotations
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence
import json

from .algebra import Inconclusive, Infinity, Polynomial, RationalPoint
from .hickel import DidNotDrop


class ExitStatus(IntEnum):
    OK = 0
    MISMATCH = 1
    USAGE = 2
    INCONCLUSIVE = 3


PROVENANCES = ("formula", "oracle", "brute-force", "input")


@dataclass(frozen=True)
class Cell:
    item: str
    quantity: str
    value: Any
    provenance: str = "formula"

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")


@dataclass
class Report:
    command: str
    scenario: str
    flags: Dict[str, Any] = field(default_factory=dict)
    cells: List[Cell] = field(default_factory=list)
    status: ExitStatus = ExitStatus.OK

    def add(self, item: str, quantity: str, value: Any, provenance: str = "formula") -> None:
        self.cells.append(Cell(item, quantity, value, provenance))

    def escalate(self, status: ExitStatus) -> None:
        """Mismatch outranks inconclusive, which outranks success."""
        rank = {ExitStatus.OK: 0, ExitStatus.INCONCLUSIVE: 1, ExitStatus.MISMATCH: 2,
                ExitStatus.USAGE: 3}
        if rank[status] > rank[self.status]:
            self.status = status

    def values(self, quantity: str, item: Optional[str] = None) -> List[Any]:
        return [c.value for c in self.cells
                if c.quantity == quantity and (item is None or c.item == item)]


# ============================================================================
# VALUE RENDERING
# ============================================================================

def _fraction_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def render_text(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "pass" if value else "fail"
    if isinstance(value, Fraction):
        return _fraction_text(value)
    if isinstance(value, Infinity):
        return "inf"
    if isinstance(value, Inconclusive):
        return f"≥{render_text(value.bound)}?"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(render_text(v) for v in value) + "]"
    return str(value)


def render_json(value: Any) -> Any:
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return int(value)
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else _fraction_text(value)
    if isinstance(value, Infinity):
        return "inf"
    if isinstance(value, Inconclusive):
        return {"inconclusive": render_json(value.bound)}
    if isinstance(value, DidNotDrop):
        return {"did_not_drop": value.max_steps}
    if isinstance(value, RationalPoint):
        return [render_json(c) for c in value]
    if isinstance(value, (list, tuple)):
        return [render_json(v) for v in value]
    if isinstance(value, Polynomial):
        return str(value)
    return str(value)


# ============================================================================
# EMISSION
# ============================================================================

HEADER = ("item", "quantity", "value", "provenance")


def _render_table(title: str, header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(header)]
    lines = [title,
             "  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip(),
             "  ".join("-" * w for w in widths)]
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def _flag_text(flags: Dict[str, Any]) -> str:
    return " ".join(f"--{k.replace('_', '-')} {render_text(v)}" for k, v in sorted(flags.items())
                    if v is not None and v is not False)


def emit(report: Report, mode: str = "table") -> str:
    """Render a report; table and json modes carry identical values."""
    if mode == "json":
        lines = [json.dumps({"command": report.command, "scenario": report.scenario,
                             "flags": {k: render_json(v) for k, v in sorted(report.flags.items())}},
                            separators=(",", ":"), ensure_ascii=False)]
        for c in report.cells:
            lines.append(json.dumps({"item": c.item, "quantity": c.quantity,
                                     "value": render_json(c.value), "provenance": c.provenance},
                                    separators=(",", ":"), ensure_ascii=False))
        lines.append(json.dumps({"status": int(report.status)}, separators=(",", ":")))
        return "\n".join(lines) + "\n"
    if mode != "table":
        raise ValueError(f"unknown output mode {mode!r}")
    title = f"# {report.command} {report.scenario} {_flag_text(report.flags)}".rstrip()
    rows = [(c.item, c.quantity, render_text(c.value), c.provenance) for c in report.cells]
    return _render_table(title, HEADER, rows) + f"\nstatus: {int(report.status)}\n"
