"""Verification report types and canonical, byte-stable serialization.

The emitted file is JSON with sorted keys, floats formatted as ``%.12e``, LF
line endings and a trailing newline, so two runs with the same inputs produce
byte-identical files.  Wall time is kept on the in-memory report for console
display but deliberately left out of the canonical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .geometry import STATUS_ERROR, STATUS_FAIL, STATUS_NOT_APPLICABLE, STATUS_PASS

_STATUSES = (STATUS_PASS, STATUS_FAIL, STATUS_NOT_APPLICABLE, STATUS_ERROR)


@dataclass(frozen=True)
class CheckOutcome:
    """One executed check: status plus the residual bookkeeping behind it."""

    name: str
    status: str
    residual: float | None = None
    raw_residual: float | None = None
    tolerance: float | None = None
    worst_point: list | None = None
    points_used: int | None = None
    reason: str | None = None
    data: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in _STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == STATUS_NOT_APPLICABLE and not self.reason:
            raise ValueError("NOT-APPLICABLE outcomes need a reason")


@dataclass(frozen=True)
class VerificationReport:
    """All outcomes of one suite run over one fixture."""

    fixture: str
    seed: int
    points: int
    checks: tuple[CheckOutcome, ...]
    wall_time_s: float = 0.0

    @property
    def worst_status(self) -> str:
        order = {STATUS_PASS: 0, STATUS_NOT_APPLICABLE: 0, STATUS_FAIL: 1, STATUS_ERROR: 2}
        return max(
            (check.status for check in self.checks),
            key=lambda status: order[status],
            default=STATUS_PASS,
        )

    def exit_code(self) -> int:
        status = self.worst_status
        if status == STATUS_ERROR:
            return 2
        if status == STATUS_FAIL:
            return 1
        return 0


def _normalize(value):
    if isinstance(value, dict):
        return {str(k): _normalize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_normalize(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_normalize(v) for v in value.tolist()]
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    raise TypeError(f"cannot serialize {type(value)!r}")


def canonical_json(value) -> str:
    """Deterministic JSON text: sorted keys, %.12e floats, LF endings."""

    def render(node) -> str:
        if node is None:
            return "null"
        if isinstance(node, bool):
            return "true" if node else "false"
        if isinstance(node, int):
            return str(node)
        if isinstance(node, float):
            return f"{node:.12e}"
        if isinstance(node, str):
            return json.dumps(node, ensure_ascii=False)
        if isinstance(node, list):
            return "[" + ", ".join(render(item) for item in node) + "]"
        if isinstance(node, dict):
            parts = (f"{json.dumps(k)}: {render(node[k])}" for k in sorted(node))
            return "{" + ", ".join(parts) + "}"
        raise TypeError(f"cannot serialize {type(node)!r}")

    return render(_normalize(value))


def report_to_mapping(report: VerificationReport) -> dict:
    """The canonical content of a report: everything except wall time."""
    return {
        "fixture": report.fixture,
        "seed": report.seed,
        "points": report.points,
        "checks": [
            {
                "name": check.name,
                "status": check.status,
                "residual": check.residual,
                "raw_residual": check.raw_residual,
                "tolerance": check.tolerance,
                "worst_point": check.worst_point,
                "points_used": check.points_used,
                "reason": check.reason,
                "data": check.data,
            }
            for check in report.checks
        ],
    }


def render_report(report: VerificationReport) -> str:
    return canonical_json(report_to_mapping(report)) + "\n"


def emit_report(report: VerificationReport, path) -> None:
    """Write the canonical report bytes; identical inputs give identical files."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(render_report(report))
