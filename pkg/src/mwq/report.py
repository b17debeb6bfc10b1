"""Structured run reports.

Every command produces one RunReport; the records format is a line-delimited
JSON stream with a versioned schema field, and the human-readable text output
is a formatting of the same records, never a separate computation.
Serialization is deterministic (sorted keys, no timestamps).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

SCHEMA = "mwq.report.v1"

STATUS_OK = "ok"
STATUS_MISMATCH = "mismatch"
STATUS_ERROR = "error"

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT_ERROR = 2
EXIT_INTERNAL = 3


def plain(value: Any) -> Any:
    """Coerce domain values to JSON-safe, deterministic primitives."""
    from .parsing import bipoly_text, frac_text, poly_text, ratfn_text, section_text
    from .poly import BiPoly, RatFn, UniPoly
    from .surface import SectionPoint

    if isinstance(value, Fraction):
        return frac_text(value)
    if isinstance(value, UniPoly):
        return poly_text(value)
    if isinstance(value, RatFn):
        return ratfn_text(value)
    if isinstance(value, BiPoly):
        return bipoly_text(value)
    if isinstance(value, SectionPoint):
        return section_text(value)
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if value is None or isinstance(value, (bool, int, str)):
        return value
    return str(value)


@dataclass(frozen=True)
class ResultItem:
    name: str
    value: Any
    provenance: tuple[str, ...] = ()
    ok: Optional[bool] = None


@dataclass
class RunReport:
    command: str
    inputs: dict[str, str] = field(default_factory=dict)
    results: list[ResultItem] = field(default_factory=list)
    status: str = STATUS_OK

    def add(self, name: str, value: Any, provenance: tuple[str, ...] = (), ok: Optional[bool] = None):
        self.results.append(ResultItem(name, plain(value), provenance, ok))
        if ok is False and self.status == STATUS_OK:
            self.status = STATUS_MISMATCH

    def exit_code(self) -> int:
        return {STATUS_OK: EXIT_OK, STATUS_MISMATCH: EXIT_MISMATCH}.get(self.status, EXIT_INTERNAL)

    def to_records(self) -> list[dict]:
        head = {
            "schema": SCHEMA,
            "kind": "run",
            "command": self.command,
            "inputs": dict(sorted(self.inputs.items())),
            "status": self.status,
        }
        recs = [head]
        for item in self.results:
            rec = {
                "schema": SCHEMA,
                "kind": "result",
                "command": self.command,
                "name": item.name,
                "value": item.value,
                "provenance": list(item.provenance),
            }
            if item.ok is not None:
                rec["ok"] = item.ok
            recs.append(rec)
        return recs

    def render_records(self) -> str:
        return "\n".join(json.dumps(rec, sort_keys=True) for rec in self.to_records())

    def render_text(self) -> str:
        lines = [f"# {self.command}"]
        for key, val in sorted(self.inputs.items()):
            lines.append(f"  input {key}: {val}")
        for item in self.results:
            mark = "" if item.ok is None else ("  [ok]" if item.ok else "  [MISMATCH]")
            lines.append(f"  {item.name} = {_fmt(item.value)}{mark}")
        lines.append(f"status: {self.status}")
        return "\n".join(lines)


def _fmt(value: Any) -> str:
    if isinstance(value, list):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_fmt(v)}" for k, v in value.items()) + "}"
    return str(value)
