from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Tuple

REPORT_SCHEMA = "fibra.report/1"

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"

ASSERTED = "asserted, not verified"


def jsonable(obj: Any) -> Any:
    """Plain JSON value: Fractions become strings, tuples become lists, keys become strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    if isinstance(obj, Mapping):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    return str(obj)


@dataclass(frozen=True)
class StageResult:
    name: str
    status: str
    values: Dict[str, Any] = field(default_factory=dict)
    diagnostic: Optional[Dict[str, Any]] = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"name": self.name, "status": self.status, "values": self.values}
        if self.diagnostic is not None:
            out["diagnostic"] = self.diagnostic
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "StageResult":
        return cls(
            name=data["name"],
            status=data["status"],
            values=dict(data.get("values") or {}),
            diagnostic=data.get("diagnostic"),
        )


@dataclass(frozen=True)
class ConstructionReport:
    """Outcome of every pipeline stage for one construction file."""

    id: str
    label: str
    kind: str
    stages: Tuple[StageResult, ...] = ()
    computed: Dict[str, Any] = field(default_factory=dict)
    assertions: Tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return bool(self.stages) and all(s.status != FAIL for s in self.stages)

    @property
    def first_failure(self) -> Optional[str]:
        return next((s.name for s in self.stages if s.status == FAIL), None)

    def stage(self, name: str) -> StageResult:
        for s in self.stages:
            if s.name == name:
                return s
        raise KeyError(name)

    def fiber_invariant(self) -> Tuple[str, Optional[int]]:
        """("pg_F", value) for surface fibres, ("g_F", value) for curve fibres."""
        if "g_F" in self.computed:
            return "g_F", self.computed["g_F"]
        return "pg_F", self.computed.get("pg_F")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": REPORT_SCHEMA,
            "id": self.id,
            "label": self.label,
            "kind": self.kind,
            "passed": self.passed,
            "first_failure": self.first_failure,
            "stages": [s.to_dict() for s in self.stages],
            "computed": self.computed,
            "assertions": [{"claim": a, "status": ASSERTED} for a in self.assertions],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ConstructionReport":
        if data.get("schema") != REPORT_SCHEMA:
            raise ValueError(f"not a {REPORT_SCHEMA} document: {data.get('schema')!r}")
        return cls(
            id=data["id"],
            label=data.get("label", ""),
            kind=data["kind"],
            stages=tuple(StageResult.from_dict(s) for s in data.get("stages", ())),
            computed=dict(data.get("computed") or {}),
            assertions=tuple(a["claim"] for a in data.get("assertions", ())),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=str)


def _short(values: Mapping[str, Any], keys: Tuple[str, ...]) -> str:
    parts = [f"{k}={values[k]}" for k in keys if k in values]
    return ", ".join(parts)


_HEADLINE = (
    "chi", "pg", "q", "K2", "K2_minimal", "g_C_hat", "base_points", "d", "pg_F", "g_F", "pg_X", "K3_X",
)


def render_text(report: ConstructionReport) -> str:
    lines = [f"{report.id}  [{report.kind}]  {'PASS' if report.passed else 'FAIL'}"]
    if report.label:
        lines.append(f"  {report.label}")
    width = max((len(s.name) for s in report.stages), default=0)
    for s in report.stages:
        line = f"  {s.name.ljust(width)}  {s.status}"
        if s.diagnostic:
            line += f"  {s.diagnostic.get('error', '')}: {s.diagnostic.get('message', '')}"
        lines.append(line)
    summary = _short(report.computed, _HEADLINE)
    if summary:
        lines.append(f"  computed: {summary}")
    for a in report.assertions:
        lines.append(f"  {ASSERTED}: {a}")
    if report.first_failure:
        lines.append(f"  first failure: {report.first_failure}")
    return "\n".join(lines)


@dataclass(frozen=True)
class CorpusRow:
    id: str
    invariant: str
    value: Optional[int]
    passed: bool
    first_failure: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "invariant": self.invariant,
            "value": self.value,
            "passed": self.passed,
            "first_failure": self.first_failure,
        }


@dataclass(frozen=True)
class CorpusSummary:
    rows: Tuple[CorpusRow, ...]
    missing: Tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return bool(self.rows) and all(r.passed for r in self.rows)

    @property
    def pass_count(self) -> int:
        return sum(1 for r in self.rows if r.passed)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rows": [r.to_dict() for r in self.rows],
            "missing": list(self.missing),
            "passed": self.pass_count,
            "total": len(self.rows),
        }

    def render_text(self) -> str:
        lines: List[str] = [f"{'id':<8}  {'invariant':<9}  {'value':>5}  result"]
        for r in self.rows:
            value = "-" if r.value is None else str(r.value)
            result = "pass" if r.passed else f"FAIL ({r.first_failure})"
            lines.append(f"{r.id:<8}  {r.invariant:<9}  {value:>5}  {result}")
        lines.append(f"{self.pass_count}/{len(self.rows)} pass")
        if self.missing:
            lines.append(f"missing: {', '.join(self.missing)}")
        return "\n".join(lines)
