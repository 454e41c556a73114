"""Versioned machine-readable reports (``bsv-report/1``) and their text rendering."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Optional

from . import __version__
from .dsl import ScenarioFile
from .hierarchy import Violation, detect_hierarchy_violations, knows
from .properties import PropertyResult
from .runtime import CallScenario, simulate_call
from .strategy import Strategy

SCHEMA = "bsv-report/1"

EXIT_OK = 0
EXIT_ANOMALY = 1
EXIT_INPUT = 2
EXIT_PROPERTY = 3


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


@dataclass
class Report:
    command: str
    input_path: Optional[str] = None
    input_digest: Optional[str] = None
    scenarios: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    properties: list = field(default_factory=list)
    tables: list = field(default_factory=list)
    error: Optional[dict] = None
    flag_rejections: bool = False

    @property
    def exit_status(self) -> int:
        if self.error is not None:
            return EXIT_INPUT
        if any(not p["passed"] for p in self.properties):
            return EXIT_PROPERTY
        if self.violations:
            return EXIT_ANOMALY
        for sc in self.scenarios:
            for o in sc["outcomes"].values():
                if o["anomalies"] or (self.flag_rejections and not o["executed"]):
                    return EXIT_ANOMALY
        return EXIT_OK

    def as_dict(self) -> dict:
        out = {
            "schema": SCHEMA,
            "tool": {"name": "bsv", "version": __version__},
            "command": self.command,
            "input": None if self.input_path is None else {"path": self.input_path, "digest": self.input_digest},
            "scenarios": self.scenarios,
            "violations": self.violations,
            "properties": self.properties,
            "tables": self.tables,
            "exit_status": self.exit_status,
        }
        if self.error is not None:
            out["error"] = self.error
        return out

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        lines = [f"bsv {__version__} {self.command}" + (f" {self.input_path}" if self.input_path else "")]
        if self.input_digest:
            lines.append(f"input {self.input_digest}")
        if self.error is not None:
            e = self.error
            where = f":{e['line']}:{e['col']}" if e.get("line") else ""
            lines.append(f"error{where}: {e['message']}")
        for v in self.violations:
            lines.append(f"violation {v['method']} {v['kind']} {v['sup']} -> {v['sub']}")
        for sc in self.scenarios:
            lines.append(f"scenario {sc['name']}: cl_{sc['client']}.o_{sc['receiver']}.{sc['method']}")
            for strategy, o in sc["outcomes"].items():
                verdict = ("accepted" if o["accepted"] else "post-failed") if o["executed"] else "rejected"
                tags = ",".join(o["anomalies"]) or "-"
                lines.append(
                    f"  {strategy:<12} {verdict:<11} server={o['server']} blame={o['blame']} anomalies={tags}"
                )
        for p in self.properties:
            mark = "PASS" if p["passed"] else "FAIL"
            lines.append(f"{mark} {p['id']}: {p['checked']} checked, {len(p['counterexamples'])} counterexamples")
            for cex in p["counterexamples"][:3]:
                lines.append(f"  counterexample: {json.dumps(cex, sort_keys=True)}")
        lines.append(f"exit {self.exit_status}")
        return "\n".join(lines) + "\n"


def scenario_entry(sf: ScenarioFile, sc: CallScenario, strategies: list[Strategy]) -> dict:
    outcomes = {s.value: simulate_call(sf.hierarchy, sc, s).as_dict() for s in strategies}
    return {
        "name": sc.name,
        "client": sc.client,
        "receiver": sc.receiver,
        "method": sc.method,
        "outcomes": outcomes,
    }


def static_violations(sf: ScenarioFile) -> list[dict]:
    """Adjacent-pair static violations for every method, deepest knowing class per chain."""
    h = sf.hierarchy
    parents = {cd.parent for cd in h.classes.values()}
    leaves = [c for c in h.classes if c not in parents]
    methods = sorted({m for cd in h.classes.values() for m in cd.methods})
    seen: set = set()
    out = []
    for leaf in leaves:
        for m in methods:
            if not knows(h, leaf, m):
                continue
            for v in detect_hierarchy_violations(h, m, leaf):
                key = (m, v.kind, v.sup, v.sub)
                if key not in seen:
                    seen.add(key)
                    out.append(_violation(m, v))
    return out


def _violation(m: str, v: Violation) -> dict:
    return {"method": m, **v.as_dict()}


def property_entries(results: list[PropertyResult]) -> list[dict]:
    return [r.as_dict() for r in results]
