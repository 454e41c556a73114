"""Regenerate the percolation and client-conformance configuration tables.

Every table is computed from a built-in symbolic hierarchy (``C <- SC`` or
``C <- SC <- SSC``, all overriding ``m``) by feeding truth configurations
through the runtime simulator; only the configurations and the calls are
fixed here.
"""

from __future__ import annotations

import json
from typing import Optional

from .formula import TRUE, Domain
from .hierarchy import ClassDef, Hierarchy, MethodSpec, detect_hierarchy_violations, supers_of
from .runtime import CallOutcome, CallScenario, TruthMode, simulate_call, truth_instance
from .strategy import Strategy, effective_postcondition, effective_precondition

TABLE_IDS = (2, 3, 4, 5, 6)
METHOD = "m"

TITLES = {
    2: "Example configurations for precondition percolation",
    3: "Example configurations for postcondition percolation",
    4: "Client conforming precondition percolation",
    5: "Client conforming postcondition percolation",
    6: "Client conforming postcondition composition",
}

GLYPHS = {
    4: {"ACC": "", "REJ": "×", "REJ-SURPRISE": "⊗", "REJ-UNSAFE": "⊗"},
    5: {"ACC": "", "REJ": "×", "ACC-SUBFAIL": "☑", "ACC-SUPFAIL": "√"},
    6: {"ACC": "", "REJ": "×", "ACC-SUBFAIL": "✓", "ACC-SUPFAIL": "✓", "SKIP": "-"},
}

T, F = True, False
PRE_CONFIGS_3 = [(F, F, T), (F, T, F), (T, F, F), (F, F, F)]
POST_CONFIGS_3 = [(F, T, T), (T, F, F), (T, T, F), (T, T, T)]
PAIRS_2 = [(T, T), (T, F), (F, T), (F, F)]
PROBLEMS_2 = [("P1", 1, [("SC", "SSC")]), ("P2", 2, [("C", "SSC")]), ("P3", 3, [("C", "SC")])]
PROBLEMS_3 = [("P4", 1, [("SC", "SC")]), ("P5", 2, [("C", "SC")]), ("P6", 3, [("C", "SSC"), ("SC", "SSC")])]
CALLS_2 = [("C", "SC"), ("SC", "SC")]


class UnknownTable(ValueError):
    pass


def builtin_hierarchy(depth: int) -> Hierarchy:
    names = ["C", "SC", "SSC"][:depth]
    classes = {}
    for i, n in enumerate(names):
        classes[n] = ClassDef(n, names[i - 1] if i else None, TRUE, {METHOD: MethodSpec(TRUE, TRUE)})
    return Hierarchy(classes, Domain({}, tuple(names)))


def _truth(names: list[str], pre: tuple, post: tuple) -> dict:
    values = {}
    for n, p, q in zip(names, pre, post):
        values[(n, "pre")] = p
        values[(n, "post")] = q
    return values


def _call(h: Hierarchy, client: str, receiver: str, values: dict, s: Strategy) -> CallOutcome:
    return simulate_call(h, CallScenario(client, receiver, METHOD, TruthMode(values)), s)


def _call_dict(client: str, receiver: str, o: CallOutcome) -> dict:
    return {
        "call": f"cl_{client}.o_{receiver}",
        "executed": o.executed,
        "accepted": o.accepted,
        "anomalies": sorted(a.value for a in o.anomalies),
    }


def _percolation_table(table: int) -> dict:
    h = builtin_hierarchy(3)
    names = ["C", "SC", "SSC"]
    if table == 2:
        configs = [(c, (T, T, T)) for c in PRE_CONFIGS_3]
        problems = PROBLEMS_2
        role = "pre"
    else:
        configs = [((T, T, T), c) for c in POST_CONFIGS_3]
        problems = PROBLEMS_3
        role = "post"
    rows: dict[str, list] = {}
    violations = []
    for pre, post in configs:
        values = _truth(names, pre, post)
        sym, state = truth_instance(h, CallScenario("C", "SSC", METHOD, TruthMode(values)))
        for n, v in zip(names, pre if role == "pre" else post):
            rows.setdefault(f"{role}_{n}", []).append(v)
            if n != "C":
                if role == "pre":
                    eff = effective_precondition(sym, Strategy.PERCOLATION, n, METHOD).evaluate(state)
                else:
                    eff = effective_postcondition(sym, Strategy.PERCOLATION, n, METHOD).evaluate(state, state)
                rows.setdefault(f"eff{role.capitalize()}_{n}", []).append(eff)
        found = detect_hierarchy_violations(sym, METHOD, "SSC", pre_state=state, post_state=state)
        violations.append([v.as_dict() for v in found if v.kind == role])
    order = []
    for n in names:
        order.append(f"{role}_{n}")
        if n != "C":
            order.append(f"eff{role.capitalize()}_{n}")
    problem_rows = []
    for pid, col, calls in problems:
        pre, post = configs[col - 1]
        values = _truth(names, pre, post)
        problem_rows.append(
            {
                "id": pid,
                "column": col,
                "calls": [_call_dict(c, r, _call(h, c, r, values, Strategy.PERCOLATION)) for c, r in calls],
            }
        )
    return {
        "table": table,
        "title": TITLES[table],
        "columns": [1, 2, 3, 4],
        "rows": [{"label": label, "values": rows[label]} for label in order],
        "violations": violations,
        "problems": problem_rows,
    }


def _pre_reason(cc: CallOutcome, base: CallOutcome) -> list[str]:
    if cc.executed:
        return ["ACC"]
    if not base.executed:
        return ["REJ"]
    codes = []
    if "SurprisingExecution" in {a.value for a in base.anomalies}:
        codes.append("REJ-SURPRISE")
    if "UnsafeExecution" in {a.value for a in base.anomalies}:
        codes.append("REJ-UNSAFE")
    return codes or ["REJ"]


def _post_reason(h: Hierarchy, client: str, cc: CallOutcome, base: CallOutcome) -> list[str]:
    if not cc.executed:
        return ["SKIP"]
    if not cc.accepted:
        return ["REJ"]
    if base.accepted:
        return ["ACC"]
    supers = set(supers_of(h, client))
    owners = {owner for owner, role in base.failing if role == "post"}
    codes = []
    if any(o not in supers for o in owners):
        codes.append("ACC-SUBFAIL")
    if any(o in supers for o in owners):
        codes.append("ACC-SUPFAIL")
    return codes


def _client_table(table: int) -> dict:
    h = builtin_hierarchy(2)
    names = ["C", "SC"]
    result: dict = {"table": table, "title": TITLES[table], "columns": [1, 2, 3, 4]}
    if table == 4:
        result["rows"] = [
            {"label": "pre_C", "values": [p[0] for p in PAIRS_2]},
            {"label": "pre_SC", "values": [p[1] for p in PAIRS_2]},
        ]
        grid = []
        for client, receiver in CALLS_2:
            cells = []
            for pre in PAIRS_2:
                values = _truth(names, pre, (T, T))
                cc = _call(h, client, receiver, values, Strategy.CLIENT)
                base = _call(h, client, receiver, values, Strategy.PERCOLATION)
                cells.append(_pre_reason(cc, base))
            grid.append({"call": f"cl_{client}.o_{receiver}", "cells": cells})
        result["decisions"] = grid
        return result

    result["rows"] = [
        {"label": "post_C", "values": [p[0] for p in PAIRS_2]},
        {"label": "post_SC", "values": [p[1] for p in PAIRS_2]},
    ]
    baseline = Strategy.PERCOLATION if table == 5 else Strategy.JOIN
    upper = []
    for client, receiver in CALLS_2:
        cells = []
        for post in PAIRS_2:
            values = _truth(names, (T, T), post)
            cc = _call(h, client, receiver, values, Strategy.CLIENT)
            if table == 5:
                base = _call(h, client, receiver, values, baseline)
                cells.append(_post_reason(h, client, cc, base))
            else:
                cells.append(["ACC" if cc.accepted else "REJ"])
        upper.append({"call": f"cl_{client}.o_{receiver}", "cells": cells})
    result["decisions"] = upper
    if table == 5:
        return result

    lower = []
    for pre in PAIRS_2:
        calls = []
        any_executed = False
        for client, receiver in CALLS_2:
            cells = []
            for post in PAIRS_2:
                values = _truth(names, pre, post)
                cc = _call(h, client, receiver, values, Strategy.CLIENT)
                base = _call(h, client, receiver, values, baseline)
                any_executed |= cc.executed
                cells.append(_post_reason(h, client, cc, base))
            calls.append({"call": f"cl_{client}.o_{receiver}", "cells": cells})
        if any_executed:
            implications = [[(not pre[0]) or post[0], (not pre[1]) or post[1]] for post in PAIRS_2]
        else:
            implications = [None] * 4
        lower.append({"pre": list(pre), "calls": calls, "implications": implications})
    result["composition"] = lower
    return result


def generate_table(table_id: int) -> dict:
    if table_id in (2, 3):
        return _percolation_table(table_id)
    if table_id in (4, 5, 6):
        return _client_table(table_id)
    raise UnknownTable(f"unknown table id {table_id}; choose from {TABLE_IDS}")


# ---------------------------------------------------------------- rendering


def _tf(v: Optional[bool]) -> str:
    return "-" if v is None else ("true" if v else "false")


def _cell(codes: list[str], glyphs: Optional[dict]) -> str:
    if glyphs is None:
        return "+".join(codes)
    return "".join(glyphs.get(c, c) for c in codes) or "."


def render_text(t: dict, *, unicode: bool = False) -> str:
    glyphs = GLYPHS.get(t["table"]) if unicode else None
    rows: list = [("", [str(c) for c in t["columns"]])]
    rows += [(row["label"], [_tf(v) for v in row["values"]]) for row in t["rows"]]
    if "violations" in t:
        cells = [",".join(f"{v['kind']}:{v['sup']}>{v['sub']}" for v in col) or "." for col in t["violations"]]
        rows.append(("violations", cells))
        for p in t["problems"]:
            for call in p["calls"]:
                tags = "+".join(call["anomalies"]) or "none"
                rows.append(f"({p['id']}) col {p['column']}: {call['call']} executed={_tf(call['executed'])} {tags}")
    for row in t.get("decisions", []):
        rows.append((row["call"], [_cell(c, glyphs) for c in row["cells"]]))
    for block in t.get("composition", []):
        rows.append(f"(pre_C, pre_SC) = ({_tf(block['pre'][0])}, {_tf(block['pre'][1])})")
        for row in block["calls"]:
            rows.append(("  " + row["call"], [_cell(c, glyphs) for c in row["cells"]]))
        pairs = ["-" if p is None else f"({'t' if p[0] else 'f'}, {'t' if p[1] else 'f'})" for p in block["implications"]]
        rows.append(("  implications", pairs))
    grid = [r for r in rows if isinstance(r, tuple)]
    label_w = max(len(label) for label, _ in grid) + 2
    cell_w = max(len(c) for _, cells in grid for c in cells) + 2
    lines = [f"Table {t['table']}: {t['title']}"]
    for r in rows:
        if isinstance(r, str):
            lines.append(r)
        else:
            lines.append((r[0].ljust(label_w) + "".join(c.ljust(cell_w) for c in r[1])).rstrip())
    return "\n".join(lines) + "\n"


def render_json(t: dict) -> str:
    return json.dumps(t, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
