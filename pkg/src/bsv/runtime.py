"""Simulation of a dynamically dispatched call ``cl_T.o_S.m`` under a strategy."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from .formula import BOOL, Domain, FormulaError, Var, evaluate
from .hierarchy import ClassDef, Hierarchy, HierarchyError, MethodSpec, knows, method_spec, resolve_method, supers_of
from .strategy import (
    Part,
    Strategy,
    effective_invariant,
    effective_postcondition,
    effective_precondition,
)


class InvalidScenario(Exception):
    pass


class Anomaly(enum.Enum):
    SURPRISING_EXECUTION = "SurprisingExecution"
    UNSAFE_EXECUTION = "UnsafeExecution"
    SURPRISING_FAILURE = "SurprisingFailure"
    FOREIGN_OBLIGATION = "ForeignObligation"


class Blame(enum.Enum):
    NONE = "None"
    CLIENT = "Client"
    SERVER = "Server"
    MIXED = "Mixed"


@dataclass(frozen=True)
class StateMode:
    pre: Mapping[str, object]
    post: Optional[Mapping[str, object]] = None


@dataclass(frozen=True)
class TruthMode:
    """Constraint truth values keyed by ``(class, role)`` with role in pre|post|inv."""

    values: Mapping[tuple[str, str], bool]


@dataclass(frozen=True)
class CallScenario:
    client: str
    receiver: str
    method: str
    mode: Union[StateMode, TruthMode]
    name: str = ""


@dataclass(frozen=True)
class CallOutcome:
    strategy: Strategy
    server: str
    executed: bool
    eff_pre: bool
    eff_inv_entry: bool
    eff_post: Optional[bool]
    eff_inv_exit: Optional[bool]
    client_view_pre: bool
    client_view_post: bool
    server_own_pre: bool
    server_own_post: bool
    anomalies: frozenset = field(default_factory=frozenset)
    blame: Blame = Blame.NONE
    failing: tuple[tuple[str, str], ...] = ()

    @property
    def accepted(self) -> bool:
        """Executed and every exit check passed."""
        return self.executed and bool(self.eff_post) and bool(self.eff_inv_exit)

    def as_dict(self) -> dict:
        return {
            "strategy": self.strategy.value,
            "server": self.server,
            "executed": self.executed,
            "accepted": self.accepted,
            "eff_pre": self.eff_pre,
            "eff_inv_entry": self.eff_inv_entry,
            "eff_post": self.eff_post,
            "eff_inv_exit": self.eff_inv_exit,
            "client_view_pre": self.client_view_pre,
            "client_view_post": self.client_view_post,
            "server_own_pre": self.server_own_pre,
            "server_own_post": self.server_own_post,
            "anomalies": sorted(a.value for a in self.anomalies),
            "blame": self.blame.value,
            "failing": [list(f) for f in self.failing],
        }


def check_scenario(h: Hierarchy, sc: CallScenario) -> None:
    try:
        chain = supers_of(h, sc.receiver)
        h[sc.client]
    except HierarchyError as exc:
        raise InvalidScenario(str(exc)) from exc
    if sc.client not in chain:
        raise InvalidScenario(f"client type {sc.client} is not a superclass of receiver {sc.receiver}")
    if not knows(h, sc.client, sc.method):
        raise InvalidScenario(f"{sc.client} has no method {sc.method!r}")


def simulate_call(h: Hierarchy, sc: CallScenario, s: Strategy) -> CallOutcome:
    check_scenario(h, sc)
    if isinstance(sc.mode, TruthMode):
        sym, state = truth_instance(h, sc)
        return run_call(sym, sc.client, sc.receiver, sc.method, state, state, s)
    pre = sc.mode.pre
    post = sc.mode.post if sc.mode.post is not None else pre
    try:
        h.domain.check_assignment(pre)
        h.domain.check_assignment(post)
        return run_call(h, sc.client, sc.receiver, sc.method, pre, post, s)
    except FormulaError as exc:
        raise InvalidScenario(f"scenario {sc.name or '?'}: {exc}") from exc


def classify_truth_config(h: Hierarchy, sc: CallScenario, s: Strategy) -> CallOutcome:
    if not isinstance(sc.mode, TruthMode):
        raise InvalidScenario("classify_truth_config needs a truth-mode scenario")
    return simulate_call(h, sc, s)


def compare_strategies(h: Hierarchy, sc: CallScenario) -> dict[Strategy, CallOutcome]:
    return {s: simulate_call(h, sc, s) for s in Strategy}


def truth_instance(h: Hierarchy, sc: CallScenario) -> tuple[Hierarchy, dict[str, bool]]:
    """Symbolic copy of ``h`` whose constraints are atoms set from the truth mapping.

    ``pre``/``post`` entries are required for every class in the receiver's
    chain declaring the method; missing ``inv`` entries default to true.
    The same values stand for both the pre- and the post-state.
    """
    assert isinstance(sc.mode, TruthMode)
    m = sc.method
    chain = supers_of(h, sc.receiver)
    values = dict(sc.mode.values)
    for (cls, role) in values:
        if cls not in h.classes or role not in ("pre", "post", "inv"):
            raise InvalidScenario(f"bad truth entry {role} {cls}")
    classes = {}
    state: dict[str, bool] = {}
    for name, cd in h.classes.items():
        methods = {}
        if m in cd.methods:
            methods[m] = MethodSpec(Var(f"pre_{name}"), Var(f"post_{name}"))
            for role in ("pre", "post"):
                key = (name, role)
                if key not in values:
                    if name in chain:
                        raise InvalidScenario(f"truth mapping lacks {role} {name}")
                    values[key] = True
        values.setdefault((name, "inv"), True)
        classes[name] = ClassDef(name, cd.parent, Var(f"inv_{name}"), methods)
    names = {}
    for (cls, role), v in values.items():
        if role != "inv" and m not in h[cls].methods:
            raise InvalidScenario(f"{cls} does not declare {m}; no {role} to configure")
        names[f"{role}_{cls}"] = BOOL
        state[f"{role}_{cls}"] = bool(v)
    sym = Hierarchy(classes, Domain(names, h.domain.classes, h.domain.budget))
    return sym, state


def run_call(
    h: Hierarchy,
    client: str,
    receiver: str,
    m: str,
    pre: Mapping[str, object],
    post: Mapping[str, object],
    s: Strategy,
) -> CallOutcome:
    """The check pipeline for an already validated call on concrete states."""
    server = resolve_method(h, receiver, m)
    inv_in = effective_invariant(h, s, receiver, m, at="entry")
    eff_pre = effective_precondition(h, s, receiver, m)
    inv_ok = inv_in.evaluate(pre, None, client)
    pre_ok = eff_pre.evaluate(pre, None, client)
    executed = inv_ok and pre_ok

    client_spec = method_spec(h, client, m)
    server_spec = h[server].methods[m]
    cv_pre = evaluate(client_spec.pre, pre)
    cv_post = evaluate(client_spec.post, pre, post)
    own_pre = evaluate(server_spec.pre, pre)
    own_post = evaluate(server_spec.post, pre, post)

    failing: list[Part] = []
    post_ok = inv_out_ok = None
    if not executed:
        if not inv_ok:
            failing += inv_in.failing(pre, None, client)
        if not pre_ok:
            failing += eff_pre.failing(pre, None, client)
    else:
        eff_post = effective_postcondition(h, s, receiver, m)
        inv_out = effective_invariant(h, s, receiver, m, at="exit")
        post_ok = eff_post.evaluate(pre, post, client)
        inv_out_ok = inv_out.evaluate(pre, post, client)
        post_failing = eff_post.failing(pre, post, client) if not post_ok else []
        failing += post_failing
        if not inv_out_ok:
            failing += inv_out.failing(pre, post, client)

    anomalies = set()
    if executed:
        if not cv_pre:
            anomalies.add(Anomaly.SURPRISING_EXECUTION)
        if not own_pre:
            anomalies.add(Anomaly.UNSAFE_EXECUTION)
        if not post_ok:
            if cv_post:
                anomalies.add(Anomaly.SURPRISING_FAILURE)
            own = {client, resolve_method(h, client, m)}
            if post_failing and all(p.owner not in own for p in post_failing):
                anomalies.add(Anomaly.FOREIGN_OBLIGATION)

    if not executed:
        # rejected although the client kept its own side of the contract
        blame = Blame.MIXED if (cv_pre and inv_ok) else Blame.CLIENT
    elif not (post_ok and inv_out_ok):
        blame = Blame.SERVER
    else:
        blame = Blame.NONE

    return CallOutcome(
        strategy=s,
        server=server,
        executed=executed,
        eff_pre=pre_ok,
        eff_inv_entry=inv_ok,
        eff_post=post_ok,
        eff_inv_exit=inv_out_ok,
        client_view_pre=cv_pre,
        client_view_post=cv_post,
        server_own_pre=own_pre,
        server_own_post=own_post,
        anomalies=frozenset(anomalies),
        blame=blame,
        failing=tuple((p.owner, p.role) for p in failing),
    )
