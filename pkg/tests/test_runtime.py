from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bsv.dsl import load
from bsv.formula import evaluate
from bsv.hierarchy import spec_chain, supers_of
from bsv.properties import random_hierarchy
from bsv.runtime import (
    Anomaly,
    Blame,
    CallScenario,
    InvalidScenario,
    StateMode,
    TruthMode,
    classify_truth_config,
    compare_strategies,
    simulate_call,
)
from bsv.strategy import Strategy
from bsv.tables import builtin_hierarchy

P, J, K = Strategy.PERCOLATION, Strategy.JOIN, Strategy.CLIENT
SE, UE, SF, FO = (
    Anomaly.SURPRISING_EXECUTION,
    Anomaly.UNSAFE_EXECUTION,
    Anomaly.SURPRISING_FAILURE,
    Anomaly.FOREIGN_OBLIGATION,
)
H3 = builtin_hierarchy(3)


def outcomes(data_dir, n):
    sf = load(str(data_dir / f"example{n}.bsv"))
    return {name: compare_strategies(sf.hierarchy, sc) for name, sc in sf.scenarios.items()}


def truth(pre, post, client, receiver, h=H3):
    names = list(h.classes)
    values = {(c, "pre"): v for c, v in zip(names, pre)} | {(c, "post"): v for c, v in zip(names, post)}
    return CallScenario(client, receiver, "m", TruthMode(values))


def test_example1_surprising_but_safe(data_dir):
    out = outcomes(data_dir, 1)
    c, sc = out["cl_C_minus2"], out["cl_SC_minus2"]
    assert c[P].executed and c[P].anomalies == {SE}
    assert not c[K].executed and c[K].blame is Blame.CLIENT
    assert all(o.accepted and not o.anomalies for o in sc.values())


def test_example2_unsafe_execution(data_dir):
    c = outcomes(data_dir, 2)["cl_C_plus2"]
    assert c[P].executed and c[P].anomalies == {UE}
    assert not c[K].executed and c[K].blame is Blame.MIXED


def test_example3_opposite_verdicts(data_dir):
    out = outcomes(data_dir, 3)
    for o in out.values():
        assert o[P].accepted and UE in o[P].anomalies
        assert not o[K].executed
    assert out["cl_SC_200"][P].anomalies == {SE, UE}


def test_table2_problem_p1():
    sc = truth((False, False, True), (True, True, True), "SC", "SSC")
    o = classify_truth_config(H3, sc, P)
    assert o.executed and SE in o.anomalies


def test_table3_problem_p6():
    for client in ("C", "SC"):
        sc = truth((True, True, True), (True, True, False), client, "SSC")
        assert SF in classify_truth_config(H3, sc, P).anomalies


def test_table4_unsafe_call_rejected():
    h = builtin_hierarchy(2)
    sc = truth((True, False), (True, True), "C", "SC", h)
    assert not classify_truth_config(h, sc, K).executed
    assert classify_truth_config(h, sc, P).anomalies == {UE}


def test_all_true_agrees_and_all_pres_false_reject():
    for client, receiver in (("C", "SSC"), ("SC", "SSC"), ("C", "SC")):
        ok = compare_strategies(H3, truth((True,) * 3, (True,) * 3, client, receiver))
        assert all(o.accepted and not o.anomalies and o.blame is Blame.NONE for o in ok.values())
        bad = compare_strategies(H3, truth((False,) * 3, (True,) * 3, client, receiver))
        assert not any(o.executed for o in bad.values())
        assert {o.blame for o in bad.values()} == {Blame.CLIENT}


def test_server_is_blamed_for_exit_failures():
    o = simulate_call(H3, truth((True,) * 3, (True, True, False), "SSC", "SSC"), K)
    assert o.executed and not o.accepted and o.blame is Blame.SERVER
    assert ("SSC", "post") in o.failing


def test_foreign_obligation_names_outside_conjuncts():
    # P4: the SC client is held to C's postcondition under percolation
    o = simulate_call(H3, truth((True,) * 3, (False, True, True), "SC", "SC"), P)
    assert o.anomalies == {SF, FO}
    assert o.failing == (("C", "post"),)


def test_truth_mode_requires_a_complete_mapping():
    sc = CallScenario("C", "SC", "m", TruthMode({("C", "pre"): True}))
    with pytest.raises(InvalidScenario, match="lacks"):
        simulate_call(H3, sc, P)
    with pytest.raises(InvalidScenario):
        classify_truth_config(H3, CallScenario("C", "SC", "m", StateMode({})), P)


def test_invalid_calls_are_rejected(data_dir):
    h = load(str(data_dir / "example1.bsv")).hierarchy
    with pytest.raises(InvalidScenario, match="superclass"):
        simulate_call(h, CallScenario("SC", "C", "m", StateMode({"x": 1})), P)
    with pytest.raises(InvalidScenario, match="no method"):
        simulate_call(h, CallScenario("C", "SC", "n", StateMode({"x": 1})), P)
    with pytest.raises(InvalidScenario):
        simulate_call(h, CallScenario("C", "SC", "m", StateMode({"x": 9})), P)


def test_outcome_serializes():
    o = simulate_call(H3, truth((True,) * 3, (True,) * 3, "C", "SSC"), J)
    d = o.as_dict()
    assert d["strategy"] == "join" and d["accepted"] and d["anomalies"] == []


# properties over random hierarchies and two-state assignments

seeds = st.integers(0, 2**32 - 1)


def _random_call(seed):
    rng = random.Random(seed)
    h = random_hierarchy(rng, depth=3)
    receiver = rng.choice(list(h.classes))
    client = rng.choice([c for c in h.classes if c in supers_of(h, receiver)])
    atoms = sorted(h.domain.variables)
    pre = {a: rng.randrange(2) for a in atoms}
    post = {a: rng.randrange(2) for a in atoms}
    return h, CallScenario(client, receiver, "m", StateMode(pre, post))


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_client_conformance_never_surprises_or_endangers(seed):
    h, sc = _random_call(seed)
    o = simulate_call(h, sc, K)
    assert not o.anomalies & {SE, UE}
    assert not {SF, FO} <= o.anomalies


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_percolation_executes_iff_some_declared_pre_holds(seed):
    h, sc = _random_call(seed)
    o = simulate_call(h, sc, P)
    assert o.eff_pre == any(evaluate(s.pre, sc.mode.pre) for _, s in spec_chain(h, sc.receiver, "m"))


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_strategies_are_deterministic_and_independent(seed):
    h, sc = _random_call(seed)
    first = compare_strategies(h, sc)
    assert compare_strategies(h, sc) == first
    assert first[P].executed == first[J].executed
