from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bsv.formula import Implies, equivalent, implies, old
from bsv.hierarchy import method_spec, parse_hierarchy, resolve_method
from bsv.properties import random_hierarchy, symbolic_chain
from bsv.strategy import (
    Strategy,
    client_classes,
    effective_invariant,
    effective_postcondition,
    effective_precondition,
    effective_view,
)

EXAMPLE1 = """
domain x: int[-3..3];
class C { invariant: x > -3; method m { pre: x > 0; post: true; } }
class SC extends C { invariant: x > -3; method m { pre: x < 0; post: x == old(x); } }
"""

seeds = st.integers(0, 2**32 - 1)


@pytest.fixture
def h():
    return parse_hierarchy(EXAMPLE1)


def test_parse_names():
    assert Strategy.parse("all") == list(Strategy)
    assert Strategy.parse("join") == [Strategy.JOIN]
    with pytest.raises(ValueError):
        Strategy.parse("eiffel")


def test_percolation_disjoins_preconditions(h):
    pre = effective_precondition(h, Strategy.PERCOLATION, "SC", "m")
    assert pre.evaluate({"x": -2}) and pre.evaluate({"x": 2})
    assert not pre.evaluate({"x": 0})
    assert pre.provenance == [("C", "pre"), ("SC", "pre")]


def test_percolation_conjoins_postconditions_and_join_guards_them(h):
    perc = effective_postcondition(h, Strategy.PERCOLATION, "SC", "m")
    join = effective_postcondition(h, Strategy.JOIN, "SC", "m")
    # x changes from 2 to 1: SC's post fails, but SC's pre did not hold
    assert not perc.evaluate({"x": 2}, {"x": 1})
    assert join.evaluate({"x": 2}, {"x": 1})
    assert not join.evaluate({"x": -2}, {"x": 1})


def test_client_conformance_gates_on_static_type(h):
    pre = effective_precondition(h, Strategy.CLIENT, "SC", "m")
    assert not pre.evaluate({"x": -2}, client="C")
    assert pre.evaluate({"x": -2}, client="SC")
    assert [p.owner for p in pre.failing({"x": -2}, client="C")] == ["C"]


def test_client_post_only_binds_the_calling_type(h):
    post = effective_postcondition(h, Strategy.CLIENT, "SC", "m")
    assert post.evaluate({"x": 2}, {"x": 1}, client="C")
    assert not post.evaluate({"x": -2}, {"x": 1}, client="SC")


def test_client_invariant_reads_the_view_at_entry_and_exit(h):
    entry = effective_invariant(h, Strategy.CLIENT, "SC", "m", at="entry")
    exit_ = effective_invariant(h, Strategy.CLIENT, "SC", "m", at="exit")
    assert not entry.evaluate({"x": -3}, client="SC")
    # the view held in the pre-state, so the invariant is owed after the call
    assert not exit_.evaluate({"x": -2}, {"x": -3}, client="SC")
    assert exit_.evaluate({"x": 0}, {"x": -3}, client="SC")
    with pytest.raises(ValueError):
        effective_invariant(h, Strategy.CLIENT, "SC")


def test_non_client_invariants_conjoin_the_chain(h):
    inv = effective_invariant(h, Strategy.JOIN, "SC", "m")
    assert inv.provenance == [("C", "inv"), ("SC", "inv")]


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_percolation_is_monotone_down_the_chain(seed):
    h = random_hierarchy(random.Random(seed), depth=3)
    d = h.domain
    for sup, sub in (("C", "SC"), ("SC", "SSC")):
        s = Strategy.PERCOLATION
        assert implies(effective_precondition(h, s, sup, "m").formula, effective_precondition(h, s, sub, "m").formula, d)
        assert implies(
            effective_postcondition(h, s, sub, "m").formula, effective_postcondition(h, s, sup, "m").formula, d
        )


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_client_indicators_are_neutral_outside_the_bound_type(seed):
    h = random_hierarchy(random.Random(seed), depth=3)
    d = h.domain
    for t in client_classes(h, "SSC", "m"):
        server = resolve_method(h, "SSC", "m")
        spec = method_spec(h, t, "m")
        pre = effective_precondition(h, Strategy.CLIENT, "SSC", "m").formula
        post = effective_postcondition(h, Strategy.CLIENT, "SSC", "m").formula
        assert equivalent(pre, spec.pre & h[server].methods["m"].pre, d, clients=(t,))
        assert equivalent(post, Implies(old(spec.pre), spec.post), d, clients=(t,), two_state=True)


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from(list(Strategy)))
def test_provenance_lists_exactly_the_folded_parts(seed, s):
    h = random_hierarchy(random.Random(seed), depth=3)
    pre = effective_precondition(h, s, "SSC", "m")
    owners = [p.owner for p in pre.parts]
    if s is Strategy.CLIENT:
        assert owners[:-1] == client_classes(h, "SSC", "m")
        assert owners[-1] == resolve_method(h, "SSC", "m")
        assert effective_view(h, "SSC", "m").parts == pre.parts[:-1]
    else:
        assert owners == [c for c in ("C", "SC", "SSC") if "m" in h[c].methods]


def test_invariants_of_other_client_types_are_vacuous():
    h = symbolic_chain((True, True))
    state = {"inv_C": 0, "inv_SC": 1, "pre_C": 1, "pre_SC": 1, "post_C": 1, "post_SC": 1}
    assert not effective_invariant(h, Strategy.PERCOLATION, "SC", "m").evaluate(state)
    assert effective_invariant(h, Strategy.CLIENT, "SC", "m").evaluate(state, client="SC")
    assert not effective_invariant(h, Strategy.CLIENT, "SC", "m").evaluate(state, client="C")
