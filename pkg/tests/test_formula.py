from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bsv.formula import (
    FALSE,
    TRUE,
    BudgetExceeded,
    Client,
    Domain,
    IntRange,
    MissingPostState,
    OldError,
    SortError,
    UnboundClient,
    UndeclaredVariable,
    Var,
    counterexample,
    equivalent,
    evaluate,
    implies,
    is_tautology,
    old,
    validate,
    variables,
)
from bsv.properties import TABLE1
from bsv.syntax import parse_formula
from strategies import ATOMS, formulas, int_formulas

X = Domain({"x": IntRange(-3, 3)})
AB = Domain.booleans("A", "B")


def p(text):
    return parse_formula(text)


# evaluate


def test_comparison_reads_state():
    assert evaluate(p("x > 0"), {"x": -2}) is False


def test_old_binds_pre_state():
    f = p("old(x) > 0 && ok")
    assert evaluate(f, {"x": 2, "ok": False}, {"x": 0, "ok": True}) is True


def test_client_indicator_is_one_hot():
    assert evaluate(Client("C"), {}, client="SC") is False
    assert evaluate(Client("SC"), {}, client="SC") is True


def test_evaluate_errors():
    with pytest.raises(UndeclaredVariable):
        evaluate(p("y > 0"), {"x": 1})
    with pytest.raises(MissingPostState):
        evaluate(p("old(x) > 0"), {"x": 1})
    with pytest.raises(UnboundClient):
        evaluate(Client("C"), {})


# tautologies [Table 1 and derived]


def test_conjunction_elimination():
    assert is_tautology(p("A && B -> A"), AB)


def test_implication_as_disjunction():
    assert is_tautology(p("(A -> B) <-> (!A || B)"), AB)


def test_contradictory_preconditions_have_a_witness():
    f = p("x > 0 -> x < 0")
    assert not is_tautology(f, X)
    assert counterexample(f, X).pre == {"x": 1}


def test_implies_examples():
    assert implies(FALSE, p("x > 2"), X)
    assert implies(Var("A"), p("A || B"), AB)
    assert not implies(p("x < 0"), p("x > 0"), X)
    assert counterexample(p("x < 0 -> x > 0"), X).pre == {"x": -3}


def test_equivalent_examples():
    assert equivalent(TRUE & Var("A"), Var("A"), AB)
    assert equivalent(FALSE | Var("A"), Var("A"), AB)
    assert not equivalent(Var("A"), ~Var("A"), AB)


@pytest.mark.parametrize("fid", sorted(TABLE1, key=lambda k: int(k[1:])))
def test_table1_fact(fid, backend):
    f = p(TABLE1[fid])
    assert is_tautology(f, Domain.booleans(*sorted(variables(f))))


def test_table1_has_twenty_facts():
    assert list(TABLE1) == [f"T{i}" for i in range(1, 21)]


# enumeration details


def test_two_state_enumeration_varies_pre_and_post_independently():
    d = Domain.booleans("a")
    assert not is_tautology(p("old(a) -> a"), d)
    cex = counterexample(p("old(a) -> a"), d)
    assert cex.pre == {"a": 1} and cex.post == {"a": 0}
    assert is_tautology(p("old(a) -> old(a)"), d)


def test_client_enumeration_ranges_over_declared_or_given_classes():
    d = Domain.booleans("a", classes=("C", "SC"))
    assert not is_tautology(Client("C"), d)
    assert is_tautology(Client("C"), d, clients=("C",))
    assert counterexample(Client("C"), d).client == "SC"
    assert is_tautology(Client("C") | Client("SC"), d)


def test_budget_is_a_hard_error():
    d = Domain({"x": IntRange(0, 99), "y": IntRange(0, 99)}, budget=1000)
    with pytest.raises(BudgetExceeded):
        is_tautology(p("x == x && y == y"), d)
    assert is_tautology(p("x == x"), d)


def test_unread_variables_are_not_enumerated():
    d = Domain({"x": IntRange(0, 9), "big": IntRange(0, 10**6)}, budget=100)
    assert is_tautology(p("x >= 0"), d)


def test_empty_range_rejected():
    with pytest.raises(Exception):
        IntRange(2, 1)


def test_validate_enforces_old_placement_and_sorts():
    d = Domain({"x": IntRange(0, 3), "ok": "bool"})
    with pytest.raises(OldError):
        validate(p("old(x) > 0"), d, allow_old=False)
    with pytest.raises(SortError):
        validate(p("x && ok"), d)
    with pytest.raises(UndeclaredVariable):
        validate(p("z > 0"), d)
    assert old(old(Var("x"))) == old(Var("x"))
    with pytest.raises(OldError):
        old(Var("x") & old(Var("ok")))


# properties


def _brute(f, atoms, two_state):
    names = sorted(atoms)
    for pre in itertools.product((0, 1), repeat=len(names)):
        posts = itertools.product((0, 1), repeat=len(names)) if two_state else [pre]
        for post in posts:
            if not evaluate(f, dict(zip(names, pre)), dict(zip(names, post))):
                return False
    return True


@settings(max_examples=150, deadline=None)
@given(formulas(two_state=True))
def test_tautology_agrees_with_direct_evaluation(f):
    d = Domain.booleans(*ATOMS)
    assert is_tautology(f, d, two_state=True) == _brute(f, ATOMS, True)


@settings(max_examples=150, deadline=None)
@given(formulas(two_state=True))
def test_counterexample_falsifies(f):
    d = Domain.booleans(*ATOMS)
    cex = counterexample(f, d, two_state=True)
    if cex is not None:
        pre = {a: 0 for a in ATOMS} | cex.pre
        post = {a: 0 for a in ATOMS} | cex.post
        assert evaluate(f, pre, post) is False


@settings(max_examples=100, deadline=None)
@given(int_formulas())
def test_integer_tautologies_match_enumeration(f):
    d = Domain({"x": IntRange(-2, 2), "y": IntRange(-2, 2)})
    direct = all(evaluate(f, {"x": x, "y": y}) for x in range(-2, 3) for y in range(-2, 3))
    assert is_tautology(f, d) == direct


@settings(max_examples=100, deadline=None)
@given(formulas(), formulas(), formulas())
def test_implication_is_transitive(a, b, c):
    d = Domain.booleans(*ATOMS)
    if implies(a, b, d) and implies(b, c, d):
        assert implies(a, c, d)


@settings(max_examples=50, deadline=None)
@given(formulas(), st.dictionaries(st.sampled_from(ATOMS), st.booleans(), min_size=3))
def test_evaluate_is_pure(f, state):
    frozen = dict(state)
    first = evaluate(f, state)
    assert evaluate(f, state) == first
    assert state == frozen
