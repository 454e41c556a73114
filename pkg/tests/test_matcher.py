from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bsv.formula import FALSE, TRUE, Domain, IntRange
from bsv.hierarchy import HierarchyError, MethodSpec, parse_hierarchy
from bsv.matcher import (
    SpecPair,
    check_safe_refinement,
    effective_specification,
    join,
    match_plug_in,
    match_relaxed_plug_in,
    refines,
    refines_semantic,
    spec_space,
    strong_behavioral_subtype,
    truth_functions,
    verify_join_lub,
)
from bsv.syntax import parse_formula
from strategies import formulas

AB = Domain.booleans("a", "b")
X = Domain({"x": IntRange(-3, 3)})

specs = st.builds(
    MethodSpec,
    formulas(("a", "b"), max_leaves=4),
    formulas(("a", "b"), two_state=True, max_leaves=4),
)


def spec(pre, post):
    return MethodSpec(parse_formula(pre), parse_formula(post))


def ref(sub, sup, d=AB):
    return refines(SpecPair(sub, sup, d))


def same(s, t):
    return ref(s, t) and ref(t, s)


def test_weaker_pre_and_stronger_post_refine():
    assert ref(spec("x > -2", "x > 1"), spec("x > 0", "x > 0"), X)
    assert not ref(spec("x > 1", "x > 1"), spec("x > 0", "x > 0"), X)


def test_post_only_owed_where_super_pre_held():
    sub, sup = spec("true", "a"), spec("a", "old(a)")
    assert ref(sub, sup)
    assert not match_plug_in(SpecPair(sub, sup, AB))


def test_relaxed_plug_in_accepts_guarded_posts():
    sub, sup = spec("a || b", "a"), spec("a", "a || b")
    p = SpecPair(sub, sup, AB)
    assert match_plug_in(p) and match_relaxed_plug_in(p)


def test_semantic_oracle_examples():
    cases = [
        (spec("true", "a"), spec("a", "old(a)"), True),
        (spec("a", "a"), spec("true", "a"), False),
        (spec("true", "false"), spec("true", "true"), True),
        (spec("false", "false"), spec("true", "true"), False),
    ]
    for sub, sup, want in cases:
        assert refines_semantic(SpecPair(sub, sup, AB)) is want
        assert ref(sub, sup) is want
    # unimplementable when a is false, so no whole relation satisfies it
    unsat = SpecPair(spec("true", "old(a)"), spec("true", "a"), AB)
    assert refines_semantic(unsat, model="whole-relation")
    assert not refines_semantic(unsat, model="per-call")


def test_truth_functions_enumerate_every_function():
    assert len(truth_functions(["p"])) == 4
    assert truth_functions(["p"])[0] == FALSE and truth_functions(["p"])[-1] == TRUE
    specs, d = spec_space(1)
    assert len(specs) == 16 and list(d.variables) == ["x0"]


def test_join_is_least_upper_bound_on_one_atom():
    out = verify_join_lub(1, third_samples=8, seed=1)
    assert out["counterexamples"] == []


EXAMPLE1 = """
domain x: int[-3..3];
class C { method m { pre: x > 0; post: true; } }
class SC extends C { method m { pre: x < 0; post: true; } }
"""


def test_example1_is_not_a_subtype_on_raw_specs():
    h = parse_hierarchy(EXAMPLE1)
    assert not strong_behavioral_subtype(h, "SC", "C", effective=False)
    assert strong_behavioral_subtype(h, "SC", "C")
    assert effective_specification(h, "SC", "m").pre == parse_formula("x > 0 || x < 0")


def test_behavioral_subtype_needs_a_superclass():
    h = parse_hierarchy(EXAMPLE1)
    with pytest.raises(HierarchyError):
        strong_behavioral_subtype(h, "C", "SC")
    with pytest.raises(HierarchyError):
        check_safe_refinement(h, "C", "SC", "m")


def test_client_conforming_specs_refine_safely():
    assert check_safe_refinement(parse_hierarchy(EXAMPLE1), "SC", "C", "m")


@settings(max_examples=150, deadline=None)
@given(specs, specs)
def test_plug_in_implies_relaxed_implies_refines(s, t):
    p = SpecPair(s, t, AB)
    if match_plug_in(p):
        assert match_relaxed_plug_in(p)
    assert match_relaxed_plug_in(p) == refines(p)


@settings(max_examples=100, deadline=None)
@given(specs, specs, specs)
def test_refinement_is_a_preorder(r, s, t):
    assert ref(r, r)
    if ref(r, s) and ref(s, t):
        assert ref(r, t)


@settings(max_examples=100, deadline=None)
@given(specs, specs, specs)
def test_join_is_commutative_and_associative(r, s, t):
    assert same(join(r, s), join(s, r))
    assert same(join(join(r, s), t), join(r, join(s, t)))


@settings(max_examples=100, deadline=None)
@given(specs, specs)
def test_join_is_an_upper_bound(s, t):
    j = join(s, t)
    assert ref(j, s) and ref(j, t)


@settings(max_examples=60, deadline=None)
@given(formulas(("a",), max_leaves=3), formulas(("a",), two_state=True, max_leaves=3),
       formulas(("a",), max_leaves=3), formulas(("a",), two_state=True, max_leaves=3))
def test_syntactic_refinement_matches_the_per_call_oracle(p1, q1, p2, q2):
    d = Domain.booleans("a")
    pair = SpecPair(MethodSpec(p1, q1), MethodSpec(p2, q2), d)
    assert refines(pair) == refines_semantic(pair)
