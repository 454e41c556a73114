"""Specification matching, refinement, joins and behavioral subtyping checks."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Literal, Optional

from .formula import (
    BOOL,
    FALSE,
    TRUE,
    BudgetExceeded,
    Domain,
    Implies,
    Node,
    Not,
    Var,
    conj,
    disj,
    evaluate,
    implies,
    is_tautology,
    old,
    variables,
)
from .hierarchy import Hierarchy, HierarchyError, MethodSpec, knows, method_spec, spec_chain, supers_of
from .strategy import Strategy, effective_postcondition, effective_precondition

DEFAULT_STATE_CAP = 4


@dataclass(frozen=True)
class SpecPair:
    sub: MethodSpec
    sup: MethodSpec
    domain: Domain


def match_plug_in(p: SpecPair, **kw) -> bool:
    """``(pre_sup -> pre_sub) && (post_sub -> post_sup)`` as tautologies."""
    d = p.domain
    return implies(p.sup.pre, p.sub.pre, d, **kw) and implies(p.sub.post, p.sup.post, d, two_state=True, **kw)


def match_relaxed_plug_in(p: SpecPair, **kw) -> bool:
    """Plug-in with the post clause weakened by the (pre-state) super precondition."""
    d = p.domain
    return implies(p.sup.pre, p.sub.pre, d, **kw) and is_tautology(
        Implies(old(p.sup.pre) & p.sub.post, p.sup.post), d, two_state=True, **kw
    )


def refines(p: SpecPair, **kw) -> bool:
    """``sub`` refines ``sup``: ``pre_sup -> pre_sub`` and ``old(pre_sup) -> (post_sub -> post_sup)``."""
    d = p.domain
    return implies(p.sup.pre, p.sub.pre, d, **kw) and is_tautology(
        Implies(old(p.sup.pre), Implies(p.sub.post, p.sup.post)), d, two_state=True, **kw
    )


# ---------------------------------------------------------------- semantic oracle


def _states(formulas: Iterable[Node], domain: Domain, cap: int) -> list[dict]:
    names = sorted(set().union(*(variables(f) for f in formulas)))
    count = 1
    for n in names:
        count *= len(domain.values(n))
    if count > cap:
        raise BudgetExceeded(f"{count} states exceed the relation-enumeration cap of {cap}")
    return [dict(zip(names, vals)) for vals in itertools.product(*(domain.values(n) for n in names))]


def refines_semantic(
    p: SpecPair,
    *,
    cap: int = DEFAULT_STATE_CAP,
    model: Literal["per-call", "whole-relation"] = "per-call",
) -> bool:
    """Every correct implementation of ``sub`` also satisfies ``sup``.

    An implementation is a relation between pre- and post-states. It is
    correct for ``<P, Q>`` when every pre-state satisfying ``P`` has at least
    one outcome and every outcome of such a state satisfies ``Q``; states
    violating ``P`` are unconstrained.

    ``per-call`` quantifies the implementation separately for each call
    (pre-state), which is what makes the two-condition syntactic check exact.
    ``whole-relation`` quantifies over entire relations, so a ``sub`` that is
    unimplementable in one state refines everything vacuously.
    """
    states = _states((p.sub.pre, p.sub.post, p.sup.pre, p.sup.post), p.domain, cap)
    n = len(states)
    pre_sub = [evaluate(p.sub.pre, s) for s in states]
    pre_sup = [evaluate(p.sup.pre, s) for s in states]
    post_sub = [[evaluate(p.sub.post, s, t) for t in states] for s in states]
    post_sup = [[evaluate(p.sup.post, s, t) for t in states] for s in states]

    def ok(pre_holds: bool, post_row: list[bool], outcomes: int) -> bool:
        if not pre_holds:
            return True
        return outcomes != 0 and all(post_row[j] for j in range(n) if outcomes >> j & 1)

    subsets = range(1 << n)
    if model == "per-call":
        for i in range(n):
            for outcomes in subsets:
                if ok(pre_sub[i], post_sub[i], outcomes) and not ok(pre_sup[i], post_sup[i], outcomes):
                    return False
        return True
    for relation in itertools.product(subsets, repeat=n):
        if all(ok(pre_sub[i], post_sub[i], relation[i]) for i in range(n)):
            if not all(ok(pre_sup[i], post_sup[i], relation[i]) for i in range(n)):
                return False
    return True


# ---------------------------------------------------------------- joins


def join(s: MethodSpec, t: MethodSpec) -> MethodSpec:
    """``<pre_T || pre_S, (old(pre_T) -> post_T) && (old(pre_S) -> post_S)>``."""
    return MethodSpec(t.pre | s.pre, Implies(old(t.pre), t.post) & Implies(old(s.pre), s.post))


def effective_specification(h: Hierarchy, c: str, m: str) -> MethodSpec:
    """Join of the specs of ``m`` over the declaring classes in ``supers_of(c)``."""
    chain = spec_chain(h, c, m)
    spec = chain[0][1]
    for _, sub in chain[1:]:
        spec = join(sub, spec)
    return spec


def effective_invariant_formula(h: Hierarchy, c: str) -> Node:
    return conj(h[t].invariant for t in supers_of(h, c))


def _methods_of(h: Hierarchy, c: str) -> list[str]:
    names = set()
    for t in supers_of(h, c):
        names.update(h[t].methods)
    return sorted(names)


def strong_behavioral_subtype(
    h: Hierarchy,
    s: str,
    t: str,
    methods: Optional[Iterable[str]] = None,
    *,
    effective: bool = True,
) -> bool:
    """Per-method refinement plus invariant implication between ``s`` and its super ``t``.

    With ``effective=False`` the raw method-level specs and class invariants
    are compared instead of the inherited (joined) ones.
    """
    if t not in supers_of(h, s):
        raise HierarchyError(f"{t!r} is not a superclass of {s!r}")
    d = h.domain
    for m in methods if methods is not None else _methods_of(h, t):
        if effective:
            sub, sup = effective_specification(h, s, m), effective_specification(h, t, m)
        else:
            sub, sup = method_spec(h, s, m), method_spec(h, t, m)
        if not refines(SpecPair(sub, sup, d)):
            return False
    if effective:
        inv_s, inv_t = effective_invariant_formula(h, s), effective_invariant_formula(h, t)
    else:
        inv_s, inv_t = h[s].invariant, h[t].invariant
    return implies(inv_s, inv_t, d)


def check_safe_refinement(h: Hierarchy, s: str, t: str, m: str) -> bool:
    """Client-conforming specs of ``s`` safely refine those of its super ``t``.

    Restricted to states where ``s``'s own precondition holds:
    (1) ``effConPre_T -> effConPre_S`` under every client binding;
    (2) ``old(effConPre_T) -> (effConPost_S -> post_T)`` with the client bound to ``t``.
    """
    if t not in supers_of(h, s):
        raise HierarchyError(f"{t!r} is not a superclass of {s!r}")
    if not (knows(h, s, m) and knows(h, t, m)):
        raise HierarchyError(f"method {m!r} unknown to {s!r} or {t!r}")
    d = h.domain
    pre_s = method_spec(h, s, m).pre
    sub_pre = effective_precondition(h, Strategy.CLIENT, s, m).formula
    sub_post = effective_postcondition(h, Strategy.CLIENT, s, m).formula
    sup_pre = effective_precondition(h, Strategy.CLIENT, t, m).formula
    sup_post = method_spec(h, t, m).post
    if not is_tautology(Implies(pre_s, Implies(sup_pre, sub_pre)), d):
        return False
    cond2 = Implies(old(pre_s), Implies(old(sup_pre), Implies(sub_post, sup_post)))
    return is_tautology(cond2, d, two_state=True, clients=(t,))


# ---------------------------------------------------------------- lattice check


def truth_functions(atoms: list[str]) -> list[Node]:
    """Every boolean function of ``atoms`` as a formula (constants first)."""
    rows = list(itertools.product((False, True), repeat=len(atoms)))
    out = []
    for bits in itertools.product((False, True), repeat=len(rows)):
        if not any(bits):
            out.append(FALSE)
            continue
        if all(bits):
            out.append(TRUE)
            continue
        minterms = []
        for row, on in zip(rows, bits):
            if on:
                minterms.append(conj(Var(a) if v else Not(Var(a)) for a, v in zip(atoms, row)))
        out.append(disj(minterms))
    return out


def spec_space(atom_count: int) -> tuple[list[MethodSpec], Domain]:
    atoms = [f"x{i}" for i in range(atom_count)]
    fns = truth_functions(atoms)
    specs = [MethodSpec(p, q) for p in fns for q in fns]
    return specs, Domain({a: BOOL for a in atoms})


def verify_join_lub(
    domain_cap: int = 1,
    *,
    third_samples: Optional[int] = None,
    pair_samples: Optional[int] = None,
    seed: int = 0,
) -> dict:
    """Check that ``join`` is an upper bound and the least one in the refinement order.

    Specs range over all ``<pre, post>`` pairs of truth functions of
    ``domain_cap`` atoms. Pairs and third specs are enumerated exhaustively
    unless a sample size is given.
    """
    if domain_cap < 1 or domain_cap > 2:
        raise BudgetExceeded("join lattice check supports 1 or 2 atoms")
    specs, d = spec_space(domain_cap)
    rng = random.Random(seed)
    pairs = list(itertools.product(range(len(specs)), repeat=2))
    if pair_samples is not None and pair_samples < len(pairs):
        pairs = rng.sample(pairs, pair_samples)
    counterexamples = []
    upper = lub = 0
    for i, j in pairs:
        s, t = specs[i], specs[j]
        joined = join(s, t)
        upper += 1
        if not (refines(SpecPair(joined, t, d)) and refines(SpecPair(joined, s, d))):
            counterexamples.append({"kind": "upper-bound", "s": i, "t": j})
            continue
        thirds = range(len(specs))
        if third_samples is not None and third_samples < len(specs):
            thirds = rng.sample(range(len(specs)), third_samples)
        for k in thirds:
            u = specs[k]
            lub += 1
            if refines(SpecPair(u, s, d)) and refines(SpecPair(u, t, d)) and not refines(SpecPair(u, joined, d)):
                counterexamples.append({"kind": "least", "s": i, "t": j, "u": k})
    return {
        "property": "join-lub",
        "atoms": domain_cap,
        "specs": len(specs),
        "pairs": upper,
        "triples": lub,
        "counterexamples": sorted(counterexamples, key=lambda c: (c["kind"], c["s"], c["t"], c.get("u", -1))),
    }
