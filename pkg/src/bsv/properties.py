"""Brute-force property suites: propositional facts, lattice and refinement theorems.

Every suite returns a :class:`PropertyResult` listing how many instances were
checked and any counterexamples found. Hierarchy counterexamples carry DSL
source so they can be replayed with ``bsv check`` / ``bsv simulate``.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .dsl import serialize
from .formula import (
    BOOL,
    DEFAULT_BUDGET,
    FALSE,
    TRUE,
    Domain,
    Iff,
    Node,
    Not,
    Var,
    conj,
    counterexample,
    disj,
    equivalent,
    implies,
    old,
    substitute,
    variables,
)
from .hierarchy import ClassDef, Hierarchy, MethodSpec, knows, supers_of
from .matcher import (
    SpecPair,
    check_safe_refinement,
    match_relaxed_plug_in,
    refines,
    refines_semantic,
    strong_behavioral_subtype,
    truth_functions,
    verify_join_lub,
)
from .runtime import Anomaly, run_call
from .strategy import Strategy, effective_postcondition, effective_precondition, effective_view
from .syntax import parse_formula

METHOD = "m"
CHAIN = ("C", "SC", "SSC")

TABLE1 = {
    "T1": "A && B -> A",
    "T2": "A -> A || B",
    "T3": "(true && A) <-> A",
    "T4": "(false || A) <-> A",
    "T5": "(A -> true) <-> true",
    "T6": "(A -> false) <-> !A",
    "T7": "(true -> A) <-> A",
    "T8": "(false -> A) <-> true",
    "T9": "(A -> B) <-> (!A || B)",
    "T10": "(A -> B) <-> (!B -> !A)",
    "T11": "(A -> B) && (B -> C) -> (A -> C)",
    "T12": "A && (A -> B) <-> A && B",
    "T13": "A && (B -> A) <-> A",
    "T14": "(A && B -> C) <-> (A -> B -> C)",
    "T15": "(A -> B -> C) <-> (B -> A -> C)",
    "T16": "(A -> B) && (A -> C) <-> (A -> B && C)",
    "T17": "(A -> C) && (B -> C) <-> (A || B -> C)",
    "T18": "B -> A -> B",
    "T19": "(A -> C) -> (A && B -> C)",
    "T20": "(A -> C) && (B -> D) -> (A && B -> C && D)",
}


class UnknownProperty(ValueError):
    pass


@dataclass
class PropertyResult:
    id: str
    title: str
    passed: bool
    checked: int
    counterexamples: list = field(default_factory=list)
    seconds: float = 0.0
    notes: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "passed": self.passed,
            "checked": self.checked,
            "counterexamples": self.counterexamples,
            "seconds": round(self.seconds, 4),
            "notes": self.notes,
        }


# ---------------------------------------------------------------- symbolic hierarchies


def symbolic_chain(declares: tuple[bool, ...], budget: int = DEFAULT_BUDGET) -> Hierarchy:
    """``C <- SC <- SSC`` truncated to ``len(declares)`` classes, constraints as fresh atoms.

    ``declares[i]`` says whether class ``i`` overrides ``m`` (the root always does).
    """
    names = CHAIN[: len(declares)]
    classes = {}
    atoms = {}
    for i, (n, d) in enumerate(zip(names, declares)):
        methods = {}
        if d or i == 0:
            methods[METHOD] = MethodSpec(Var(f"pre_{n}"), Var(f"post_{n}"))
            atoms[f"pre_{n}"] = atoms[f"post_{n}"] = BOOL
        atoms[f"inv_{n}"] = BOOL
        classes[n] = ClassDef(n, names[i - 1] if i else None, Var(f"inv_{n}"), methods)
    return Hierarchy(classes, Domain(atoms, names, budget))


def chain_shapes(max_depth: int = 3) -> list[tuple[bool, ...]]:
    shapes = []
    for depth in range(1, max_depth + 1):
        for rest in itertools.product((True, False), repeat=depth - 1):
            shapes.append((True,) + rest)
    return shapes


def random_formula(rng: random.Random, atoms: list[str], depth: int, *, two_state: bool = False) -> Node:
    if depth == 0 or rng.random() < 0.3:
        r = rng.random()
        if r < 0.1:
            return rng.choice((TRUE, FALSE))
        leaf: Node = Var(rng.choice(atoms))
        if two_state and rng.random() < 0.4:
            leaf = old(leaf)
        return leaf
    if rng.random() < 0.2:
        return Not(random_formula(rng, atoms, depth - 1, two_state=two_state))
    a = random_formula(rng, atoms, depth - 1, two_state=two_state)
    b = random_formula(rng, atoms, depth - 1, two_state=two_state)
    op = rng.randrange(4)
    if op == 0:
        return a & b
    if op == 1:
        return a | b
    if op == 2:
        return a >> b
    return Iff(a, b)


def random_hierarchy(
    rng: random.Random,
    *,
    depth: int = 3,
    max_atoms: int = 3,
    formula_depth: int = 2,
    budget: int = DEFAULT_BUDGET,
) -> Hierarchy:
    """A random single-inheritance chain over at most ``max_atoms`` boolean atoms."""
    atoms = [f"a{i}" for i in range(rng.randint(1, max_atoms))]
    names = CHAIN[:depth] if depth <= len(CHAIN) else tuple(f"K{i}" for i in range(depth))
    classes = {}
    for i, n in enumerate(names):
        methods = {}
        if i == 0 or rng.random() < 0.75:
            pre = random_formula(rng, atoms, formula_depth)
            post = random_formula(rng, atoms, formula_depth, two_state=True)
            methods[METHOD] = MethodSpec(pre, post)
        inv = random_formula(rng, atoms, 1) if rng.random() < 0.5 else TRUE
        classes[n] = ClassDef(n, names[i - 1] if i else None, inv, methods)
    return Hierarchy(classes, Domain({a: BOOL for a in atoms}, names, budget))


def random_corpus(count: int, seed: int = 0, **kw) -> list[Hierarchy]:
    rng = random.Random(seed)
    return [random_hierarchy(rng, **kw) for _ in range(count)]


def _pairs(h: Hierarchy) -> Iterable[tuple[str, str]]:
    """``(sub, super)`` pairs along the chain, reflexive pairs included."""
    for s in h.classes:
        for t in supers_of(h, s):
            yield s, t


# ---------------------------------------------------------------- suites


def _table1(fid: str) -> Callable[..., tuple[int, list]]:
    def run(budget: int, **_) -> tuple[int, list]:
        f = parse_formula(TABLE1[fid])
        d = Domain({v: BOOL for v in sorted(variables(f))}, budget=budget)
        return 1, _cex(f, d)

    return run


def _cex(f: Node, d: Domain, **kw) -> list:
    found = counterexample(f, d, **kw)
    return [] if found is None else [found.as_dict()]


def _appendix_a(budget: int, **_) -> tuple[int, list]:
    checked = 0
    bad = []
    for shape in chain_shapes():
        if not all(shape):
            continue
        h = symbolic_chain(shape, budget)
        names = list(h.classes)
        for k, c in enumerate(names):
            chain = names[: k + 1]
            pre = effective_precondition(h, Strategy.PERCOLATION, c, METHOD).formula
            post = effective_postcondition(h, Strategy.PERCOLATION, c, METHOD).formula
            checks = {
                "effPre-lub": equivalent(pre, disj(Var(f"pre_{n}") for n in chain), h.domain),
                "effPost-glb": equivalent(post, conj(Var(f"post_{n}") for n in chain), h.domain),
            }
            if k:
                parent = names[k - 1]
                ppre = effective_precondition(h, Strategy.PERCOLATION, parent, METHOD).formula
                ppost = effective_postcondition(h, Strategy.PERCOLATION, parent, METHOD).formula
                checks["pre-monotone"] = implies(ppre, pre, h.domain)
                checks["post-monotone"] = implies(post, ppost, h.domain)
            for name, ok in checks.items():
                checked += 1
                if not ok:
                    bad.append({"check": name, "class": c, "source": serialize(h)})
    return checked, bad


def _appendix_b(budget: int, *, atoms: int = 1, third_samples: Optional[int] = None, seed: int = 0, **_) -> tuple:
    report = verify_join_lub(atoms, third_samples=third_samples, seed=seed)
    return report["pairs"] + report["triples"], report["counterexamples"]


def _appendix_c(budget: int, **_) -> tuple[int, list]:
    checked = 0
    bad = []
    for shape in chain_shapes():
        h = symbolic_chain(shape, budget)
        d = h.domain
        for c in h.classes:
            pre = effective_precondition(h, Strategy.PERCOLATION, c, METHOD).formula
            con_pre = effective_precondition(h, Strategy.CLIENT, c, METHOD).formula
            post = effective_postcondition(h, Strategy.PERCOLATION, c, METHOD).formula
            g_post = effective_postcondition(h, Strategy.JOIN, c, METHOD).formula
            con_post = effective_postcondition(h, Strategy.CLIENT, c, METHOD).formula
            checks = {
                "effConPre->effPre": implies(con_pre, pre, d),
                "effPost->g-effPost": implies(post, g_post, d, two_state=True),
                "g-effPost->effConPost": implies(g_post, con_post, d, two_state=True),
            }
            for name, ok in checks.items():
                checked += 1
                if not ok:
                    bad.append({"check": name, "class": c, "shape": list(shape), "source": serialize(h)})
    return checked, bad


def _lemma(budget: int, **_) -> tuple[int, list]:
    checked = 0
    bad = []
    for shape in chain_shapes():
        h = symbolic_chain(shape, budget)
        for s, t in _pairs(h):
            checked += 1
            if not implies(effective_view(h, t, METHOD).formula, effective_view(h, s, METHOD).formula, h.domain):
                bad.append({"sub": s, "super": t, "shape": list(shape), "source": serialize(h)})
    return checked, bad


def worked_evaluations(budget: int = DEFAULT_BUDGET) -> list[dict]:
    """Guarded and client-conforming postconditions under fixed post truth values."""
    two = symbolic_chain((True, True), budget)
    three = symbolic_chain((True, True, True), budget)

    def fix(f: Node, posts: dict[str, bool]) -> Node:
        return substitute(f, {f"post_{k}": TRUE if v else FALSE for k, v in posts.items()})

    g_sc = effective_postcondition(two, Strategy.JOIN, "SC", METHOD).formula
    g_ssc = effective_postcondition(three, Strategy.JOIN, "SSC", METHOD).formula
    con_sc = effective_postcondition(two, Strategy.CLIENT, "SC", METHOD).formula
    cases = [
        ("P4 g-effPost_SC == !pre_C", fix(g_sc, {"C": False, "SC": True}), Not(old(Var("pre_C"))), two, None),
        ("P5 g-effPost_SC == !pre_SC", fix(g_sc, {"C": True, "SC": False}), Not(old(Var("pre_SC"))), two, None),
        (
            "P6 g-effPost_SSC == !pre_SSC",
            fix(g_ssc, {"C": True, "SC": True, "SSC": False}),
            Not(old(Var("pre_SSC"))),
            three,
            None,
        ),
        ("P4 effConPost_SC == true for cl_SC", fix(con_sc, {"C": False, "SC": True}), TRUE, two, ("SC",)),
    ]
    out = []
    for label, got, want, h, clients in cases:
        ok = equivalent(got, want, h.domain, two_state=True, clients=clients)
        out.append({"case": label, "passed": ok})
    return out


def _worked(budget: int, **_) -> tuple[int, list]:
    rows = worked_evaluations(budget)
    return len(rows), [r for r in rows if not r["passed"]]


def one_variable_specs(*, two_state_posts: bool = True) -> tuple[list[MethodSpec], Domain]:
    """All ``<pre, post>`` over one boolean ``x``; posts may read ``old(x)``."""
    pres = truth_functions(["x"])
    if two_state_posts:
        posts = [substitute(f, {"p": old(Var("x"))}) for f in truth_functions(["p", "x"])]
    else:
        posts = pres
    return [MethodSpec(p, q) for p in pres for q in posts], Domain({"x": BOOL})


def _theorem1_oracle(budget: int, *, two_state_posts: bool = True, **_) -> tuple:
    specs, d = one_variable_specs(two_state_posts=two_state_posts)
    d = d.with_budget(budget)
    bad = []
    whole = 0
    checked = 0
    for i, sub in enumerate(specs):
        for j, sup in enumerate(specs):
            p = SpecPair(sub, sup, d)
            syn = refines(p)
            checked += 1
            if syn != refines_semantic(p):
                bad.append({"sub": i, "sup": j, "refines": syn})
            if syn != refines_semantic(p, model="whole-relation"):
                whole += 1
    return checked, bad, {"whole_relation_disagreements": whole}


def _theorem1_relaxed(budget: int, **_) -> tuple[int, list]:
    specs, d = one_variable_specs()
    d = d.with_budget(budget)
    bad = []
    n = 0
    for i, sub in enumerate(specs):
        for j, sup in enumerate(specs):
            n += 1
            p = SpecPair(sub, sup, d)
            if match_relaxed_plug_in(p) != refines(p):
                bad.append({"sub": i, "sup": j})
    return n, bad


def _theorem3(budget: int, *, samples: int = 1000, seed: int = 0, **_) -> tuple[int, list]:
    checked = 0
    bad = []
    for k, h in enumerate(random_corpus(samples, seed, budget=budget)):
        for s, t in _pairs(h):
            checked += 1
            if not strong_behavioral_subtype(h, s, t, [METHOD]):
                bad.append({"hierarchy": k, "sub": s, "super": t, "source": serialize(h)})
    return checked, bad


def _prop1(budget: int, *, samples: int = 1000, seed: int = 0, **_) -> tuple[int, list]:
    checked = 0
    bad = []
    for k, h in enumerate(random_corpus(samples, seed, budget=budget)):
        for s, t in _pairs(h):
            if not (knows(h, s, METHOD) and knows(h, t, METHOD)):
                continue
            checked += 1
            if not check_safe_refinement(h, s, t, METHOD):
                bad.append({"hierarchy": k, "sub": s, "super": t, "source": serialize(h)})
    return checked, bad


def truth_configurations(h: Hierarchy) -> Iterable[dict[str, bool]]:
    names = sorted(h.domain.variables)
    for bits in itertools.product((False, True), repeat=len(names)):
        yield dict(zip(names, bits))


def _calls(h: Hierarchy) -> list[tuple[str, str]]:
    return [(c, r) for r in h.classes for c in supers_of(h, r) if knows(h, c, METHOD)]


def _definition6(budget: int, **_) -> tuple[int, list]:
    forbidden = {Anomaly.SURPRISING_EXECUTION, Anomaly.UNSAFE_EXECUTION}
    checked = 0
    bad = []
    for shape in chain_shapes():
        h = symbolic_chain(shape, budget)
        calls = _calls(h)
        for state in truth_configurations(h):
            for client, receiver in calls:
                o = run_call(h, client, receiver, METHOD, state, state, Strategy.CLIENT)
                checked += 1
                tags = set(o.anomalies)
                foreign = Anomaly.SURPRISING_FAILURE in tags and Anomaly.FOREIGN_OBLIGATION in tags
                if tags & forbidden or foreign:
                    bad.append(
                        {
                            "shape": list(shape),
                            "call": f"cl_{client}.o_{receiver}",
                            "state": state,
                            "anomalies": sorted(a.value for a in tags),
                        }
                    )
    return checked, bad


def _acceptance_chain(budget: int, **_) -> tuple[int, list]:
    """Percolation acceptance implies join acceptance implies client-conforming acceptance."""
    checked = 0
    bad = []
    for shape in chain_shapes():
        h = symbolic_chain(shape, budget)
        calls = _calls(h)
        posts = {
            (s, r): effective_postcondition(h, s, r, METHOD) for s in Strategy for r in h.classes
        }
        for state in truth_configurations(h):
            for client, receiver in calls:
                verdict = [posts[(s, receiver)].evaluate(state, state, client) for s in Strategy]
                checked += 1
                perc, join, con = verdict
                if (perc and not join) or (join and not con):
                    bad.append({"shape": list(shape), "call": f"cl_{client}.o_{receiver}", "state": state})
    return checked, bad


SUITES: dict[str, tuple[str, Callable]] = {
    **{fid: (f"propositional fact {fid}: {src}", _table1(fid)) for fid, src in TABLE1.items()},
    "appendixA-a": ("percolation bounds are exact (lub of pres, glb of posts)", _appendix_a),
    "appendixA-b": ("join is the least upper bound in the refinement order", _appendix_b),
    "appendixA-c": ("effConPre -> effPre and effPost -> g-effPost -> effConPost", _appendix_c),
    "worked-evaluations": ("guarded postconditions under fixed post values", _worked),
    "theorem1-oracle": ("syntactic refinement agrees with the relational oracle", _theorem1_oracle),
    "theorem1-relaxed": ("relaxed plug-in match coincides with refinement", _theorem1_relaxed),
    "theorem3": ("specification inheritance yields strong behavioral subtypes", _theorem3),
    "lemma": ("effView of a super implies effView of a sub", _lemma),
    "prop1": ("client-conforming specs safely refine their supers", _prop1),
    "definition6": ("client conformance never surprises, endangers or burdens a client", _definition6),
    "acceptance-chain": ("acceptance grows from percolation to join to client conformance", _acceptance_chain),
}


def expand_suite(spec: Optional[Iterable[str]]) -> list[str]:
    """Resolve ids, ``T3..T9`` ranges and ``all`` into a list of known property ids."""
    if spec is None:
        return list(SUITES)
    out: list[str] = []
    for item in spec:
        for part in (p.strip() for p in item.split(",")):
            if not part:
                continue
            if part == "all":
                out.extend(SUITES)
            elif part == "table1":
                out.extend(TABLE1)
            elif ".." in part:
                lo, hi = part.split("..", 1)
                try:
                    a, b = int(lo.lstrip("T")), int(hi.lstrip("T"))
                except ValueError:
                    raise UnknownProperty(f"bad property range {part!r}") from None
                ids = [f"T{k}" for k in range(a, b + 1)]
                if not (lo.startswith("T") and hi.startswith("T")) or any(i not in TABLE1 for i in ids) or a > b:
                    raise UnknownProperty(f"bad property range {part!r}")
                out.extend(ids)
            elif part in SUITES:
                out.append(part)
            else:
                raise UnknownProperty(f"unknown property id {part!r}")
    return list(dict.fromkeys(out))


def run_property(pid: str, budget: int = DEFAULT_BUDGET, **options) -> PropertyResult:
    if pid not in SUITES:
        raise UnknownProperty(f"unknown property id {pid!r}")
    title, fn = SUITES[pid]
    start = time.perf_counter()
    result = fn(budget, **options)
    elapsed = time.perf_counter() - start
    checked, bad = result[0], result[1]
    notes = result[2] if len(result) > 2 else {}
    return PropertyResult(pid, title, not bad, checked, bad, elapsed, notes)


def verify_properties(
    suite: Optional[Iterable[str]] = None, budget: int = DEFAULT_BUDGET, **options
) -> list[PropertyResult]:
    return [run_property(pid, budget, **options) for pid in expand_suite(suite)]
