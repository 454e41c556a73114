"""Single-inheritance class chains annotated with method contracts and invariants."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Mapping, Optional

from .formula import (
    TRUE,
    Domain,
    FormulaError,
    Node,
    evaluate,
    implies,
    validate,
)


class HierarchyError(Exception):
    pass


class UnknownClass(HierarchyError):
    pass


class UnknownMethod(HierarchyError):
    pass


@dataclass(frozen=True)
class MethodSpec:
    pre: Node = TRUE
    post: Node = TRUE


@dataclass(frozen=True)
class ClassDef:
    name: str
    parent: Optional[str] = None
    invariant: Node = TRUE
    methods: Mapping[str, MethodSpec] = field(default_factory=dict)


@dataclass(frozen=True)
class Hierarchy:
    classes: Mapping[str, ClassDef]
    domain: Domain

    def __post_init__(self) -> None:
        for name, cd in self.classes.items():
            if cd.name != name:
                raise HierarchyError(f"class registered as {name!r} is named {cd.name!r}")
            if cd.parent is not None and cd.parent not in self.classes:
                raise HierarchyError(f"class {name}: unknown parent {cd.parent!r}")
        for name in self.classes:
            seen = set()
            c: Optional[str] = name
            while c is not None:
                if c in seen:
                    raise HierarchyError(f"inheritance cycle through {name!r}")
                seen.add(c)
                c = self.classes[c].parent
        missing = [c for c in self.classes if c not in self.domain.classes]
        if missing:
            object.__setattr__(
                self, "domain", Domain(self.domain.variables, self.domain.classes + tuple(missing), self.domain.budget)
            )
        for cd in self.classes.values():
            _validate_class(cd, self.domain)

    def __getitem__(self, name: str) -> ClassDef:
        try:
            return self.classes[name]
        except KeyError:
            raise UnknownClass(f"unknown class {name!r}") from None


def _validate_class(cd: ClassDef, domain: Domain) -> None:
    where = f"class {cd.name}"
    try:
        validate(cd.invariant, domain, allow_old=False, allow_client=False)
    except FormulaError as exc:
        raise HierarchyError(f"{where} invariant: {exc}") from exc
    for m, spec in cd.methods.items():
        try:
            validate(spec.pre, domain, allow_old=False, allow_client=False)
        except FormulaError as exc:
            raise HierarchyError(f"{where} method {m} pre: {exc}") from exc
        try:
            validate(spec.post, domain, allow_old=True, allow_client=False)
        except FormulaError as exc:
            raise HierarchyError(f"{where} method {m} post: {exc}") from exc


def supers_of(h: Hierarchy, c: str) -> list[str]:
    """Root-first chain of superclasses of ``c``, ending with ``c`` itself."""
    chain = []
    cur: Optional[str] = c
    while cur is not None:
        chain.append(cur)
        cur = h[cur].parent
    chain.reverse()
    return chain


def declares(h: Hierarchy, c: str, m: str) -> bool:
    return m in h[c].methods


def resolve_method(h: Hierarchy, dyn_class: str, m: str) -> str:
    """Most-derived class in ``supers_of(dyn_class)`` declaring ``m``."""
    for c in reversed(supers_of(h, dyn_class)):
        if m in h[c].methods:
            return c
    raise UnknownMethod(f"method {m!r} is not declared in the chain of {dyn_class!r}")


def method_spec(h: Hierarchy, c: str, m: str) -> MethodSpec:
    """The spec ``c`` sees for ``m``: its own, or the nearest inherited one."""
    return h[resolve_method(h, c, m)].methods[m]


def knows(h: Hierarchy, c: str, m: str) -> bool:
    return any(m in h[x].methods for x in supers_of(h, c))


def spec_chain(h: Hierarchy, c: str, m: str) -> list[tuple[str, MethodSpec]]:
    """Root-first (class, spec) pairs for the classes in ``supers_of(c)`` declaring ``m``."""
    chain = [(x, h[x].methods[m]) for x in supers_of(h, c) if m in h[x].methods]
    if not chain:
        raise UnknownMethod(f"method {m!r} is not declared in the chain of {c!r}")
    return chain


@dataclass(frozen=True)
class Violation:
    kind: Literal["pre", "post", "inv"]
    sup: str
    sub: str

    def as_dict(self) -> dict:
        return {"kind": self.kind, "sup": self.sup, "sub": self.sub}


def detect_hierarchy_violations(
    h: Hierarchy,
    m: str,
    c: Optional[str] = None,
    *,
    pre_state: Optional[Mapping[str, object]] = None,
    post_state: Optional[Mapping[str, object]] = None,
    differ: bool = False,
) -> list[Violation]:
    """Adjacent override pairs whose contracts break substitutability.

    Static mode (no ``pre_state``): flags ``pre_T -> pre_S``, ``post_S -> post_T``
    or ``inv_S -> inv_T`` failing as a tautology. At-state mode evaluates the
    same implications at the given state; ``differ=True`` instead flags any pair
    whose constraints merely evaluate differently.

    ``c`` selects the chain (defaults to the deepest class knowing ``m``).
    """
    if c is None:
        c = _deepest_knowing(h, m)
    chain = spec_chain(h, c, m)
    out: list[Violation] = []
    d = h.domain
    for (t, st), (s, ss) in zip(chain, chain[1:]):
        if pre_state is None:
            if not implies(st.pre, ss.pre, d):
                out.append(Violation("pre", t, s))
            if not implies(ss.post, st.post, d, two_state=True):
                out.append(Violation("post", t, s))
        else:
            if _breaks(evaluate(st.pre, pre_state), evaluate(ss.pre, pre_state), differ):
                out.append(Violation("pre", t, s))
            if post_state is not None and _breaks(
                evaluate(ss.post, pre_state, post_state), evaluate(st.post, pre_state, post_state), differ
            ):
                out.append(Violation("post", t, s))
    chain_classes = supers_of(h, c)
    for t, s in zip(chain_classes, chain_classes[1:]):
        it, is_ = h[t].invariant, h[s].invariant
        if pre_state is None:
            bad = not implies(is_, it, d)
        else:
            state = post_state if post_state is not None else pre_state
            bad = _breaks(evaluate(is_, state), evaluate(it, state), differ)
        if bad:
            out.append(Violation("inv", t, s))
    return out


def _breaks(antecedent: bool, consequent: bool, differ: bool) -> bool:
    if differ:
        return antecedent != consequent
    return antecedent and not consequent


def _deepest_knowing(h: Hierarchy, m: str) -> str:
    best, depth = None, -1
    for name in h.classes:
        if knows(h, name, m):
            n = len(supers_of(h, name))
            if n > depth:
                best, depth = name, n
    if best is None:
        raise UnknownMethod(f"method {m!r} is declared nowhere")
    return best


def parse_hierarchy(text: str) -> Hierarchy:
    """Parse DSL source and return its validated hierarchy."""
    from .dsl import parse_source

    return parse_source(text).hierarchy
