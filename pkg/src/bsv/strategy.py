"""Effective runtime constraints of an overriding method under three strategies.

* percolation: disjoin preconditions, conjoin postconditions and invariants
  along the declaring classes (Eiffel style).
* join composition: same preconditions; postconditions guarded by the
  pre-state value of their own precondition, ``old(pre_i) -> post_i``.
* client conformance: every constraint is gated by the client's static type
  through ``view_T = client(T) && pre_T``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Literal, Mapping, Optional

from .formula import Client, Implies, Node, conj, disj, evaluate, old
from .hierarchy import Hierarchy, knows, method_spec, resolve_method, spec_chain, supers_of


class Strategy(enum.Enum):
    PERCOLATION = "percolation"
    JOIN = "join"
    CLIENT = "client"

    @classmethod
    def parse(cls, name: str) -> list[Strategy]:
        """CLI names (``percolation|join|client|all``) to strategies."""
        if name == "all":
            return list(cls)
        try:
            return [cls(name)]
        except ValueError:
            raise ValueError(f"unknown strategy {name!r}") from None


@dataclass(frozen=True)
class Part:
    """One method- or class-level constraint folded into an effective one."""

    owner: str
    role: Literal["pre", "post", "inv", "view"]
    formula: Node
    guard: Optional[str] = None  # only active when this class is the bound client


@dataclass(frozen=True)
class EffectiveConstraint:
    formula: Node
    parts: tuple[Part, ...]

    @property
    def provenance(self) -> list[tuple[str, str]]:
        return [(p.owner, p.role) for p in self.parts]

    def evaluate(
        self,
        pre: Mapping[str, object],
        post: Optional[Mapping[str, object]] = None,
        client: Optional[str] = None,
    ) -> bool:
        return evaluate(self.formula, pre, post, client)

    def failing(
        self,
        pre: Mapping[str, object],
        post: Optional[Mapping[str, object]] = None,
        client: Optional[str] = None,
    ) -> list[Part]:
        """Parts that evaluate false; parts gated on another client are neutral."""
        out = []
        for p in self.parts:
            if p.guard is not None and p.guard != client:
                continue
            if not evaluate(p.formula, pre, post, client):
                out.append(p)
        return out


def view(h: Hierarchy, t: str, m: str) -> Node:
    """``client(T) && pre_T`` with ``pre_T`` the spec ``T`` sees for ``m``."""
    return Client(t) & method_spec(h, t, m).pre


def client_classes(h: Hierarchy, c: str, m: str) -> list[str]:
    """Classes in ``supers_of(c)`` whose static type can call ``m``."""
    return [t for t in supers_of(h, c) if knows(h, t, m)]


def effective_view(h: Hierarchy, c: str, m: str) -> EffectiveConstraint:
    parts = tuple(Part(t, "view", view(h, t, m), guard=t) for t in client_classes(h, c, m))
    return EffectiveConstraint(disj(p.formula for p in parts), parts)


def effective_precondition(h: Hierarchy, s: Strategy, c: str, m: str) -> EffectiveConstraint:
    """Effective precondition of ``m`` for a receiver whose dynamic class is ``c``."""
    if s is Strategy.CLIENT:
        server = resolve_method(h, c, m)
        views = effective_view(h, c, m)
        own = Part(server, "pre", h[server].methods[m].pre)
        return EffectiveConstraint(views.formula & own.formula, views.parts + (own,))
    parts = tuple(Part(x, "pre", spec.pre) for x, spec in spec_chain(h, c, m))
    return EffectiveConstraint(disj(p.formula for p in parts), parts)


def effective_postcondition(h: Hierarchy, s: Strategy, c: str, m: str) -> EffectiveConstraint:
    if s is Strategy.PERCOLATION:
        parts = tuple(Part(x, "post", spec.post) for x, spec in spec_chain(h, c, m))
    elif s is Strategy.JOIN:
        parts = tuple(Part(x, "post", Implies(old(spec.pre), spec.post)) for x, spec in spec_chain(h, c, m))
    else:
        parts = tuple(
            Part(t, "post", Implies(old(view(h, t, m)), method_spec(h, t, m).post), guard=t)
            for t in client_classes(h, c, m)
        )
    return EffectiveConstraint(conj(p.formula for p in parts), parts)


def effective_invariant(
    h: Hierarchy,
    s: Strategy,
    c: str,
    m: Optional[str] = None,
    *,
    at: Literal["entry", "exit"] = "entry",
) -> EffectiveConstraint:
    """Conjoined invariants of ``supers_of(c)``.

    Client conformance guards each ``inv_T`` with ``view_T`` for method ``m``;
    at exit the view is read from the pre-state.
    """
    if s is not Strategy.CLIENT:
        parts = tuple(Part(t, "inv", h[t].invariant) for t in supers_of(h, c))
        return EffectiveConstraint(conj(p.formula for p in parts), parts)
    if m is None:
        raise ValueError("client-conforming invariants need the method under check")
    parts = []
    for t in client_classes(h, c, m):
        guard = view(h, t, m)
        if at == "exit":
            guard = old(guard)
        parts.append(Part(t, "inv", Implies(guard, h[t].invariant), guard=t))
    return EffectiveConstraint(conj(p.formula for p in parts), tuple(parts))
