"""Two-state assertion formulas and exhaustive checking over finite domains.

A formula is an immutable tree. Variables outside ``old(...)`` read the
post-state when one is supplied; variables inside ``old(...)`` always read
the pre-state. ``client(C)`` is true iff the bound client class is ``C``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Optional, Union

from . import kernel

DEFAULT_BUDGET = 2**20

CMP_OPS = ("<", "<=", "==", "!=", ">=", ">")


class FormulaError(Exception):
    """Base class for formula construction and evaluation errors."""


class UndeclaredVariable(FormulaError):
    pass


class MissingPostState(FormulaError):
    pass


class UnboundClient(FormulaError):
    pass


class SortError(FormulaError):
    pass


class OldError(FormulaError):
    pass


class BudgetExceeded(FormulaError):
    pass


class Node:
    """Operator sugar shared by all formula nodes."""

    __slots__ = ()

    def __and__(self, other: Node) -> And:
        return And(self, other)

    def __or__(self, other: Node) -> Or:
        return Or(self, other)

    def __invert__(self) -> Not:
        return Not(self)

    def __rshift__(self, other: Node) -> Implies:
        return Implies(self, other)


@dataclass(frozen=True)
class Const(Node):
    value: bool


@dataclass(frozen=True)
class Var(Node):
    name: str


@dataclass(frozen=True)
class IntLit(Node):
    value: int


@dataclass(frozen=True)
class Client(Node):
    cls: str


@dataclass(frozen=True)
class Old(Node):
    arg: Node


@dataclass(frozen=True)
class Not(Node):
    arg: Node


@dataclass(frozen=True)
class And(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Or(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Implies(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Iff(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Cmp(Node):
    op: str
    left: Node
    right: Node

    def __post_init__(self) -> None:
        if self.op not in CMP_OPS:
            raise FormulaError(f"unknown comparison operator {self.op!r}")


Formula = Node
TRUE = Const(True)
FALSE = Const(False)

_BINARY = (And, Or, Implies, Iff, Cmp)


def conj(parts: Iterable[Node]) -> Node:
    """Left-folded conjunction; the empty conjunction is ``true``."""
    result: Optional[Node] = None
    for p in parts:
        result = p if result is None else And(result, p)
    return TRUE if result is None else result


def disj(parts: Iterable[Node]) -> Node:
    """Left-folded disjunction; the empty disjunction is ``false``."""
    result: Optional[Node] = None
    for p in parts:
        result = p if result is None else Or(result, p)
    return FALSE if result is None else result


def children(f: Node) -> tuple[Node, ...]:
    if isinstance(f, (Old, Not)):
        return (f.arg,)
    if isinstance(f, _BINARY):
        return (f.left, f.right)
    return ()


def walk(f: Node) -> Iterator[Node]:
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def has_old(f: Node) -> bool:
    return any(isinstance(n, Old) for n in walk(f))


def has_client(f: Node) -> bool:
    return any(isinstance(n, Client) for n in walk(f))


def variables(f: Node) -> set[str]:
    return {n.name for n in walk(f) if isinstance(n, Var)}


def client_classes(f: Node) -> set[str]:
    return {n.cls for n in walk(f) if isinstance(n, Client)}


def rebuild(f: Node, kids: tuple[Node, ...]) -> Node:
    if isinstance(f, Old):
        return Old(kids[0])
    if isinstance(f, Not):
        return Not(kids[0])
    if isinstance(f, Cmp):
        return Cmp(f.op, kids[0], kids[1])
    if isinstance(f, _BINARY):
        return type(f)(kids[0], kids[1])
    return f


def substitute(f: Node, mapping: Mapping[str, Node]) -> Node:
    """Replace variables by formulas (used to instantiate symbolic atoms)."""
    if isinstance(f, Var):
        return mapping.get(f.name, f)
    kids = children(f)
    if not kids:
        return f
    return rebuild(f, tuple(substitute(k, mapping) for k in kids))


def old(f: Node) -> Node:
    """Wrap ``f`` so it reads the pre-state; constants and already-old nodes pass through."""
    if isinstance(f, (Const, IntLit, Old)):
        return f
    if has_old(f):
        raise OldError("old() may not nest")
    return Old(f)


def strip_old(f: Node) -> Node:
    if isinstance(f, Old):
        return strip_old(f.arg)
    kids = children(f)
    if not kids:
        return f
    return rebuild(f, tuple(strip_old(k) for k in kids))


# ---------------------------------------------------------------- domains


@dataclass(frozen=True)
class IntRange:
    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise FormulaError(f"empty integer range [{self.lo}..{self.hi}]")

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def __str__(self) -> str:
        return f"int[{self.lo}..{self.hi}]"


BOOL = "bool"
Sort = Union[IntRange, str]


@dataclass(frozen=True)
class Domain:
    variables: Mapping[str, Sort] = field(default_factory=dict)
    classes: tuple[str, ...] = ()
    budget: int = DEFAULT_BUDGET

    def __post_init__(self) -> None:
        for name, sort in self.variables.items():
            if sort != BOOL and not isinstance(sort, IntRange):
                raise FormulaError(f"bad sort for {name}: {sort!r}")

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.variables.items(), key=lambda kv: kv[0])), self.classes, self.budget))

    @classmethod
    def booleans(cls, *names: str, classes: Iterable[str] = (), budget: int = DEFAULT_BUDGET) -> Domain:
        return cls({n: BOOL for n in names}, tuple(classes), budget)

    def sort(self, name: str) -> Sort:
        try:
            return self.variables[name]
        except KeyError:
            raise UndeclaredVariable(f"undeclared variable {name!r}") from None

    def values(self, name: str) -> range:
        sort = self.sort(name)
        if sort == BOOL:
            return range(2)
        return range(sort.lo, sort.hi + 1)

    def merge(self, other: Domain) -> Domain:
        vs = dict(self.variables)
        for k, v in other.variables.items():
            if k in vs and vs[k] != v:
                raise FormulaError(f"conflicting sorts for {k!r}")
            vs[k] = v
        classes = self.classes + tuple(c for c in other.classes if c not in self.classes)
        return Domain(vs, classes, min(self.budget, other.budget))

    def with_budget(self, budget: int) -> Domain:
        return Domain(self.variables, self.classes, budget)

    def check_assignment(self, assignment: Mapping[str, object]) -> None:
        for name, value in assignment.items():
            sort = self.sort(name)
            if sort == BOOL:
                if value not in (0, 1, True, False):
                    raise SortError(f"{name} expects a boolean, got {value!r}")
            elif not (isinstance(value, int) and sort.lo <= value <= sort.hi):
                raise SortError(f"{name}={value!r} outside {sort}")


# ---------------------------------------------------------------- validation


def validate(f: Node, domain: Domain, *, allow_old: bool = True, allow_client: bool = True) -> None:
    """Sort-check ``f`` against ``domain`` and enforce old()/client() placement."""
    _check_bool(f, domain, allow_old, allow_client, in_old=False)


def _check_bool(f: Node, d: Domain, allow_old: bool, allow_client: bool, in_old: bool) -> None:
    if isinstance(f, Const):
        return
    if isinstance(f, Var):
        if d.sort(f.name) != BOOL:
            raise SortError(f"integer variable {f.name!r} used as a condition")
        return
    if isinstance(f, Client):
        if not allow_client:
            raise FormulaError("client() is not allowed here")
        if d.classes and f.cls not in d.classes:
            raise FormulaError(f"client() names unknown class {f.cls!r}")
        return
    if isinstance(f, Old):
        if not allow_old:
            raise OldError("old() is only allowed in postconditions")
        if in_old:
            raise OldError("old() may not nest")
        _check_bool(f.arg, d, allow_old, allow_client, True)
        return
    if isinstance(f, Not):
        _check_bool(f.arg, d, allow_old, allow_client, in_old)
        return
    if isinstance(f, Cmp):
        _check_term(f.left, d, allow_old, in_old)
        _check_term(f.right, d, allow_old, in_old)
        return
    if isinstance(f, (And, Or, Implies, Iff)):
        _check_bool(f.left, d, allow_old, allow_client, in_old)
        _check_bool(f.right, d, allow_old, allow_client, in_old)
        return
    raise SortError(f"{type(f).__name__} is not a condition")


def _check_term(t: Node, d: Domain, allow_old: bool, in_old: bool) -> None:
    if isinstance(t, IntLit):
        return
    if isinstance(t, Var):
        if d.sort(t.name) == BOOL:
            raise SortError(f"boolean variable {t.name!r} used in a comparison")
        return
    if isinstance(t, Old):
        if not allow_old:
            raise OldError("old() is only allowed in postconditions")
        if in_old:
            raise OldError("old() may not nest")
        _check_term(t.arg, d, allow_old, True)
        return
    raise SortError(f"{type(t).__name__} is not an integer term")


# ---------------------------------------------------------------- evaluation


def evaluate(
    f: Node,
    pre: Mapping[str, object],
    post: Optional[Mapping[str, object]] = None,
    client: Optional[str] = None,
) -> bool:
    """Truth value of ``f``; old() reads ``pre``, everything else ``post`` (or ``pre``)."""
    if post is None and has_old(f):
        raise MissingPostState("old() needs a post-state")
    return _truth(f, pre, pre if post is None else post, client)


def _lookup(state: Mapping[str, object], name: str) -> object:
    try:
        return state[name]
    except KeyError:
        raise UndeclaredVariable(f"undeclared variable {name!r}") from None


def _truth(f: Node, pre: Mapping, cur: Mapping, client: Optional[str]) -> bool:
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Var):
        return bool(_lookup(cur, f.name))
    if isinstance(f, Cmp):
        a = _term(f.left, pre, cur)
        b = _term(f.right, pre, cur)
        op = f.op
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == "==":
            return a == b
        if op == "!=":
            return a != b
        if op == ">=":
            return a >= b
        return a > b
    if isinstance(f, Not):
        return not _truth(f.arg, pre, cur, client)
    if isinstance(f, And):
        return _truth(f.left, pre, cur, client) and _truth(f.right, pre, cur, client)
    if isinstance(f, Or):
        return _truth(f.left, pre, cur, client) or _truth(f.right, pre, cur, client)
    if isinstance(f, Implies):
        return (not _truth(f.left, pre, cur, client)) or _truth(f.right, pre, cur, client)
    if isinstance(f, Iff):
        return _truth(f.left, pre, cur, client) == _truth(f.right, pre, cur, client)
    if isinstance(f, Old):
        return _truth(f.arg, pre, pre, client)
    if isinstance(f, Client):
        if client is None:
            raise UnboundClient(f"client({f.cls}) evaluated without a bound client")
        return client == f.cls
    raise SortError(f"{type(f).__name__} is not a condition")


def _term(t: Node, pre: Mapping, cur: Mapping) -> int:
    if isinstance(t, IntLit):
        return t.value
    if isinstance(t, Var):
        return int(_lookup(cur, t.name))
    if isinstance(t, Old):
        return _term(t.arg, pre, pre)
    raise SortError(f"{type(t).__name__} is not an integer term")


# ---------------------------------------------------------------- enumeration


@dataclass(frozen=True)
class Counterexample:
    pre: dict
    post: Optional[dict]
    client: Optional[str]

    def as_dict(self) -> dict:
        return {"pre": self.pre, "post": self.post, "client": self.client}


@dataclass(frozen=True)
class Program:
    """Postfix bytecode plus the slot layout it enumerates."""

    code: tuple[int, ...]
    slots: tuple[tuple[str, str], ...]  # (state, name); state in pre|post|client
    lows: tuple[int, ...]
    radices: tuple[int, ...]

    @property
    def total(self) -> int:
        n = 1
        for r in self.radices:
            n *= r
        return n

    def decode(self, index: int, classes: tuple[str, ...], two_state: bool) -> Counterexample:
        values = []
        for r in reversed(self.radices):
            values.append(index % r)
            index //= r
        values.reverse()
        pre: dict = {}
        post: dict = {}
        client = None
        for (state, name), lo, digit in zip(self.slots, self.lows, values):
            if state == "client":
                client = classes[digit]
            elif state == "pre":
                pre[name] = lo + digit
            else:
                post[name] = lo + digit
        return Counterexample(pre, post if two_state else None, client)


def compile_formula(
    f: Node,
    domain: Domain,
    *,
    two_state: bool,
    clients: Optional[tuple[str, ...]] = None,
) -> Program:
    """Translate ``f`` to kernel bytecode over the slots it actually reads."""
    reads: set[tuple[str, str]] = set()

    def collect(node: Node, in_old: bool) -> None:
        if isinstance(node, Var):
            domain.sort(node.name)
            reads.add(("pre" if in_old or not two_state else "post", node.name))
        elif isinstance(node, Old):
            collect(node.arg, True)
        else:
            for k in children(node):
                collect(k, in_old)

    collect(f, False)
    order = {"pre": 0, "post": 1}
    slot_list = sorted(reads, key=lambda s: (order[s[0]], s[1]))
    lows = []
    radices = []
    for _, name in slot_list:
        vals = domain.values(name)
        lows.append(vals.start)
        radices.append(len(vals))
    if has_client(f):
        classes = clients if clients is not None else domain.classes
        if not classes:
            raise UnboundClient("client() used but the domain declares no classes")
        slot_list.append(("client", ""))
        lows.append(0)
        radices.append(len(classes))
    else:
        classes = ()
    index = {s: i for i, s in enumerate(slot_list)}
    client_slot = index.get(("client", ""))
    code: list[int] = []

    def emit(node: Node, in_old: bool) -> None:
        if isinstance(node, Const):
            code.extend((kernel.PUSH, int(node.value)))
        elif isinstance(node, IntLit):
            code.extend((kernel.PUSH, node.value))
        elif isinstance(node, Var):
            state = "pre" if in_old or not two_state else "post"
            code.extend((kernel.LOAD, index[(state, node.name)]))
        elif isinstance(node, Old):
            emit(node.arg, True)
        elif isinstance(node, Client):
            code.extend((kernel.LOAD, client_slot))
            pos = classes.index(node.cls) if node.cls in classes else -1
            code.extend((kernel.PUSH, pos))
            code.extend((kernel.EQ, 0))
        elif isinstance(node, Not):
            emit(node.arg, in_old)
            code.extend((kernel.NOT, 0))
        elif isinstance(node, Cmp):
            emit(node.left, in_old)
            emit(node.right, in_old)
            code.extend((kernel.CMP_OPCODES[node.op], 0))
        else:
            emit(node.left, in_old)
            emit(node.right, in_old)
            code.extend((kernel.BINARY_OPCODES[type(node).__name__], 0))

    emit(f, False)
    return Program(tuple(code), tuple(slot_list), tuple(lows), tuple(radices))


def counterexample(
    f: Node,
    domain: Domain,
    *,
    two_state: Optional[bool] = None,
    clients: Optional[Iterable[str]] = None,
) -> Optional[Counterexample]:
    """First assignment (lexicographic slot order) falsifying ``f``, or None.

    Two-state enumeration (pre and post varied independently) is switched
    on automatically when ``f`` mentions old().
    """
    if two_state is None:
        two_state = has_old(f)
    cls = tuple(clients) if clients is not None else None
    return _counterexample(f, domain, two_state, cls)


@lru_cache(maxsize=1 << 16)
def _counterexample(
    f: Node, domain: Domain, two_state: bool, cls: Optional[tuple[str, ...]]
) -> Optional[Counterexample]:
    prog = compile_formula(f, domain, two_state=two_state, clients=cls)
    total = prog.total
    if total > domain.budget:
        raise BudgetExceeded(f"{total} assignments exceed the enumeration budget of {domain.budget}")
    idx = kernel.first_false(prog.code, prog.lows, prog.radices)
    if idx < 0:
        return None
    used = cls if cls is not None else domain.classes
    return prog.decode(idx, used, two_state)


def is_tautology(f: Node, domain: Domain, **kw) -> bool:
    return counterexample(f, domain, **kw) is None


def implies(a: Node, b: Node, domain: Domain, **kw) -> bool:
    """``a`` is stronger than ``b``: ``a -> b`` holds under every assignment."""
    return is_tautology(Implies(a, b), domain, **kw)


def equivalent(a: Node, b: Node, domain: Domain, **kw) -> bool:
    return implies(a, b, domain, **kw) and implies(b, a, domain, **kw)
