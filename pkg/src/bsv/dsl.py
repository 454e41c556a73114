"""The ``.bsv`` scenario file format.

::

    # comment
    domain x: int[-3..3];
    domain ok: bool;
    class C { invariant: true; method m { pre: x > 0; post: true; } }
    class SC extends C { method m { pre: x < 0; post: true; } }
    scenario s1 { client: C; receiver: SC; call: m; prestate { x = -2 } poststate { x = -2 } }
    truthconfig t1 { client: C; receiver: SC; call: m; pre C = true; pre SC = false; post C = true; post SC = true; }
    config { strategy: all; max_assignments: 1048576; reject_is_error: false; }
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .formula import BOOL, DEFAULT_BUDGET, TRUE, Domain, FormulaError, IntRange, Node, validate
from .hierarchy import ClassDef, Hierarchy, HierarchyError, MethodSpec
from .runtime import CallScenario, InvalidScenario, StateMode, TruthMode, check_scenario
from .strategy import Strategy
from .syntax import DslSyntaxError, Token, TokenStream, to_source, tokenize


class DslError(DslSyntaxError):
    """A well-formed file that fails validation; carries the offending position."""


@dataclass(frozen=True)
class Config:
    strategy: str = "all"
    max_assignments: int = DEFAULT_BUDGET
    reject_is_error: bool = False

    @property
    def strategies(self) -> list[Strategy]:
        return Strategy.parse(self.strategy)


@dataclass(frozen=True)
class ScenarioFile:
    hierarchy: Hierarchy
    scenarios: dict[str, CallScenario] = field(default_factory=dict)
    config: Config = Config()

    @property
    def domain(self) -> Domain:
        return self.hierarchy.domain


@dataclass
class _ClassDraft:
    name: str
    parent: Optional[str]
    tok: Token
    invariant: Optional[tuple[Node, Token]] = None
    methods: dict[str, tuple[Optional[tuple[Node, Token]], Optional[tuple[Node, Token]], Token]] = field(
        default_factory=dict
    )


def _at(tok: Token, message: str) -> DslError:
    return DslError(message, tok.line, tok.col)


class _Parser:
    def __init__(self, text: str):
        self.ts = TokenStream(tokenize(text))
        self.variables: dict[str, object] = {}
        self.classes: dict[str, _ClassDraft] = {}
        self.scenarios: dict[str, tuple[Token, dict]] = {}
        self.config: dict[str, object] = {}

    def parse(self) -> ScenarioFile:
        ts = self.ts
        while ts.peek.kind != "eof":
            tok = ts.peek
            if ts.accept("domain"):
                self._domain()
            elif ts.accept("class"):
                self._class()
            elif ts.accept("scenario"):
                self._scenario(tok, truth=False)
            elif ts.accept("truthconfig"):
                self._scenario(tok, truth=True)
            elif ts.accept("config"):
                self._config()
            else:
                ts.error("expected 'domain', 'class', 'scenario', 'truthconfig' or 'config'")
        return self._build()

    def _formula(self) -> tuple[Node, Token]:
        tok = self.ts.peek
        f = self.ts.expr()
        self.ts.expect(";")
        return f, tok

    def _domain(self) -> None:
        ts = self.ts
        while True:
            name = ts.ident("variable name")
            if name.value in self.variables:
                raise _at(name, f"variable {name.value!r} declared twice")
            ts.expect(":")
            if ts.accept("bool"):
                self.variables[name.value] = BOOL
            else:
                ts.expect("int")
                ts.expect("[")
                lo = ts.integer()
                ts.expect("..")
                hi = ts.integer()
                ts.expect("]")
                if lo > hi:
                    raise _at(name, f"empty range [{lo}..{hi}] for {name.value!r}")
                self.variables[name.value] = IntRange(lo, hi)
            if not ts.accept(","):
                break
        ts.expect(";")

    def _class(self) -> None:
        ts = self.ts
        name = ts.ident("class name")
        if name.value in self.classes:
            raise _at(name, f"class {name.value!r} declared twice")
        parent = ts.ident("parent class").value if ts.accept("extends") else None
        draft = _ClassDraft(name.value, parent, name)
        ts.expect("{")
        while not ts.accept("}"):
            if ts.accept("invariant"):
                ts.expect(":")
                draft.invariant = self._formula()
            elif ts.accept("method"):
                mname = ts.ident("method name")
                if mname.value in draft.methods:
                    raise _at(mname, f"method {mname.value!r} declared twice in {name.value}")
                pre = post = None
                ts.expect("{")
                while not ts.accept("}"):
                    if ts.accept("pre"):
                        ts.expect(":")
                        pre = self._formula()
                    elif ts.accept("post"):
                        ts.expect(":")
                        post = self._formula()
                    else:
                        ts.error("expected 'pre' or 'post'")
                draft.methods[mname.value] = (pre, post, mname)
            else:
                ts.error("expected 'invariant' or 'method'")
        self.classes[name.value] = draft

    def _scenario(self, start: Token, truth: bool) -> None:
        ts = self.ts
        name = ts.ident("scenario name")
        if name.value in self.scenarios:
            raise _at(name, f"scenario {name.value!r} declared twice")
        fields: dict = {"truth": truth, "values": {}}
        ts.expect("{")
        while not ts.accept("}"):
            key = ts.peek
            if ts.accept("client") or ts.accept("receiver") or ts.accept("call"):
                ts.expect(":")
                fields[key.value] = ts.ident().value
                ts.expect(";")
            elif not truth and (ts.accept("prestate") or ts.accept("poststate")):
                fields[key.value] = self._bindings()
            elif truth and (ts.accept("pre") or ts.accept("post") or ts.accept("inv")):
                cls = ts.ident("class name").value
                ts.expect("=")
                val = ts.ident("true or false")
                if val.value not in ("true", "false"):
                    ts.error("expected true or false", val)
                fields["values"][(cls, key.value)] = val.value == "true"
                ts.expect(";")
            else:
                ts.error("unexpected scenario field")
        for required in ("client", "receiver", "call"):
            if required not in fields:
                raise _at(name, f"scenario {name.value!r} lacks '{required}'")
        self.scenarios[name.value] = (name, fields)

    def _bindings(self) -> dict:
        ts = self.ts
        out: dict = {}
        ts.expect("{")
        while not ts.accept("}"):
            var = ts.ident("variable name")
            ts.expect("=")
            tok = ts.peek
            if tok.kind == "int":
                out[var.value] = ts.integer()
            elif ts.accept("true"):
                out[var.value] = 1
            elif ts.accept("false"):
                out[var.value] = 0
            else:
                ts.error("expected a value")
            if not ts.accept(","):
                ts.accept(";")
        return out

    def _config(self) -> None:
        ts = self.ts
        ts.expect("{")
        while not ts.accept("}"):
            key = ts.ident("config key")
            ts.expect(":")
            if key.value == "strategy":
                val = ts.ident("strategy").value
                try:
                    Strategy.parse(val)
                except ValueError as exc:
                    raise _at(key, str(exc)) from None
                self.config["strategy"] = val
            elif key.value == "max_assignments":
                n = ts.integer()
                if n < 1:
                    raise _at(key, "max_assignments must be positive")
                self.config["max_assignments"] = n
            elif key.value == "reject_is_error":
                val = ts.ident("true or false")
                if val.value not in ("true", "false"):
                    ts.error("expected true or false", val)
                self.config["reject_is_error"] = val.value == "true"
            else:
                raise _at(key, f"unknown config key {key.value!r}")
            ts.expect(";")

    # validation -------------------------------------------------------

    def _build(self) -> ScenarioFile:
        config = Config(**self.config)
        domain = Domain(dict(self.variables), tuple(self.classes), config.max_assignments)
        for draft in self.classes.values():
            if draft.parent is not None and draft.parent not in self.classes:
                raise _at(draft.tok, f"class {draft.name}: unknown parent {draft.parent!r}")
        for draft in self.classes.values():
            seen = set()
            c: Optional[str] = draft.name
            while c is not None:
                if c in seen:
                    raise _at(draft.tok, f"inheritance cycle through {draft.name!r}")
                seen.add(c)
                c = self.classes[c].parent
        classes = {}
        for draft in self.classes.values():
            inv = self._checked(draft.invariant, domain, post=False, what="invariant")
            methods = {}
            for m, (pre, post, _) in draft.methods.items():
                methods[m] = MethodSpec(
                    self._checked(pre, domain, post=False, what="precondition"),
                    self._checked(post, domain, post=True, what="postcondition"),
                )
            classes[draft.name] = ClassDef(draft.name, draft.parent, inv, methods)
        try:
            h = Hierarchy(classes, domain)
        except HierarchyError as exc:  # positions already checked; defensive
            raise DslError(str(exc), 1, 1) from exc
        scenarios = {}
        for name, (tok, f) in self.scenarios.items():
            if f["truth"]:
                mode = TruthMode(dict(f["values"]))
            else:
                pre = f.get("prestate", {})
                mode = StateMode(pre, f.get("poststate", pre))
            sc = CallScenario(f["client"], f["receiver"], f["call"], mode, name)
            try:
                check_scenario(h, sc)
                if isinstance(mode, StateMode):
                    for state in (mode.pre, mode.post):
                        domain.check_assignment(state)
            except (InvalidScenario, FormulaError) as exc:
                raise _at(tok, f"scenario {name}: {exc}") from None
            scenarios[name] = sc
        return ScenarioFile(h, scenarios, config)

    @staticmethod
    def _checked(item: Optional[tuple[Node, Token]], domain: Domain, *, post: bool, what: str) -> Node:
        if item is None:
            return TRUE
        f, tok = item
        try:
            validate(f, domain, allow_old=post, allow_client=False)
        except FormulaError as exc:
            raise _at(tok, f"{what}: {exc}") from None
        return f


def parse_source(text: str) -> ScenarioFile:
    return _Parser(text).parse()


def load(path: str) -> ScenarioFile:
    with open(path, encoding="utf-8") as fh:
        return parse_source(fh.read())


# ---------------------------------------------------------------- serializing


def _sort_source(sort: object) -> str:
    return "bool" if sort == BOOL else str(sort)


def serialize(h: Hierarchy) -> str:
    """DSL source for ``h`` such that ``parse_hierarchy(serialize(h)) == h``."""
    lines = [f"domain {name}: {_sort_source(sort)};" for name, sort in h.domain.variables.items()]
    for cd in h.classes.values():
        head = f"class {cd.name}" + (f" extends {cd.parent}" if cd.parent else "")
        lines.append(head + " {")
        lines.append(f"  invariant: {to_source(cd.invariant)};")
        for m, spec in cd.methods.items():
            lines.append(f"  method {m} {{")
            lines.append(f"    pre: {to_source(spec.pre)};")
            lines.append(f"    post: {to_source(spec.post)};")
            lines.append("  }")
        lines.append("}")
    if h.domain.budget != DEFAULT_BUDGET:
        lines.append(f"config {{ max_assignments: {h.domain.budget}; }}")
    return "\n".join(lines) + "\n"
