"""Tokenizer, expression parser and printer for assertion formulas.

Precedence, tightest first: comparisons, ``!``, ``&&``, ``||``, ``->``
(right-associative), ``<->``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .formula import (
    CMP_OPS,
    Client,
    Cmp,
    Const,
    FormulaError,
    Iff,
    Implies,
    IntLit,
    Node,
    Not,
    Old,
    Or,
    And,
    Var,
    walk,
)


class DslSyntaxError(FormulaError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.reason = message


@dataclass(frozen=True)
class Token:
    kind: str  # ident | int | op | eof
    value: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<int>-?\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><->|->|&&|\|\||<=|>=|==|!=|\.\.|[!<>(){}\[\];:,=|])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("int", "ident", "op"):
            value = m.group()
            # "x->y" style: a '-' glued to digits after an operand is not a literal sign
            if kind == "int" and value.startswith("-") and tokens and _is_operand_end(tokens[-1]):
                raise DslSyntaxError("unexpected '-'", line, col)
            tokens.append(Token(kind, value, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


def _is_operand_end(tok: Token) -> bool:
    return tok.kind in ("ident", "int") or tok.value in (")", "]")


_PREC_IFF, _PREC_IMP, _PREC_OR, _PREC_AND, _PREC_NOT, _PREC_CMP, _PREC_ATOM = range(1, 8)


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, value: str) -> bool:
        tok = self.peek
        return tok.kind in ("op", "ident") and tok.value == value

    def accept(self, value: str) -> Optional[Token]:
        if self.at(value):
            return self.next()
        return None

    def expect(self, value: str) -> Token:
        if not self.at(value):
            self.error(f"expected {value!r}")
        return self.next()

    def ident(self, what: str = "identifier") -> Token:
        tok = self.peek
        if tok.kind != "ident":
            self.error(f"expected {what}")
        return self.next()

    def integer(self) -> int:
        tok = self.peek
        if tok.kind != "int":
            self.error("expected integer literal")
        self.next()
        return int(tok.value)

    def error(self, message: str, tok: Optional[Token] = None) -> None:
        tok = tok or self.peek
        found = "end of input" if tok.kind == "eof" else repr(tok.value)
        raise DslSyntaxError(f"{message}, found {found}", tok.line, tok.col)

    # expressions -------------------------------------------------------

    def expr(self) -> Node:
        left = self._imp()
        while self.accept("<->"):
            left = Iff(left, self._imp())
        return left

    def _imp(self) -> Node:
        left = self._or()
        if self.accept("->"):
            return Implies(left, self._imp())
        return left

    def _or(self) -> Node:
        left = self._and()
        while self.accept("||"):
            left = Or(left, self._and())
        return left

    def _and(self) -> Node:
        left = self._unary()
        while self.accept("&&"):
            left = And(left, self._unary())
        return left

    def _unary(self) -> Node:
        if self.accept("!"):
            return Not(self._unary())
        return self._cmp()

    def _cmp(self) -> Node:
        left = self._primary()
        tok = self.peek
        if tok.kind == "op" and tok.value in CMP_OPS:
            self.next()
            right = self._primary()
            nxt = self.peek
            if nxt.kind == "op" and nxt.value in CMP_OPS:
                self.error("comparisons do not chain; use &&", nxt)
            return Cmp(tok.value, left, right)
        return left

    def _primary(self) -> Node:
        tok = self.peek
        if tok.kind == "int":
            self.next()
            return IntLit(int(tok.value))
        if tok.kind == "ident":
            self.next()
            if tok.value == "true":
                return Const(True)
            if tok.value == "false":
                return Const(False)
            if tok.value == "old" and self.at("("):
                self.next()
                inner = self.expr()
                self.expect(")")
                if any(isinstance(n, Old) for n in walk(inner)):
                    raise DslSyntaxError("old() may not nest", tok.line, tok.col)
                return Old(inner)
            if tok.value == "client" and self.at("("):
                self.next()
                name = self.ident("class name").value
                self.expect(")")
                return Client(name)
            return Var(tok.value)
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        self.error("expected expression")
        raise AssertionError  # unreachable


def parse_formula(text: str) -> Node:
    """Parse a single assertion expression."""
    ts = TokenStream(tokenize(text))
    f = ts.expr()
    if ts.peek.kind != "eof":
        ts.error("unexpected trailing input")
    return f


# ---------------------------------------------------------------- printing


def _prec(f: Node) -> int:
    if isinstance(f, Iff):
        return _PREC_IFF
    if isinstance(f, Implies):
        return _PREC_IMP
    if isinstance(f, Or):
        return _PREC_OR
    if isinstance(f, And):
        return _PREC_AND
    if isinstance(f, Not):
        return _PREC_NOT
    if isinstance(f, Cmp):
        return _PREC_CMP
    return _PREC_ATOM


def _wrap(f: Node, minimum: int) -> str:
    s = to_source(f)
    return s if _prec(f) >= minimum else f"({s})"


_INFIX = {And: ("&&", _PREC_AND), Or: ("||", _PREC_OR), Iff: ("<->", _PREC_IFF)}


def to_source(f: Node) -> str:
    """Render ``f`` so that ``parse_formula(to_source(f)) == f``."""
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, IntLit):
        return str(f.value)
    if isinstance(f, Client):
        return f"client({f.cls})"
    if isinstance(f, Old):
        return f"old({to_source(f.arg)})"
    if isinstance(f, Not):
        return "!" + _wrap(f.arg, _PREC_NOT)
    if isinstance(f, Cmp):
        return f"{_wrap(f.left, _PREC_ATOM)} {f.op} {_wrap(f.right, _PREC_ATOM)}"
    if isinstance(f, Implies):
        return f"{_wrap(f.left, _PREC_IMP + 1)} -> {_wrap(f.right, _PREC_IMP)}"
    sym, p = _INFIX[type(f)]
    return f"{_wrap(f.left, p)} {sym} {_wrap(f.right, p + 1)}"
