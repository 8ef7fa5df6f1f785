"""Tokenizer, recursive-descent parser and evaluator for element/map expressions.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := "-" factor | atom ("^" uint)?
    atom   := uint | name | "(" expr ")" | "O" "(" ("p" | "pi") ("^" uint)? ")"

``**`` is accepted as a synonym for ``^``.  Unary minus and the big-O atom
are extensions used by the printer so that printed elements parse back.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Mapping

from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str
    left: Any
    right: Any


@dataclass(frozen=True)
class Neg:
    operand: Any


@dataclass(frozen=True)
class Pow:
    base: Any
    exponent: int


@dataclass(frozen=True)
class BigO:
    """``O(pi^k)`` or ``O(p^k)``: an unknown quantity of the given size."""

    unit: str
    exponent: int


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r}", pos)
        if m.group(1):
            tokens.append(("num", m.group(1), m.start(1)))
        elif m.group(2):
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            op = m.group(3)
            tokens.append(("op", "^" if op == "**" else op, m.start(3)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of expression", len(self.text))
        self.i += 1
        return tok

    def expect_op(self, op: str):
        tok = self.next()
        if tok[0] != "op" or tok[1] != op:
            raise ParseError(f"expected {op!r}, got {tok[1]!r}", tok[2])

    def at_op(self, *ops: str) -> bool:
        tok = self.peek()
        return tok is not None and tok[0] == "op" and tok[1] in ops

    def parse(self):
        if not self.tokens:
            raise ParseError("empty expression", 0)
        node = self.expr()
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2])
        return node

    def expr(self):
        node = self.term()
        while self.at_op("+", "-"):
            op = self.next()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.at_op("*", "/"):
            op = self.next()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        if self.at_op("-"):
            self.next()
            return Neg(self.factor())
        node = self.atom()
        if self.at_op("^"):
            self.next()
            tok = self.next()
            if tok[0] != "num":
                raise ParseError("exponent must be a non-negative integer", tok[2])
            node = Pow(node, int(tok[1]))
        return node

    def atom(self):
        tok = self.next()
        kind, val, pos = tok
        if kind == "num":
            return Num(int(val))
        if kind == "name":
            if val == "O" and self.at_op("("):
                return self.big_o()
            return Name(val)
        if val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(f"unexpected token {val!r}", pos)

    def big_o(self):
        self.expect_op("(")
        tok = self.next()
        if tok[0] != "name" or tok[1] not in ("p", "pi"):
            raise ParseError("O(...) takes p or pi to a power", tok[2])
        exponent = 1
        if self.at_op("^"):
            self.next()
            num = self.next()
            if num[0] != "num":
                raise ParseError("exponent must be a non-negative integer", num[2])
            exponent = int(num[1])
        self.expect_op(")")
        return BigO(tok[1], exponent)


def parse(text: str):
    """Parse ``text`` into an AST."""
    return _Parser(text).parse()


def names(node) -> set[str]:
    """Free names occurring in an AST."""
    if isinstance(node, Name):
        return {node.name}
    if isinstance(node, BinOp):
        return names(node.left) | names(node.right)
    if isinstance(node, Neg):
        return names(node.operand)
    if isinstance(node, Pow):
        return names(node.base)
    return set()


def evaluate(node, env: Mapping[str, Any], big_o: Callable[[str, int], Any] | None = None):
    """Evaluate an AST with Python operators.

    Integer literals become :class:`~fractions.Fraction` so that purely
    numeric subexpressions stay exact; values from ``env`` decide how mixed
    arithmetic behaves.
    """
    if isinstance(node, Num):
        return Fraction(node.value)
    if isinstance(node, Name):
        try:
            return env[node.name]
        except KeyError:
            raise ParseError(f"unbound name {node.name!r}") from None
    if isinstance(node, Neg):
        return -evaluate(node.operand, env, big_o)
    if isinstance(node, Pow):
        return evaluate(node.base, env, big_o) ** node.exponent
    if isinstance(node, BigO):
        if big_o is None:
            raise ParseError("O(...) is not allowed here")
        return big_o(node.unit, node.exponent)
    left = evaluate(node.left, env, big_o)
    right = evaluate(node.right, env, big_o)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if isinstance(right, Fraction) and right == 0:
        raise ZeroDivisionError("division by zero in expression")
    return left / right
