"""Recursive-descent parser for the expression grammar of all input files.

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := base ("^" nat)?
    base   := ident | nat | "(" expr ")" | "-" factor

Expressions are evaluated while parsing against an environment that maps
identifiers to values of one arithmetic type (field elements, polynomials).
"""

from __future__ import annotations

import re
from typing import Callable, List, Mapping, NamedTuple

from b_operators.errors import BOperatorError, ParseError

_TOKEN = re.compile(r"\s*(?:(?P<nat>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


class Token(NamedTuple):
    kind: str
    text: str
    pos: int


def _position(text: str, pos: int):
    line = text.count("\n", 0, pos) + 1
    column = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, column


def tokenize(text: str, source: str = "") -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = len(text) - len(text[pos:].lstrip())
            line, col = _position(text, start)
            raise ParseError(f"unexpected character {text[start]!r}", line, col, source)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, env: Mapping[str, object], literal: Callable[[int], object], source: str):
        self.text = text
        self.env = env
        self.literal = literal
        self.source = source
        self.tokens = tokenize(text, source)
        self.i = 0

    def error(self, message: str, token: Token):
        line, col = _position(self.text, token.pos)
        return ParseError(message, line, col, self.source)

    @property
    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.take()
        if tok.text != text:
            raise self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok)
        return tok

    def parse(self):
        value = self.expr()
        if self.peek.kind != "end":
            raise self.error(f"unexpected {self.peek.text!r}", self.peek)
        return value

    def expr(self):
        value = self.term()
        while self.peek.text in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op.text == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek.text in ("*", "/"):
            op = self.take()
            rhs = self.factor()
            if op.text == "*":
                value = value * rhs
            else:
                try:
                    value = value / rhs
                except BOperatorError:
                    raise
                except (ValueError, TypeError) as exc:
                    raise self.error(f"cannot divide: {exc}", op) from None
        return value

    def factor(self):
        value = self.base()
        if self.peek.text == "^":
            self.take()
            tok = self.take()
            if tok.kind != "nat":
                raise self.error("exponent must be a natural number", tok)
            value = value ** int(tok.text)
        return value

    def base(self):
        tok = self.take()
        if tok.kind == "nat":
            return self.literal(int(tok.text))
        if tok.kind == "ident":
            if tok.text not in self.env:
                raise self.error(f"unknown identifier {tok.text!r}", tok)
            return self.env[tok.text]
        if tok.text == "(":
            value = self.expr()
            self.expect(")")
            return value
        if tok.text == "-":
            return -self.factor()
        raise self.error(f"unexpected {tok.text or 'end of input'!r}", tok)


def parse_expression(text: str, env: Mapping[str, object], literal: Callable[[int], object], source: str = ""):
    """Parse and evaluate ``text``; integer literals go through ``literal``."""
    if not isinstance(text, str):
        raise ParseError(f"expected an expression string, got {text!r}", 1, 1, source)
    return _Parser(text, env, literal, source).parse()
