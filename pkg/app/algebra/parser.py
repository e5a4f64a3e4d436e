"""Polynomial expressions: identifiers, integer and p/q literals, + - * ^ and parentheses."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from app.algebra.polycore import Polynomial
from app.core.exceptions import ParseError

_TOKEN = re.compile(r"\s*(?:(?P<number>\d+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^/()]))")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if match is None:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", text=text, position=bad)
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, tokens: List[Token], variables: Tuple[str, ...]):
        self.text = text
        self.tokens = tokens
        self.variables = variables
        self.i = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, token: Optional[Token] = None):
        token = token or self.current
        raise ParseError(message, text=self.text, position=token.position)

    def take(self) -> Token:
        token = self.current
        self.i += 1
        return token

    def at(self, text: str) -> bool:
        return self.current.kind == "op" and self.current.text == text

    def parse(self) -> Polynomial:
        value = self.expr()
        if self.current.kind != "end":
            self.unexpected()
        return value

    def unexpected(self):
        token = self.current
        if token.kind in ("number", "ident") or (token.kind == "op" and token.text == "("):
            self.error("implicit multiplication is not allowed; use '*'")
        if token.kind == "op" and token.text == "/":
            self.error("'/' is only allowed inside rational literals p/q")
        if token.kind == "end":
            self.error("unexpected end of expression")
        self.error(f"unexpected {token.text!r}")

    def expr(self) -> Polynomial:
        value = self.term()
        while self.at("+") or self.at("-"):
            op = self.take().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Polynomial:
        value = self.unary()
        while self.at("*"):
            self.take()
            value = value * self.unary()
        return value

    def unary(self) -> Polynomial:
        if self.at("-"):
            self.take()
            return -self.unary()
        if self.at("+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.at("^"):
            self.take()
            token = self.current
            if token.kind != "number":
                self.error("exponent must be a non-negative integer")
            self.take()
            base = base ** int(token.text)
        return base

    def atom(self) -> Polynomial:
        token = self.current
        if token.kind == "number":
            self.take()
            value = Fraction(int(token.text))
            if self.at("/"):
                self.take()
                den = self.current
                if den.kind != "number":
                    self.error("expected a denominator after '/'")
                self.take()
                if int(den.text) == 0:
                    self.error("zero denominator", den)
                value /= int(den.text)
            return Polynomial.constant(self.variables, value)
        if token.kind == "ident":
            self.take()
            if token.text not in self.variables:
                self.error(f"unknown variable {token.text!r}", token)
            return Polynomial.variable(self.variables, token.text)
        if self.at("("):
            self.take()
            value = self.expr()
            if not self.at(")"):
                if self.current.kind == "end":
                    self.error("missing ')'")
                self.unexpected()
            self.take()
            return value
        if token.kind == "end":
            self.error("expected an expression")
        self.error(f"unexpected {token.text!r}")


def _identifiers(tokens: Sequence[Token]) -> List[str]:
    return [t.text for t in tokens if t.kind == "ident"]


def parse_polynomial(text: str, variables: Optional[Sequence[str]] = None) -> Polynomial:
    """Parse `text`; without `variables` the identifiers found, sorted, become the variables."""
    tokens = tokenize(text)
    names = tuple(variables) if variables is not None else tuple(sorted(set(_identifiers(tokens))))
    return _Parser(text, tokens, names).parse()


def parse_relations(texts: Sequence[str], variables: Optional[Sequence[str]] = None) -> List[Polynomial]:
    """Parse several expressions over one shared, sorted variable tuple."""
    tokenized = [(text, tokenize(text)) for text in texts]
    if variables is None:
        variables = sorted({name for _, tokens in tokenized for name in _identifiers(tokens)})
    names = tuple(variables)
    return [_Parser(text, tokens, names).parse() for text, tokens in tokenized]
