"""Recursive-descent parser for tangle and Montesinos link notation.

Grammar::

    top        := montesinos | expr
    montesinos := "M" "(" frac ("," frac)* ")"
    frac       := INT ("/" INT)?
    expr       := atom (("*" | "|") atom)*        left-associative
    atom       := "(" expr ")"
                | "[[" INT ("," INT)* "]]"
                | "[" (INT | "inf" | "∞" | INT "/" INT) "]"

``*`` is horizontal composition and ``|`` vertical composition.  ``[1/k]``
is a vertical twist; any other ``[p/q]`` is expanded into a rational tangle.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from montrep.errors import InvalidFraction, ParseError
from montrep.models.link import MontesinosSpec
from montrep.rational import TangleFraction, cf_expand
from montrep.tangle.expr import Basic, Compose, Rational, TangleExpr, Twist

_TOKEN = re.compile(
    r"\s*(?:(?P<int>[+-]?\d+)|(?P<inf>inf|∞)|(?P<sym>\[\[|\]\]|[\[\]()/,*|M]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "inf", or the symbol itself
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if match is None:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start)
        kind = match.lastgroup
        value = match.group(kind)
        start = match.start(kind)
        tokens.append(Token(value if kind == "sym" else kind, value, start))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    # -- token helpers ------------------------------------------------------

    def _peek(self) -> Token | None:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def _position(self) -> int:
        token = self._peek()
        return token.position if token else len(self.text)

    def _next(self) -> Token:
        token = self._peek()
        if token is None:
            raise ParseError("unexpected end of input", len(self.text))
        self.index += 1
        return token

    def _expect(self, kind: str) -> Token:
        token = self._next()
        if token.kind != kind:
            raise ParseError(f"expected {kind!r}, found {token.text!r}", token.position)
        return token

    def _accept(self, kind: str) -> bool:
        token = self._peek()
        if token is not None and token.kind == kind:
            self.index += 1
            return True
        return False

    def _integer(self) -> int:
        return int(self._expect("int").text)

    # -- grammar ------------------------------------------------------------

    def parse(self) -> TangleExpr | MontesinosSpec:
        token = self._peek()
        if token is None:
            raise ParseError("empty input", 0)
        result = self._montesinos() if token.kind == "M" else self._expr()
        if self._peek() is not None:
            raise ParseError(f"trailing input {self._peek().text!r}", self._position())
        return result

    def _montesinos(self) -> MontesinosSpec:
        self._expect("M")
        self._expect("(")
        fractions = [self._frac()]
        while self._accept(","):
            fractions.append(self._frac())
        self._expect(")")
        return MontesinosSpec.from_fractions(fractions)

    def _frac(self) -> TangleFraction:
        position = self._position()
        p = self._integer()
        q = self._integer() if self._accept("/") else 1
        if p == 0 or q == 0:
            raise InvalidFraction(f"tangle {p}/{q} at position {position} needs p != 0 and q != 0")
        return TangleFraction(p=p, q=q)

    def _expr(self) -> TangleExpr:
        left = self._atom()
        while True:
            if self._accept("*"):
                left = Compose(op="horizontal", left=left, right=self._atom())
            elif self._accept("|"):
                left = Compose(op="vertical", left=left, right=self._atom())
            else:
                return left

    def _atom(self) -> TangleExpr:
        token = self._next()
        if token.kind == "(":
            inner = self._expr()
            self._expect(")")
            return inner
        if token.kind == "[[":
            ks = [self._integer()]
            while self._accept(","):
                ks.append(self._integer())
            self._expect("]]")
            if any(k == 0 for k in ks):
                raise ParseError("continued-fraction coefficients must be nonzero", token.position)
            return Rational(ks=ks)
        if token.kind == "[":
            body = self._bracket_body(token)
            self._expect("]")
            return body
        raise ParseError(f"unexpected {token.text!r}", token.position)

    def _bracket_body(self, opener: Token) -> TangleExpr:
        if self._accept("inf"):
            return Basic(value="inf")
        p = self._integer()
        if not self._accept("/"):
            if p in (0, 1, -1):
                return Basic(value=str(p))
            return Twist(k=p)
        q = self._integer()
        if q == 0:
            raise InvalidFraction(f"tangle {p}/0 at position {opener.position}")
        if p == 1:
            return Basic(value="1") if q == 1 else Twist(k=q, vertical=True)
        if p == -1:
            return Twist(k=-q, vertical=True) if q != -1 else Basic(value="1")
        if p == 0:
            return Basic(value="0")
        return Rational(ks=cf_expand(TangleFraction(p=p, q=q)))


def parse_tangle(text: str) -> TangleExpr | MontesinosSpec:
    """Parse tangle notation or a Montesinos link ``M(p1/q1, ...)``."""
    return _Parser(text).parse()


def parse_montesinos(text: str) -> MontesinosSpec:
    result = parse_tangle(text)
    if not isinstance(result, MontesinosSpec):
        raise ParseError("expected a Montesinos link M(p1/q1, ...)", 0)
    return result
