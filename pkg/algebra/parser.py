"""Text parser for Laurent polynomials.

Grammar (whitespace is insignificant)::

    expr    := [sign] term (sign term)*
    term    := factor (['*'] factor)*
    factor  := atom ['^' [sign] integer]
    atom    := integer ['/' integer] | variable | '(' expr ')'

Variables are ``x, y, z`` for d <= 3 and ``x1 .. xd`` otherwise. Negative
powers are only allowed on monomials.
"""

import re
from fractions import Fraction
from typing import List, Optional, Tuple

from algebra.laurent import LaurentPoly, power, variable_names
from utils.exceptions import PolynomialSyntaxError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class _Token:
    __slots__ = ("kind", "value", "position")

    def __init__(self, kind: str, value: str, position: int):
        self.kind = kind
        self.value = value
        self.position = position


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None or match.end() == pos:
            break
        number, name, symbol = match.groups()
        start = match.start(match.lastindex)
        if number is not None:
            tokens.append(_Token("int", number, start))
        elif name is not None:
            tokens.append(_Token("name", name, start))
        else:
            tokens.append(_Token("op", symbol, start))
        pos = match.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, dimension: int):
        self.text = text
        self.dimension = dimension
        self.names = {name: i for i, name in enumerate(variable_names(dimension))}
        self.tokens = _tokenize(text)
        self.index = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def error(self, message: str, token: Optional[_Token] = None):
        token = token or self.current
        raise PolynomialSyntaxError(message, self.text, token.position)

    def advance(self) -> _Token:
        token = self.current
        self.index += 1
        return token

    def accept(self, symbol: str) -> bool:
        if self.current.kind == "op" and self.current.value == symbol:
            self.index += 1
            return True
        return False

    def parse(self) -> LaurentPoly:
        if self.current.kind == "end":
            self.error("empty polynomial")
        result = self.expr()
        if self.current.kind != "end":
            self.error(f"unexpected {self.current.value!r}")
        return result

    def expr(self) -> LaurentPoly:
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        result = self.term() * sign
        while True:
            if self.accept("+"):
                result = result + self.term()
            elif self.accept("-"):
                result = result - self.term()
            else:
                return result

    def term(self) -> LaurentPoly:
        result = self.factor()
        while True:
            if self.accept("*"):
                result = result * self.factor()
            elif self.current.kind in ("int", "name") or (
                self.current.kind == "op" and self.current.value == "("
            ):
                result = result * self.factor()
            else:
                return result

    def factor(self) -> LaurentPoly:
        start = self.current
        base = self.atom()
        if self.accept("^"):
            exponent = self.exponent()
            if exponent < 0 and not base.is_monomial():
                self.error("negative power of a non-monomial", start)
            base = power(base, exponent)
        return base

    def exponent(self) -> int:
        parenthesized = self.accept("(")
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        if self.current.kind != "int":
            self.error("expected integer exponent")
        value = sign * int(self.advance().value)
        if parenthesized and not self.accept(")"):
            self.error("expected ')'")
        return value

    def atom(self) -> LaurentPoly:
        token = self.current
        if token.kind == "int":
            self.advance()
            value = Fraction(int(token.value))
            if self.accept("/"):
                if self.current.kind != "int":
                    self.error("expected integer denominator")
                den = int(self.advance().value)
                if den == 0:
                    self.error("zero denominator", token)
                value /= den
            return LaurentPoly.constant(self.dimension, value)
        if token.kind == "name":
            self.advance()
            axis = self.names.get(token.value)
            if axis is None:
                self.error(
                    f"variable {token.value!r} outside dimension {self.dimension}",
                    token,
                )
            exp = tuple(1 if i == axis else 0 for i in range(self.dimension))
            return LaurentPoly.monomial(exp)
        if self.accept("("):
            inner = self.expr()
            if not self.accept(")"):
                self.error("expected ')'")
            return inner
        if token.kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected {token.value!r}")


def parse_poly(text: str, dimension: int) -> LaurentPoly:
    """Parse polynomial text into a canonical LaurentPoly.

    >>> str(parse_poly("3 - x + 2*x^2 + x*y", 2))
    '2*x^2 + x*y - x + 3'
    """
    return _Parser(text, dimension).parse()


def parse_vector(text: str) -> Tuple[int, ...]:
    """Parse '1,0,-1' or '(1,0,-1)' into an integer tuple."""
    cleaned = text.strip().strip("()[]")
    try:
        return tuple(int(part) for part in cleaned.split(",") if part.strip())
    except ValueError as e:
        raise PolynomialSyntaxError(f"bad vector ({e})", text, 0)
