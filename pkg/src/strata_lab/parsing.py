"""Text grammar for homogeneous polynomials.

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('+' | '-') factor | power
    power  := atom ('^' INTEGER)?
    atom   := INTEGER | 'X' | 'Y' | 'Z' | '(' expr ')'

Division is only allowed by a nonzero constant, which is how rational
coefficients such as ``1/2*X`` are written.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import NonHomogeneousError, ParseError
from .field import Field
from .poly import HomPoly, VARIABLES

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")

# sparse polynomial: {(a, b, c): Fraction}; zero coefficients are kept so the
# degree of e.g. "X - X" is still known
Sparse = dict


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, name, sym = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif name is not None:
            if name not in VARIABLES:
                raise ParseError(f"unknown symbol {name!r}")
            tokens.append(("var", name))
        elif sym in "+-*/^()":
            tokens.append(("op", sym))
        else:
            raise ParseError(f"unknown symbol {sym!r}")
        pos = m.end()
    return tokens


def _add(a: Sparse, b: Sparse, sign: int = 1) -> Sparse:
    out = dict(a)
    for m, c in b.items():
        out[m] = out.get(m, Fraction(0)) + sign * c
    return out


def _mul(a: Sparse, b: Sparse) -> Sparse:
    out: Sparse = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
            out[m] = out.get(m, Fraction(0)) + c1 * c2
    return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, value):
        kind, tok = self.take()
        if tok != value:
            raise ParseError(f"expected {value!r}, found {tok!r}")

    def parse(self) -> Sparse:
        if not self.tokens:
            raise ParseError("empty expression")
        out = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError(f"unexpected token {self.peek()[1]!r}")
        return out

    def expr(self) -> Sparse:
        out = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            out = _add(out, self.term(), 1 if op == "+" else -1)
        return out

    def term(self) -> Sparse:
        out = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            _, op = self.take()
            rhs = self.factor()
            if op == "*":
                out = _mul(out, rhs)
                continue
            if any(m != (0, 0, 0) for m in rhs):
                raise ParseError("division by a non-constant expression")
            c = rhs.get((0, 0, 0), Fraction(0))
            if c == 0:
                raise ParseError("division by zero")
            out = {m: v / c for m, v in out.items()}
        return out

    def factor(self) -> Sparse:
        if self.peek() == ("op", "-"):
            self.take()
            return {m: -c for m, c in self.factor().items()}
        if self.peek() == ("op", "+"):
            self.take()
            return self.factor()
        return self.power()

    def power(self) -> Sparse:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, tok = self.take()
            if kind != "num":
                raise ParseError("exponent must be a non-negative integer literal")
            result: Sparse = {(0, 0, 0): Fraction(1)}
            for _ in range(int(tok)):
                result = _mul(result, base)
            return result
        return base

    def atom(self) -> Sparse:
        kind, tok = self.take()
        if kind == "num":
            return {(0, 0, 0): Fraction(int(tok))}
        if kind == "var":
            i = VARIABLES.index(tok)
            return {tuple(int(j == i) for j in range(3)): Fraction(1)}
        if tok == "(":
            out = self.expr()
            self.expect(")")
            return out
        raise ParseError(f"unexpected token {tok!r}")


def parse_poly(text: str, field: Field) -> HomPoly:
    """Parse a homogeneous polynomial in X, Y, Z over ``field``."""
    sparse = _Parser(text).parse()
    degrees = {sum(m) for m in sparse}
    if len(degrees) != 1:
        raise NonHomogeneousError(f"not homogeneous: mixed degrees {sorted(degrees)} in {text!r}")
    (degree,) = degrees
    return HomPoly.from_terms(field, degree, {m: field(c) for m, c in sparse.items()})
