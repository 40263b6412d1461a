"""Bivariate polynomials with real coefficients and a small text parser.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/')? factor)*  # juxtaposition multiplies; '/' by constants only
    factor := ('-' | '+') factor | power
    power  := atom ('^' INT)?
    atom   := NUMBER | 'x' | 'y' | '(' expr ')'

Coefficients are parsed exactly (as fractions) so reordering terms never
changes the result.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, text: str = "", position: int = 0):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.text = text
        self.position = position

    def caret(self) -> str:
        """The offending text with a caret under the error position."""
        return f"{self.text}\n{' ' * self.position}^"


class UnsupportedVariable(PolynomialSyntaxError):
    pass


@dataclass(frozen=True)
class Polynomial:
    """Normalized terms ``(x_degree, y_degree, coefficient)``, sorted, no zeros."""

    terms: tuple[tuple[int, int, Fraction], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("polynomial has no terms")

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, int, object]]) -> Polynomial:
        acc: dict[tuple[int, int], Fraction] = {}
        for i, j, c in terms:
            if i < 0 or j < 0:
                raise ValueError("negative exponent")
            c = Fraction(c) if not isinstance(c, float) else Fraction(c).limit_denominator(10**12)
            acc[(i, j)] = acc.get((i, j), Fraction(0)) + c
        return cls(_normalize(acc))

    @property
    def degree(self) -> int:
        return max(i + j for i, j, _ in self.terms)

    def coefficients(self) -> dict[tuple[int, int], float]:
        return {(i, j): float(c) for i, j, c in self.terms}

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape)
        for i, j, c in self.terms:
            out = out + float(c) * x**i * y**j
        return out

    def gradient(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        gx = np.zeros(np.broadcast(x, y).shape)
        gy = np.zeros_like(gx)
        for i, j, c in self.terms:
            if i:
                gx = gx + float(c) * i * x ** (i - 1) * y**j
            if j:
                gy = gy + float(c) * j * x**i * y ** (j - 1)
        return gx, gy

    def format(self) -> str:
        parts = []
        for i, j, c in sorted(self.terms, key=lambda t: (-(t[0] + t[1]), -t[0])):
            mag = abs(c)
            coef = _format_coefficient(mag)
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in (("x", i), ("y", j)) if e)
            if mono:
                body = mono if mag == 1 else f"{coef}*{mono}"
            else:
                body = coef
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.format()


def _format_coefficient(c: Fraction) -> str:
    """Exact text for a positive rational: integer, terminating decimal, or ``n/d``."""
    if c.denominator == 1:
        return str(c.numerator)
    d, twos, fives = c.denominator, 0, 0
    while d % 2 == 0:
        d, twos = d // 2, twos + 1
    while d % 5 == 0:
        d, fives = d // 5, fives + 1
    if d != 1:
        return f"{c.numerator}/{c.denominator}"
    places = max(twos, fives)
    digits = str(c.numerator * 10**places // c.denominator).rjust(places + 1, "0")
    return f"{digits[:-places]}.{digits[-places:]}"


def _normalize(acc: dict[tuple[int, int], Fraction]) -> tuple:
    return tuple(sorted((i, j, c) for (i, j), c in acc.items() if c != 0))


# internal representation during parsing: {(i, j): Fraction}
_Poly = dict


def _mul(a: _Poly, b: _Poly) -> _Poly:
    out: _Poly = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            k = (i1 + i2, j1 + j2)
            out[k] = out.get(k, 0) + c1 * c2
    return {k: v for k, v in out.items() if v != 0}


def _add(a: _Poly, b: _Poly, sign: int = 1) -> _Poly:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + sign * v
    return {k: v for k, v in out.items() if v != 0}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str, pos: int | None = None, cls=PolynomialSyntaxError):
        raise cls(msg, self.text, self.pos if pos is None else pos)

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> _Poly:
        if not self.peek():
            self.error("empty input")
        p = self.expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return p

    def expr(self) -> _Poly:
        p = self.term()
        while self.peek() in ("+", "-"):
            sign = 1 if self.text[self.pos] == "+" else -1
            self.pos += 1
            p = _add(p, self.term(), sign)
        return p

    def term(self) -> _Poly:
        p = self.factor()
        while True:
            c = self.peek()
            if c == "*":
                self.pos += 1
                p = _mul(p, self.factor())
            elif c == "/":
                at = self.pos
                self.pos += 1
                d = self.factor()
                if set(d) != {(0, 0)}:
                    self.error("can only divide by a nonzero constant", at)
                p = {k: v / d[(0, 0)] for k, v in p.items()}
            elif c and (c.isalnum() or c in "(."):
                p = _mul(p, self.factor())
            else:
                return p

    def factor(self) -> _Poly:
        c = self.peek()
        if c in ("+", "-"):
            self.pos += 1
            f = self.factor()
            return f if c == "+" else {k: -v for k, v in f.items()}
        return self.power()

    def power(self) -> _Poly:
        base = self.atom()
        if self.peek() != "^":
            return base
        self.pos += 1
        self.peek()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected a nonnegative integer exponent")
        out: _Poly = {(0, 0): Fraction(1)}
        for _ in range(int(self.text[start:self.pos])):
            out = _mul(out, base)
        return out

    def atom(self) -> _Poly:
        c = self.peek()
        if not c:
            self.error("unexpected end of input")
        if c == "(":
            self.pos += 1
            p = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return p
        if c.isdigit() or c == ".":
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isdigit() or self.text[self.pos] == "."):
                self.pos += 1
            tok = self.text[start:self.pos]
            if tok.count(".") > 1 or tok == ".":
                self.error(f"bad number {tok!r}", start)
            val = Fraction(tok)
            return {(0, 0): val} if val else {}
        if c == "x":
            self.pos += 1
            return {(1, 0): Fraction(1)}
        if c == "y":
            self.pos += 1
            return {(0, 1): Fraction(1)}
        if c.isalpha():
            self.error(f"unsupported variable {c!r} (only x and y)", cls=UnsupportedVariable)
        self.error(f"unexpected {c!r}")


def parse_polynomial(text: str) -> Polynomial:
    """Parse text such as ``"144*(x^4+y^4)-225*(x^2+y^2)+350x^2y^2+81"``."""
    p = _Parser(text).parse()
    terms = _normalize(p)
    if not terms:
        raise PolynomialSyntaxError("polynomial is identically zero", text, 0)
    return Polynomial(terms)
