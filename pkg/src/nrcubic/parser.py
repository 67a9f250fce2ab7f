"""Polynomial expression parser and canonical printer.

Grammar (whitespace insignificant, no implicit multiplication)::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := INT ('/' INT)? | NAME | '(' expr ')'
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .errors import NotHomogeneous, ParseError
from .poly import VARS, HPoly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")

# sparse polynomial in the declared variables: {exponent tuple: coeff}
Sparse = dict


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("INT", int(m.group(1)), start))
        elif m.group(2) is not None:
            tokens.append(("NAME", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*^/()":
                raise ParseError(f"unexpected character {ch!r}", start)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("EOF", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.names = list(names)
        self.nvars = len(names)

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "EOF" else repr(tok[1])
            raise ParseError(f"expected {kind}, found {what}", tok[2])
        self.i += 1
        return tok

    def const(self, c) -> Sparse:
        return {(0,) * self.nvars: Fraction(c)} if c else {}

    def parse(self) -> Sparse:
        out = self.expr()
        tok = self.peek()
        if tok[0] != "EOF":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return out

    def expr(self) -> Sparse:
        acc = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            rhs = self.term()
            acc = _add(acc, rhs if op == "+" else _scale(rhs, -1))
        return acc

    def term(self) -> Sparse:
        acc = self.unary()
        while self.peek()[0] == "*":
            self.take()
            acc = _mul(acc, self.unary())
        return acc

    def unary(self) -> Sparse:
        kind = self.peek()[0]
        if kind == "-":
            self.take()
            return _scale(self.unary(), -1)
        if kind == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Sparse:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "INT":
                raise ParseError("exponent must be a nonnegative integer literal", tok[2])
            n = self.take()[1]
            out = self.const(1)
            for _ in range(n):
                out = _mul(out, base)
            return out
        return base

    def atom(self) -> Sparse:
        tok = self.take()
        kind = tok[0]
        if kind == "INT":
            value = Fraction(tok[1])
            if self.peek()[0] == "/":
                self.take()
                den = self.take("INT")
                if den[1] == 0:
                    raise ParseError("zero denominator", den[2])
                value /= den[1]
            return self.const(value)
        if kind == "NAME":
            if tok[1] not in self.names:
                raise ParseError(f"unknown variable {tok[1]!r} (implicit multiplication is not allowed)", tok[2])
            m = [0] * self.nvars
            m[self.names.index(tok[1])] = 1
            return {tuple(m): Fraction(1)}
        if kind == "(":
            inner = self.expr()
            self.take(")")
            return inner
        what = "end of input" if kind == "EOF" else repr(tok[1])
        raise ParseError(f"unexpected {what}", tok[2])


def _add(a: Sparse, b: Sparse) -> Sparse:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _scale(a: Sparse, k) -> Sparse:
    return {m: c * k for m, c in a.items()}


def _mul(a: Sparse, b: Sparse) -> Sparse:
    out: Sparse = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            v = out.get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def parse_poly(expr: str, vars: Sequence[str] = VARS) -> HPoly:
    """Parse ``expr`` in the three declared variables; reject inhomogeneous input."""
    if len(vars) != 3 or len(set(vars)) != 3:
        raise ParseError("exactly three distinct variable names are required")
    sparse = _Parser(expr, vars).parse()
    degrees = {sum(m) for m in sparse}
    if len(degrees) > 1:
        raise NotHomogeneous(f"{expr!r} mixes degrees {sorted(degrees)}", degrees=sorted(degrees))
    degree = degrees.pop() if degrees else 0
    return HPoly(degree, sparse)


def format_poly(p: HPoly, vars: Sequence[str] = VARS) -> str:
    """Canonical text: graded-lex order, ``*`` between factors, ``^`` powers."""
    if not p:
        return "0"
    pieces = []
    for m, c in p.terms:
        mono = "*".join(
            v if e == 1 else f"{v}^{e}" for v, e in zip(vars, m) if e
        )
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        pieces.append(("-" if c < 0 else "+", body))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        out += sign + body
    return out
