"""Polynomial expression parser and printer.

Grammar (explicit ``*`` required)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*      # '/' only by nonzero constants
    unary   := ('+' | '-') unary | power
    power   := atom ('^' exponent)?
    exponent:= INT | '(' intexpr ')'           # nonnegative integer
    atom    := NUMBER | IDENT | '(' expr ')'

Numbers may be written ``3`` or ``3/4``; the latter is just constant
division.  ``U`` and ``V`` are reserved for exponential-map contexts.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .field import Field
from .poly import Polynomial

__all__ = ["ParseError", "parse_polynomial", "parse_images", "format_polynomial", "default_names"]

RESERVED = ("U", "V")

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<id>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")


class ParseError(ValueError):
    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        self.pos = pos
        self.text = text
        if pos is not None:
            message = f"{message} at column {pos + 1}"
            if text is not None:
                message += f"\n  {text}\n  {' ' * pos}^"
        super().__init__(message)


def default_names(n: int) -> list[str]:
    if n <= 3:
        return ["x", "y", "z"][:n]
    return [f"x{i + 1}" for i in range(n)]


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            j = pos
            while j < len(text) and text[j].isspace():
                j += 1
            raise ParseError(f"unexpected character {text[j]!r}", j, text)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, field: Field, names: Sequence[str]):
        self.text = text
        self.field = field
        self.names = list(names)
        self.index = {v: i for i, v in enumerate(self.names)}
        self.n = len(self.names)
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, v, pos = self.take()
        if v != value:
            raise ParseError(f"expected {value!r}, found {v or 'end of input'!r}", pos, self.text)

    def fail(self, msg, pos):
        raise ParseError(msg, pos, self.text)

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.fail("empty expression", 0)
        p = self.expr()
        kind, v, pos = self.peek()
        if kind != "end":
            if kind in ("num", "id") or v == "(":
                self.fail("implicit multiplication is not allowed; use '*'", pos)
            self.fail(f"unexpected {v!r}", pos)
        return p

    def expr(self):
        p = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek()[1] in ("*", "/"):
            op, pos = self.take()[1:]
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant():
                    self.fail("division by a non-constant expression", pos)
                if q.is_zero():
                    self.fail("division by zero", pos)
                p = p.scale(self.field.inv(q.constant_term()))
        return p

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            k = self.exponent()
            base = base ** k
        return base

    def exponent(self) -> int:
        kind, v, pos = self.peek()
        if v == "-":
            self.fail("negative exponent", pos)
        if kind == "num":
            self.take()
            return int(v)
        if v == "(":
            self.take()
            k = self.intexpr()
            self.expect(")")
            if k < 0:
                self.fail("negative exponent", pos)
            return k
        self.fail("exponent must be a nonnegative integer", pos)

    # integer arithmetic for exponents like ^(2*3)
    def intexpr(self) -> int:
        k = self.intterm()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            j = self.intterm()
            k = k + j if op == "+" else k - j
        return k

    def intterm(self) -> int:
        k = self.intatom()
        while self.peek()[1] == "*":
            self.take()
            k *= self.intatom()
        return k

    def intatom(self) -> int:
        kind, v, pos = self.take()
        if kind == "num":
            return int(v)
        if v == "-":
            return -self.intatom()
        if v == "(":
            k = self.intexpr()
            self.expect(")")
            return k
        self.fail("exponent must be a nonnegative integer", pos)

    def atom(self):
        kind, v, pos = self.take()
        if kind == "num":
            return Polynomial.constant(Fraction(int(v)), self.field, self.n)
        if kind == "id":
            if v not in self.index:
                if v in RESERVED:
                    self.fail(f"{v} is reserved for exponential maps", pos)
                self.fail(f"unknown identifier {v!r}", pos)
            return Polynomial.var(self.index[v], self.field, self.n)
        if v == "(":
            p = self.expr()
            self.expect(")")
            return p
        if kind == "end":
            self.fail("unexpected end of input", pos)
        self.fail(f"unexpected {v!r}", pos)


def parse_polynomial(text: str, field: Field, names: Sequence[str], allow_reserved: bool = False) -> Polynomial:
    """Parse ``text`` into a polynomial over ``field`` in the variables ``names``."""
    if not allow_reserved:
        for r in RESERVED:
            if r in names:
                raise ParseError(f"{r} is reserved for exponential maps")
    return _Parser(text, field, names).parse()


def parse_images(text: str, field: Field, names: Sequence[str], allow_reserved: bool = False) -> list[Polynomial]:
    """Parse ``"f1; f2; ..."``."""
    parts = [p for p in text.split(";")]
    if parts and parts[-1].strip() == "":
        parts = parts[:-1]
    out = []
    for k, part in enumerate(parts):
        try:
            out.append(parse_polynomial(part, field, names, allow_reserved))
        except ParseError as exc:
            raise ParseError(f"image {k + 1}: {exc}") from None
    return out


def _fmt_coeff(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def format_polynomial(f: Polynomial, names: Sequence[str] | None = None) -> str:
    """Render in lex-decreasing term order, e.g. ``x^2*y - 3/2*z + 1``."""
    if names is None:
        n = f.nvars
        names = default_names(n)
    if f.is_zero():
        return "0"
    parts = []
    for e, c in f.terms():
        mono = "*".join(
            names[i] if a == 1 else f"{names[i]}^{a}" for i, a in enumerate(e) if a
        )
        neg = f.field.p == 0 and c < 0
        mag = -c if neg else c
        if not mono:
            body = _fmt_coeff(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_fmt_coeff(mag)}*{mono}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)
