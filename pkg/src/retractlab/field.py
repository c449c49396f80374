"""Coefficient fields: the rationals and prime fields GF(p)."""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

__all__ = ["Field", "QQ", "GF", "parse_field"]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Field:
    """An exact coefficient field.

    ``p == 0`` is the rationals; rational coefficients are stored as ``int``
    when integral and as :class:`fractions.Fraction` otherwise.  For a prime
    ``p`` coefficients are ints in ``[0, p-1]``.
    """

    __slots__ = ("p",)

    def __init__(self, p: int = 0):
        if p != 0 and not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def characteristic(self) -> int:
        return self.p

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    def __eq__(self, other):
        return self is other or (isinstance(other, Field) and other.p == self.p)

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p == 0 else f"GF({self.p})"

    def __str__(self):
        return "Q" if self.p == 0 else f"F{self.p}"

    # -- coefficient handling -------------------------------------------
    def __call__(self, c):
        """Coerce an int, Fraction or numeric string into this field."""
        if isinstance(c, str):
            c = Fraction(c)
        if self.p == 0:
            if isinstance(c, Fraction):
                return c.numerator if c.denominator == 1 else c
            if isinstance(c, int):
                return c
            raise TypeError(f"cannot coerce {c!r} into {self}")
        if isinstance(c, Fraction):
            if c.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator of {c} vanishes in {self}")
            return c.numerator * pow(c.denominator, -1, self.p) % self.p
        if isinstance(c, int):
            return c % self.p
        raise TypeError(f"cannot coerce {c!r} into {self}")

    def norm(self, c):
        # cheap canonicalisation for results of +,-,* on canonical values
        if self.p:
            return c % self.p
        if type(c) is Fraction and c.denominator == 1:
            return c.numerator
        return c

    def inv(self, c):
        if not c:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(c, -1, self.p)
        return self.norm(Fraction(1) / c)

    def div(self, a, b):
        if self.p:
            return a * pow(b, -1, self.p) % self.p
        if type(a) is int and type(b) is int:
            q, r = divmod(a, b)
            if r == 0:
                return q
            return Fraction(a, b)
        return self.norm(Fraction(a) / b)


QQ = Field(0)


@lru_cache(maxsize=None)
def GF(p: int) -> Field:
    return Field(p)


def parse_field(text: str) -> Field:
    """Parse ``Q`` or ``F<p>`` (also ``GF<p>``, ``GF(p)``)."""
    t = text.strip()
    if t in ("Q", "QQ"):
        return QQ
    m = re.fullmatch(r"(?:F|GF)\(?(\d+)\)?", t)
    if not m:
        raise ValueError(f"unknown field {text!r}; expected Q or F<p>")
    return GF(int(m.group(1)))
