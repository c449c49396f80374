"""Sparse multivariate polynomials with exact coefficients.

A :class:`Polynomial` is an immutable map from exponent tuples to nonzero
field elements.  Terms are kept in lexicographically decreasing order
(``x1 > x2 > ... > xn``), so iteration order, printing and leading-term
queries are deterministic.
"""

from __future__ import annotations

import os
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Mapping, Sequence

from .field import QQ, Field

__all__ = [
    "Polynomial",
    "RingMismatch",
    "NotDivisible",
    "DegreeCapError",
    "degree_cap",
    "monomials_upto",
    "exact_divide",
    "divides",
    "substitute",
]

DEFAULT_MAX_DEGREE = 512


class RingMismatch(ValueError):
    pass


class NotDivisible(ArithmeticError):
    pass


class DegreeCapError(RuntimeError):
    """Raised when a result would exceed the configured total-degree cap."""


def degree_cap() -> int:
    v = os.environ.get("RETRACTLAB_MAX_DEGREE")
    return int(v) if v else DEFAULT_MAX_DEGREE


def _ring_str(field: Field, n: int) -> str:
    return f"{field}[{n} vars]"


class Polynomial:
    __slots__ = ("field", "nvars", "_t", "_deg", "_hash")

    def __init__(self, field: Field, nvars: int, terms: Mapping | Iterable = ()):
        self.field = field
        self.nvars = nvars
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for e, c in items:
            e = tuple(e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
            if any(a < 0 for a in e):
                raise ValueError(f"negative exponent in {e}")
            acc[e] = acc.get(e, 0) + field(c)
        self._t = {e: field.norm(acc[e]) for e in sorted(acc, reverse=True) if field.norm(acc[e])}
        self._deg = None
        self._hash = None

    @classmethod
    def _raw(cls, field: Field, nvars: int, terms: dict, ordered: bool = False) -> "Polynomial":
        # terms must already be canonical (nonzero, normalised); sorted if ordered
        p = object.__new__(cls)
        p.field = field
        p.nvars = nvars
        p._t = terms if ordered else {e: terms[e] for e in sorted(terms, reverse=True)}
        p._deg = None
        p._hash = None
        return p

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, field: Field = QQ, nvars: int = 1) -> "Polynomial":
        return cls._raw(field, nvars, {}, True)

    @classmethod
    def constant(cls, c, field: Field = QQ, nvars: int = 1) -> "Polynomial":
        c = field(c)
        return cls._raw(field, nvars, {(0,) * nvars: c} if c else {}, True)

    @classmethod
    def var(cls, i: int, field: Field = QQ, nvars: int = 1) -> "Polynomial":
        """The i-th variable, 0-based."""
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls._raw(field, nvars, {tuple(e): 1}, True)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1, field: Field = QQ) -> "Polynomial":
        return cls(field, len(exps), {tuple(exps): coeff})

    @classmethod
    def gens(cls, field: Field = QQ, nvars: int = 1) -> tuple["Polynomial", ...]:
        return tuple(cls.var(i, field, nvars) for i in range(nvars))

    # -- basic queries --------------------------------------------------
    @property
    def ring(self) -> tuple[Field, int]:
        return (self.field, self.nvars)

    def terms(self) -> Iterator[tuple[tuple[int, ...], object]]:
        """(exponent, coefficient) pairs in lex-decreasing order."""
        return iter(self._t.items())

    def as_dict(self) -> dict:
        return dict(self._t)

    def coeff(self, exps: Sequence[int]):
        return self._t.get(tuple(exps), 0)

    def __len__(self):
        return len(self._t)

    def __bool__(self):
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and not any(next(iter(self._t))))

    def constant_term(self):
        return self._t.get((0,) * self.nvars, 0)

    def is_monomial(self) -> bool:
        """True for a single term (any coefficient)."""
        return len(self._t) == 1

    def is_monic_monomial(self) -> bool:
        return len(self._t) == 1 and next(iter(self._t.values())) == 1

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if self._deg is None:
            self._deg = max((sum(e) for e in self._t), default=-1)
        return self._deg

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self._t), default=-1)

    def variables(self) -> set[int]:
        return {i for e in self._t for i, a in enumerate(e) if a}

    def leading_term(self) -> tuple[tuple[int, ...], object]:
        """Lex-leading (exponent, coefficient) with x1 > x2 > ... > xn."""
        if not self._t:
            raise ValueError("zero polynomial has no leading term")
        return next(iter(self._t.items()))

    def leading_coefficient(self):
        return self.leading_term()[1]

    # -- equality -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.field == other.field and self.nvars == other.nvars and self._t == other._t
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self._t
            return self.is_constant() and self.constant_term() == self.field(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.nvars, tuple(self._t.items())))
        return self._hash

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.field != self.field or other.nvars != self.nvars:
                raise RingMismatch(
                    f"ring mismatch: {_ring_str(self.field, self.nvars)} "
                    f"vs {_ring_str(other.field, other.nvars)}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.field, self.nvars)
        raise TypeError(f"cannot combine polynomial with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        norm = self.field.norm
        t = dict(self._t)
        for e, c in other._t.items():
            v = norm(t.get(e, 0) + c)
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return Polynomial._raw(self.field, self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        norm = self.field.norm
        return Polynomial._raw(self.field, self.nvars, {e: norm(-c) for e, c in self._t.items()}, True)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = self.field(c)
        if not c:
            return Polynomial.zero(self.field, self.nvars)
        norm = self.field.norm
        return Polynomial._raw(self.field, self.nvars, {e: norm(v * c) for e, v in self._t.items()}, True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not self._t or not other._t:
            return Polynomial.zero(self.field, self.nvars)
        if self.total_degree() + other.total_degree() > degree_cap():
            raise DegreeCapError(
                f"product degree {self.total_degree() + other.total_degree()} exceeds cap {degree_cap()}"
            )
        norm = self.field.norm
        a, b = self._t, other._t
        if len(a) == 1:
            (ea, ca), = a.items()
            # monomial times polynomial keeps lex order
            return Polynomial._raw(
                self.field, self.nvars,
                {tuple(x + y for x, y in zip(ea, e)): norm(ca * c) for e, c in b.items()}, True,
            )
        if len(b) == 1:
            return other * self
        t: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                t[e] = t.get(e, 0) + ca * cb
        t = {e: v for e, v in ((e, norm(v)) for e, v in t.items()) if v}
        return Polynomial._raw(self.field, self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        if k == 0:
            return Polynomial.constant(1, self.field, self.nvars)
        if self._t and self.total_degree() * k > degree_cap():
            raise DegreeCapError(f"power degree {self.total_degree() * k} exceeds cap {degree_cap()}")
        if len(self._t) == 1:
            (e, c), = self._t.items()
            return Polynomial._raw(
                self.field, self.nvars, {tuple(a * k for a in e): self.field.norm(pow(c, k, self.field.p) if self.field.p else c ** k)}, True
            )
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(self.field.inv(self.field(other)))
        if isinstance(other, Polynomial):
            if other.is_constant() and other:
                return self.scale(self.field.inv(other.constant_term()))
            return exact_divide(self, other)
        return NotImplemented

    # -- structural helpers ---------------------------------------------
    def embed(self, nvars: int, positions: Sequence[int] | None = None) -> "Polynomial":
        """Re-home into a ring with ``nvars`` variables; variable i goes to positions[i]."""
        if positions is None:
            positions = range(self.nvars)
        positions = list(positions)
        if len(positions) != self.nvars:
            raise ValueError("positions must list one target per variable")
        t = {}
        for e, c in self._t.items():
            ne = [0] * nvars
            for i, a in zip(positions, e):
                ne[i] += a
            t[tuple(ne)] = c
        return Polynomial._raw(self.field, nvars, t)

    def map_coefficients(self, field: Field) -> "Polynomial":
        return Polynomial(field, self.nvars, self._t)

    def substitute(self, images: Sequence["Polynomial"], extend: bool = False) -> "Polynomial":
        return substitute(self, images, extend=extend)

    def __call__(self, *images):
        return substitute(self, images, extend=True)

    def __repr__(self):
        from .parse import format_polynomial

        return f"Polynomial({format_polynomial(self)!r}, {self.field!r}, nvars={self.nvars})"

    def __str__(self):
        from .parse import format_polynomial

        return format_polynomial(self)


def substitute(g: Polynomial, images: Sequence[Polynomial], extend: bool = False) -> Polynomial:
    """Return g(images[0], ..., images[n-1]).

    Images must share one ring.  Unless ``extend`` is set, that ring must be
    g's ring; with ``extend`` the result lives in the images' ring (used for
    maps into B[U] and B[U, V]).
    """
    images = list(images)
    if len(images) != g.nvars:
        raise ValueError(f"arity mismatch: {len(images)} images for {g.nvars} variables")
    if images:
        field, n = images[0].field, images[0].nvars
        for im in images:
            if im.field != field or im.nvars != n:
                raise RingMismatch("substitution images live in different rings")
        if field != g.field:
            raise RingMismatch(f"field mismatch: {g.field} vs {field}")
        if n != g.nvars and not extend:
            raise RingMismatch(
                f"ring mismatch: {_ring_str(g.field, g.nvars)} vs {_ring_str(field, n)}"
            )
    else:
        field, n = g.field, 0
    if not g._t:
        return Polynomial.zero(field, n)
    if all(len(im._t) <= 1 for im in images):
        return _substitute_monomial(g, images, field, n)
    powers: list[dict[int, Polynomial]] = [{} for _ in images]

    def pw(i: int, k: int) -> Polynomial:
        cache = powers[i]
        if k not in cache:
            cache[k] = images[i] ** k
        return cache[k]

    norm = field.norm
    acc: dict = {}
    for e, c in g._t.items():
        term = None
        for i, k in enumerate(e):
            if k:
                p = pw(i, k)
                term = p if term is None else term * p
                if not term._t:
                    break
        if term is None:
            z = (0,) * n
            acc[z] = acc.get(z, 0) + c
        else:
            for te, tc in term._t.items():
                acc[te] = acc.get(te, 0) + tc * c
    return Polynomial._raw(field, n, {e: v for e, v in ((e, norm(v)) for e, v in acc.items()) if v})


def _substitute_monomial(g: Polynomial, images: Sequence[Polynomial], field: Field, n: int) -> Polynomial:
    # every image is zero or a single term: each term of g maps to one term
    ims = [next(iter(im._t.items())) if im._t else None for im in images]
    norm = field.norm
    cap = degree_cap()
    acc: dict = {}
    for e, c in g._t.items():
        out = [0] * n
        coeff = c
        for k, im in zip(e, ims):
            if not k:
                continue
            if im is None:
                coeff = 0
                break
            ie, ic = im
            for j, a in enumerate(ie):
                if a:
                    out[j] += a * k
            if ic != 1:
                coeff = coeff * (pow(ic, k, field.p) if field.p else ic ** k)
        if not coeff:
            continue
        if sum(out) > cap:
            raise DegreeCapError(f"substitution degree {sum(out)} exceeds cap {cap}")
        key = tuple(out)
        acc[key] = acc.get(key, 0) + coeff
    return Polynomial._raw(field, n, {e: v for e, v in ((e, norm(v)) for e, v in acc.items()) if v})


def exact_divide(f: Polynomial, h: Polynomial) -> Polynomial:
    """Quotient q with f == q*h; raises NotDivisible when none exists."""
    if h.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    h = f._coerce(h)
    field, n = f.field, f.nvars
    he, hc = h.leading_term()
    hinv = field.inv(hc)
    r = f
    q: dict = {}
    while r._t:
        re_, rc = r.leading_term()
        qe = tuple(a - b for a, b in zip(re_, he))
        if any(a < 0 for a in qe):
            raise NotDivisible(f"{h} does not divide {f}")
        qc = field.norm(rc * hinv)
        q[qe] = qc
        r = r - Polynomial._raw(field, n, {qe: qc}, True) * h
    return Polynomial._raw(field, n, q)


def divides(h: Polynomial, f: Polynomial) -> bool:
    try:
        exact_divide(f, h)
    except NotDivisible:
        return False
    return True


def monomials_upto(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree <= degree, graded then lex-decreasing."""
    out = []
    for d in range(degree + 1):
        layer = []
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            layer.append(tuple(e))
        out.extend(sorted(set(layer), reverse=True))
    return out
