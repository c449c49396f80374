"""Subalgebras k[g1, ..., gr] of a polynomial ring.

Membership and algebraic dependence are decided only up to a degree bound
``D`` on the representing polynomial: a ``None`` answer means "nothing found
within the bound", never a proof.  For monic-monomial generators membership
is a semigroup question on exponent vectors and is decided exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .linalg import Echelon
from .poly import DegreeCapError, Polynomial, degree_cap, monomials_upto

__all__ = [
    "Certificate",
    "DependenceWitness",
    "clean_generators",
    "member_bounded",
    "dependence_bounded",
    "independent_upto",
    "semigroup_member",
    "minimize_monomial_generators",
    "factorially_closed_monomial",
]


@dataclass(frozen=True)
class Certificate:
    """f == expression(g1, ..., gr) with deg(expression) <= bound."""

    expression: Polynomial
    bound: int

    def verify(self, f: Polynomial, gens: Sequence[Polynomial]) -> bool:
        return _evaluate(self.expression, gens, f) == f


@dataclass(frozen=True)
class DependenceWitness:
    """Nonzero relation R(t1, ..., tr) with R(g1, ..., gr) == 0."""

    relation: Polynomial
    bound: int

    def verify(self, gens: Sequence[Polynomial]) -> bool:
        if self.relation.is_zero():
            return False
        return _evaluate(self.relation, gens, None).is_zero()


def _evaluate(expr: Polynomial, gens: Sequence[Polynomial], like: Polynomial | None) -> Polynomial:
    if gens:
        return expr.substitute(list(gens), extend=True)
    # no generators: expr is a constant
    field = expr.field
    n = like.nvars if like is not None else 0
    return Polynomial.constant(expr.constant_term(), field, n)


def clean_generators(gens: Sequence[Polynomial]) -> list[Polynomial]:
    """Drop zeros and duplicates, keeping first occurrences."""
    out: list[Polynomial] = []
    for g in gens:
        if not g.is_zero() and g not in out:
            out.append(g)
    return out


def _check_cap(gens: Sequence[Polynomial], bound: int) -> None:
    top = max((g.total_degree() for g in gens), default=0)
    if top * bound > degree_cap():
        raise DegreeCapError(
            f"degree bound {bound} with generators of degree {top} exceeds cap {degree_cap()}"
        )


def _products(gens: Sequence[Polynomial], bound: int, like: Polynomial) -> Iterator[tuple[int, list]]:
    """Yield (degree, [(alpha, g**alpha), ...]) layer by layer."""
    r = len(gens)
    one = Polynomial.constant(1, like.field, like.nvars)
    cache: dict[tuple[int, ...], Polynomial] = {(0,) * r: one}
    layer: list = []
    current = 0
    for alpha in monomials_upto(r, bound):
        d = sum(alpha)
        if d != current:
            yield current, layer
            layer, current = [], d
        if alpha not in cache:
            j = next(i for i, a in enumerate(alpha) if a)
            prev = list(alpha)
            prev[j] -= 1
            cache[alpha] = cache[tuple(prev)] * gens[j]
        layer.append((alpha, cache[alpha]))
    yield current, layer


def _combo_poly(combo: dict, r: int, field) -> Polynomial:
    return Polynomial(field, r, {a: c for a, c in combo.items() if c})


def member_bounded(f: Polynomial, gens: Sequence[Polynomial], bound: int) -> Certificate | None:
    """Find P with deg P <= bound and P(gens) == f, or return None.

    Solves the linear system on the coefficients of P by exact elimination,
    layer by total degree, stopping as soon as f enters the span.
    """
    if bound < 1:
        raise ValueError("degree bound must be >= 1")
    gens = list(gens)
    for g in gens:
        f._coerce(g)
    _check_cap(gens, bound)
    ech = Echelon(f.field)
    target = f.as_dict()
    for _, layer in _products(gens, bound, f):
        for alpha, prod in layer:
            ech.insert(prod.as_dict(), alpha)
        combo = ech.represent(target)
        if combo is not None:
            return Certificate(_combo_poly(combo, len(gens), f.field), bound)
    return None


def _normalize_relation(rel: Polynomial) -> Polynomial:
    return rel.scale(rel.field.inv(rel.leading_coefficient()))


def dependence_bounded(gens: Sequence[Polynomial], bound: int) -> DependenceWitness | None:
    """First relation of degree <= bound among ``gens``; None if independent to the bound.

    Candidate monomials are visited in graded order, so the witness is the
    lowest-degree relation found first, made monic at its lex-leading term.
    """
    if bound < 1:
        raise ValueError("degree bound must be >= 1")
    gens = list(gens)
    if not gens:
        return None
    like = gens[0]
    for g in gens:
        like._coerce(g)
    _check_cap(gens, bound)
    ech = Echelon(like.field)
    for _, layer in _products(gens, bound, like):
        for alpha, prod in layer:
            rel = ech.insert(prod.as_dict(), alpha)
            if rel is not None:
                poly = _combo_poly(rel, len(gens), like.field)
                return DependenceWitness(_normalize_relation(poly), bound)
    return None


def independent_upto(gens: Sequence[Polynomial], bound: int) -> bool:
    return dependence_bounded(gens, bound) is None


# -- monomial subalgebras ---------------------------------------------------

def _monomial_exps(gens: Sequence[Polynomial]) -> list[tuple[int, ...]]:
    out = []
    for g in gens:
        if not g.is_monic_monomial():
            raise ValueError(f"generator {g} is not a monic monomial")
        out.append(g.leading_term()[0])
    return out


def semigroup_member(e: tuple[int, ...], gens: Sequence[tuple[int, ...]]) -> bool:
    """Is ``e`` a nonnegative-integer combination of the exponent vectors ``gens``?

    Exact: zero vectors are ignored, so every step strictly lowers the total
    degree and the search terminates.
    """
    gs = tuple(sorted({g for g in gens if any(g)}, reverse=True))
    return _sg_member(tuple(e), gs)


@lru_cache(maxsize=65536)
def _sg_member(e: tuple[int, ...], gens: tuple[tuple[int, ...], ...]) -> bool:
    if not any(e):
        return True
    for g in gens:
        if all(a >= b for a, b in zip(e, g)):
            if _sg_member(tuple(a - b for a, b in zip(e, g)), gens):
                return True
    return False


def minimize_monomial_generators(gens: Sequence[Polynomial]) -> list[Polynomial]:
    """Inclusion-minimal subset of monic monomials generating the same algebra.

    The constant 1 is dropped; a generator is dropped when it is a product of
    the remaining ones.  Order of survivors follows the input.
    """
    exps = _monomial_exps(gens)
    uniq: list[tuple[int, ...]] = []
    keep: list[Polynomial] = []
    for e, g in zip(exps, gens):
        if any(e) and e not in uniq:
            uniq.append(e)
            keep.append(g)
    out = []
    for i, (e, g) in enumerate(zip(uniq, keep)):
        others = uniq[:i] + uniq[i + 1:]
        if not semigroup_member(e, others):
            out.append(g)
    return out


def factorially_closed_monomial(
    gens: Sequence[Polynomial], nvars: int, bound: int
) -> tuple[bool, tuple[tuple[int, ...], tuple[int, ...]] | None]:
    """Check b1*b2 in A  =>  b1, b2 in A over monic monomials of degree <= bound.

    Only monomial factors are examined.  Returns ``(True, None)`` or
    ``(False, (b1, b2))`` with the first offending pair of exponent vectors.
    """
    exps = _monomial_exps(gens)
    mons = monomials_upto(nvars, bound)
    member = {m: semigroup_member(m, exps) for m in mons}
    for i, b1 in enumerate(mons):
        for b2 in mons[i:]:
            prod = tuple(a + b for a, b in zip(b1, b2))
            inside = member.get(prod)
            if inside is None:
                inside = semigroup_member(prod, exps)
            if inside and not (member[b1] and member[b2]):
                return False, (b1, b2)
    return True, None
