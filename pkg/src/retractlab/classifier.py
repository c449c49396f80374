"""Decide whether a retract k[f1, ..., fn] is a polynomial ring (n = 2, 3).

Only sufficient conditions are known, so a verdict is one of
``NotARetraction``, ``PolynomialRing`` (with dimension and, when found,
generating witnesses) or ``Inconclusive``.  Every bounded sub-check records
its degree bound, and dimensions resting on bounded independence alone are
flagged ``bound_relative``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

from .endo import EndoMap, NotNormalizable, is_retraction, normalize_generators
from .parse import default_names, format_polynomial
from .poly import Polynomial
from .subalgebra import dependence_bounded, independent_upto, member_bounded

__all__ = [
    "Status",
    "Reason",
    "Verdict",
    "InconsistentDeduction",
    "basic_case_rule",
    "monomial_image_rule",
    "binomial_image_rule",
    "classify",
    "check_verdict",
    "RULES",
    "DEFAULT_BOUND",
]

DEFAULT_BOUND = 8

COSTA = "Costa (1977): retracts of R^[2] over a UFD R are polynomial rings"


class Status(str, Enum):
    NOT_A_RETRACTION = "NotARetraction"
    POLYNOMIAL_RING = "PolynomialRing"
    INCONCLUSIVE = "Inconclusive"


class InconsistentDeduction(AssertionError):
    """A forced consequence of idempotence failed on a retraction.

    This can only mean a bug in the arithmetic, never a valid input.
    """


@dataclass(frozen=True)
class Reason:
    rule: str
    anchor: str
    detail: str = ""


@dataclass
class Verdict:
    status: Status
    dim: int | None = None
    witnesses: tuple[Polynomial, ...] | None = None
    reasons: list[Reason] = field(default_factory=list)
    bounds: dict = field(default_factory=dict)
    bound_relative: bool = False
    defects: tuple = ()

    def to_json(self, names: Sequence[str] | None = None) -> dict:
        def fmt(p):
            return format_polynomial(p, names or default_names(p.nvars))

        return {
            "status": self.status.value,
            "dim": self.dim,
            "witnesses": None if self.witnesses is None else [fmt(w) for w in self.witnesses],
            "bound_relative": self.bound_relative,
            "reasons": [{"rule": r.rule, "anchor": r.anchor, "detail": r.detail} for r in self.reasons],
            "bounds": dict(self.bounds),
            "defects": [{"index": i, "residual": fmt(res)} for i, res in self.defects],
        }


# -- helpers ------------------------------------------------------------------

def _nonconstant(images: Sequence[Polynomial]) -> list[Polynomial]:
    out = []
    for f in images:
        if not f.is_constant() and f not in out:
            out.append(f)
    return out


def _greedy_basis(start: list[Polynomial], candidates: Sequence[Polynomial], bound: int) -> list[Polynomial]:
    basis = list(start)
    for f in candidates:
        if f.is_constant() or f in basis:
            continue
        if independent_upto(basis + [f], bound):
            basis.append(f)
    return basis


def _generates(basis: Sequence[Polynomial], images: Sequence[Polynomial], bound: int) -> bool:
    return all(f in basis or member_bounded(f, basis, bound) is not None for f in _nonconstant(images))


def _whole_ring(basis: Sequence[Polynomial], n: int, bound: int) -> bool:
    if not basis:
        return False
    fld = basis[0].field
    return all(member_bounded(x, basis, bound) is not None for x in Polynomial.gens(fld, n))


def _ring_verdict(images, basis, reasons, bound, witnessed=None) -> Verdict:
    """PolynomialRing(len(basis)); witnesses kept only when they generate every image."""
    n = len(images)
    d = len(basis)
    if witnessed is None:
        witnessed = _generates(basis, images, bound)
    exact = d <= 1 or (d == n and _whole_ring(basis, n, bound))
    return Verdict(
        Status.POLYNOMIAL_RING,
        d,
        tuple(basis) if witnessed else None,
        list(reasons),
        {"degree": bound},
        bound_relative=not exact,
    )


def _require(phi: EndoMap, n: int | None = 3) -> None:
    if n is not None and phi.nvars != n:
        raise ValueError(f"rule needs n = {n}, got n = {phi.nvars}")
    if not is_retraction(phi):
        raise ValueError("rule needs a retraction")


# -- rules --------------------------------------------------------------------

def _constant_case(phi: EndoMap, bound: int, reasons: list[Reason]) -> Verdict:
    rest = _nonconstant(phi.images)
    if not rest:
        return _ring_verdict(phi.images, [], reasons + [Reason("constant-image", "A = k")], bound)
    if len(rest) == 1:
        return _ring_verdict(phi.images, rest, reasons + [Reason("constant-image", "one nonconstant generator")], bound)
    a, b = rest[0], rest[1]
    rel = dependence_bounded([a, b], bound)
    if rel is None:
        return _ring_verdict(
            phi.images, [a, b],
            reasons + [Reason("constant-image", "remaining pair independent: tr.deg 2", f"no relation up to degree {bound}")],
            bound,
        )
    reasons = reasons + [Reason("constant-image", COSTA, f"relation {format_polynomial(rel.relation, ['t1', 't2'])} = 0")]
    for g, h in ((a, b), (b, a)):
        if member_bounded(h, [g], bound) is not None:
            return _ring_verdict(phi.images, [g], reasons, bound, witnessed=True)
    return _ring_verdict(phi.images, [a], reasons, bound, witnessed=False)


def _coordinate_case(phi: EndoMap, i: int, bound: int, reasons: list[Reason]) -> Verdict:
    x = Polynomial.var(i, phi.field, phi.nvars)
    others = [f for j, f in enumerate(phi.images) if j != i]
    basis = _greedy_basis([x], others, bound)
    names = default_names(phi.nvars)
    return _ring_verdict(
        phi.images, basis,
        reasons + [Reason("coordinate-image", f"retract over R = k[{names[i]}]; " + COSTA, f"f{i + 1} = {names[i]}")],
        bound,
    )


def basic_case_rule(phi: EndoMap, bound: int = DEFAULT_BOUND) -> Verdict | None:
    """Independent images, a constant image, or an image equal to its own variable."""
    _require(phi)
    images = phi.images
    if all(not f.is_constant() for f in images) and dependence_bounded(images, bound) is None:
        if _whole_ring(images, 3, bound):
            xs = Polynomial.gens(phi.field, 3)
            return Verdict(
                Status.POLYNOMIAL_RING, 3, xs,
                [Reason("independent-images", "tr.deg 3 forces A = B", "x, y, z certified members")],
                {"degree": bound},
            )
    if any(f.is_constant() for f in images):
        return _constant_case(phi, bound, [])
    for i, f in enumerate(images):
        if f == Polynomial.var(i, phi.field, 3):
            return _coordinate_case(phi, i, bound, [])
    return None


def monomial_image_rule(phi: EndoMap, bound: int = DEFAULT_BOUND) -> Verdict | None:
    """Some image is a monomial: idempotence forces a coordinate image."""
    _require(phi)
    images = phi.images
    if any(f.is_constant() for f in images):
        return None
    monos = [i for i, f in enumerate(images) if f.is_monomial()]
    if not monos:
        return None
    xs = Polynomial.gens(phi.field, 3)
    reasons = []
    if len(monos) == 1:
        i = monos[0]
        if images[i] != xs[i]:
            raise InconsistentDeduction(f"sole monomial image f{i + 1} = {images[i]} should equal x{i + 1}")
        reasons.append(Reason("monomial-image", "only monomial image must be its own variable", f"f{i + 1} = x{i + 1}"))
        return _coordinate_case(phi, i, bound, reasons)
    if len(monos) == 2:
        i, j = monos
        third = 3 - i - j
        if third in images[i].variables() | images[j].variables():
            raise InconsistentDeduction("monomial pair involves the variable of the non-monomial image")
        reasons.append(Reason("monomial-image", "monomial pair is a two-variable monomial retraction"))
    else:
        reasons.append(Reason("monomial-image", "all images monomial: idempotent exponent matrix"))
    for k in monos:
        if images[k] == xs[k]:
            return _coordinate_case(phi, k, bound, reasons)
    raise InconsistentDeduction("monomial images contain no coordinate image")


def binomial_image_rule(phi: EndoMap, bound: int = DEFAULT_BOUND) -> Verdict | None:
    """Some normalized image is x_i + a*monomial: idempotence forces a zero image."""
    _require(phi)
    reasons = []
    try:
        psi = normalize_generators(phi, bound)
        if psi != phi:
            reasons.append(Reason("normalization", "zero constant terms, monic lex-leading terms"))
    except NotNormalizable as exc:
        if any(f.constant_term() for f in phi.images):
            return None
        psi = phi
        reasons.append(Reason("normalization", "zero constant terms only", f"rescaling refused: {exc}"))
    xs = Polynomial.gens(phi.field, 3)
    for i, f in enumerate(psi.images):
        if len(f) != 2 or f.coeff(xs[i].leading_term()[0]) != 1:
            continue
        (e, _), = [(e, c) for e, c in f.terms() if e != xs[i].leading_term()[0]]
        movers = [j for j in range(3) if j != i and e[j] > 0]
        if not movers:
            raise InconsistentDeduction(f"f{i + 1} = x{i + 1} + a*x{i + 1}^p is never idempotent")
        zeros = [j for j in movers if psi.images[j].is_zero()]
        if not zeros:
            raise InconsistentDeduction(f"binomial f{i + 1} forces a zero image among {[j + 1 for j in movers]}")
        reasons.append(Reason("binomial-image", "correction term must vanish", f"f{zeros[0] + 1} = 0"))
        return _constant_case(psi, bound, reasons)
    return None


RULES: dict[str, Callable[[EndoMap, int], Verdict | None]] = {
    "basic": basic_case_rule,
    "monomial": monomial_image_rule,
    "binomial": binomial_image_rule,
}


def _classify_two(phi: EndoMap, bound: int) -> Verdict:
    basis = _greedy_basis([], phi.images, bound)
    return _ring_verdict(phi.images, basis, [Reason("two-variables", "every retract of k^[2] is a polynomial ring; " + COSTA)], bound)


def classify(phi: EndoMap, bound: int = DEFAULT_BOUND, order: Sequence[str] = ("basic", "monomial", "binomial")) -> Verdict:
    """Run the idempotence test, then the rules in ``order``; first verdict wins."""
    if phi.nvars not in (2, 3):
        raise ValueError(f"classification supports n = 2 or 3, got {phi.nvars}")
    report = is_retraction(phi)
    if not report:
        return Verdict(
            Status.NOT_A_RETRACTION,
            reasons=[Reason("idempotence", "f_i(f1, ..., fn) = f_i fails")],
            bounds={"degree": bound},
            defects=report.defects,
        )
    if phi.nvars == 2:
        return _classify_two(phi, bound)
    for name in order:
        verdict = RULES[name](phi, bound)
        if verdict is not None:
            verdict.reasons.insert(0, Reason("idempotence", "f_i(f1, ..., fn) = f_i holds"))
            return verdict
    return Verdict(
        Status.INCONCLUSIVE,
        reasons=[Reason("idempotence", "f_i(f1, ..., fn) = f_i holds")]
        + [Reason(name, "not applicable") for name in order],
        bounds={"degree": bound},
    )


def check_verdict(verdict: Verdict, phi: EndoMap) -> bool:
    """Re-verify a PolynomialRing verdict's witnesses from scratch."""
    if verdict.status is not Status.POLYNOMIAL_RING:
        return True
    if verdict.witnesses is None:
        return verdict.dim is not None
    bound = verdict.bounds["degree"]
    W = list(verdict.witnesses)
    if len(W) != verdict.dim:
        return False
    if W and dependence_bounded(W, bound) is not None:
        return False
    for f in _nonconstant(phi.images):
        cert = member_bounded(f, W, bound) if W else None
        if cert is None or not cert.verify(f, W):
            return False
    return True
