"""Algebra endomorphisms of k[x1, ..., xn] given by the images of the variables."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .field import Field
from .poly import NotDivisible, Polynomial, RingMismatch, exact_divide, monomials_upto
from .subalgebra import member_bounded

__all__ = [
    "EndoMap",
    "RetractionReport",
    "KernelCheck",
    "NotNormalizable",
    "is_retraction",
    "normalize_generators",
    "is_normalized",
    "kernel_principal_check",
]


class NotNormalizable(ValueError):
    pass


@dataclass(frozen=True)
class EndoMap:
    """x_i -> images[i]."""

    images: tuple[Polynomial, ...]

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if not images:
            raise ValueError("an endomorphism needs at least one image")
        field, n = images[0].field, images[0].nvars
        if len(images) != n:
            raise ValueError(f"{len(images)} images given for {n} variables")
        for f in images:
            if f.field != field or f.nvars != n:
                raise RingMismatch("all images must live in the same ring")

    @classmethod
    def identity(cls, field: Field, n: int) -> "EndoMap":
        return cls(Polynomial.gens(field, n))

    @property
    def field(self) -> Field:
        return self.images[0].field

    @property
    def nvars(self) -> int:
        return len(self.images)

    def apply(self, g: Polynomial) -> Polynomial:
        if g.field != self.field or g.nvars != self.nvars:
            raise RingMismatch(f"cannot apply a map on {self.field}[{self.nvars} vars] to {g.field}[{g.nvars} vars]")
        return g.substitute(self.images)

    __call__ = apply

    def compose(self, other: "EndoMap") -> "EndoMap":
        """self after other: x_i -> self(other(x_i))."""
        if other.field != self.field or other.nvars != self.nvars:
            raise RingMismatch("cannot compose maps on different rings")
        return EndoMap(tuple(self.apply(g) for g in other.images))

    def is_idempotent(self) -> bool:
        return self.compose(self) == self


@dataclass(frozen=True)
class RetractionReport:
    is_retraction: bool
    defects: tuple[tuple[int, Polynomial], ...]  # (1-based index, f_i(f) - f_i)

    def __bool__(self):
        return self.is_retraction


def is_retraction(phi: EndoMap) -> RetractionReport:
    """Check f_i(f_1, ..., f_n) == f_i for every i."""
    defects = []
    for i, f in enumerate(phi.images):
        image = phi.apply(f)
        if image != f:
            defects.append((i + 1, image - f))
    return RetractionReport(not defects, tuple(defects))


def is_normalized(phi: EndoMap) -> bool:
    """Zero constant terms and unit lex-leading coefficients on nonzero images."""
    for f in phi.images:
        if f.is_zero():
            continue
        if f.constant_term() != 0 or f.leading_coefficient() != 1:
            return False
    return True


def normalize_generators(phi: EndoMap, bound: int = 8) -> EndoMap:
    """Rescale each image affinely to f -> (f - c)/lc, keeping the retraction.

    The result must still be idempotent and generate the same subalgebra
    (checked by mutual bounded membership); otherwise NotNormalizable.
    """
    if not is_retraction(phi):
        raise ValueError("normalize_generators needs a retraction")
    if is_normalized(phi):
        return phi
    new = []
    for f in phi.images:
        g = f - f.constant_term()
        if g:
            g = g.scale(f.field.inv(g.leading_coefficient()))
        new.append(g)
    psi = EndoMap(tuple(new))
    report = is_retraction(psi)
    if not report:
        i, res = report.defects[0]
        raise NotNormalizable(f"rescaled image {i} breaks idempotence (residual {res})")
    for f in phi.images:
        if f.is_constant():
            continue
        if member_bounded(f, psi.images, bound) is None:
            raise NotNormalizable(f"{f} not recovered from rescaled images within degree {bound}")
    for g in psi.images:
        if g.is_constant():
            continue
        if member_bounded(g, phi.images, bound) is None:
            raise NotNormalizable(f"{g} not in the original algebra within degree {bound}")
    return psi


@dataclass(frozen=True)
class KernelCheck:
    """Outcome of testing Ker(phi) == (h) on monomials up to ``bound``."""

    holds: bool
    bound: int
    failure: tuple[int, ...] | None = None  # first monomial whose residual h misses
    reason: str = ""

    def __bool__(self):
        return self.holds


def kernel_principal_check(phi: EndoMap, h: Polynomial, bound: int) -> KernelCheck:
    """phi(h) == 0 and h | b - phi(b) for every monomial b of degree <= bound."""
    if h.is_zero():
        raise ValueError("h must be nonzero")
    if not is_retraction(phi):
        raise ValueError("kernel_principal_check needs a retraction")
    if phi.apply(h):
        return KernelCheck(False, bound, None, "phi(h) != 0")
    for e in monomials_upto(phi.nvars, bound):
        b = Polynomial.monomial(e, 1, phi.field)
        try:
            exact_divide(b - phi.apply(b), h)
        except NotDivisible:
            return KernelCheck(False, bound, e, "residual not divisible by h")
    return KernelCheck(True, bound)
