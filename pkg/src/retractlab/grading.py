"""Z-gradings induced by integer weight vectors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .poly import Polynomial

__all__ = [
    "InhomogeneousGenerator",
    "GradingReport",
    "weighted_degree",
    "homogeneous_components",
    "is_homogeneous",
    "grading_effective",
]


class InhomogeneousGenerator(ValueError):
    def __init__(self, generator: Polynomial, degrees: list[int]):
        self.generator = generator
        self.degrees = degrees
        super().__init__(f"generator {generator} is not homogeneous: components in degrees {degrees}")


def weighted_degree(e: Sequence[int], weights: Sequence[int]) -> int:
    return sum(a * w for a, w in zip(e, weights))


def _check(f: Polynomial, weights: Sequence[int]) -> None:
    if len(weights) != f.nvars:
        raise ValueError(f"{len(weights)} weights for {f.nvars} variables")


def homogeneous_components(f: Polynomial, weights: Sequence[int]) -> dict[int, Polynomial]:
    """Split f by weighted degree; keys ascending."""
    _check(f, weights)
    buckets: dict[int, dict] = {}
    for e, c in f.terms():
        buckets.setdefault(weighted_degree(e, weights), {})[e] = c
    return {d: Polynomial(f.field, f.nvars, buckets[d]) for d in sorted(buckets)}


def is_homogeneous(f: Polynomial, weights: Sequence[int]) -> tuple[bool, int | None]:
    """(True, degree) for homogeneous f.  Zero is homogeneous of every degree: (True, None)."""
    comps = homogeneous_components(f, weights)
    if not comps:
        return True, None
    if len(comps) == 1:
        return True, next(iter(comps))
    return False, None


@dataclass(frozen=True)
class GradingReport:
    effective: bool
    degrees: tuple[int | None, ...]  # per generator

    def __bool__(self):
        return self.effective


def grading_effective(gens: Sequence[Polynomial], weights: Sequence[int]) -> GradingReport:
    """Does the grading induced on k[gens] have a nonzero degree piece?

    Every generator must be homogeneous, otherwise the weights do not induce
    a grading on the subalgebra and InhomogeneousGenerator is raised.
    """
    degrees = []
    for g in gens:
        ok, d = is_homogeneous(g, weights)
        if not ok:
            raise InhomogeneousGenerator(g, list(homogeneous_components(g, weights)))
        degrees.append(d)
    return GradingReport(any(d for d in degrees if d is not None), tuple(degrees))
