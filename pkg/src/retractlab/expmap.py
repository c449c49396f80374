"""Exponential maps sigma: B -> B[U] on B = k[x1, ..., xn].

A map is stored through the images g_i = sigma(x_i), polynomials in the n+1
variables (x1, ..., xn, U); U is always the last variable.  Everything that
asks for a ring of constants or a slice works up to a total-degree bound in
the x variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .field import Field
from .linalg import Echelon, rref_rows
from .parse import default_names
from .poly import Polynomial, RingMismatch, monomials_upto
from .subalgebra import Certificate, member_bounded, _products

__all__ = [
    "ExpMap",
    "AxiomReport",
    "SliceInfo",
    "LocalizationReport",
    "verify_axioms",
    "sigma_degree_lc",
    "constants_bounded",
    "find_local_slice",
    "localization_identity_check",
    "ml_bounded",
    "coordinate_translation_expmap",
]


@dataclass(frozen=True)
class ExpMap:
    images: tuple[Polynomial, ...]

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if not images:
            raise ValueError("an exponential map needs at least one image")
        fld, m = images[0].field, images[0].nvars
        if m != len(images) + 1:
            raise ValueError(f"images must live in {len(images) + 1} variables (x..., U), got {m}")
        for g in images:
            if g.field != fld or g.nvars != m:
                raise RingMismatch("all images must live in the same ring")

    @property
    def field(self) -> Field:
        return self.images[0].field

    @property
    def nvars(self) -> int:
        return len(self.images)

    def names(self) -> list[str]:
        return default_names(self.nvars) + ["U"]

    def lift(self, b: Polynomial) -> Polynomial:
        """b viewed in B[U]."""
        return b.embed(self.nvars + 1)

    def apply(self, b: Polynomial) -> Polynomial:
        if b.field != self.field or b.nvars != self.nvars:
            raise RingMismatch("polynomial and map live in different rings")
        return b.substitute(self.images, extend=True)

    __call__ = apply

    def fixes(self, b: Polynomial) -> bool:
        return self.apply(b) == self.lift(b)

    def is_trivial_upto(self, bound: int) -> bool:
        return all(self.fixes(Polynomial.monomial(e, 1, self.field)) for e in monomials_upto(self.nvars, bound))


@dataclass(frozen=True)
class AxiomReport:
    axiom_i_ok: bool
    axiom_ii_ok: bool
    defects_i: tuple[tuple[int, Polynomial], ...]   # (1-based i, g_i(x, 0) - x_i), ring x
    defects_ii: tuple[tuple[int, Polynomial], ...]  # (1-based i, residual), ring (x, U, V)

    @property
    def ok(self) -> bool:
        return self.axiom_i_ok and self.axiom_ii_ok

    def __bool__(self):
        return self.ok


def _axiom_ii_residuals(sigma: ExpMap, swap: bool = False) -> tuple[tuple[int, Polynomial], ...]:
    n = sigma.nvars
    fld = sigma.field
    m = n + 2
    xs = list(Polynomial.gens(fld, m)[:n])
    U = Polynomial.var(n, fld, m)
    V = Polynomial.var(n + 1, fld, m)
    inner_var, outer_var = (V, U) if swap else (U, V)
    inner_pos = n + 1 if swap else n
    inner = [g.embed(m, list(range(n)) + [inner_pos]) for g in sigma.images]
    out = []
    for i, g in enumerate(sigma.images):
        lhs = g.substitute(inner + [outer_var], extend=True)
        rhs = g.substitute(xs + [U + V], extend=True)
        res = rhs - lhs
        if res:
            out.append((i + 1, res))
    return tuple(out)


def verify_axioms(sigma: ExpMap) -> AxiomReport:
    """Check g_i(x, 0) = x_i and g_i(g(x, U), V) = g_i(x, U + V)."""
    n = sigma.nvars
    fld = sigma.field
    xs = list(Polynomial.gens(fld, n))
    zero = Polynomial.zero(fld, n)
    d1 = []
    for i, g in enumerate(sigma.images):
        res = g.substitute(xs + [zero], extend=True) - xs[i]
        if res:
            d1.append((i + 1, res))
    d2 = _axiom_ii_residuals(sigma)
    return AxiomReport(not d1, not d2, tuple(d1), d2)


def _u_split(p: Polynomial, n: int) -> tuple[int, Polynomial]:
    deg = p.degree_in(n)
    lead = {e[:n]: c for e, c in p.terms() if e[n] == deg}
    return deg, Polynomial(p.field, n, lead)


def sigma_degree_lc(sigma: ExpMap, b: Polynomial) -> tuple[int, Polynomial]:
    """Degree of sigma(b) in U and its leading U-coefficient."""
    if b.is_zero():
        raise ValueError("sigma-degree of zero is undefined")
    return _u_split(sigma.apply(b), sigma.nvars)


def _diff_vector(sigma: ExpMap, e: tuple[int, ...], tag=None) -> dict:
    b = Polynomial.monomial(e, 1, sigma.field)
    d = (sigma.apply(b) - sigma.lift(b)).as_dict()
    if tag is None:
        return d
    return {(tag, k): v for k, v in d.items()}


def _kernel_basis(fld: Field, n: int, columns) -> list[Polynomial]:
    ech = Echelon(fld)
    relations = []
    for e, vec in columns:
        rel = ech.insert(vec, e)
        if rel is not None:
            relations.append(rel)
    rows = rref_rows(fld, relations)
    polys = [Polynomial(fld, n, r) for r in rows]
    return sorted(polys, key=lambda p: (sum(p.leading_term()[0]), p.leading_term()[0]))


def constants_bounded(sigma: ExpMap, bound: int) -> list[Polynomial]:
    """Echelon basis of {b : deg b <= bound, sigma(b) = b}."""
    mons = monomials_upto(sigma.nvars, bound)
    return _kernel_basis(sigma.field, sigma.nvars, ((e, _diff_vector(sigma, e)) for e in mons))


def ml_bounded(maps: Sequence[ExpMap], bound: int) -> list[Polynomial]:
    """Basis of the common constants of ``maps`` in degree <= bound.

    Only an upper approximation of the Makar-Limanov invariant: adding maps
    can only shrink it.
    """
    maps = list(maps)
    if not maps:
        raise ValueError("ml_bounded needs at least one map")
    fld, n = maps[0].field, maps[0].nvars
    for s in maps:
        if s.field != fld or s.nvars != n:
            raise RingMismatch("all maps must act on the same ring")

    def column(e):
        vec: dict = {}
        for j, s in enumerate(maps):
            vec.update(_diff_vector(s, e, tag=j))
        return e, vec

    return _kernel_basis(fld, n, (column(e) for e in monomials_upto(n, bound)))


@dataclass(frozen=True)
class SliceInfo:
    slice: Polynomial
    degree: int
    leading: Polynomial
    bound: int


def find_local_slice(sigma: ExpMap, bound: int) -> SliceInfo | None:
    """Non-constant monomial of least sigma-degree; None if sigma fixes every
    monomial of degree <= bound.

    Ties go to smaller total degree, then to the lex-smaller exponent.
    """
    best = None
    for e in monomials_upto(sigma.nvars, bound):
        b = Polynomial.monomial(e, 1, sigma.field)
        img = sigma.apply(b)
        if img == sigma.lift(b):
            continue
        deg, lead = _u_split(img, sigma.nvars)
        key = (deg, sum(e), e)
        if best is None or key < best[0]:
            best = (key, b, deg, lead)
    if best is None:
        return None
    _, s, deg, lead = best
    if not sigma.fixes(lead):
        raise AssertionError(f"leading coefficient {lead} of a slice is not a constant")
    return SliceInfo(s, deg, lead, bound)


@dataclass
class LocalizationReport:
    certified: bool
    bound: int
    exponents: dict = field(default_factory=dict)        # 1-based i -> N with a^N x_i certified
    certificates: dict = field(default_factory=dict)     # 1-based i -> Certificate
    generators: list = field(default_factory=list)       # constants used, then the slice last
    slice_indeterminate: bool = False
    note: str = ""

    def __bool__(self):
        return self.certified


def _layer_ranks(gens: list[Polynomial], bound: int, like: Polynomial) -> list[int]:
    """rank of {g^alpha : |alpha| <= d} for d = 0..bound."""
    ech = Echelon(like.field)
    rank, out = 0, []
    for _, layer in _products(gens, bound, like):
        for alpha, prod in layer:
            if ech.insert(prod.as_dict(), alpha) is None:
                rank += 1
        out.append(rank)
    return out


def _slice_free_of_relations(consts: list[Polynomial], s: Polynomial, bound: int) -> bool:
    """s is indeterminate over k[consts] up to degree ``bound``.

    Every relation among (consts, s) must come from relations among the
    constants alone, i.e. the span of c^alpha s^k splits as the direct sum
    of the spans of c^alpha, shifted by s^k.  Compared by ranks.
    """
    if consts:
        rc = _layer_ranks(consts, bound, s)
    else:
        rc = [1] * (bound + 1)
    whole = _layer_ranks(consts + [s], bound, s)[-1]
    return whole == sum(rc[bound - k] for k in range(bound + 1))


def localization_identity_check(sigma: ExpMap, info: SliceInfo | None, bound: int) -> LocalizationReport:
    """Certify a^N x_i in k[constants, s] for every i, and s transcendental over the constants.

    ``a`` is the leading coefficient of the slice ``s``; constants come from
    :func:`constants_bounded` at the same bound.
    """
    if info is None:
        return LocalizationReport(True, bound, note="sigma trivial up to the bound, nothing to localise")
    a, s = info.leading, info.slice
    if a.is_zero():
        raise ValueError("slice has zero leading coefficient")
    consts = [c for c in constants_bounded(sigma, bound) if not c.is_constant()]
    gens = consts + [s]
    report = LocalizationReport(False, bound, generators=gens)
    for i, xi in enumerate(Polynomial.gens(sigma.field, sigma.nvars)):
        for N in range(bound + 1):
            cert = member_bounded(a ** N * xi, gens, bound)
            if cert is not None and cert.verify(a ** N * xi, gens):
                report.exponents[i + 1] = N
                report.certificates[i + 1] = cert
                break
    report.slice_indeterminate = _slice_free_of_relations(consts, s, bound)
    report.certified = len(report.exponents) == sigma.nvars and report.slice_indeterminate
    return report


def coordinate_translation_expmap(n: int, moving: int, fld: Field) -> ExpMap:
    """x_moving -> x_moving + U, every other coordinate fixed (0-based index)."""
    if not 0 <= moving < n:
        raise IndexError(f"coordinate {moving} out of range for n={n}")
    gens = list(Polynomial.gens(fld, n + 1))
    images = [gens[i] for i in range(n)]
    images[moving] = gens[moving] + gens[n]
    return ExpMap(tuple(images))
