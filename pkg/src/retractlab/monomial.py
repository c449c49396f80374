"""Retractions whose images are zeros or monic monomials.

Such a tuple is encoded as a tuple of ``None`` (the zero image) or exponent
vectors.  Idempotence reduces to an integer-matrix condition on the exponents
of the surviving variables; enumeration searches that matrix space through
the kernels in :mod:`retractlab._kernels` and cross-checks every survivor by
polynomial substitution.
"""

from __future__ import annotations

import itertools
import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels
from .endo import EndoMap, is_retraction
from .field import QQ, Field
from .parse import ParseError, default_names, parse_polynomial
from .poly import Polynomial

__all__ = [
    "MonoTuple",
    "ExponentMatrix",
    "FamilyPattern",
    "Enumeration",
    "MatchReport",
    "CorpusError",
    "to_mono_tuple",
    "to_polys",
    "exponent_matrix",
    "is_idempotent_matrix",
    "enumerate_monomial_retractions",
    "matrix_route",
    "load_corpus",
    "builtin_corpus",
    "match_families",
    "POLY_PARAMETER_CHOICES",
]

MonoTuple = tuple[Optional[tuple[int, ...]], ...]


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class ExponentMatrix:
    """Exponents of the surviving variables in the surviving images.

    ``support`` lists 0-based indices of the nonzero images; ``entries[i][j]``
    is the exponent of x_{support[j]} in f_{support[i]}.
    """

    support: tuple[int, ...]
    entries: tuple[tuple[int, ...], ...]

    def array(self) -> np.ndarray:
        r = len(self.support)
        return np.array(self.entries, dtype=np.int64).reshape(r, r)

    def trace(self) -> int:
        return sum(self.entries[i][i] for i in range(len(self.support)))


def to_mono_tuple(images: Sequence[Polynomial]) -> MonoTuple:
    out = []
    for f in images:
        if f.is_zero():
            out.append(None)
        elif f.is_monic_monomial():
            out.append(f.leading_term()[0])
        else:
            raise ValueError(f"{f} is neither zero nor a monic monomial")
    return tuple(out)


def to_polys(tup: MonoTuple, fld: Field = QQ) -> tuple[Polynomial, ...]:
    n = len(tup)
    return tuple(
        Polynomial._raw(fld, n, {} if e is None else {tuple(e): 1}, True) for e in tup
    )


def exponent_matrix(images: Sequence[Polynomial] | MonoTuple) -> ExponentMatrix | None:
    """Restricted exponent matrix, or None when a nonzero image uses a variable
    whose own image is zero (such a tuple cannot be idempotent)."""
    tup = images if _is_mono_tuple(images) else to_mono_tuple(images)
    support = tuple(i for i, e in enumerate(tup) if e is not None)
    dead = [j for j, e in enumerate(tup) if e is None]
    for i in support:
        if any(tup[i][j] for j in dead):
            return None
    entries = tuple(tuple(tup[i][j] for j in support) for i in support)
    return ExponentMatrix(support, entries)


def _is_mono_tuple(obj) -> bool:
    return all(e is None or isinstance(e, tuple) for e in obj)


def is_idempotent_matrix(E: ExponentMatrix | np.ndarray | Sequence[Sequence[int]]) -> bool:
    a = E.array() if isinstance(E, ExponentMatrix) else np.asarray(E, dtype=np.int64)
    if a.size == 0:
        return True
    return bool(np.array_equal(a @ a, a))


def matrix_route(tuples: Sequence[MonoTuple]) -> np.ndarray:
    """Valid exponent matrix and E*E == E, for many tuples at once.

    Tuples are grouped by support so each group is one batched kernel call.
    """
    out = np.zeros(len(tuples), dtype=np.bool_)
    groups: dict[tuple[int, ...], list] = {}
    for k, tup in enumerate(tuples):
        E = exponent_matrix(tup)
        if E is not None:
            groups.setdefault(E.support, []).append((k, E.entries))
    for support, items in groups.items():
        r = len(support)
        idx = np.array([k for k, _ in items], dtype=np.int64)
        if r == 0:
            out[idx] = True
            continue
        mats = np.array([e for _, e in items], dtype=np.int64).reshape(-1, r, r)
        out[idx] = _kernels.batch_idempotent(mats)
    return out


def is_trivial(tup: MonoTuple) -> bool:
    """A = k: every image is 0 or 1."""
    return all(e is None or not any(e) for e in tup)


def tuple_key(tup: MonoTuple):
    return tuple((0,) if e is None else (1,) + tuple(e) for e in tup)


@dataclass(frozen=True)
class Enumeration:
    n: int
    max_exp: int
    tuples: tuple[MonoTuple, ...]
    trivial: frozenset  # tuples with A = k

    def nontrivial(self) -> list[MonoTuple]:
        return [t for t in self.tuples if t not in self.trivial]


def _support_tuples(n: int, support: tuple[int, ...], max_exp: int, fld: Field) -> list[MonoTuple]:
    r = len(support)
    mats = _kernels.idempotent_matrices(r, max_exp)
    out = []
    for m in mats:
        tup: list = [None] * n
        for i, si in enumerate(support):
            e = [0] * n
            for j, sj in enumerate(support):
                e[sj] = int(m[i, j])
            tup[si] = tuple(e)
        tup = tuple(tup)
        if not is_retraction(EndoMap(to_polys(tup, fld))):
            raise AssertionError(f"matrix route accepted a non-retraction {tup}")
        out.append(tup)
    return out


def enumerate_monomial_retractions(
    n: int, max_exp: int, threads: int = 1, fld: Field = QQ
) -> Enumeration:
    """Every tuple of zeros / monic monomials (exponents <= max_exp) that is idempotent.

    Tuples with A = k are kept and listed in ``trivial``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if max_exp < 0:
        raise ValueError("max_exp must be nonnegative")
    supports = [s for r in range(n + 1) for s in itertools.combinations(range(n), r)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda s: _support_tuples(n, s, max_exp, fld), supports))
    else:
        parts = [_support_tuples(n, s, max_exp, fld) for s in supports]
    tuples = sorted({t for part in parts for t in part}, key=tuple_key)
    trivial = frozenset(t for t in tuples if is_trivial(t))
    return Enumeration(n, max_exp, tuple(tuples), trivial)


# -- corpus -------------------------------------------------------------------

POLY_PARAMETER_CHOICES: dict[str, tuple[str, ...]] = {
    "g": ("1", "x", "y + 1"),
    "P_x": ("x^2 + x", "x^3 - 2*x"),
    "P_y": ("y^2 + y", "y^3 - 2*y"),
    "P_xy": ("x*y + x", "x^2 - y^2 + y"),
}
EXPONENT_PARAMETERS = ("m", "l")


@dataclass(frozen=True)
class FamilyPattern:
    """A parametric family of retractions: image templates plus the generator column."""

    family_id: str
    n: int
    templates: tuple[str, ...]
    generators: tuple[str, ...]
    line: int = 0

    @property
    def exponent_params(self) -> tuple[str, ...]:
        text = " ".join(self.templates + self.generators)
        return tuple(p for p in EXPONENT_PARAMETERS if re.search(rf"\b{p}\b", text))

    @property
    def poly_params(self) -> tuple[str, ...]:
        text = " ".join(self.templates + self.generators)
        return tuple(p for p in POLY_PARAMETER_CHOICES if re.search(rf"\b{p}\b", text))

    @property
    def is_monomial_family(self) -> bool:
        return not self.poly_params

    def assignments(self, max_param: int, poly_choices: dict | None = None):
        choices = poly_choices or POLY_PARAMETER_CHOICES
        eps = self.exponent_params
        pps = self.poly_params
        for evals in itertools.product(range(max_param + 1), repeat=len(eps)):
            for pvals in itertools.product(*(choices[p] for p in pps)):
                yield {**dict(zip(eps, map(str, evals))), **{p: f"({v})" for p, v in zip(pps, pvals)}}

    def _subst(self, text: str, assignment: dict) -> str:
        for name in sorted(assignment, key=len, reverse=True):
            text = re.sub(rf"\b{re.escape(name)}\b", assignment[name], text)
        return text

    def instantiate(self, assignment: dict, fld: Field = QQ) -> tuple[tuple[Polynomial, ...], tuple[Polynomial, ...]]:
        """(images, generators) for one parameter assignment."""
        names = default_names(self.n)
        imgs = tuple(parse_polynomial(self._subst(t, assignment), fld, names) for t in self.templates)
        gens = tuple(parse_polynomial(self._subst(g, assignment), fld, names) for g in self.generators)
        return imgs, gens

    def instances(self, max_param: int, fld: Field = QQ, poly_choices: dict | None = None):
        """Yield (assignment, images, generators) with exponent params in [0, max_param]."""
        for a in self.assignments(max_param, poly_choices):
            imgs, gens = self.instantiate(a, fld)
            yield a, imgs, gens


def parse_corpus(text: str, source: str = "<corpus>") -> list[FamilyPattern]:
    """Records ``family_id | n | t1; t2; ... | g1, g2, ...``; ``#`` starts a comment."""
    out = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split("|")]
        if len(parts) != 4:
            raise CorpusError(f"{source}:{lineno}: expected 4 '|'-separated fields, got {len(parts)}")
        fid, n_txt, tmpl, gens = parts
        if not fid or fid in seen:
            raise CorpusError(f"{source}:{lineno}: missing or duplicate family id {fid!r}")
        seen.add(fid)
        try:
            n = int(n_txt)
        except ValueError:
            raise CorpusError(f"{source}:{lineno}: record {fid}: bad variable count {n_txt!r}") from None
        templates = tuple(t.strip() for t in tmpl.split(";"))
        if len(templates) != n:
            raise CorpusError(f"{source}:{lineno}: record {fid}: {len(templates)} templates for n={n}")
        generators = tuple(g.strip() for g in gens.split(",") if g.strip())
        pat = FamilyPattern(fid, n, templates, generators, lineno)
        try:
            pat.instantiate({p: "1" for p in pat.exponent_params} | {p: "(1)" for p in pat.poly_params})
        except ParseError as exc:
            raise CorpusError(f"{source}:{lineno}: record {fid}: {exc}") from None
        out.append(pat)
    return out


def load_corpus(path: str | Path) -> list[FamilyPattern]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise CorpusError(f"cannot read corpus {path}: {exc}") from None
    return parse_corpus(text, str(path))


BUILTIN_CORPORA = {
    "monomial-n2": "monomial-n2.txt",
    "monomial-n3": "monomial-n3.txt",
    "normalized-n2": "normalized-n2.txt",
    "normalized-n3": "normalized-n3.txt",
}


def builtin_corpus(name: str) -> list[FamilyPattern]:
    fname = BUILTIN_CORPORA[name]
    text = resources.files("retractlab").joinpath("corpus").joinpath(fname).read_text()
    return parse_corpus(text, fname)


def corpus_to_json(patterns: Iterable[FamilyPattern]) -> str:
    return json.dumps(
        [
            {"family_id": p.family_id, "n": p.n, "templates": list(p.templates), "generators": list(p.generators)}
            for p in patterns
        ],
        indent=2,
    )


@dataclass
class MatchReport:
    matched: list = field(default_factory=list)
    unmatched: list = field(default_factory=list)
    trivial: list = field(default_factory=list)
    missing: list = field(default_factory=list)  # (family_id, tuple) instances absent from the input
    family_hits: dict = field(default_factory=dict)

    @property
    def unhit_families(self) -> list[str]:
        return [f for f, k in self.family_hits.items() if k == 0]

    @property
    def families_hit(self) -> int:
        return sum(1 for k in self.family_hits.values() if k)

    @property
    def exact(self) -> bool:
        return not self.unmatched and not self.missing


def family_instances_in_range(pattern: FamilyPattern, max_exp: int) -> set[MonoTuple]:
    """Monomial instances of a family whose exponents all lie in [0, max_exp]."""
    out = set()
    for _, imgs, _ in pattern.instances(max_exp):
        try:
            tup = to_mono_tuple(imgs)
        except ValueError:
            continue
        if all(e is None or max(e, default=0) <= max_exp for e in tup):
            out.add(tup)
    return out


def match_families(tuples: Iterable[MonoTuple], patterns: Sequence[FamilyPattern], max_exp: int) -> MatchReport:
    """Compare enumerated tuples with corpus families instantiated up to ``max_exp``.

    Tuples with A = k never appear in the tables; they are reported apart
    from the unmatched ones.
    """
    tuples = sorted(set(tuples), key=tuple_key)
    inst = {p.family_id: family_instances_in_range(p, max_exp) for p in patterns if p.is_monomial_family}
    report = MatchReport(family_hits={fid: 0 for fid in inst})
    covered: set = set()
    for t in tuples:
        covered.add(t)
        if is_trivial(t):
            report.trivial.append(t)
            continue
        hit = False
        for fid, members in inst.items():
            if t in members:
                report.family_hits[fid] += 1
                hit = True
        (report.matched if hit else report.unmatched).append(t)
    for fid, members in inst.items():
        for t in sorted(members - covered, key=tuple_key):
            report.missing.append((fid, t))
    return report
