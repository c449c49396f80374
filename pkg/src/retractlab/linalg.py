"""Exact incremental Gaussian elimination on sparse vectors.

Vectors are dicts ``key -> coefficient`` with comparable keys; the pivot of a
row is its largest key.  Columns are fed one at a time and each insertion
either extends the row space or yields a linear relation among the inserted
columns, expressed through their labels.  Pivoting is deterministic: the
result depends only on the order of insertion.
"""

from __future__ import annotations

from typing import Hashable

from .field import Field

__all__ = ["Echelon", "rref_rows"]


def _axpy(field: Field, y: dict, a, x: dict) -> None:
    """y += a*x in place, dropping zeros."""
    norm = field.norm
    for k, v in x.items():
        w = norm(y.get(k, 0) + a * v)
        if w:
            y[k] = w
        else:
            y.pop(k, None)


class Echelon:
    """Row space in echelon form with provenance tracking.

    Each stored row is monic at its pivot and carries ``combo``, the linear
    combination of inserted labels that produced it.
    """

    def __init__(self, field: Field):
        self.field = field
        self.rows: dict = {}  # pivot -> (vector, combo)

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: dict, combo: dict | None = None) -> tuple[dict, dict]:
        """Reduce ``vec`` until its pivot is new (or it vanishes)."""
        field = self.field
        vec = dict(vec)
        combo = dict(combo or {})
        while vec:
            lead = max(vec)
            row = self.rows.get(lead)
            if row is None:
                break
            c = vec[lead]
            rv, rc = row
            _axpy(field, vec, -c, rv)
            _axpy(field, combo, -c, rc)
        return vec, combo

    def insert(self, vec: dict, label: Hashable) -> dict | None:
        """Insert a column; return the relation (label -> coeff) if dependent."""
        vec, combo = self.reduce(vec, {label: 1})
        if not vec:
            return combo
        lead = max(vec)
        inv = self.field.inv(vec[lead])
        norm = self.field.norm
        vec = {k: norm(v * inv) for k, v in vec.items()}
        combo = {k: norm(v * inv) for k, v in combo.items()}
        self.rows[lead] = (vec, combo)
        return None

    def represent(self, vec: dict) -> dict | None:
        """Combination of labels equal to ``vec``, or None if outside the span."""
        rest, combo = self.reduce(vec)
        if rest:
            return None
        norm = self.field.norm
        return {k: norm(-v) for k, v in combo.items() if v}


def rref_rows(field: Field, vectors: list[dict]) -> list[dict]:
    """Fully reduced, monic echelon basis of the span of ``vectors``.

    Rows are returned sorted by pivot ascending.
    """
    ech = Echelon(field)
    for i, v in enumerate(vectors):
        ech.insert(v, i)
    pivots = sorted(ech.rows)
    rows = {p: dict(ech.rows[p][0]) for p in pivots}
    # back-substitute so every pivot column is zero in the other rows
    for p in pivots:
        for q in pivots:
            if q != p and p in rows[q]:
                _axpy(field, rows[q], -rows[q][p], rows[p])
    return [rows[p] for p in pivots]
