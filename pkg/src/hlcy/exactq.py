"""Exact sparse linear algebra over the rationals.

Matrices are stored as ``{(row, col): Fraction}`` with no explicit zeros.
Vectors are plain lists of Fractions.  Elimination is row-incremental with
a fill-reducing pivot rule; because arithmetic is exact the pivot rule only
affects speed, never the answer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

__all__ = [
    "SparseMatrix",
    "NotAComplexError",
    "rank",
    "dense_rank",
    "kernel_basis",
    "solve",
    "homology_dim",
    "Echelon",
]

ZERO = Fraction(0)
ONE = Fraction(1)


class NotAComplexError(ValueError):
    pass


@dataclass(frozen=True)
class SparseMatrix:
    rows: int
    cols: int
    entries: Dict[Tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            if v == 0:
                raise ValueError(f"stored zero at ({r}, {c})")

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "SparseMatrix":
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        ent = {}
        for i, row in enumerate(rows):
            if len(row) != nc:
                raise ValueError("ragged matrix")
            for j, v in enumerate(row):
                if v:
                    ent[i, j] = Fraction(v)
        return cls(nr, nc, ent)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Dict[int, Fraction]]) -> "SparseMatrix":
        ent = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    ent[i, j] = Fraction(v)
        return cls(rows, len(columns), ent)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): ONE for i in range(n)})

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return not self.entries

    def to_dense(self) -> List[List[Fraction]]:
        out = [[ZERO] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def row_dicts(self) -> List[Dict[int, Fraction]]:
        rs: List[Dict[int, Fraction]] = [{} for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            rs[r][c] = v
        return rs

    def col_dicts(self) -> List[Dict[int, Fraction]]:
        cs: List[Dict[int, Fraction]] = [{} for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            cs[c][r] = v
        return cs

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        left = self.col_dicts()
        acc: Dict[Tuple[int, int], Fraction] = {}
        for (k, j), b in other.entries.items():
            for i, a in left[k].items():
                key = (i, j)
                acc[key] = acc.get(key, ZERO) + a * b
        return SparseMatrix(self.rows, other.cols, {k: v for k, v in acc.items() if v})

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        acc = dict(self.entries)
        for k, v in other.entries.items():
            acc[k] = acc.get(k, ZERO) + v
        return SparseMatrix(self.rows, self.cols, {k: v for k, v in acc.items() if v})

    def __neg__(self) -> "SparseMatrix":
        return SparseMatrix(self.rows, self.cols, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def scale(self, c) -> "SparseMatrix":
        c = Fraction(c)
        if not c:
            return SparseMatrix.zero(self.rows, self.cols)
        return SparseMatrix(self.rows, self.cols, {k: c * v for k, v in self.entries.items()})

    def apply(self, v: Sequence) -> List[Fraction]:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for {self.cols} columns")
        out = [ZERO] * self.rows
        for (r, c), a in self.entries.items():
            if v[c]:
                out[r] += a * v[c]
        return out

    def hstack(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch in hstack")
        ent = dict(self.entries)
        for (r, c), v in other.entries.items():
            ent[r, c + self.cols] = v
        return SparseMatrix(self.rows, self.cols + other.cols, ent)


class Echelon:
    """Incrementally maintained row-echelon basis of a subspace of Q^n.

    Each stored row has a pivot column that no later row touches; earlier
    rows may still carry later pivots until :meth:`reduce_fully` runs.
    ``protected`` columns are never chosen as pivots while an alternative
    exists (used for the augmented column in :func:`solve`).
    """

    def __init__(self, ncols: int, prefer=None, protected: Iterable[int] = ()):
        self.ncols = ncols
        self.pivots: List[int] = []
        self.rows: Dict[int, Dict[int, Fraction]] = {}
        self._prefer = prefer
        self._protected = frozenset(protected)
        self._full = True

    def __len__(self):
        return len(self.pivots)

    def reduce(self, row: Dict[int, Fraction]) -> Dict[int, Fraction]:
        row = {c: Fraction(v) for c, v in row.items() if v}
        for p in self.pivots:
            a = row.get(p)
            if a is None:
                continue
            for c, v in self.rows[p].items():
                nv = row.get(c, ZERO) - a * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
        return row

    def _choose(self, row):
        cand = [c for c in row if c not in self._protected] or list(row)
        if self._prefer is None:
            return min(cand)
        return min(cand, key=self._prefer)

    def add(self, row: Dict[int, Fraction]) -> Optional[int]:
        """Insert a row; returns the new pivot column, or None if dependent."""
        r = self.reduce(row)
        if not r:
            return None
        p = self._choose(r)
        inv = 1 / r[p]
        self.rows[p] = {c: v * inv for c, v in r.items()}
        self.pivots.append(p)
        self._full = False
        return p

    def reduce_fully(self):
        if self._full:
            return
        for k in range(len(self.pivots) - 1, -1, -1):
            p = self.pivots[k]
            row = self.rows[p]
            for q in self.pivots[k + 1:]:
                a = row.get(q)
                if a is None:
                    continue
                for c, v in self.rows[q].items():
                    nv = row.get(c, ZERO) - a * v
                    if nv:
                        row[c] = nv
                    else:
                        row.pop(c, None)
        self._full = True

    def contains(self, row: Dict[int, Fraction]) -> bool:
        return not self.reduce(row)


def _fill_order(m: SparseMatrix):
    counts = [0] * m.cols
    for (_, c) in m.entries:
        counts[c] += 1
    return lambda c: (counts[c], c)


def _echelon_of_rows(m: SparseMatrix, protected=()) -> Echelon:
    rows = [r for r in m.row_dicts() if r]
    rows.sort(key=len)
    e = Echelon(m.cols, prefer=_fill_order(m), protected=protected)
    for r in rows:
        e.add(r)
        if len(e) == m.cols:
            break
    return e


def rank(m: SparseMatrix) -> int:
    if m.is_zero():
        return 0
    # eliminate along the shorter side
    if m.rows < m.cols:
        m = m.transpose()
    return len(_echelon_of_rows(m))


def dense_rank(m: SparseMatrix) -> int:
    """Plain dense Gaussian elimination, first-nonzero pivoting."""
    a = m.to_dense()
    nr, nc = m.rows, m.cols
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pr = a[r]
        for i in range(r + 1, nr):
            f = a[i][c]
            if f:
                f = f / pr[c]
                ai = a[i]
                for j in range(c, nc):
                    if pr[j]:
                        ai[j] -= f * pr[j]
        r += 1
        if r == nr:
            break
    return r


def kernel_basis(m: SparseMatrix) -> List[List[Fraction]]:
    e = _echelon_of_rows(m)
    e.reduce_fully()
    piv = set(e.pivots)
    out = []
    for f in range(m.cols):
        if f in piv:
            continue
        v = [ZERO] * m.cols
        v[f] = ONE
        for p in e.pivots:
            a = e.rows[p].get(f)
            if a:
                v[p] = -a
        out.append(v)
    return out


def solve(m: SparseMatrix, v: Sequence) -> Optional[List[Fraction]]:
    """Some x with m x = v, or None when v is outside the column span."""
    if len(v) != m.rows:
        raise ValueError(f"right-hand side has length {len(v)}, matrix has {m.rows} rows")
    aug_col = m.cols
    aug = m.hstack(SparseMatrix.from_columns(m.rows, [{i: x for i, x in enumerate(v) if x}]))
    e = _echelon_of_rows(aug, protected=(aug_col,))
    if aug_col in e.rows:
        return None
    e.reduce_fully()
    x = [ZERO] * m.cols
    for p in e.pivots:
        x[p] = e.rows[p].get(aug_col, ZERO)
    return x


def homology_dim(d_in: SparseMatrix, d_out: SparseMatrix) -> int:
    if d_in.rows != d_out.cols:
        raise ValueError(f"d_in lands in dimension {d_in.rows}, d_out starts from {d_out.cols}")
    if not (d_out @ d_in).is_zero():
        raise NotAComplexError("not a complex: d_out . d_in != 0")
    return d_out.cols - rank(d_out) - rank(d_in)
