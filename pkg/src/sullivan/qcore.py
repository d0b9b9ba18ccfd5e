"""Exact linear algebra over the rationals.

Matrices are stored sparsely as a dict of rows, each row a dict
``col -> Fraction``.  All elimination uses a fixed pivoting rule (first
nonzero column, smallest row index) so every result is reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "QMatrix",
    "as_fraction",
    "solve_linear",
    "kernel_basis",
    "complete_basis",
    "rank",
    "rref",
    "in_span",
    "inverse",
]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class QMatrix:
    """A ``rows x cols`` matrix over Q with sparse storage."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.rows = rows
        self.cols = cols
        self._data: dict[int, dict[int, Fraction]] = {}
        if entries:
            for (i, j), v in entries.items():
                self[i, j] = v

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "QMatrix":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        m = cls(len(rows), cols)
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                if v:
                    m._data.setdefault(i, {})[j] = as_fraction(v)
        return m

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "QMatrix":
        m = cls(rows, len(columns))
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise ValueError("column length mismatch")
            for i, v in enumerate(col):
                if v:
                    m._data.setdefault(i, {})[j] = as_fraction(v)
        return m

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zero(cls, rows: int, cols: int) -> "QMatrix":
        return cls(rows, cols)

    def _check(self, i, j):
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) out of range for {self.rows}x{self.cols}")

    def __getitem__(self, key) -> Fraction:
        i, j = key
        self._check(i, j)
        return self._data.get(i, {}).get(j, Fraction(0))

    def __setitem__(self, key, value):
        i, j = key
        self._check(i, j)
        value = as_fraction(value)
        row = self._data.setdefault(i, {})
        if value:
            row[j] = value
        else:
            row.pop(j, None)
            if not row:
                del self._data[i]

    def row(self, i: int) -> dict[int, Fraction]:
        return dict(self._data.get(i, {}))

    def items(self):
        for i in sorted(self._data):
            row = self._data[i]
            for j in sorted(row):
                yield (i, j), row[j]

    def to_rows(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.items():
            out[i][j] = v
        return out

    def transpose(self) -> "QMatrix":
        t = QMatrix(self.cols, self.rows)
        for (i, j), v in self.items():
            t._data.setdefault(j, {})[i] = v
        return t

    def __matmul__(self, other):
        if isinstance(other, QMatrix):
            if self.cols != other.rows:
                raise ValueError("dimension mismatch in matrix product")
            out = QMatrix(self.rows, other.cols)
            for i, row in self._data.items():
                acc: dict[int, Fraction] = {}
                for k, a in row.items():
                    for j, b in other._data.get(k, {}).items():
                        acc[j] = acc.get(j, 0) + a * b
                acc = {j: v for j, v in acc.items() if v}
                if acc:
                    out._data[i] = acc
            return out
        vec = list(other)
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch in matrix-vector product")
        res = [Fraction(0)] * self.rows
        for i, row in self._data.items():
            res[i] = sum((a * vec[j] for j, a in row.items()), Fraction(0))
        return res

    def __eq__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return (self.rows, self.cols, self._data) == (other.rows, other.cols, other._data)

    def __repr__(self):
        return f"QMatrix({self.rows}x{self.cols}, nnz={sum(len(r) for r in self._data.values())})"

    def is_zero(self) -> bool:
        return not self._data


def _sparse_rows(A) -> tuple[list[dict[int, Fraction]], int]:
    if isinstance(A, QMatrix):
        return [A.row(i) for i in range(A.rows)], A.cols
    rows = list(A)
    if rows and isinstance(rows[0], dict):
        cols = max((max(r) + 1 for r in rows if r), default=0)
        return [{j: as_fraction(v) for j, v in r.items() if v} for r in rows], cols
    rows = [list(r) for r in rows]
    cols = len(rows[0]) if rows else 0
    return [{j: as_fraction(v) for j, v in enumerate(r) if v} for r in rows], cols


def rref(A) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Reduced row echelon form.

    Returns the nonzero reduced rows and their pivot columns, pivots in
    increasing order.  Pivot search scans columns left to right and takes
    the smallest remaining row index with a nonzero entry.
    """
    rows, ncols = _sparse_rows(A)
    rows = [r for r in rows if r]
    # column -> set of row indices having a nonzero there
    pivots: list[int] = []
    reduced: list[dict[int, Fraction]] = []
    remaining = rows
    col_candidates = sorted({j for r in remaining for j in r})
    for c in col_candidates:
        idx = next((k for k, r in enumerate(remaining) if c in r), None)
        if idx is None:
            continue
        prow = remaining.pop(idx)
        inv = 1 / prow[c]
        prow = {j: v * inv for j, v in prow.items()}
        new_remaining = []
        for r in remaining:
            f = r.get(c)
            if f:
                r = dict(r)
                for j, v in prow.items():
                    nv = r.get(j, 0) - f * v
                    if nv:
                        r[j] = nv
                    else:
                        r.pop(j, None)
            if r:
                new_remaining.append(r)
        remaining = new_remaining
        for k, r in enumerate(reduced):
            f = r.get(c)
            if f:
                r = dict(r)
                for j, v in prow.items():
                    nv = r.get(j, 0) - f * v
                    if nv:
                        r[j] = nv
                    else:
                        r.pop(j, None)
                reduced[k] = r
        reduced.append(prow)
        pivots.append(c)
    return reduced, pivots


def rank(A) -> int:
    return len(rref(A)[1])


def kernel_basis(A) -> list[list[Fraction]]:
    """Basis of ``{x : A x = 0}``.

    One vector per free column ``j`` (in increasing order), with entry 1 at
    ``j`` and zeros at the other free columns.
    """
    _, ncols = _sparse_rows(A)
    reduced, pivots = rref(A)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for r, p in zip(reduced, pivots):
            coeff = r.get(free)
            if coeff:
                v[p] = -coeff
        basis.append(v)
    return basis


def solve_linear(A, b: Sequence) -> list[Fraction] | None:
    """Return some ``x`` with ``A x = b`` exactly, or ``None`` if inconsistent.

    Free variables are set to zero.
    """
    rows, ncols = _sparse_rows(A)
    b = [as_fraction(v) for v in b]
    if len(rows) != len(b):
        raise ValueError(f"matrix has {len(rows)} rows but right-hand side has length {len(b)}")
    aug = []
    for r, bi in zip(rows, b):
        r = dict(r)
        if bi:
            r[ncols] = bi
        aug.append(r)
    reduced, pivots = rref(aug)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for r, p in zip(reduced, pivots):
        x[p] = r.get(ncols, Fraction(0))
    return x


def inverse(A) -> QMatrix | None:
    """Exact inverse of a square matrix, or ``None`` if it is singular."""
    rows, n = _sparse_rows(A)
    if len(rows) != n:
        raise ValueError(f"inverse of a non-square {len(rows)}x{n} matrix")
    aug = []
    for i, r in enumerate(rows):
        r = dict(r)
        r[n + i] = Fraction(1)
        aug.append(r)
    reduced, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        return None
    out = QMatrix(n, n)
    for i, r in enumerate(reduced):
        for j, v in r.items():
            if j >= n:
                out[i, j - n] = v
    return out


def complete_basis(span: Sequence[Sequence], candidates: Sequence[Sequence]) -> list[int]:
    """Greedy completion: indices of candidates extending ``span`` to the joint span."""
    dims = {len(v) for v in list(span) + list(candidates)}
    if len(dims) > 1:
        raise ValueError("vectors of differing dimension")
    basis = _Echelon()
    for v in span:
        basis.add(v)
    chosen = []
    for idx, v in enumerate(candidates):
        if basis.add(v):
            chosen.append(idx)
    return chosen


def in_span(span: Iterable[Sequence], v: Sequence) -> bool:
    e = _Echelon()
    for w in span:
        e.add(w)
    return e.reduce(v) == {}


class _Echelon:
    """Incrementally maintained echelon basis (pivot column -> normalized row)."""

    def __init__(self):
        self.rows: dict[int, dict[int, Fraction]] = {}

    def reduce(self, v) -> dict[int, Fraction]:
        r = {j: as_fraction(x) for j, x in enumerate(v) if x} if not isinstance(v, dict) else dict(v)
        while r:
            hit = next((p for p in sorted(r) if p in self.rows), None)
            if hit is None:
                break
            f = r[hit]
            for j, val in self.rows[hit].items():
                nv = r.get(j, 0) - f * val
                if nv:
                    r[j] = nv
                else:
                    r.pop(j, None)
        return r

    def add(self, v) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        inv = 1 / r[p]
        self.rows[p] = {j: x * inv for j, x in r.items()}
        return True
