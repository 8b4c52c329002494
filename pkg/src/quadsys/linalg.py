"""Dense linear algebra over Q_p at finite precision.

Pivots are always chosen by minimal valuation, and every rank decision goes
through the context's zero threshold (``Padic.is_zero``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch, SingularMatrix, TrivialVector
from .padic import INF, FieldContext, Padic, coerce

Vector = list  # list[Padic]


class Matrix:
    """Row-major matrix of :class:`Padic` entries sharing one context."""

    __slots__ = ("ctx", "rows", "cols", "entries")

    def __init__(self, ctx: FieldContext, entries: Sequence[Sequence], cols: int | None = None):
        self.ctx = ctx
        self.entries = [[coerce(ctx, x) for x in row] for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else (cols or 0)
        if any(len(row) != self.cols for row in self.entries):
            raise DimensionMismatch("ragged matrix")

    @classmethod
    def identity(cls, ctx: FieldContext, n: int) -> Matrix:
        one, zero = ctx.one(), ctx.zero()
        return cls(ctx, [[one if i == j else zero for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, ctx: FieldContext, rows: int, cols: int) -> Matrix:
        zero = ctx.zero()
        return cls(ctx, [[zero] * cols for _ in range(rows)], cols)

    @classmethod
    def from_columns(cls, ctx: FieldContext, columns: Sequence[Sequence], nrows: int) -> Matrix:
        if any(len(c) != nrows for c in columns):
            raise DimensionMismatch("column length differs from row count")
        return cls(ctx, [[c[i] for c in columns] for i in range(nrows)], len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij) -> Padic:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return list(self.entries[i])

    def column(self, j: int) -> Vector:
        return [row[j] for row in self.entries]

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> Matrix:
        return Matrix(self.ctx, [self.column(j) for j in range(self.cols)], self.rows)

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        zero = self.ctx.zero()
        out = []
        for row in self.entries:
            acc = [zero] * other.cols
            for k, a in enumerate(row):
                if a.val == INF:
                    continue
                brow = other.entries[k]
                for j in range(other.cols):
                    b = brow[j]
                    if b.val != INF:
                        acc[j] = acc[j] + a * b
            out.append(acc)
        return Matrix(self.ctx, out, other.cols)

    def apply(self, v: Sequence[Padic]) -> Vector:
        return mat_vec(self, v)

    def to_fractions(self) -> list[list[Fraction]]:
        return [[x.to_fraction() for x in row] for row in self.entries]

    def agrees_with(self, other: Matrix) -> bool:
        return self.shape == other.shape and all(
            a.agrees_with(b)
            for ra, rb in zip(self.entries, other.entries)
            for a, b in zip(ra, rb))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {self.to_fractions()})"


def mat_vec(M: Matrix, v: Sequence[Padic]) -> Vector:
    if len(v) != M.cols:
        raise DimensionMismatch(f"vector of length {len(v)} for {M.shape} matrix")
    zero = M.ctx.zero()
    out = []
    for row in M.entries:
        acc = zero
        for a, b in zip(row, v):
            if a.val != INF and b.val != INF:
                acc = acc + a * b
        out.append(acc)
    return out


def is_nontrivial(v: Sequence[Padic]) -> bool:
    return any(not x.is_zero() for x in v)


def min_valuation(v: Sequence[Padic]):
    return min((x.val for x in v), default=INF)


def primitive(v: Sequence[Padic]) -> Vector:
    """Scale by a power of p so the smallest valuation is 0 (exact)."""
    m = min(x.val for x in v if not x.is_zero())
    return [x.shift(-m) for x in v]


@dataclass
class RowReduction:
    reduced: Matrix
    rank: int
    transform: Matrix
    pivots: list[tuple[int, int]]  # (row, column) of each pivot, in order


def row_reduce(M: Matrix) -> RowReduction:
    """Gauss-Jordan elimination with minimal-valuation pivoting.

    The pivot is the entry of least valuation in the remaining block (ties
    go to the lowest column, then the lowest row).  ``reduced`` equals
    ``transform @ M``; pivot row ``r`` holds 1 in its pivot column and every
    other row holds an exact 0 there.
    """
    ctx = M.ctx
    R = [list(row) for row in M.entries]
    T = [list(row) for row in Matrix.identity(ctx, M.rows).entries]
    zero = ctx.zero()
    free_cols = list(range(M.cols))
    pivots = []
    r = 0
    while r < M.rows and free_cols:
        best = None
        for j in free_cols:
            for i in range(r, M.rows):
                x = R[i][j]
                if x.is_zero():
                    continue
                if best is None or x.val < best[0]:
                    best = (x.val, i, j)
        if best is None:
            break
        _, i, j = best
        R[r], R[i] = R[i], R[r]
        T[r], T[i] = T[i], T[r]
        inv = ctx.one() / R[r][j]
        R[r] = [x * inv for x in R[r]]
        T[r] = [x * inv for x in T[r]]
        R[r][j] = ctx.one()
        for k in range(M.rows):
            if k == r:
                continue
            f = R[k][j]
            if f.val == INF:
                continue
            R[k] = [a - f * b if b.val != INF else a for a, b in zip(R[k], R[r])]
            T[k] = [a - f * b if b.val != INF else a for a, b in zip(T[k], T[r])]
            R[k][j] = zero
        pivots.append((r, j))
        free_cols.remove(j)
        r += 1
    for i in range(r, M.rows):
        for x in R[i]:
            x.is_zero()  # every leftover entry must be decidably zero
    return RowReduction(Matrix(ctx, R, M.cols), r, Matrix(ctx, T, M.rows), pivots)


def rank(M: Matrix) -> int:
    return row_reduce(M).rank


def _column_echelon(vectors: list[Vector], n: int, ctx: FieldContext) -> list[Vector]:
    """Canonical reduced echelon form of a spanning list, in natural order."""
    rows = [list(v) for v in vectors]
    out = []
    zero = ctx.zero()
    for j in range(n):
        cand = [(rows[i][j].val, i) for i in range(len(rows)) if not rows[i][j].is_zero()]
        if not cand:
            continue
        _, i = min(cand)
        piv = rows.pop(i)
        inv = ctx.one() / piv[j]
        piv = [x * inv for x in piv]
        piv[j] = ctx.one()
        for k in range(len(rows)):
            f = rows[k][j]
            if f.val != INF:
                rows[k] = [a - f * b if b.val != INF else a for a, b in zip(rows[k], piv)]
                rows[k][j] = zero
        for k in range(len(out)):
            f = out[k][j]
            if f.val != INF:
                out[k] = [a - f * b if b.val != INF else a for a, b in zip(out[k], piv)]
                out[k][j] = zero
        out.append(piv)
    return out


def kernel_basis(M: Matrix) -> list[Vector]:
    """Basis of ``{x : Mx = 0}`` in reduced column-echelon shape."""
    ctx = M.ctx
    rr = row_reduce(M)
    pivot_cols = {j: r for r, j in rr.pivots}
    basis = []
    for f in range(M.cols):
        if f in pivot_cols:
            continue
        v = [ctx.zero()] * M.cols
        v[f] = ctx.one()
        for j, r in pivot_cols.items():
            x = rr.reduced[r, f]
            if x.val != INF:
                v[j] = -x
        basis.append(v)
    return _column_echelon(basis, M.cols, ctx)


def extend_to_basis(v: Sequence[Padic]) -> Matrix:
    """Invertible matrix whose last column is ``v``.

    The other columns are the standard basis vectors except the one at the
    first coordinate where ``v`` has minimal valuation.
    """
    if not v or not is_nontrivial(v):
        raise TrivialVector("cannot extend a trivial vector")
    ctx = v[0].ctx
    n = len(v)
    drop = min(range(n), key=lambda i: (v[i].val, i))
    cols = []
    for i in range(n):
        if i != drop:
            e = [ctx.zero()] * n
            e[i] = ctx.one()
            cols.append(e)
    cols.append(list(v))
    P = Matrix.from_columns(ctx, cols, n)
    if rank(P) != n:
        raise SingularMatrix("extension is not invertible")
    return P


def inverse(M: Matrix) -> Matrix:
    if M.rows != M.cols:
        raise DimensionMismatch("inverse of a non-square matrix")
    rr = row_reduce(M)
    if rr.rank != M.rows:
        raise SingularMatrix("matrix is singular at the zero threshold")
    # reduced is a permutation of the identity; undo it on the transform
    order = {r: j for r, j in rr.pivots}
    rows = [None] * M.rows
    for r in range(M.rows):
        rows[order[r]] = rr.transform.row(r)
    return Matrix(M.ctx, rows, M.rows)
