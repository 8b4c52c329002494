"""Quadratic forms and systems of forms stored as Gram matrices.

A form is ``f(x) = x^T G x`` with ``G`` symmetric, so a cross coefficient
``a_ij`` of the polynomial becomes ``G_ij = G_ji = a_ij / 2``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ContextMismatch, DimensionMismatch, SingularMatrix
from .linalg import Matrix, Vector, mat_vec, rank
from .padic import INF, FieldContext, Padic, coerce


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def _congruence(G: Matrix, B: Matrix) -> Matrix:
    """``B^T G B``, computed on the upper triangle and mirrored."""
    GB = G @ B
    ctx = G.ctx
    s = B.cols
    zero = ctx.zero()
    out = [[zero] * s for _ in range(s)]
    for i in range(s):
        for j in range(i, s):
            acc = zero
            for k in range(B.rows):
                a, b = B.entries[k][i], GB.entries[k][j]
                if a.val != INF and b.val != INF:
                    acc = acc + a * b
            out[i][j] = acc
            out[j][i] = acc
    return Matrix(ctx, out, s)


class QuadraticForm:
    """``f(x) = x^T G x`` over Q_p.

    ``source`` keeps the exact rational Gram matrix when the form was built
    from rationals, so it can be re-embedded at a higher precision.
    """

    __slots__ = ("gram", "source")

    def __init__(self, gram: Matrix, source: list[list[Fraction]] | None = None):
        if gram.rows != gram.cols:
            raise DimensionMismatch("Gram matrix must be square")
        for i in range(gram.rows):
            for j in range(i + 1, gram.rows):
                if not gram[i, j].agrees_with(gram[j, i]):
                    raise ValueError(f"Gram matrix is not symmetric at ({i}, {j})")
        self.gram = gram
        self.source = source

    @classmethod
    def from_rationals(cls, ctx: FieldContext, rows: Sequence[Sequence]) -> QuadraticForm:
        exact = [[_as_fraction(x) for x in row] for row in rows]
        n = len(exact)
        if any(len(row) != n for row in exact):
            raise DimensionMismatch("Gram matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if exact[i][j] != exact[j][i]:
                    raise ValueError(f"Gram matrix is not symmetric at ({i}, {j})")
        return cls(Matrix(ctx, exact, n), exact)

    @classmethod
    def from_coefficients(cls, ctx: FieldContext, coeffs: Sequence[Sequence]) -> QuadraticForm:
        """Form ``sum_ij C_ij x_i x_j``; the matrix need not be symmetric."""
        C = [[_as_fraction(x) for x in row] for row in coeffs]
        n = len(C)
        G = [[(C[i][j] + C[j][i]) / 2 for j in range(n)] for i in range(n)]
        return cls.from_rationals(ctx, G)

    @classmethod
    def diagonal(cls, ctx: FieldContext, coeffs: Sequence) -> QuadraticForm:
        n = len(coeffs)
        return cls.from_rationals(
            ctx, [[coeffs[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def ctx(self) -> FieldContext:
        return self.gram.ctx

    @property
    def n(self) -> int:
        return self.gram.rows

    def exact_gram(self) -> list[list[Fraction]]:
        return self.source if self.source is not None else self.gram.to_fractions()

    def recast(self, ctx: FieldContext) -> QuadraticForm:
        """Re-embed the (exact, if known) Gram matrix in another context."""
        exact = self.exact_gram()
        return QuadraticForm(Matrix(ctx, exact, self.n), self.source)

    def __call__(self, v):
        return evaluate(self, v)

    def __repr__(self):
        return f"QuadraticForm({self.gram.to_fractions()})"


@dataclass
class FormSystem:
    forms: list[QuadraticForm]
    ctx: FieldContext
    n: int = field(default=-1)

    def __post_init__(self):
        if self.n < 0:
            if not self.forms:
                raise ValueError("an empty system needs an explicit n")
            self.n = self.forms[0].n
        for f in self.forms:
            if f.n != self.n:
                raise DimensionMismatch("all forms must share the variable count")
            if f.ctx != self.ctx:
                raise ContextMismatch("all forms must share the context")

    @classmethod
    def from_rationals(cls, ctx: FieldContext, grams: Sequence) -> FormSystem:
        return cls([QuadraticForm.from_rationals(ctx, g) for g in grams], ctx)

    @classmethod
    def empty(cls, ctx: FieldContext) -> FormSystem:
        return cls([], ctx, 0)

    @property
    def t(self) -> int:
        return len(self.forms)

    @property
    def is_exact(self) -> bool:
        return all(f.source is not None for f in self.forms)

    def recast(self, ctx: FieldContext) -> FormSystem:
        return FormSystem([f.recast(ctx) for f in self.forms], ctx, self.n)

    def subsystem(self, indices) -> FormSystem:
        return FormSystem([self.forms[i] for i in indices], self.ctx, self.n)

    def __iter__(self):
        return iter(self.forms)

    def __len__(self):
        return len(self.forms)


@dataclass
class FormDecomposition:
    """``f = x_n^2 c + x_n L(x_1..x_{n-1}) + Q(x_1..x_{n-1})``."""

    c: Padic
    L: Vector
    Q: QuadraticForm


@dataclass
class Subspace:
    """Column span of ``basis``.

    ``embedding_chain`` holds matrices ``M_1, ..., M_r`` so that
    ``M_1 @ ... @ M_r @ basis`` expresses the basis in original coordinates.
    """

    basis: Matrix
    embedding_chain: list[Matrix] = field(default_factory=list)

    @property
    def ambient_dim(self) -> int:
        return self.basis.rows

    @property
    def dim(self) -> int:
        return self.basis.cols

    def to_original(self) -> Matrix:
        B = self.basis
        for M in reversed(self.embedding_chain):
            B = M @ B
        return B

    def __post_init__(self):
        if rank(self.basis) != self.basis.cols:
            raise SingularMatrix("subspace basis is not of full column rank")


def evaluate(f: QuadraticForm, v: Sequence[Padic]) -> Padic:
    if len(v) != f.n:
        raise DimensionMismatch(f"point of length {len(v)} for a form in {f.n} variables")
    ctx = f.ctx
    v = [coerce(ctx, x) for x in v]
    Gv = mat_vec(f.gram, v)
    acc = ctx.zero()
    for a, b in zip(v, Gv):
        if a.val != INF and b.val != INF:
            acc = acc + a * b
    return acc


def restrict(f: QuadraticForm, S) -> QuadraticForm:
    """The form ``y -> f(B y)`` where ``B`` is the subspace basis."""
    B = S.basis if isinstance(S, Subspace) else S
    if B.rows != f.n:
        raise DimensionMismatch(f"basis in dimension {B.rows} for a form in {f.n} variables")
    return QuadraticForm(_congruence(f.gram, B))


def decompose_at_last(f: QuadraticForm) -> FormDecomposition:
    n = f.n
    if n < 2:
        raise DimensionMismatch("decomposition needs at least two variables")
    G = f.gram
    c = G[n - 1, n - 1]
    L = [G[n - 1, i] * 2 for i in range(n - 1)]
    Q = QuadraticForm(Matrix(f.ctx, [G.entries[i][: n - 1] for i in range(n - 1)], n - 1))
    return FormDecomposition(c, L, Q)


def reassemble(d: FormDecomposition, x: Sequence[Padic]) -> Padic:
    head, last = list(x[:-1]), x[-1]
    lin = d.c.ctx.zero()
    for a, b in zip(d.L, head):
        lin = lin + a * b
    return last * last * d.c + last * lin + evaluate(d.Q, head)


def diagonalize(f: QuadraticForm) -> tuple[Matrix, list[Padic]]:
    """Return ``(P, d)`` with ``P^T G P = diag(d)``.

    Pivots are taken by minimal diagonal valuation.  When every remaining
    diagonal entry is zero but an off-diagonal ``G_ij`` is not, the pair is
    replaced by ``e_i + e_j, e_i - e_j`` whose values are ``+-2 G_ij``.
    """
    ctx = f.ctx
    n = f.n
    A = [list(row) for row in f.gram.entries]
    # columns of P, stored as lists
    P = [[ctx.one() if i == j else ctx.zero() for i in range(n)] for j in range(n)]
    zero = ctx.zero()
    d = []
    for k in range(n):
        cand = [(A[i][i].val, i) for i in range(k, n) if not A[i][i].is_zero()]
        if not cand:
            pair = None
            for i in range(k, n):
                for j in range(i + 1, n):
                    if not A[i][j].is_zero() and (pair is None or A[i][j].val < pair[0]):
                        pair = (A[i][j].val, i, j)
            if pair is None:
                d.extend(A[i][i] for i in range(k, n))
                break
            _, i, j = pair
            _hyperbolic_split(A, P, i, j, k, n)
            cand = [(A[i][i].val, i)]
        _, i = min(cand)
        if i != k:
            # move index i to position k, keeping the order of the rest
            A.insert(k, A.pop(i))
            for row in A:
                row.insert(k, row.pop(i))
            P.insert(k, P.pop(i))
        piv = A[k][k]
        d.append(piv)
        for j in range(k + 1, n):
            a = A[j][k]
            if a.val == INF:
                continue
            c = a / piv
            P[j] = [x - c * y if y.val != INF else x for x, y in zip(P[j], P[k])]
            for l in range(k + 1, j + 1):
                b = A[l][k]
                if b.val != INF:
                    A[j][l] = A[j][l] - c * b
                    A[l][j] = A[j][l]
        for j in range(k + 1, n):
            A[j][k] = zero
            A[k][j] = zero
    return Matrix.from_columns(ctx, P, n), d


def _hyperbolic_split(A, P, i, j, k, n):
    """Replace basis vectors b_i, b_j by b_i + b_j, b_i - b_j (in place)."""
    bi, bj = P[i], P[j]
    P[i] = [x + y for x, y in zip(bi, bj)]
    P[j] = [x - y for x, y in zip(bi, bj)]
    ri, rj = A[i], A[j]
    new_i = [x + y for x, y in zip(ri, rj)]
    new_j = [x - y for x, y in zip(ri, rj)]
    A[i], A[j] = new_i, new_j
    for row in A:
        x, y = row[i], row[j]
        row[i], row[j] = x + y, x - y


def change_variables(sys: FormSystem, P: Matrix) -> FormSystem:
    """Substitute ``x = P y``: every Gram matrix becomes ``P^T G P``."""
    if P.rows != sys.n or P.cols != sys.n:
        raise DimensionMismatch("change of variables must be n x n")
    if rank(P) != sys.n:
        raise SingularMatrix("change of variables is not invertible")
    return FormSystem([QuadraticForm(_congruence(f.gram, P)) for f in sys.forms], sys.ctx, sys.n)


def random_integer_system(ctx: FieldContext, t: int, n: int, seed: int,
                          bound: int = 9) -> FormSystem:
    """``t`` forms whose Gram entries are uniform integers in ``[-bound, bound]``."""
    rng = random.Random(seed)
    grams = []
    for _ in range(t):
        G = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                G[i][j] = G[j][i] = rng.randint(-bound, bound)
        grams.append(G)
    return FormSystem.from_rationals(ctx, grams)
