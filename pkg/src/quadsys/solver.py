"""Constructive zeros of systems of quadratic forms over Q_p.

Two mutually recursive procedures do the work:

* ``solve_system`` finds a common zero of ``t`` forms: it asks for a
  5-dimensional subspace on which the first ``t - 1`` forms vanish, restricts
  the last form to it and solves that single form in 5 variables.
* ``find_zero_subspace`` builds an ``s``-dimensional zero subspace: it takes a
  common zero ``z``, moves it to the last coordinate, splits every form as
  ``c x_n^2 + x_n L(x') + Q(x')``, cuts down to the common kernel of the
  linear parts and recurses for dimension ``s - 1`` on the ``Q`` parts.

The single-form solver is guaranteed for ``n >= 5`` and odd ``p``; everything
else is best effort.  Public entry points restart from the exact input at
doubled working precision whenever digits run out.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    DimensionMismatch,
    DimensionShortfall,
    HenselCriterionFails,
    NoZeroFoundBelowGuarantee,
    NonUnit,
    PrecisionExhausted,
)
from .linalg import (
    Matrix,
    Vector,
    extend_to_basis,
    kernel_basis,
    mat_vec,
    primitive,
)
from .padic import INF, Padic, coerce, is_square, sqrt, vp_capped, vp_fraction
from .qform import (
    FormSystem,
    QuadraticForm,
    Subspace,
    change_variables,
    decompose_at_last,
    diagonalize,
    evaluate,
    restrict,
)

SEARCH_BUDGET = 100_000
LEMMA1_DIM = 5  # one more than the u-invariant of a single form


def constructive_threshold(t: int) -> int:
    """Number of variables from which ``solve_system`` is guaranteed."""
    if t < 1:
        raise ValueError("t must be positive")
    return 2 * t * (t + 1) + 1


def subspace_threshold(t: int, s: int) -> int:
    if t < 1 or s < 1:
        raise ValueError("t and s must be positive")
    return constructive_threshold(t) + (s - 1) * (t + 1)


@dataclass
class SolveCertificate:
    zero: Vector
    residual_valuations: list
    trace: list[dict] = field(default_factory=list)
    precision: int = 0  # working precision that produced the zero


@dataclass
class SubspaceCertificate:
    subspace: Subspace
    residual: float | int  # least valuation over all restricted Gram entries
    trace: list[dict] = field(default_factory=list)
    precision: int = 0


@dataclass
class ZeroReport:
    accepted: bool
    nontrivial: bool
    valuations: list
    threshold: int


# -- base cases ---------------------------------------------------------------

def solve_ternary_unit_mod_p(u1: int, u2: int, u3: int, p: int) -> tuple[int, int, int]:
    """First ``(x, y, z)`` in lex order of ``(x, y)`` with ``u1 x^2 + u2 y^2 + u3 z^2 = 0 mod p``."""
    if p == 2:
        raise ValueError("p must be odd")
    if any(u % p == 0 for u in (u1, u2, u3)):
        raise NonUnit("coefficients must be units mod p")
    roots = {}
    for z in range(p):
        roots.setdefault(z * z % p, z)
    inv3 = pow(u3, -1, p)
    for x in range(p):
        for y in range(p):
            if x == 0 and y == 0:
                continue
            r = -(u1 * x * x + u2 * y * y) * inv3 % p
            if r in roots:
                return x, y, roots[r]
    raise AssertionError("nondegenerate ternary forms mod p always have a zero")


def hensel_lift_zero(f: QuadraticForm, a, i: int) -> Vector:
    """Newton iteration in coordinate ``i`` until ``f`` vanishes at threshold."""
    ctx = f.ctx
    a = [coerce(ctx, x) for x in a]
    if len(a) != f.n:
        raise DimensionMismatch("point and form disagree on the variable count")
    G = f.gram
    gii = G[i, i]
    b = ctx.zero()
    for k, x in enumerate(a):
        if k != i and x.val != INF and G[i, k].val != INF:
            b = b + G[i, k] * x
    rest = list(a)
    rest[i] = ctx.zero()
    c0 = evaluate(f, rest)

    def g(x):
        return (gii * x + b * 2) * x + c0

    def dg(x):
        return (gii * x + b) * 2

    def done(v):
        # lift to the working precision so later basis changes have room
        if v.val >= ctx.precision:
            return True
        if v.rel == 0:
            return v.is_zero()
        return False

    x = a[i]
    gx = g(x)
    if done(gx):
        return a
    d = dg(x)
    if d.is_zero() or not gx.val > 2 * d.val:
        raise HenselCriterionFails(
            f"val(g) = {gx.val} is not above 2 val(g') = {2 * d.val if d.rel else 'inf'}")
    for _ in range(2 * ctx.precision.bit_length() + 8):
        x = x - gx / d
        gx = g(x)
        if done(gx):
            out = list(a)
            out[i] = x
            return out
        d = dg(x)
    raise PrecisionExhausted("Hensel iteration did not reach the zero threshold")


def _diagonal_form(ctx, coeffs) -> QuadraticForm:
    n = len(coeffs)
    zero = ctx.zero()
    return QuadraticForm(Matrix(ctx, [[coeffs[i] if i == j else zero for j in range(n)]
                                      for i in range(n)], n))


def _solve_single(f: QuadraticForm, trace: list, budget: int) -> Vector:
    ctx = f.ctx
    p, n = ctx.p, f.n
    if n == 0:
        raise NoZeroFoundBelowGuarantee("form in zero variables")
    P, d = diagonalize(f)
    for i, di in enumerate(d):
        if di.is_zero():
            trace.append({"step": "single", "branch": "radical", "n": n, "index": i})
            return primitive(P.column(i))
    if p != 2 and n >= 5:
        y = _ternary_branch(d, trace)
    else:
        y = _binary_branch(d, trace)
        if y is None:
            y = _search_branch(d, trace, budget)
    return primitive(mat_vec(P, y))


def _ternary_branch(d: list[Padic], trace: list) -> Vector:
    """Pigeonhole three coefficients of equal valuation parity, solve mod p, lift."""
    ctx = d[0].ctx
    p, n = ctx.p, len(d)
    classes = {0: [], 1: []}
    for i, di in enumerate(d):
        classes[di.val % 2].append(i)
    parity = 0 if len(classes[0]) >= 3 else 1
    idx = classes[parity][:3]
    units = [d[i].unit_part() for i in idx]
    xyz = solve_ternary_unit_mod_p(*(u.residue(1) for u in units), p)
    lift_at = next(j for j, x in enumerate(xyz) if x % p)
    w = hensel_lift_zero(_diagonal_form(ctx, units), [ctx(x) for x in xyz], lift_at)
    y = [ctx.zero()] * n
    for pos, i in enumerate(idx):
        y[i] = w[pos].shift(-(d[i].val // 2))
    trace.append({"step": "single", "branch": "ternary", "n": n, "indices": idx,
                  "parity": parity, "residue_zero": list(xyz)})
    return y


def _binary_branch(d: list[Padic], trace: list):
    ctx = d[0].ctx
    n = len(d)
    for i in range(n):
        for j in range(i + 1, n):
            r = -d[j] / d[i]
            if is_square(r):
                y = [ctx.zero()] * n
                y[i] = sqrt(r)
                y[j] = ctx.one()
                trace.append({"step": "single", "branch": "binary", "n": n, "indices": [i, j]})
                return y
    return None


def _search_branch(d: list[Padic], trace: list, budget: int) -> Vector:
    """Enumerate small residue vectors for a Hensel-liftable start point."""
    ctx = d[0].ctx
    p, n = ctx.p, len(d)
    idx = list(range(min(n, 5)))
    m = len(idx)
    scaled = [d[i].shift(-2 * (d[i].val // 2)) for i in idx]
    ints = [int(c.to_fraction()) for c in scaled]
    known = min(c.abs_precision for c in scaled)
    two = 1 if p == 2 else 0
    k = 1
    while True:
        size = p**k
        if k > 1 and size**m > budget:
            break
        for w in itertools.product(range(size), repeat=m):
            if all(x % p == 0 for x in w):
                continue
            F = sum(c * x * x for c, x in zip(ints, w))
            vF = vp_capped(F, p, known)
            for j, x in enumerate(w):
                if x == 0:
                    continue
                vd = two + scaled[j].val + vp_capped(x, p, known)
                if vF > 2 * vd:
                    form = _diagonal_form(ctx, scaled)
                    lifted = hensel_lift_zero(form, [ctx(v) for v in w], j)
                    y = [ctx.zero()] * n
                    for pos, i in enumerate(idx):
                        y[i] = lifted[pos].shift(-(d[i].val // 2))
                    trace.append({"step": "single", "branch": "search", "n": n,
                                  "level": k, "start": list(w), "lift_index": j})
                    return y
        k += 1
    trace.append({"step": "single", "branch": "exhausted", "n": n})
    raise NoZeroFoundBelowGuarantee(
        f"no zero found for a form in {n} variables over Q_{p} (not an anisotropy proof)")


# -- the recursion ---------------------------------------------------------------

def _check_zero(sys: FormSystem, z: Vector):
    for f in sys.forms:
        if not evaluate(f, z).is_zero():
            raise PrecisionExhausted("computed zero does not vanish at the threshold")


def _solve_system(sys: FormSystem, trace: list, budget: int) -> Vector:
    t, n = sys.t, sys.n
    if t == 0:
        raise ValueError("empty system")
    if t == 1:
        z = _solve_single(sys.forms[0], trace, budget)
    else:
        trace.append({"step": "lemma1", "t": t, "n": n})
        try:
            B = _find_zero_subspace(sys.subsystem(range(t - 1)), LEMMA1_DIM, trace, budget)
        except DimensionShortfall as exc:
            if n >= constructive_threshold(t):
                raise
            raise NoZeroFoundBelowGuarantee(
                f"{n} variables are too few for the reduction of {t} forms") from exc
        g = restrict(sys.forms[-1], B)
        z = primitive(mat_vec(B, _solve_single(g, trace, budget)))
    _check_zero(sys, z)
    return z


def _find_zero_subspace(sys: FormSystem, s: int, trace: list, budget: int) -> Matrix:
    ctx = sys.ctx
    n = sys.n
    z = _solve_system(sys, trace, budget)
    if s == 1:
        return Matrix.from_columns(ctx, [z], n)
    if n < 2:
        raise DimensionShortfall("no room left for a larger subspace")
    P = extend_to_basis(z)
    moved = change_variables(sys, P)
    parts = [decompose_at_last(f) for f in moved.forms]
    for part in parts:
        if not part.c.is_zero():
            raise PrecisionExhausted("value at the found zero is not zero at the threshold")
    K = [primitive(v) for v in kernel_basis(Matrix(ctx, [part.L for part in parts], n - 1))]
    trace.append({"step": "lemma2", "t": sys.t, "n": n, "s": s, "kernel_dim": len(K)})
    if not K:
        raise DimensionShortfall(f"linear parts leave no kernel in dimension {n - 1}")
    Kmat = Matrix.from_columns(ctx, K, n - 1)
    inner = FormSystem([restrict(part.Q, Kmat) for part in parts], ctx, len(K))
    U = _find_zero_subspace(inner, s - 1, trace, budget)
    V = Kmat @ U
    lifted = P @ Matrix(ctx, V.entries + [[ctx.zero()] * V.cols], V.cols)
    cols = [primitive(c) for c in lifted.columns()] + [z]
    return Matrix.from_columns(ctx, cols, n)


# -- certificates and retry --------------------------------------------------------

def _exact_value(G: list[list[Fraction]], u: list[Fraction], v: list[Fraction]) -> Fraction:
    total = Fraction(0)
    for i, ui in enumerate(u):
        if ui == 0:
            continue
        row = G[i]
        total += ui * sum((row[j] * vj for j, vj in enumerate(v) if vj != 0), Fraction(0))
    return total


def _bilinear_valuation(f: QuadraticForm, u: Vector, v: Vector):
    p = f.ctx.p
    if f.source is not None:
        return vp_fraction(_exact_value(f.source, [x.to_fraction() for x in u],
                                        [x.to_fraction() for x in v]), p)
    Gv = mat_vec(f.gram, v)
    acc = f.ctx.zero()
    for a, b in zip(u, Gv):
        if a.val != INF and b.val != INF:
            acc = acc + a * b
    return acc.val


def _reembed(ctx, v: Vector) -> Vector:
    return [coerce(ctx, x.to_fraction()) for x in v]


def _run_with_retry(sys: FormSystem, run):
    """Call ``run(working_system)``, doubling precision on exhaustion."""
    work = sys
    while True:
        try:
            return run(work)
        except PrecisionExhausted:
            if not sys.is_exact:
                raise
            N = work.ctx.precision * 2
            if N > sys.ctx.max_precision:
                raise
            work = sys.recast(work.ctx.with_precision(N))


def solve_system(sys: FormSystem, budget: int = SEARCH_BUDGET) -> SolveCertificate:
    """Common nontrivial zero of every form, in the system's own coordinates."""
    if sys.t == 0:
        raise ValueError("empty system")

    def run(work: FormSystem):
        trace = []
        z = _solve_system(work, trace, budget)
        vals = [_bilinear_valuation(f, z, z) for f in work.forms]
        if min(vals) < sys.ctx.threshold:
            raise PrecisionExhausted("certificate residual below the threshold")
        zero = _reembed(sys.ctx, z)
        return SolveCertificate(zero, vals, trace, work.ctx.precision)

    return _run_with_retry(sys, run)


def solve_single(f: QuadraticForm, budget: int = SEARCH_BUDGET) -> SolveCertificate:
    return solve_system(FormSystem([f], f.ctx), budget)


def find_zero_subspace(sys: FormSystem, s: int, budget: int = SEARCH_BUDGET) -> SubspaceCertificate:
    """An ``s``-dimensional subspace on which every form vanishes identically."""
    if s < 1:
        raise ValueError("s must be positive")

    def run(work: FormSystem):
        trace = []
        try:
            B = _find_zero_subspace(work, s, trace, budget)
        except DimensionShortfall as exc:
            if work.n >= subspace_threshold(work.t, s):
                raise
            raise NoZeroFoundBelowGuarantee(str(exc)) from exc
        cols = B.columns()
        residual = INF
        for f in work.forms:
            for i in range(s):
                for j in range(i, s):
                    residual = min(residual, _bilinear_valuation(f, cols[i], cols[j]))
        if residual < sys.ctx.threshold:
            raise PrecisionExhausted("restricted Gram residual below the threshold")
        basis = Matrix.from_columns(sys.ctx, [_reembed(sys.ctx, c) for c in cols], sys.n)
        return SubspaceCertificate(Subspace(basis), residual, trace, work.ctx.precision)

    return _run_with_retry(sys, run)


def verify_zero(sys: FormSystem, v, threshold: int | None = None) -> ZeroReport:
    if len(v) != sys.n:
        raise DimensionMismatch(f"vector of length {len(v)} for {sys.n} variables")
    ctx = sys.ctx
    threshold = ctx.threshold if threshold is None else threshold
    v = [coerce(ctx, x) for x in v]
    nontrivial = any(x.rel > 0 and x.val < threshold for x in v)
    vals = [evaluate(f, v).val for f in sys.forms]
    accepted = nontrivial and all(x >= threshold for x in vals)
    return ZeroReport(accepted, nontrivial, vals, threshold)


def restricted_gram_valuations(sys: FormSystem, basis: Matrix) -> list[list]:
    """Per form, the valuations of the Gram matrix restricted to ``basis``."""
    out = []
    for f in sys.forms:
        R = restrict(f, basis)
        out.append([[R.gram[i, j].val for j in range(basis.cols)] for i in range(basis.cols)])
    return out
