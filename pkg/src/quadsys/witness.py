"""Systems with no nontrivial zero, built from anisotropic quaternary forms.

Placing ``t`` anisotropic quaternaries on disjoint blocks of variables gives
``t`` forms in ``4t`` variables without a common zero: a nonzero point is
nonzero on some block, and that block's form does not vanish there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ContextMismatch, SearchSpaceTooLarge
from .oracle import DEFAULT_LIMIT, certify_anisotropic
from .padic import FieldContext, least_nonresidue, ppow
from .qform import FormSystem, QuadraticForm


def quaternary_coefficients(p: int) -> list[int]:
    if p == 2:
        return [1, 1, 1, 1]
    a = least_nonresidue(p)
    return [1, -a, -p, a * p]


def anisotropic_quaternary(ctx: FieldContext | int) -> QuadraticForm:
    """Norm form ``x^2 - a y^2 - p z^2 + a p w^2`` of the quaternion division algebra.

    ``a`` is the least quadratic non-residue; for p = 2 the sum of four
    squares is used instead.
    """
    if isinstance(ctx, int):
        ctx = FieldContext(ctx)
    return QuadraticForm.diagonal(ctx, quaternary_coefficients(ctx.p))


def direct_sum(a: FormSystem, b: FormSystem) -> FormSystem:
    """Forms of ``a`` on the first variables, forms of ``b`` on the rest."""
    if a.ctx != b.ctx:
        raise ContextMismatch("systems live over different contexts")
    n = a.n + b.n
    grams = []
    for f in a.forms:
        G = f.exact_gram()
        grams.append([list(G[i]) + [Fraction(0)] * b.n for i in range(a.n)]
                     + [[Fraction(0)] * n for _ in range(b.n)])
    for f in b.forms:
        G = f.exact_gram()
        grams.append([[Fraction(0)] * n for _ in range(a.n)]
                     + [[Fraction(0)] * a.n + list(G[i]) for i in range(b.n)])
    if not grams:
        return FormSystem.empty(a.ctx) if n == 0 else FormSystem([], a.ctx, n)
    return FormSystem.from_rationals(a.ctx, grams)


def evidence_level(p: int, limit: int = DEFAULT_LIMIT) -> int:
    """Highest level ``k <= 3`` at which a 4-variable search fits in ``limit``."""
    k = 3
    while k > 1 and ppow(p, 4 * k) > limit:
        k -= 1
    return k


@dataclass
class WitnessSystem:
    system: FormSystem
    blocks: list[tuple[int, range]]  # (form index, its variables)
    anisotropy_evidence: list[dict] = field(default_factory=list)

    @property
    def t(self) -> int:
        return self.system.t


def block_witness(t: int, ctx: FieldContext | int, certify: bool = True,
                  limit: int = DEFAULT_LIMIT) -> WitnessSystem:
    """``t`` copies of the anisotropic quaternary on disjoint blocks."""
    if t < 1:
        raise ValueError("t must be positive")
    if isinstance(ctx, int):
        ctx = FieldContext(ctx)
    q = anisotropic_quaternary(ctx)
    single = FormSystem([q], ctx)
    system = single
    for _ in range(t - 1):
        system = direct_sum(system, single)
    blocks = [(i, range(4 * i, 4 * i + 4)) for i in range(t)]
    evidence = []
    if certify:
        k = evidence_level(ctx.p, limit)
        if ctx.p != 2 and k < 2:
            raise SearchSpaceTooLarge(
                f"certifying a quaternary over Q_{ctx.p} needs level 2; raise the limit")
        one = certify_anisotropic(q, k, limit=limit)
        evidence = [dict(one, block=i) for i in range(t)]
    return WitnessSystem(system, blocks, evidence)
