"""Finite-precision arithmetic in Q_p.

An element is stored as ``p**val * unit`` where ``unit`` is a p-adic unit
known modulo ``p**rel``.  ``rel`` is the number of significant digits, at
most the context precision.  Two kinds of zero exist:

* the exact zero (``val`` is ``math.inf``), produced only from exact input;
* a zero known modulo ``p**val`` (``rel == 0``), the result of a
  cancellation that consumed every known digit.

A computed value counts as zero when its valuation reaches the context's
zero threshold.  Values that can neither be certified zero nor carry
enough digits to be trusted raise :class:`PrecisionExhausted`; callers that
own exact inputs restart at a higher working precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

from .errors import (
    ContextMismatch,
    DivisionByZero,
    EvenPrime,
    NonUnit,
    NotASquare,
    PrecisionExhausted,
    ZeroDenominator,
    ZeroInput,
)

INF = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@lru_cache(maxsize=4096)
def ppow(p: int, k: int) -> int:
    return p**k


def vp(n: int, p: int) -> int:
    """Valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_capped(n: int, p: int, cap: int) -> int:
    """Valuation of ``n``, or ``cap`` if ``p**cap`` divides it."""
    if n % ppow(p, cap) == 0:
        return cap
    return vp(n, p)


def vp_fraction(x: Fraction, p: int) -> float | int:
    if x == 0:
        return INF
    return vp(x.numerator, p) - vp(x.denominator, p)


@dataclass(frozen=True)
class FieldContext:
    """The ambient field Q_p together with the precision contract.

    ``precision`` is the number of significant digits carried.  The zero
    threshold defaults to the requested precision and stays fixed when the
    working precision is raised by :meth:`with_precision`.
    """

    p: int
    precision: int = 64
    max_precision: int = 1024
    zero_threshold: int | None = None
    min_digits: int = 8

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if not 1 <= self.precision <= self.max_precision:
            raise ValueError("need 1 <= precision <= max_precision")
        if self.zero_threshold is None:
            object.__setattr__(self, "zero_threshold", self.precision)

    @property
    def threshold(self) -> int:
        return self.zero_threshold

    @property
    def digit_floor(self) -> int:
        return min(self.min_digits, self.precision)

    def with_precision(self, precision: int) -> FieldContext:
        return replace(self, precision=precision,
                       max_precision=max(self.max_precision, precision))

    def __call__(self, x) -> Padic:
        return coerce(self, x)

    def zero(self) -> Padic:
        return Padic(self, INF, 0, 0)

    def one(self) -> Padic:
        return Padic(self, 0, 1, self.precision)


class Padic:
    __slots__ = ("ctx", "val", "unit", "rel")

    def __init__(self, ctx: FieldContext, val, unit: int, rel: int):
        self.ctx = ctx
        self.val = val
        self.unit = unit
        self.rel = rel

    # -- inspection ------------------------------------------------------
    @property
    def valuation(self):
        return self.val

    @property
    def abs_precision(self):
        return self.val + self.rel

    def is_exact_zero(self) -> bool:
        return self.val == INF

    def is_zero(self) -> bool:
        """Zero-threshold test; raises when the value cannot be decided."""
        if self.val >= self.ctx.zero_threshold:
            return True
        if self.rel == 0:
            raise PrecisionExhausted(
                f"value known only modulo p^{self.val}, below threshold "
                f"{self.ctx.zero_threshold}")
        return False

    def to_fraction(self) -> Fraction:
        """The rational representative ``p**val * u``, ``|u| <= p**rel / 2``.

        Balanced digits make small negative integers round-trip exactly.
        """
        if self.rel == 0:
            return Fraction(0)
        m = ppow(self.ctx.p, self.rel)
        u = self.unit - m if 2 * self.unit > m else self.unit
        if self.val >= 0:
            return Fraction(u * ppow(self.ctx.p, self.val))
        return Fraction(u, ppow(self.ctx.p, -self.val))

    def residue(self, k: int) -> int:
        """Representative modulo ``p**k`` of an integral element."""
        if self.rel == 0:
            if self.val < k:
                raise PrecisionExhausted("residue beyond known digits")
            return 0
        if self.val < 0:
            raise ValueError("element is not integral")
        if self.val + self.rel < k:
            raise PrecisionExhausted("residue beyond known digits")
        return (self.unit * ppow(self.ctx.p, self.val)) % ppow(self.ctx.p, k)

    def shift(self, k: int) -> Padic:
        """Exact multiplication by ``p**k``."""
        if self.val == INF:
            return self
        return Padic(self.ctx, self.val + k, self.unit, self.rel)

    def unit_part(self) -> Padic:
        if self.rel == 0:
            raise ZeroInput("zero has no unit part")
        return Padic(self.ctx, 0, self.unit, self.rel)

    def agrees_with(self, other) -> bool:
        """True when both values coincide on every digit both know."""
        other = coerce(self.ctx, other)
        a, b = self, other
        if a.val == INF and b.val == INF:
            return True
        prec = min(a.abs_precision, b.abs_precision)
        vmin = min(a.val, b.val)
        if prec <= vmin:
            return True
        p = self.ctx.p
        sa = a.unit * ppow(p, a.val - vmin) if a.rel else 0
        sb = b.unit * ppow(p, b.val - vmin) if b.rel else 0
        if prec == INF:
            return sa == sb
        return (sa - sb) % ppow(p, prec - vmin) == 0

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        return add(self, coerce(self.ctx, other))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, -coerce(self.ctx, other))

    def __rsub__(self, other):
        return add(coerce(self.ctx, other), -self)

    def __neg__(self):
        if self.rel == 0:
            return self
        return Padic(self.ctx, self.val, (-self.unit) % ppow(self.ctx.p, self.rel), self.rel)

    def __mul__(self, other):
        return mul(self, coerce(self.ctx, other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, coerce(self.ctx, other))

    def __rtruediv__(self, other):
        return div(coerce(self.ctx, other), self)

    def __eq__(self, other):
        if not isinstance(other, (Padic, int, Fraction)):
            return NotImplemented
        return self.agrees_with(other)

    __hash__ = None

    def __repr__(self):
        p = self.ctx.p
        if self.val == INF:
            return "Padic(0)"
        if self.rel == 0:
            return f"Padic(O({p}^{self.val}))"
        return f"Padic({p}^{self.val} * {self.unit} + O({p}^{self.abs_precision}))"


def coerce(ctx: FieldContext, x) -> Padic:
    if isinstance(x, Padic):
        if x.ctx != ctx:
            raise ContextMismatch("operands live in different contexts")
        return x
    if isinstance(x, int):
        return from_rational(x, 1, ctx)
    if isinstance(x, Fraction):
        return from_rational(x.numerator, x.denominator, ctx)
    if isinstance(x, str):
        f = Fraction(x)
        return from_rational(f.numerator, f.denominator, ctx)
    raise TypeError(f"cannot embed {type(x).__name__} in Q_{ctx.p}")


def from_rational(numerator: int, denominator: int, ctx: FieldContext) -> Padic:
    if denominator == 0:
        raise ZeroDenominator("denominator is zero")
    if numerator == 0:
        return ctx.zero()
    p, n = ctx.p, ctx.precision
    a, b = vp(numerator, p), vp(denominator, p)
    mod = ppow(p, n)
    num = numerator // ppow(p, a)
    den = denominator // ppow(p, b)
    unit = (num * pow(den, -1, mod)) % mod
    return Padic(ctx, a - b, unit, n)


def _normalize(ctx: FieldContext, s: int, v: int, known: int, check: bool) -> Padic:
    """Build ``p**v * s`` where ``s`` is known modulo ``p**known``."""
    p = ctx.p
    mod = ppow(p, known)
    s %= mod
    if s == 0:
        return Padic(ctx, v + known, 0, 0)
    k = 0
    while s % p == 0:
        s //= p
        k += 1
    rel = min(known - k, ctx.precision)
    v += k
    if check and rel < ctx.digit_floor and v < ctx.zero_threshold:
        raise PrecisionExhausted(
            f"only {rel} significant digits left at valuation {v}")
    return Padic(ctx, v, s % ppow(p, rel), rel)


def add(a: Padic, b: Padic, check: bool = True) -> Padic:
    ctx = a.ctx
    if b.ctx != ctx:
        raise ContextMismatch("operands live in different contexts")
    if a.val == INF:
        return b
    if b.val == INF:
        return a
    prec = min(a.val + a.rel, b.val + b.rel)
    if a.rel == 0 and b.rel == 0:
        return Padic(ctx, prec, 0, 0)
    vmin = min(a.val, b.val)
    if prec <= vmin:
        return Padic(ctx, prec, 0, 0)
    p = ctx.p
    sa = a.unit * ppow(p, a.val - vmin) if a.rel else 0
    sb = b.unit * ppow(p, b.val - vmin) if b.rel else 0
    return _normalize(ctx, sa + sb, vmin, prec - vmin, check)


def mul(a: Padic, b: Padic) -> Padic:
    ctx = a.ctx
    if b.ctx != ctx:
        raise ContextMismatch("operands live in different contexts")
    if a.val == INF or b.val == INF:
        return ctx.zero()
    if a.rel == 0 or b.rel == 0:
        # zero known modulo p^A times something of valuation v
        return Padic(ctx, a.val + b.val, 0, 0)
    rel = min(a.rel, b.rel)
    return Padic(ctx, a.val + b.val, (a.unit * b.unit) % ppow(ctx.p, rel), rel)


def div(a: Padic, b: Padic) -> Padic:
    ctx = a.ctx
    if b.ctx != ctx:
        raise ContextMismatch("operands live in different contexts")
    if b.val == INF:
        raise DivisionByZero("division by exact zero")
    if b.rel == 0:
        if b.val >= ctx.zero_threshold:
            raise DivisionByZero("division by a value that is zero by threshold")
        raise PrecisionExhausted("divisor has no known digits")
    if a.val == INF:
        return ctx.zero()
    if a.rel == 0:
        return Padic(ctx, a.val - b.val, 0, 0)
    rel = min(a.rel, b.rel)
    mod = ppow(ctx.p, rel)
    return Padic(ctx, a.val - b.val, (a.unit * pow(b.unit, -1, mod)) % mod, rel)


def arith(a: Padic, b: Padic | None, op: str) -> Padic:
    if op == "neg":
        return -a
    if op == "add":
        return add(a, b)
    if op == "sub":
        return add(a, -b)
    if op == "mul":
        return mul(a, b)
    if op == "div":
        return div(a, b)
    raise ValueError(f"unknown operation {op!r}")


def valuation(a: Padic):
    return a.val


# -- squares ----------------------------------------------------------------

def legendre(u: int, p: int) -> int:
    if p == 2:
        raise EvenPrime("Legendre symbol needs an odd prime")
    if u % p == 0:
        raise NonUnit(f"{u} is divisible by {p}")
    return 1 if pow(u, (p - 1) // 2, p) == 1 else -1


def least_nonresidue(p: int) -> int:
    a = 2
    while legendre(a, p) == 1:
        a += 1
    return a


def sqrt_mod_p(u: int, p: int) -> int:
    """Smallest square root of ``u`` modulo an odd prime (Tonelli-Shanks)."""
    u %= p
    if u == 0:
        return 0
    if legendre(u, p) != 1:
        raise NotASquare(f"{u} is not a square mod {p}")
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = least_nonresidue(p)
    m, c, t, r = s, pow(z, q, p), pow(u, q, p), pow(u, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return min(r, p - r)


def _check_square_input(a: Padic):
    if a.rel == 0:
        if a.val == INF or a.val >= a.ctx.zero_threshold:
            raise ZeroInput("zero input")
        raise PrecisionExhausted("value has no known digits")


def is_square(a: Padic) -> bool:
    _check_square_input(a)
    if a.val % 2:
        return False
    p = a.ctx.p
    if p == 2:
        if a.rel < 3:
            raise PrecisionExhausted("need three digits to test 2-adic squareness")
        return a.unit % 8 == 1
    return legendre(a.unit, p) == 1


def newton_sqrt_iterates(a: Padic) -> list[tuple[Padic, int]]:
    """Newton iterates for a square root of ``a``.

    Returns ``(r_k, e_k)`` pairs where ``e_k`` is the valuation of
    ``r_k**2 - a`` relative to ``val(a)`` (capped at the known digits).
    """
    if not is_square(a):
        raise NotASquare(f"{a} is not a square in Q_{a.ctx.p}")
    ctx, p, u, rel = a.ctx, a.ctx.p, a.unit, a.rel
    half = a.val // 2
    mod = ppow(p, rel)
    if p == 2:
        r = 1
        out_rel = rel - 1
    else:
        r = sqrt_mod_p(u, p)
        out_rel = rel
    iterates = []
    for _ in range(4 * rel.bit_length() + 8):
        e = vp_capped((r * r - u) % mod, p, rel)
        iterates.append((Padic(ctx, half, r % ppow(p, out_rel), out_rel), e))
        if e >= rel:
            break
        if p == 2:
            step = ((r * r - u) // 2) * pow(r, -1, mod)
        else:
            step = (r * r - u) * pow(2 * r, -1, mod)
        r = (r - step) % mod
    else:
        raise PrecisionExhausted("Newton iteration did not converge")
    if out_rel < 1:
        raise PrecisionExhausted("too few digits for a 2-adic square root")
    return iterates


def sqrt(a: Padic) -> Padic:
    """Square root with the smaller leading digit (``1 mod 4`` when p = 2)."""
    root, _ = newton_sqrt_iterates(a)[-1]
    p = a.ctx.p
    mod = ppow(p, root.rel)
    unit = root.unit
    if p == 2:
        if unit % 4 == 3:
            unit = (-unit) % mod
    elif unit % p > p // 2:
        unit = (-unit) % mod
    return Padic(a.ctx, root.val, unit, root.rel)
