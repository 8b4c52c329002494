"""Exhaustive primitive-zero search over Z/p^k.

A zero over Q_p scales to a primitive integral vector that stays a zero
modulo every ``p^k``, so finding no primitive zero at one level proves
anisotropy.  The search never truncates: oversized spaces are rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import SearchSpaceTooLarge, ZeroExists
from .padic import is_prime, ppow, vp
from .qform import FormSystem, QuadraticForm

DEFAULT_LIMIT = 10**7
_CHUNK = 1 << 18


def integer_coefficients(gram: Sequence[Sequence]) -> list[list[int]]:
    """Upper-triangular integer polynomial coefficients of ``x^T G x``.

    Entry ``(i, j)``, ``i <= j``, is the coefficient of ``x_i x_j``; the whole
    polynomial is scaled by the least common denominator, which leaves the
    set of primitive zeros of the form unchanged.
    """
    n = len(gram)
    C = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        C[i][i] = Fraction(gram[i][i])
        for j in range(i + 1, n):
            C[i][j] = 2 * Fraction(gram[i][j])
    den = 1
    for row in C:
        for x in row:
            den = math.lcm(den, x.denominator)
    return [[int(x * den) for x in row] for row in C]


@dataclass
class ResidueSearchSpec:
    forms: list[list[list[int]]]  # integer coefficient matrices (upper triangular)
    p: int
    k: int
    limit: int = DEFAULT_LIMIT

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.k < 1:
            raise ValueError("level k must be at least 1")
        if not self.forms:
            raise ValueError("no forms to search")
        if self.points > self.limit or self.modulus > 2**31:
            raise SearchSpaceTooLarge(
                f"{self.p}^({self.k}*{self.n}) points exceed the limit {self.limit}")

    @property
    def n(self) -> int:
        return len(self.forms[0])

    @property
    def modulus(self) -> int:
        return ppow(self.p, self.k)

    @property
    def points(self) -> int:
        return self.modulus**self.n

    @classmethod
    def from_system(cls, sys: FormSystem, k: int, limit: int = DEFAULT_LIMIT) -> ResidueSearchSpec:
        return cls([integer_coefficients(f.exact_gram()) for f in sys.forms], sys.ctx.p, k, limit)

    @classmethod
    def from_grams(cls, grams, p: int, k: int, limit: int = DEFAULT_LIMIT) -> ResidueSearchSpec:
        return cls([integer_coefficients(g) for g in grams], p, k, limit)


def _digits(idx: np.ndarray, M: int, n: int) -> np.ndarray:
    """Base-``M`` digits of ``idx``, first coordinate most significant."""
    out = np.empty((n, idx.size), dtype=np.int64)
    rest = idx.copy()
    for i in range(n - 1, -1, -1):
        out[i] = rest % M
        rest //= M
    return out


def _zero_mask(spec: ResidueSearchSpec, X: np.ndarray) -> np.ndarray:
    M, p = spec.modulus, spec.p
    mask = (X % p != 0).any(axis=0)
    for C in spec.forms:
        val = np.zeros(X.shape[1], dtype=np.int64)
        for i in range(spec.n):
            for j in range(i, spec.n):
                c = C[i][j] % M
                if c:
                    val = (val + (X[i] * X[j] % M) * c) % M
        mask &= val == 0
    return mask


def _chunks(spec: ResidueSearchSpec):
    total = spec.points
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        yield _digits(idx, spec.modulus, spec.n)


def primitive_zero_search(spec: ResidueSearchSpec) -> tuple[int, ...] | None:
    """Lexicographically smallest primitive zero modulo ``p^k``, if any."""
    for X in _chunks(spec):
        hits = np.flatnonzero(_zero_mask(spec, X))
        if hits.size:
            return tuple(int(x) for x in X[:, hits[0]])
    return None


def all_primitive_zeros(spec: ResidueSearchSpec) -> list[tuple[int, ...]]:
    out = []
    for X in _chunks(spec):
        for h in np.flatnonzero(_zero_mask(spec, X)):
            out.append(tuple(int(x) for x in X[:, h]))
    return out


def certify_anisotropic(f: QuadraticForm | Sequence[Sequence], k: int, p: int | None = None,
                        limit: int = DEFAULT_LIMIT) -> dict:
    """Evidence that ``f`` has no primitive zero modulo ``p^k``."""
    if isinstance(f, QuadraticForm):
        p = f.ctx.p
        gram = f.exact_gram()
    else:
        gram = f
    spec = ResidueSearchSpec.from_grams([gram], p, k, limit)
    zero = primitive_zero_search(spec)
    if zero is not None:
        raise ZeroExists(zero)
    return {"kind": "oracle_evidence", "p": p, "k": k, "modulus": spec.modulus,
            "searched": spec.points, "found": None}


def primitive_integral(v: Sequence[Fraction], p: int) -> list[int]:
    """Scale a nonzero rational vector to an integral vector not divisible by p."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = math.lcm(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        raise ValueError("zero vector")
    shift = vp(g, p)
    return [x // ppow(p, shift) for x in ints]


def cross_check(certificate, sys: FormSystem, k: int) -> bool:
    """Does the certificate's zero reduce to a primitive zero mod ``p^k``?"""
    if k < 1:
        raise ValueError("level k must be at least 1")
    p = sys.ctx.p
    M = ppow(p, k)
    try:
        v = primitive_integral([x.to_fraction() for x in certificate.zero], p)
    except ValueError:
        return False
    v = [x % M for x in v]
    if all(x % p == 0 for x in v):
        return False
    for f in sys.forms:
        C = integer_coefficients(f.exact_gram())
        total = sum(C[i][j] * v[i] * v[j] for i in range(sys.n) for j in range(i, sys.n))
        if total % M:
            return False
    return True
