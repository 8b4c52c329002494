"""Integer bound formulas for u-invariants of systems of quadratic forms.

``u(t)`` is the largest ``n`` for which some ``t`` forms in ``n`` variables
have no common nontrivial zero.  Everything here is exact integer
arithmetic; a failed divisibility assertion means a bug, not bad input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import MissingTableEntry
from .padic import is_prime

# Literature values for local fields, with provenance echoed in reports.
LITERATURE_U = {
    1: (4, "Hasse: u(1) = 4 for local fields"),
    2: (8, "Demjanov: u(2) = 8 for local fields"),
    3: (12, "Birch-Lewis, Schuur: u(3) = 12 over Q_p for p >= 11"),
}

FORMULAS = ("theorem", "leep", "leep_qp", "corollary1", "corollary2", "laststop",
            "inductwo", "lower", "dimshave_chain", "constructive")


@dataclass(frozen=True)
class BoundReport:
    value: int
    formula: str
    inputs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.value < 1:
            raise AssertionError(f"bound {self.value} is not positive")

    def to_dict(self) -> dict:
        return {"value": self.value, "formula": self.formula, "inputs": self.inputs}


def _positive(**kw):
    for name, v in kw.items():
        if not isinstance(v, int) or v < 1:
            raise ValueError(f"{name} must be a positive integer, got {v!r}")


def _table_value(table: Mapping, j: int) -> int:
    if j not in table:
        raise MissingTableEntry(f"u({j}) is not in the table")
    entry = table[j]
    return entry[0] if isinstance(entry, tuple) else entry


def _echo(table: Mapping) -> dict:
    return {str(j): (list(v) if isinstance(v, tuple) else v) for j, v in sorted(table.items())}


def tau(t: int, m: int) -> int:
    """The representative of ``t mod m`` in ``1..m``."""
    _positive(t=t, m=m)
    return (t - 1) % m + 1


def theorem_bound(t: int, m: int, u1: int) -> BoundReport:
    """``(t(t - m + 2) + tau(m - tau)) u1 / 2``, valid when ``u(m) = m u(1)``."""
    _positive(t=t, m=m, u1=u1)
    r = tau(t, m)
    bracket = t * (t - m + 2) + r * (m - r)
    assert bracket % 2 == 0, f"odd bracket for t={t}, m={m}"
    return BoundReport(bracket // 2 * u1, "theorem", {"t": t, "m": m, "u1": u1, "tau": r})


def leep_bounds(t: int, u1: int = 4) -> tuple[BoundReport, BoundReport | None]:
    """Leep's general bound and, for ``t >= 2``, his bound over Q_p."""
    _positive(t=t, u1=u1)
    num = t * (t + 1) * u1
    assert num % 2 == 0
    general = BoundReport(num // 2, "leep", {"t": t, "u1": u1})
    qp = BoundReport(2 * t * t + 2 * t - 4, "leep_qp", {"t": t}) if t >= 2 else None
    return general, qp


def local_field_bound(t: int) -> BoundReport:
    _positive(t=t)
    value = 2 * t * t + (2 if t % 2 else 0)
    return BoundReport(value, "corollary1", {"t": t})


def qp_bound(t: int, p: int) -> BoundReport:
    """Best applicable corollary for Q_p."""
    _positive(t=t)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    best = local_field_bound(t)
    if p >= 11:
        value = 2 * t * t - 2 * t + (0 if t % 3 == 0 else 4)
        if value < best.value:
            best = BoundReport(value, "corollary2", {"t": t, "p": p})
    return BoundReport(best.value, best.formula, {**best.inputs, "p": p})


def lower_bound(t: int, u1: int = 4) -> BoundReport:
    _positive(t=t, u1=u1)
    return BoundReport(t * u1, "lower", {"t": t, "u1": u1})


def laststop_bound(t: int, k: int, r: int, u_table: Mapping) -> BoundReport:
    """``u(t - rk) + sum_{i=1..r} (t - ik + 1) u(k)`` for ``rk < t``."""
    _positive(t=t, k=k, r=r)
    if r * k >= t:
        raise ValueError(f"need r*k < t, got r={r}, k={k}, t={t}")
    uk = _table_value(u_table, k)
    value = _table_value(u_table, t - r * k)
    value += sum(t - i * k + 1 for i in range(1, r + 1)) * uk
    return BoundReport(value, "laststop", {"t": t, "k": k, "r": r, "u_table": _echo(u_table)})


def inductwo_bound(t: int, m: int, u_table: Mapping) -> BoundReport:
    """``u(tau) + (t - tau)(t - m + tau + 2) u(m) / (2m)``."""
    _positive(t=t, m=m)
    r = tau(t, m)
    num = (t - r) * (t - m + r + 2)
    assert num % (2 * m) == 0, f"non-integral recursion step for t={t}, m={m}"
    value = _table_value(u_table, r) + num // (2 * m) * _table_value(u_table, m)
    return BoundReport(value, "inductwo",
                       {"t": t, "m": m, "tau": r, "u_table": _echo(u_table)})


def dimshave_chain(t: int, d: int, u_t: int) -> BoundReport:
    """Bound for a ``(d+1)``-dimensional zero subspace: ``u(t) + d (t + 1)``."""
    _positive(t=t, u_t=u_t)
    if not isinstance(d, int) or d < 0:
        raise ValueError("d must be a non-negative integer")
    return BoundReport(u_t + d * (t + 1), "dimshave_chain", {"t": t, "d": d, "u_t": u_t})


@dataclass
class BoundQuery:
    """Parameters for a batch of bound evaluations."""

    t: int
    m: int = 2
    u1: int = 4
    k: int | None = None
    r: int | None = None
    d: int | None = None
    p: int | None = None
    u_table: dict = field(default_factory=lambda: dict(LITERATURE_U))

    def __post_init__(self):
        _positive(t=self.t, m=self.m, u1=self.u1)
        if self.k is not None:
            _positive(k=self.k)
        if self.r is not None:
            _positive(r=self.r)
        if self.k is not None and self.r is not None and self.r * self.k >= self.t:
            raise ValueError("need r*k < t")
        if self.d is not None and self.d < 0:
            raise ValueError("d must be non-negative")
        if self.p is not None and not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def reports(self) -> list[BoundReport]:
        from .solver import constructive_threshold

        t = self.t
        out = [theorem_bound(t, self.m, self.u1)]
        general, qp = leep_bounds(t, self.u1)
        out.append(general)
        if qp is not None:
            out.append(qp)
        out.append(local_field_bound(t))
        if self.p is not None:
            out.append(qp_bound(t, self.p))
        out.append(lower_bound(t, self.u1))
        if self.k is not None and self.r is not None:
            out.append(laststop_bound(t, self.k, self.r, self.u_table))
        if self.d is not None:
            out.append(dimshave_chain(t, self.d, out[0].value))
        out.append(BoundReport(constructive_threshold(t), "constructive", {"t": t}))
        return out
