"""Closed-form upper and lower bounds on rank_p of the incidence matrices.

Everything is exact: integers are arbitrary precision, ratios are Fractions,
and the only rounding is the explicit ceiling attached to the main upper
bound.  The main bound applies only to admissible k = 1 + p + ... + p^s; for
other k it is reported as absent rather than extrapolated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

CSV_COLUMNS = [
    "p",
    "k",
    "n",
    "admissible_s",
    "lt1",
    "lt2",
    "lt_min",
    "main_bound",
    "main_ceiling",
    "w_lower",
    "a_lower",
    "measured_rank",
]


class InadmissibleK(ValueError):
    """k is not of the form (p^(s+1) - 1)/(p - 1)."""


def binomial(m: int, r: int) -> int:
    """C(m, r) with C(m, r) = 0 when r > m; negative arguments are an error."""
    if m < 0 or r < 0:
        raise ValueError(f"binomial arguments must be nonnegative, got ({m}, {r})")
    if r > m:
        return 0
    return math.comb(m, r)


@dataclass(frozen=True)
class LtUpper:
    bound1: int
    bound2: int

    @property
    def minimum(self) -> int:
        return min(self.bound1, self.bound2)


def lt_upper(p: int, k: int, n: int) -> LtUpper:
    """The two closed-form upper bounds on rank_p(A(p^k, n)) and their min."""
    q = p**k
    bound1 = binomial(q + n - 1, n)
    bound2 = 2 * n * binomial(q // 2 + (n - 1) * (p - 1) + n, n)
    return LtUpper(bound1=bound1, bound2=bound2)


def k_from_s(p: int, s: int) -> int:
    """k = (p^(s+1) - 1)/(p - 1) = 1 + p + ... + p^s."""
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    return (p ** (s + 1) - 1) // (p - 1)


def is_admissible(p: int, k: int) -> int | None:
    """Return s with k = k_from_s(p, s), or None if no such s exists."""
    s = 0
    acc = 1
    term = 1
    while acc < k:
        term *= p
        acc += term
        s += 1
    return s if acc == k else None


@dataclass(frozen=True)
class MainUpper:
    value: Fraction
    ceiling: int


def main_upper(p: int, k: int, n: int) -> MainUpper:
    """Kakeya-derived upper bound p^(kn) / k^(n-1) * (1 - 1/p)^(-n), exact.

    Only valid for admissible k; raises InadmissibleK otherwise.
    """
    if is_admissible(p, k) is None:
        raise InadmissibleK(f"k = {k} is not (p^(s+1)-1)/(p-1) for any s (p = {p})")
    value = Fraction(p ** (k * n), k ** (n - 1)) * Fraction(p, p - 1) ** n
    return MainUpper(value=value, ceiling=math.ceil(value))


def ceil_q_over_k(p: int, k: int) -> int:
    return -(-(p**k) // k)


def w_lower(p: int, k: int, n: int) -> int:
    """Lower bound C(ceil(p^k/k) + n - 1, n - 1) on rank_p(W(p^k, n))."""
    return binomial(ceil_q_over_k(p, k) + n - 1, n - 1)


def a_lower(p: int, k: int, n: int) -> Fraction:
    """Lower bound C(ceil(p^k/k) + n, n)/(2k(k+1)) - 1 on rank_p(A(p^k, n)).

    Reported as an exact rational, never floored; may be negative (vacuous).
    """
    return Fraction(binomial(ceil_q_over_k(p, k) + n, n), 2 * k * (k + 1)) - 1


@dataclass(frozen=True)
class BoundsRow:
    p: int
    k: int
    n: int
    admissible_s: int | None
    lt1: int
    lt2: int
    main_bound: Fraction | None
    main_ceiling: int | None
    w_lower: int
    a_lower: Fraction
    measured_rank: int | None = None

    @property
    def lt_min(self) -> int:
        return min(self.lt1, self.lt2)

    @property
    def a_lower_vacuous(self) -> bool:
        return self.a_lower < 0


def bounds_row(p: int, k: int, n: int, measured_rank: int | None = None) -> BoundsRow:
    s = is_admissible(p, k)
    lt = lt_upper(p, k, n)
    main = main_upper(p, k, n) if s is not None else None
    return BoundsRow(
        p=p,
        k=k,
        n=n,
        admissible_s=s,
        lt1=lt.bound1,
        lt2=lt.bound2,
        main_bound=main.value if main else None,
        main_ceiling=main.ceiling if main else None,
        w_lower=w_lower(p, k, n),
        a_lower=a_lower(p, k, n),
        measured_rank=measured_rank,
    )


def bounds_table(
    p: int,
    ks: list[int],
    ns: list[int],
    measured_ranks: dict[tuple[int, int], int] | None = None,
) -> list[BoundsRow]:
    """One BoundsRow per (k, n); measured_ranks is keyed by (k, n)."""
    if not ks or not ns:
        raise ValueError("k and n ranges must be nonempty")
    measured_ranks = measured_ranks or {}
    return [
        bounds_row(p, k, n, measured_rank=measured_ranks.get((k, n)))
        for k in ks
        for n in ns
    ]


def format_cell(value) -> str:
    """Lossless cell text: decimal for integers, num/den for rationals, '' for N/A."""
    if value is None:
        return ""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return str(value)


def rows_to_csv(rows: list[BoundsRow]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for r in rows:
        cells = [
            r.p,
            r.k,
            r.n,
            r.admissible_s,
            r.lt1,
            r.lt2,
            r.lt_min,
            r.main_bound,
            r.main_ceiling,
            r.w_lower,
            r.a_lower,
            r.measured_rank,
        ]
        lines.append(",".join(format_cell(c) for c in cells))
    return "\n".join(lines) + "\n"
