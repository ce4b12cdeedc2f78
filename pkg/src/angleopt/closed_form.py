"""Exact integer ledger for orthogonal-pair counts and its consistency checks.

``f_dn(d, n)`` is the largest number of perpendicular pairs achievable by n
lines spanned by an orthonormal basis of R^{d+1}: distribute the n lines
over the d+1 axes as evenly as possible and count cross-axis pairs.  The
restricted value ``f_dnk(d, n, k)`` fixes k of the n lines inside a
d-dimensional coordinate hyperplane and puts the rest on the remaining
axis.  Everything in this module is exact integer / rational arithmetic;
no floating point is used anywhere.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, FalsificationError

__all__ = [
    "ErrorTerm",
    "LemmaCheck",
    "LemmaReport",
    "PartitionOptimum",
    "balanced_partition",
    "error_term",
    "f_dn",
    "f_dnk",
    "pair_count",
    "partition_oracle",
    "verify_comparison_lemma",
]


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@lru_cache(maxsize=None)
def f_dn(d: int, n: int) -> int:
    """Maximal perpendicular-pair count for n lines on d+1 orthogonal axes.

    Built up from f_dn(d, 0) = 0 by the increment
    f_dn(d, m+1) - f_dn(d, m) = m - floor(m / (d+1)) = ceil(d*m / (d+1)).
    ``d = 0`` is the degenerate single-axis case, identically 0.
    """
    if not (isinstance(d, int) and isinstance(n, int)):
        raise DomainError("d and n must be integers")
    if d < 0 or n < 0:
        raise DomainError(f"need d >= 0 and n >= 0, got d={d}, n={n}")
    total = 0
    for m in range(n):
        total += m - m // (d + 1)
    return total


def f_dnk(d: int, n: int, k: int) -> int:
    """Split ledger value: k lines confined to a d-dim coordinate hyperplane.

    Equals f_dn(d-1, k) + k*(n-k): the k confined lines interact among
    themselves inside the hyperplane and each of them is perpendicular to
    each of the n-k lines on the remaining axis.
    """
    if not (isinstance(d, int) and isinstance(n, int) and isinstance(k, int)):
        raise DomainError("d, n, k must be integers")
    if d < 1:
        raise DomainError(f"need d >= 1, got d={d}")
    if n < 0 or k < 0 or k > n:
        raise DomainError(f"need 0 <= k <= n, got n={n}, k={k}")
    return f_dn(d - 1, k) + k * (n - k)


def pair_count(parts: tuple[int, ...]) -> int:
    """Number of cross-part pairs sum_{i<j} n_i * n_j of a partition."""
    if any(p < 0 for p in parts):
        raise DomainError(f"partition parts must be nonnegative, got {parts}")
    s = sum(parts)
    return (s * s - sum(p * p for p in parts)) // 2


def balanced_partition(d: int, n: int) -> tuple[int, ...]:
    """n split into at most d+1 parts differing by at most one, zeros dropped."""
    if d < 0 or n < 0:
        raise DomainError(f"need d >= 0 and n >= 0, got d={d}, n={n}")
    q, r = divmod(n, d + 1)
    parts = (q + 1,) * r + (q,) * (d + 1 - r)
    return tuple(p for p in parts if p > 0)


@dataclass(frozen=True)
class PartitionOptimum:
    """Best value of sum_{i<j} n_i n_j over partitions into <= d+1 parts."""

    value: int
    parts: tuple[int, ...]


def _partitions(n: int, max_parts: int, max_part: int):
    """Yield partitions of n into at most max_parts parts, nonincreasing."""
    if n == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, max_parts - 1, first):
            yield (first,) + rest


def partition_oracle(d: int, n: int) -> PartitionOptimum:
    """Brute-force maximum of the cross-pair count over all partitions of n
    into at most d+1 parts.  Independent of ``f_dn``; used to certify it."""
    if not (isinstance(d, int) and isinstance(n, int)):
        raise DomainError("d and n must be integers")
    if d < 0 or n < 0:
        raise DomainError(f"need d >= 0 and n >= 0, got d={d}, n={n}")
    best_value = -1
    best_parts: tuple[int, ...] = ()
    for parts in _partitions(n, d + 1, n):
        v = pair_count(parts)
        if v > best_value:
            best_value, best_parts = v, parts
    if best_value < 0:
        best_value, best_parts = 0, ()
    return PartitionOptimum(value=best_value, parts=best_parts)


@dataclass(frozen=True)
class ErrorTerm:
    """Exact rounding error accumulated by the ceiling increments.

    e = sum_{m=k}^{n-1} (ceil((d-1)m/d) - (d-1)m/d), as an exact rational,
    and e_avg = e / (n - k).
    """

    d: int
    n: int
    k: int
    e: Fraction
    e_avg: Fraction


def error_term(d: int, n: int, k: int) -> ErrorTerm:
    """Compute the ceiling error term and check its proved bounds.

    Preconditions: d >= 1 and d*n/(d+1) <= k <= n-1.  Since
    -(d-1)*m == m (mod d), the summand is exactly (m mod d)/d, so e is a
    fraction with denominator d (and identically 0 for d = 1).  Raises
    ``FalsificationError`` if a proved bound fails (which would indicate a
    defect in the implementation, not in the bound).
    """
    if not (isinstance(d, int) and isinstance(n, int) and isinstance(k, int)):
        raise DomainError("d, n, k must be integers")
    if d < 1:
        raise DomainError(f"need d >= 1, got d={d}")
    if not Fraction(d * n, d + 1) <= k <= n - 1:
        raise DomainError(f"need d*n/(d+1) <= k <= n-1, got d={d}, n={n}, k={k}")
    numer = sum(m % d for m in range(k, n - 1 + 1))
    e = Fraction(numer, d)
    e_avg = e / (n - k)
    if not 0 <= e <= n - k:
        raise FalsificationError(f"error term out of [0, n-k]: d={d}, n={n}, k={k}, e={e}")
    k_ceil = _ceil_div(d * n, d + 1)
    if k == k_ceil:
        r = n - (d + 1) * (n // (d + 1))
        if not e_avg <= Fraction(d + r - 1, 2 * d):
            raise FalsificationError(
                f"average error exceeds (d+r-1)/(2d): d={d}, n={n}, k={k}, e_avg={e_avg}"
            )
        if not e_avg < Fraction(d, 2 * (d + 1)) + (k - Fraction(d * n, d + 1)):
            raise FalsificationError(
                f"average error exceeds d/(2(d+1)) + (k - dn/(d+1)): d={d}, n={n}, k={k}"
            )
    return ErrorTerm(d=d, n=n, k=k, e=e, e_avg=e_avg)


@dataclass(frozen=True)
class LemmaCheck:
    """One verified inequality or equality instance."""

    d: int
    n: int
    k: int
    lhs: int
    rhs: int
    check_name: str
    passed: bool


_CHECK_STRICT = "strict_inequality"
_CHECK_MONOTONE = "monotonicity"
_CHECK_FLOOR_CEIL = "floor_ceiling_equality"


class LemmaReport:
    """All comparison checks over a (d, n) sweep, with CSV export."""

    def __init__(self, d_max: int, n_max: int, checks: list[LemmaCheck]):
        self.d_max = d_max
        self.n_max = n_max
        self.checks = checks

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[LemmaCheck]:
        return [c for c in self.checks if not c.passed]

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for c in self.checks:
            out[c.check_name] = out.get(c.check_name, 0) + 1
        return out

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["d", "n", "k", "lhs", "rhs", "check_name", "pass"])
            for c in self.checks:
                writer.writerow(
                    [c.d, c.n, c.k, c.lhs, c.rhs, c.check_name, "true" if c.passed else "false"]
                )


def verify_comparison_lemma(d_max: int, n_max: int) -> LemmaReport:
    """Mechanically check the split-versus-balanced comparison inequalities.

    For every 1 <= d <= d_max, d+1 <= n <= n_max, and integer k with
    d*n/(d+1) <= k <= n-1:

    * strict_inequality:  f_dn(d, n-k) + f_dn(d-1, n) < f_dnk(d, n, k)
      (splitting off n-k lines onto one axis beats nesting them);
    * monotonicity:       f_dnk(d, n, k) > f_dnk(d, n, k+1) for k <= n-2
      (pushing more lines onto the last axis only loses pairs);
    * floor_ceiling_equality: f_dnk at k = floor(dn/(d+1)) equals f_dnk at
      k = ceil(dn/(d+1)) (one row per (d, n)).
    """
    if not (isinstance(d_max, int) and isinstance(n_max, int)):
        raise DomainError("d_max and n_max must be integers")
    if d_max < 1 or n_max < 2:
        raise DomainError(f"need d_max >= 1 and n_max >= 2, got {d_max}, {n_max}")
    checks: list[LemmaCheck] = []
    for d in range(1, d_max + 1):
        for n in range(d + 1, n_max + 1):
            k_lo = _ceil_div(d * n, d + 1)
            for k in range(k_lo, n):
                lhs = f_dn(d, n - k) + f_dn(d - 1, n)
                rhs = f_dnk(d, n, k)
                checks.append(
                    LemmaCheck(d, n, k, lhs, rhs, _CHECK_STRICT, passed=lhs < rhs)
                )
                if k <= n - 2:
                    checks.append(
                        LemmaCheck(
                            d,
                            n,
                            k,
                            f_dnk(d, n, k),
                            f_dnk(d, n, k + 1),
                            _CHECK_MONOTONE,
                            passed=f_dnk(d, n, k) > f_dnk(d, n, k + 1),
                        )
                    )
            k_floor = (d * n) // (d + 1)
            k_ceil = _ceil_div(d * n, d + 1)
            checks.append(
                LemmaCheck(
                    d,
                    n,
                    k_floor,
                    f_dnk(d, n, k_floor),
                    f_dnk(d, n, k_ceil),
                    _CHECK_FLOOR_CEIL,
                    passed=f_dnk(d, n, k_floor) == f_dnk(d, n, k_ceil),
                )
            )
    return LemmaReport(d_max, n_max, checks)
