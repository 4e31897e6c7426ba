"""Sharp bounds on interval probabilities of ``U_1 + ... + U_n``.

For ``n >= 3`` the attainable sum laws are exactly those dominated by
U[0, n] in convex order, so the extremes over all dependence structures are
attained by conditional expectations of U[0, n] on three-cell partitions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .coupling import extremal_sum_distribution
from .distributions import MixtureDistribution, Q, RationalLike


class AttainingKind(str, enum.Enum):
    POINT_MASS = "PointMass"
    BI_ATOMIC = "BiAtomic"
    TRI_ATOMIC = "TriAtomic"


@dataclass(frozen=True)
class BoundResult:
    value: Fraction
    attaining: MixtureDistribution
    attaining_kind: AttainingKind


def _kind(dist: MixtureDistribution) -> AttainingKind:
    return {1: AttainingKind.POINT_MASS, 2: AttainingKind.BI_ATOMIC}.get(len(dist.atoms), AttainingKind.TRI_ATOMIC)


def _check_interval(n: int, a: Fraction, b: Fraction) -> None:
    if n < 3:
        raise ValueError("sharp interval bounds need n >= 3; for n = 2 only cdf_bounds applies")
    if b < 0 or a < 0 or a + b > n:
        raise ValueError(f"need 0 <= a <= a + b <= n, got a = {a}, b = {b}, n = {n}")


def min_open_interval(n: int, a: RationalLike, b: RationalLike) -> BoundResult:
    """``min P(a < S < a + b) = (2b/n - 1)_+`` with an attaining law."""
    a, b = Q(a), Q(b)
    _check_interval(n, a, b)
    value = max(2 * b / n - 1, Fraction(0))
    if 2 * b <= n:
        # F_{u,u} puts its atoms at u/2 <= a and (n+u)/2 >= a + b
        u = min(2 * a, Fraction(n))
        dist = extremal_sum_distribution(n, u, u)
    else:
        dist = extremal_sum_distribution(n, 2 * a, 2 * (a + b) - n)
    return BoundResult(value, dist, _kind(dist))


def max_closed_interval(n: int, a: RationalLike, b: RationalLike) -> BoundResult:
    """``max P(a <= S <= a + b) = min(2(a+b)/n, 2(n-a)/n, 1)`` with an attaining law."""
    a, b = Q(a), Q(b)
    _check_interval(n, a, b)
    half = Fraction(n, 2)
    value = min(2 * (a + b) / n, 2 * (n - a) / n, Fraction(1))
    if a <= half <= a + b:
        dist = MixtureDistribution.point_mass(half)
    elif a + b < half:
        u = 2 * (a + b)
        dist = extremal_sum_distribution(n, u, u)
    else:
        u = 2 * a - n
        dist = extremal_sum_distribution(n, u, u)
    return BoundResult(value, dist, _kind(dist))


def cdf_bounds(n: int, x: RationalLike) -> tuple[Fraction, Fraction]:
    """Upper bounds ``(P(S <= x), P(S >= x))`` valid for every ``n >= 2``."""
    x = Q(x)
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0 <= x <= n:
        raise ValueError(f"x must lie in [0, {n}], got {x}")
    return min(2 * x / n, Fraction(1)), min(2 * (n - x) / n, Fraction(1))
