"""Independent reference computations and random generators for the tests.

Nothing here calls the package's stop-loss or convex-order code, so the
checks below are genuine cross-checks.
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from uniform_sums.distributions import MixtureDistribution


def cdf_at(dist: MixtureDistribution, x: Fraction) -> Fraction:
    total = sum((a.mass for a in dist.atoms if a.location <= x), Fraction(0))
    for p in dist.pieces:
        if x >= p.hi:
            total += p.weight
        elif x > p.lo:
            total += p.weight * (x - p.lo) / (p.hi - p.lo)
    return total


def stop_loss_by_survival(dist: MixtureDistribution, k: Fraction) -> Fraction:
    """``E[(X-k)_+] = integral_k^inf (1 - F(x)) dx``.

    Between breakpoints the survival function is linear, so the trapezoid
    rule is exact on every sub-interval (right limits are used at atoms).
    """
    pts = sorted({k} | {x for x in dist.breakpoints() if x > k})
    total = Fraction(0)
    for lo, hi in zip(pts, pts[1:]):
        s_lo = 1 - cdf_at(dist, lo)
        # left limit at hi: survival just before an atom at hi
        s_hi = 1 - (cdf_at(dist, hi) - sum((a.mass for a in dist.atoms if a.location == hi), Fraction(0)))
        total += (s_lo + s_hi) * (hi - lo) / 2
    return total


def cx_reference_discrete(dist: MixtureDistribution, n: int) -> bool:
    """Convex order against U[0, n] for a purely atomic law via quantiles.

    ``F <=_cx U[0,n]`` iff the means agree and the upper quantile integrals
    satisfy ``int_alpha^1 F^{-1} <= n (1 - alpha^2) / 2`` for all alpha. The
    left side is linear between cumulative masses while the right side is
    concave, so checking the cumulative masses is enough.
    """
    assert dist.is_discrete
    if dist.mean() != Fraction(n, 2):
        return False
    alpha, tail = Fraction(1), Fraction(0)
    for a in reversed(dist.atoms):
        alpha -= a.mass
        tail += a.mass * a.location
        if tail > Fraction(n) * (1 - alpha * alpha) / 2:
            return False
    return True


def float_gap_grid(dist: MixtureDistribution, n: int, points: int = 10_000) -> float:
    """Largest float stop-loss gap over an evenly spaced grid on [0, n]."""
    k = np.linspace(0.0, float(n), points)
    sl = np.zeros_like(k)
    for a in dist.atoms:
        sl += float(a.mass) * np.maximum(float(a.location) - k, 0.0)
    for p in dist.pieces:
        lo, hi, d = float(p.lo), float(p.hi), float(p.density)
        # integral of (x - k)_+ d over [lo, hi]
        lo_k = np.maximum(lo, k)
        inside = hi > k
        sl += np.where(inside, d * ((hi - k) ** 2 - (lo_k - k) ** 2) / 2, 0.0)
    return float(np.max(sl - (float(n) - k) ** 2 / (2 * n)))


# -- random laws ---------------------------------------------------------------


def random_rational(rng: random.Random, lo: Fraction, hi: Fraction, den: int = 12) -> Fraction:
    q = rng.randint(1, den)
    return lo + (hi - lo) * Fraction(rng.randint(0, q), q)


def recentre(dist: MixtureDistribution, n: int, stretch: Fraction) -> MixtureDistribution:
    """Affine image with mean n/2, scaled by ``stretch`` times the largest
    factor that keeps the support inside [0, n]."""
    mu = dist.mean()
    lo, hi = dist.support_bounds()
    half = Fraction(n, 2)
    limits = [half / (mu - lo)] if mu > lo else []
    limits += [half / (hi - mu)] if hi > mu else []
    if not limits:
        return MixtureDistribution.point_mass(half)
    lam = min(limits) * stretch
    return dist.scale_shift(lam, half - lam * mu)


def random_discrete(rng: random.Random, n: int, max_atoms: int = 5) -> MixtureDistribution:
    """Random atomic law with mean n/2 and support in [0, n]; about half are members."""
    k = rng.randint(2, max_atoms)
    pairs = [(random_rational(rng, Fraction(0), Fraction(n)), Fraction(rng.randint(1, 6))) for _ in range(k)]
    total = sum(m for _, m in pairs)
    base = MixtureDistribution.discrete([(x, m / total) for x, m in pairs])
    stretch = Fraction(rng.randint(1, 10), 10)
    return recentre(base, n, stretch)


def random_mixture(rng: random.Random, n: int) -> MixtureDistribution:
    """Random law mixing atoms and uniform pieces, recentred to mean n/2."""
    parts = []
    for _ in range(rng.randint(1, 3)):
        parts.append(("atom", random_rational(rng, Fraction(0), Fraction(n)), Fraction(rng.randint(1, 5))))
    for _ in range(rng.randint(0, 2)):
        a = random_rational(rng, Fraction(0), Fraction(n))
        b = random_rational(rng, Fraction(0), Fraction(n))
        if a != b:
            parts.append(("piece", (min(a, b), max(a, b)), Fraction(rng.randint(1, 5))))
    total = sum(p[2] for p in parts)
    atoms = [(p[1], p[2] / total) for p in parts if p[0] == "atom"]
    pieces = [(p[1][0], p[1][1], p[2] / total) for p in parts if p[0] == "piece"]
    from uniform_sums.distributions import Atom, UniformPiece

    base = MixtureDistribution([Atom(x, m) for x, m in atoms], [UniformPiece(lo, hi, w) for lo, hi, w in pieces])
    return recentre(base, n, Fraction(rng.randint(1, 10), 10))


def random_grid_law(rng: random.Random, spec) -> MixtureDistribution | None:
    """Atomic law on the sum grid of ``spec`` with mean n/2 (None if the draw fails)."""
    K = spec.max_index
    target = Fraction(spec.n * (spec.m - 1), 2)
    idx = rng.sample(range(K + 1), rng.randint(1, min(4, K + 1)))
    w = [Fraction(rng.randint(1, 6)) for _ in idx]
    tot = sum(w)
    mean = sum(i * x for i, x in zip(idx, w)) / tot
    if mean == target:
        pairs = list(zip(idx, w))
    else:
        order = list(range(K + 1))
        rng.shuffle(order)
        for j in order:
            if j == target:
                continue
            v = tot * (target - mean) / (j - target)
            if v > 0:
                pairs = list(zip(idx, w)) + [(j, v)]
                break
        else:
            return None
    S = sum(x for _, x in pairs)
    return MixtureDistribution.discrete([(spec.value(i), x / S) for i, x in pairs])


def triatomic(a: Fraction, b: Fraction, f2: Fraction) -> MixtureDistribution:
    """Mean-one law on ``{a-b, a, a+b}`` with middle mass ``f2``."""
    f1 = (1 - f2 - (1 - a) / b) / 2
    f3 = f1 + (1 - a) / b
    return MixtureDistribution.discrete([(a - b, f1), (a, f2), (a + b, f3)])


def biatomic(a: Fraction, b: Fraction) -> MixtureDistribution:
    """Mean-one law on ``{a, a+b}``."""
    q = (1 - a) / b
    return MixtureDistribution.discrete([(a, 1 - q), (a + b, q)])
