"""Explicit couplings realising two-point and three-point sum laws.

A coupling is a deterministic map ``Y = intercept + slope * X`` (slope +1 or
-1) on consecutive half-open intervals of the X range, optionally combined
with a second coupling by a top-level binary mixture. X is uniform on its
margin. Because every piece has slope +-1, both the law of Y and the law of
``X + Y`` can be computed exactly: a slope -1 piece puts an atom at its
intercept, a slope +1 piece contributes a uniform piece of the sum.

Three-point constructions are first built in the frame ``X ~ U[0, T]``,
``Y ~ U[-T, 0]`` with ``Z = X + Y`` on ``{c-2, c-1, c}`` and then mapped to
U[0, 1] margins by ``X' = X/T``, ``Y' = (Y + T)/T``, which sends ``Z`` to
``S = Z/T + 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .distributions import Atom, MixtureDistribution, Q, RationalLike, UniformPiece, mixture

DKW_ALPHA = 0.01


@dataclass(frozen=True)
class CouplingSegment:
    x_lo: Fraction
    x_hi: Fraction
    slope: int
    intercept: Fraction

    def __post_init__(self):
        for name in ("x_lo", "x_hi", "intercept"):
            object.__setattr__(self, name, Q(getattr(self, name)))
        if self.slope not in (1, -1):
            raise ValueError("slope must be +1 or -1")
        if not self.x_lo < self.x_hi:
            raise ValueError(f"segment needs x_lo < x_hi, got [{self.x_lo}, {self.x_hi})")

    @property
    def length(self) -> Fraction:
        return self.x_hi - self.x_lo

    def y_image(self) -> tuple[Fraction, Fraction]:
        a = self.intercept + self.slope * self.x_lo
        b = self.intercept + self.slope * self.x_hi
        return (min(a, b), max(a, b))


@dataclass(frozen=True)
class CouplingMixture:
    weight: Fraction
    first: "PiecewiseCoupling"
    second: "PiecewiseCoupling"


@dataclass(frozen=True)
class PiecewiseCoupling:
    """Piecewise slope +-1 map from X to Y, or a mixture of two such maps.

    ``target`` is the declared law of ``X + Y`` in the same frame, when known.
    """

    x_margin: tuple[Fraction, Fraction]
    y_margin: tuple[Fraction, Fraction]
    segments: tuple[CouplingSegment, ...] = ()
    mix: Optional[CouplingMixture] = None
    target: Optional[MixtureDistribution] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "x_margin", tuple(Q(v) for v in self.x_margin))
        object.__setattr__(self, "y_margin", tuple(Q(v) for v in self.y_margin))
        object.__setattr__(self, "segments", tuple(sorted(self.segments, key=lambda s: s.x_lo)))
        if (self.mix is None) == (not self.segments):
            raise ValueError("a coupling needs exactly one of: segments, mixture")
        if self.mix is not None:
            w = Q(self.mix.weight)
            if not 0 < w < 1:
                raise ValueError("mixture weight must lie strictly between 0 and 1")

    @property
    def is_mixture(self) -> bool:
        return self.mix is not None

    def with_target(self, target: MixtureDistribution) -> "PiecewiseCoupling":
        return PiecewiseCoupling(self.x_margin, self.y_margin, self.segments, self.mix, target)

    def normalized(self) -> "PiecewiseCoupling":
        """Same coupling with both margins mapped affinely onto [0, 1].

        Requires equal margin lengths, as for any coupling of two uniform
        laws by slope +-1 maps.
        """
        (x0, x1), (y0, y1) = self.x_margin, self.y_margin
        T = x1 - x0
        if y1 - y0 != T:
            raise ValueError("margins of different lengths cannot be normalised together")
        if self.mix is not None:
            mix = CouplingMixture(self.mix.weight, self.mix.first.normalized(), self.mix.second.normalized())
            segs = ()
        else:
            mix = None
            # Y' = (Y - y0)/T and X = x0 + T X'
            segs = tuple(
                CouplingSegment(
                    (s.x_lo - x0) / T,
                    (s.x_hi - x0) / T,
                    s.slope,
                    (s.intercept + s.slope * x0 - y0) / T,
                )
                for s in self.segments
            )
        target = None
        if self.target is not None:
            target = self.target.scale_shift(1 / T, -(x0 + y0) / T)
        return PiecewiseCoupling((Fraction(0), Fraction(1)), (Fraction(0), Fraction(1)), segs, mix, target)

    def sum_law(self) -> MixtureDistribution:
        """Exact law of ``X + Y`` (assumes the X segments partition the margin)."""
        if self.mix is not None:
            return mixture([self.mix.first.sum_law(), self.mix.second.sum_law()],
                           [self.mix.weight, 1 - self.mix.weight])
        L = self.x_margin[1] - self.x_margin[0]
        atoms, pieces = [], []
        for s in self.segments:
            w = s.length / L
            if s.slope == -1:
                atoms.append(Atom(s.intercept, w))
            else:
                pieces.append(UniformPiece(s.intercept + 2 * s.x_lo, s.intercept + 2 * s.x_hi, w))
        return MixtureDistribution(atoms, pieces)


def identity_coupling() -> PiecewiseCoupling:
    """Comonotonic coupling ``Y = X`` on U[0, 1]."""
    unit = (Fraction(0), Fraction(1))
    return PiecewiseCoupling(unit, unit, (CouplingSegment(0, 1, 1, 0),),
                             target=MixtureDistribution.uniform(0, 2))


def antithetic_coupling() -> PiecewiseCoupling:
    """Counter-monotonic coupling ``Y = 1 - X`` on U[0, 1]."""
    unit = (Fraction(0), Fraction(1))
    return PiecewiseCoupling(unit, unit, (CouplingSegment(0, 1, -1, 1),),
                             target=MixtureDistribution.point_mass(1))


def mix_couplings(weight: RationalLike, first: PiecewiseCoupling, second: PiecewiseCoupling) -> PiecewiseCoupling:
    """``weight * first + (1 - weight) * second``; degenerate weights collapse."""
    weight = Q(weight)
    if weight == 1:
        return first
    if weight == 0:
        return second
    if first.x_margin != second.x_margin or first.y_margin != second.y_margin:
        raise ValueError("mixed couplings must share their margins")
    target = None
    if first.target is not None and second.target is not None:
        target = mixture([first.target, second.target], [weight, 1 - weight])
    return PiecewiseCoupling(first.x_margin, first.y_margin, (),
                             CouplingMixture(weight, first, second), target)


# --------------------------------------------------------------------------
# two-point targets


def _lemma_frame(T: Fraction, segs, target) -> PiecewiseCoupling:
    return PiecewiseCoupling((Fraction(0), T), (-T, Fraction(0)),
                             tuple(s for s in segs if s.x_lo < s.x_hi), target=target)


def _seg(lo, hi, slope, intercept):
    lo, hi = Q(lo), Q(hi)
    if lo >= hi:
        return None
    return CouplingSegment(lo, hi, slope, intercept)


def _segments(*specs):
    return [s for s in (_seg(*spec) for spec in specs) if s is not None]


def lemma_two_point(T: int, c: Fraction) -> PiecewiseCoupling:
    """``Z`` on ``{c-1, c}`` with mean 0 from ``X ~ U[0,T]``, ``Y ~ U[-T,0]``.

    On every block ``[k, k+1)``: ``Y = c - 1 - X`` on ``[k, k+c)`` and
    ``Y = c - X`` on ``[k+c, k+1)``.
    """
    c = Q(c)
    if not (isinstance(T, int) and T >= 1):
        raise ValueError("the two-point construction needs a positive integer T")
    if not 0 < c < 1:
        raise ValueError("the two-point construction needs 0 < c < 1")
    segs = []
    for k in range(T):
        segs += _segments((k, k + c, -1, c - 1), (k + c, k + 1, -1, c))
    target = MixtureDistribution.discrete([(c - 1, c), (c, 1 - c)])
    return _lemma_frame(Fraction(T), segs, target)


def synthesize_biatomic(b_inv: int, a: RationalLike) -> PiecewiseCoupling:
    """U[0,1] coupling whose sum has the mean-one law on ``{a, a + 1/b_inv}``.

    Needs ``1 - 1/b_inv < a < 1`` so that both atoms carry positive mass.
    """
    a = Q(a)
    if isinstance(b_inv, bool) or not isinstance(b_inv, int):
        b_inv = Q(b_inv)
        if b_inv.denominator != 1:
            raise ValueError(f"1/b = {b_inv} is not a positive integer; no coupling exists")
        b_inv = int(b_inv)
    if b_inv < 1:
        raise ValueError("1/b must be a positive integer")
    b = Fraction(1, b_inv)
    if not (1 - b < a < 1):
        raise ValueError(f"no mean-one law on {{{a}, {a + b}}}: need {1 - b} < a < 1")
    T = b_inv
    c = (a + b - 1) / b  # top atom a + b maps to Z = c
    return lemma_two_point(T, c).normalized()


# --------------------------------------------------------------------------
# three-point targets


def even_distance(T: Fraction) -> tuple[int, Fraction, int]:
    """Write ``T = 2m + sign * r`` with ``r`` the distance to the nearest even integer.

    Returns ``(m, r, sign)`` with ``0 <= r <= 1``; ties at odd integers use
    ``sign = +1``.
    """
    T = Q(T)
    m = math.floor(T / 2)
    rest = T - 2 * m
    if rest <= 1:
        return m, rest, 1
    return m + 1, 2 - rest, -1


def _symmetric_target(p1: Fraction) -> MixtureDistribution:
    q = (1 - p1) / 2
    return MixtureDistribution.discrete([(-1, q), (0, p1), (1, q)])


def _case_a_minimal(T: Fraction) -> PiecewiseCoupling:
    """Symmetric law on {-1, 0, 1} with the smallest middle mass r/T."""
    m, r, sign = even_distance(T)
    specs = []
    if sign == 1:
        # T = 2m + r
        for k in range(m):
            specs += [
                (2 * k, 2 * k + r, -1, -1),
                (2 * k + r, 2 * k + 1, -1, -1),
                (2 * k + 1, 2 * k + 1 + r, -1, 1),
                (2 * k + 1 + r, 2 * k + 2, -1, 1),
            ]
        specs.append((2 * m, 2 * m + r, -1, 0))
    else:
        # T = 2m - r: full pairs of blocks, then a tail of length 2 - r
        for k in range(m - 1):
            specs += [(2 * k, 2 * k + 1, -1, -1), (2 * k + 1, 2 * k + 2, -1, 1)]
        t = 2 * m - 2
        specs += [(t, t + 1 - r, -1, -1), (t + 1 - r, t + 1, -1, 0), (t + 1, t + 2 - r, -1, 1)]
    return _lemma_frame(T, _segments(*specs), _symmetric_target(r / T))


def _zero_sum(T: Fraction) -> PiecewiseCoupling:
    return _lemma_frame(T, _segments((0, T, -1, 0)), MixtureDistribution.point_mass(0))


def _three_point_target(c: Fraction, p1: Fraction) -> MixtureDistribution:
    return MixtureDistribution.discrete([(c - 2, (c - p1) / 2), (c - 1, p1), (c, 1 - (c + p1) / 2)])


def _outer_two_point(T: int, c: Fraction) -> PiecewiseCoupling:
    """T even: ``Z`` on ``{c-2, c}`` using blocks of length 2."""
    specs = []
    for k in range(T // 2):
        specs += [(2 * k, 2 * k + c, -1, c - 2), (2 * k + c, 2 * k + 2, -1, c)]
    return _lemma_frame(Fraction(T), _segments(*specs), _three_point_target(c, Fraction(0)))


def _odd_minimal(T: int, c: Fraction) -> PiecewiseCoupling:
    """T odd: the even construction on ``[0, T-1)`` plus one two-point block."""
    specs = []
    for k in range((T - 1) // 2):
        specs += [(2 * k, 2 * k + c, -1, c - 2), (2 * k + c, 2 * k + 2, -1, c)]
    specs += [(T - 1, T - 1 + c, -1, c - 1), (T - 1 + c, T, -1, c)]
    return _lemma_frame(Fraction(T), _segments(*specs), _three_point_target(c, c / T))


def _two_point_as_three(T: int, c: Fraction) -> PiecewiseCoupling:
    coupling = lemma_two_point(T, c)
    return coupling.with_target(_three_point_target(c, c))


@dataclass(frozen=True)
class TriAtomicParams:
    """Lemma-frame parameters: ``X ~ U[0,T]``, ``Y ~ U[-T,0]``, atoms ``{c-2, c-1, c}``.

    ``p1`` is the middle mass; None asks for the smallest admissible value.
    Case A has ``c = 1``.
    """

    T: Fraction
    c: Fraction = Fraction(1)
    p1: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "T", Q(self.T))
        object.__setattr__(self, "c", Q(self.c))
        if self.p1 is not None:
            object.__setattr__(self, "p1", Q(self.p1))
        if self.T <= 0:
            raise ValueError("T must be positive")


def _check_integer_T(T: Fraction, parity: int, case: str) -> int:
    if T.denominator != 1 or int(T) % 2 != parity:
        kind = "even" if parity == 0 else "odd"
        raise ValueError(f"case {case} needs T to be an {kind} integer, got T = {T}")
    return int(T)


def synthesize_triatomic(case: str, params: TriAtomicParams) -> PiecewiseCoupling:
    """Lemma-frame coupling for a mean-zero law on ``{c-2, c-1, c}``.

    * ``A``: ``c = 1``, symmetric masses, ``p1 >= r/T`` with ``r`` the distance
      from T to the nearest even integer.
    * ``B``: ``T`` even, ``0 < c < 1``, ``0 <= p1 <= c``.
    * ``C``: ``T`` odd, ``0 < c < 1``, ``c/T <= p1 <= c``.

    Extreme values of ``p1`` get a deterministic map; interior values are a
    mixture of the two extreme couplings, which realises the corresponding
    mixture of sum laws.
    """
    case = case.upper()
    T, c, p1 = params.T, params.c, params.p1
    if case == "A":
        if c != 1:
            raise ValueError(f"case A needs c = 1, got c = {c}")
        _, r, _ = even_distance(T)
        lo, hi = r / T, Fraction(1)
        low, high = _case_a_minimal(T), _zero_sum(T)
    elif case in ("B", "C"):
        if not 0 < c < 1:
            raise ValueError(f"case {case} needs 0 < c < 1, got c = {c}")
        if case == "B":
            Ti = _check_integer_T(T, 0, "B")
            lo, low = Fraction(0), _outer_two_point(Ti, c)
        else:
            Ti = _check_integer_T(T, 1, "C")
            lo, low = c / Ti, _odd_minimal(Ti, c)
        hi, high = c, _two_point_as_three(Ti, c)
    else:
        raise ValueError(f"unknown case {case!r}; expected A, B or C")
    if p1 is None:
        p1 = lo
    if p1 < lo:
        raise ValueError(f"case {case}: middle mass {p1} violates p1 >= {lo}")
    if p1 > hi:
        raise ValueError(f"case {case}: middle mass {p1} violates p1 <= {hi}")
    if lo == hi:
        return low
    return mix_couplings((hi - p1) / (hi - lo), low, high)


def triatomic_case(a: RationalLike, b: RationalLike) -> tuple[str, Fraction, Fraction]:
    """Map centre ``a <= 1`` and spacing ``b`` to ``(case, T, c)`` in the lemma frame."""
    a, b = Q(a), Q(b)
    T, c = 1 / b, (a + b - 1) / b
    if a == 1:
        return "A", T, c
    if T.denominator != 1:
        raise ValueError(f"1/b = {T} is not an integer; no law on this support is a sum")
    return ("B" if int(T) % 2 == 0 else "C"), T, c


def synthesize_triatomic_law(dist: MixtureDistribution) -> PiecewiseCoupling:
    """U[0,1] coupling realising an equidistant three-point member of mean one.

    Laws centred above 1 are realised by reflecting a coupling of the
    reflected law (``X -> 1 - X``, ``Y -> 1 - Y``).
    """
    if dist.pieces or len(dist.atoms) != 3:
        raise ValueError("need exactly three atoms")
    x1, x2, x3 = dist.locations
    if x2 - x1 != x3 - x2 or dist.mean() != 1:
        raise ValueError("need equidistant atoms and mean 1")
    if x2 > 1:
        return reflect_coupling(synthesize_triatomic_law(dist.reflect(1)))
    a, b = x2, x2 - x1
    case, T, c = triatomic_case(a, b)
    coupling = synthesize_triatomic(case, TriAtomicParams(T, c, dist.masses[1]))
    return coupling.normalized()


def reflect_coupling(coupling: PiecewiseCoupling) -> PiecewiseCoupling:
    """Coupling of ``(1 - X, 1 - Y)`` on U[0, 1] margins."""
    if coupling.x_margin != (0, 1) or coupling.y_margin != (0, 1):
        raise ValueError("reflection is defined for normalised couplings")
    target = coupling.target.reflect(1) if coupling.target is not None else None
    if coupling.mix is not None:
        return PiecewiseCoupling(coupling.x_margin, coupling.y_margin, (), CouplingMixture(
            coupling.mix.weight, reflect_coupling(coupling.mix.first),
            reflect_coupling(coupling.mix.second)), target)
    # X' = 1 - X, Y' = 1 - Y = 1 - i - s (1 - X') = (1 - i - s) + s X'
    segs = tuple(CouplingSegment(1 - s.x_hi, 1 - s.x_lo, s.slope, 1 - s.intercept - s.slope)
                 for s in coupling.segments)
    return PiecewiseCoupling(coupling.x_margin, coupling.y_margin, segs, None, target)


# --------------------------------------------------------------------------
# extremal laws for interval bounds


def extremal_sum_distribution(n: int, u: RationalLike, v: RationalLike) -> MixtureDistribution:
    """Law of ``E[U | A]`` for ``U ~ U[0, n]`` and ``A`` the partition
    ``{[0,u), [u,v), [v,n]}``: atoms ``u/2``, ``(u+v)/2``, ``(n+v)/2``
    with masses ``u/n``, ``(v-u)/n``, ``(n-v)/n``."""
    u, v = Q(u), Q(v)
    if n < 1:
        raise ValueError("n must be positive")
    if not 0 <= u <= v <= n:
        raise ValueError(f"need 0 <= u <= v <= n, got u = {u}, v = {v}, n = {n}")
    return MixtureDistribution.discrete([
        (u / 2, u / n),
        ((u + v) / 2, (v - u) / n),
        ((n + v) / 2, (n - v) / n),
    ])


# --------------------------------------------------------------------------
# verification


@dataclass
class CouplingReport:
    margin_x_ok: bool
    margin_y_ok: bool
    sum_law_ok: bool
    discrepancies: list[str]
    sum_law: Optional[MixtureDistribution] = None

    @property
    def ok(self) -> bool:
        return self.margin_x_ok and self.margin_y_ok and self.sum_law_ok and not self.discrepancies


def _partition_issues(intervals, lo, hi, label) -> list[str]:
    issues = []
    cursor = lo
    for a, b in sorted(intervals):
        if a < cursor:
            issues.append(f"{label}: [{a}, {b}) overlaps previous coverage up to {cursor}")
        elif a > cursor:
            issues.append(f"{label}: gap [{cursor}, {a}) is not covered")
        cursor = max(cursor, b)
    if cursor < hi:
        issues.append(f"{label}: gap [{cursor}, {hi}) is not covered")
    if cursor > hi:
        issues.append(f"{label}: coverage extends past {hi} to {cursor}")
    return issues


def _max_cdf_difference(f: MixtureDistribution, g: MixtureDistribution) -> tuple[Fraction, Fraction]:
    """Exact ``sup |F - G|`` over the real line with a point where it occurs."""
    best, where = Fraction(0), Fraction(0)
    for x in sorted(set(f.breakpoints()) | set(g.breakpoints())):
        for d in (abs(f.cdf(x) - g.cdf(x)), abs(f.cdf_left(x) - g.cdf_left(x))):
            if d > best:
                best, where = d, x
    return best, where


def _margin_issues(coupling: PiecewiseCoupling) -> tuple[list[str], list[str]]:
    """Partition problems of the X segments and of their Y images."""
    if coupling.mix is not None:
        x_issues, y_issues = [], []
        for label, comp in (("first", coupling.mix.first), ("second", coupling.mix.second)):
            cx, cy = _margin_issues(comp)
            x_issues += [f"{label} component: {d}" for d in cx]
            y_issues += [f"{label} component: {d}" for d in cy]
            if comp.x_margin != coupling.x_margin or comp.y_margin != coupling.y_margin:
                x_issues.append(f"{label} component margins differ from the mixture's")
        return x_issues, y_issues
    x_issues = _partition_issues([(s.x_lo, s.x_hi) for s in coupling.segments], *coupling.x_margin, "X")
    y_issues = _partition_issues([s.y_image() for s in coupling.segments], *coupling.y_margin, "Y")
    if coupling.x_margin[1] - coupling.x_margin[0] != coupling.y_margin[1] - coupling.y_margin[0]:
        y_issues.append("Y margin length differs from the X margin length")
    return x_issues, y_issues


def structural_issues(coupling: PiecewiseCoupling) -> list[str]:
    """Overlaps, gaps and frame mismatches; empty when both margins are exactly uniform."""
    x_issues, y_issues = _margin_issues(coupling)
    return x_issues + y_issues


def verify_coupling(coupling: PiecewiseCoupling, target: Optional[MixtureDistribution] = None) -> CouplingReport:
    """Exact check of both margins and of the sum law against ``target``.

    The X segments must partition the X margin and their Y images must
    partition the Y margin; with slope +-1 this makes Y exactly uniform.
    Overlaps and gaps are reported, never repaired.
    """
    if target is None:
        target = coupling.target
    if target is None:
        raise ValueError("no target given and the coupling declares none")
    x_issues, y_issues = _margin_issues(coupling)
    issues = x_issues + y_issues
    mx, my = not x_issues, not y_issues
    law = None
    sum_ok = False
    try:
        law = coupling.sum_law()
    except ValueError as exc:
        issues.append(f"sum law undefined: {exc}")
    if law is not None:
        sum_ok = law.equals_in_law(target)
        if not sum_ok:
            d, x = _max_cdf_difference(law, target)
            issues.append(f"sum law differs from target: |F - G| = {d} at {x}")
    return CouplingReport(mx, my, sum_ok, issues, law)


# --------------------------------------------------------------------------
# Monte Carlo


def sample(coupling: PiecewiseCoupling, N: int, rng: np.random.Generator):
    """Draw ``N`` pairs; returns float arrays ``(x, y, x + y)``.

    Sums on slope -1 pieces are set to the intercept itself so that atoms of
    the sum law are hit exactly in floating point.
    """
    if coupling.mix is not None:
        pick = rng.random(N) < float(coupling.mix.weight)
        n1 = int(pick.sum())
        x1, y1, s1 = sample(coupling.mix.first, n1, rng)
        x2, y2, s2 = sample(coupling.mix.second, N - n1, rng)
        x, y, s = (np.empty(N) for _ in range(3))
        x[pick], y[pick], s[pick] = x1, y1, s1
        x[~pick], y[~pick], s[~pick] = x2, y2, s2
        return x, y, s
    lo, hi = (float(v) for v in coupling.x_margin)
    x = lo + (hi - lo) * rng.random(N)
    starts = np.array([float(s.x_lo) for s in coupling.segments])
    idx = np.clip(np.searchsorted(starts, x, side="right") - 1, 0, len(starts) - 1)
    slope = np.array([s.slope for s in coupling.segments], dtype=float)[idx]
    icpt = np.array([float(s.intercept) for s in coupling.segments])[idx]
    y = icpt + slope * x
    s = np.where(slope < 0, icpt, icpt + 2 * x)
    return x, y, s


def cdf_values(dist: MixtureDistribution, x: np.ndarray, left: bool = False) -> np.ndarray:
    """Vectorised float CDF (``left`` gives ``P(X < x)``)."""
    out = np.zeros_like(x, dtype=float)
    for a in dist.atoms:
        loc = float(a.location)
        out += float(a.mass) * ((x > loc) if left else (x >= loc))
    for p in dist.pieces:
        lo, hi = float(p.lo), float(p.hi)
        out += float(p.weight) * np.clip((x - lo) / (hi - lo), 0.0, 1.0)
    return out


def ks_distance(samples: np.ndarray, target: MixtureDistribution) -> float:
    """``sup_x |F_N(x) - F(x)|`` for a target with atoms and uniform pieces.

    Between consecutive order statistics the empirical CDF is constant and
    the target CDF is monotone, so it is enough to compare right values at
    each sample and left limits just before it.
    """
    s = np.sort(samples)
    N = len(s)
    right = np.searchsorted(s, s, side="right") / N
    left_emp = np.searchsorted(s, s, side="left") / N
    d1 = np.abs(right - cdf_values(target, s))
    d2 = np.abs(left_emp - cdf_values(target, s, left=True))
    return float(max(d1.max(), d2.max()))


def dkw_epsilon(N: int, alpha: float = DKW_ALPHA) -> float:
    """Half-width of the DKW band at confidence ``1 - alpha``."""
    return math.sqrt(math.log(2 / alpha) / (2 * N))


@dataclass
class MonteCarloReport:
    N: int
    seed: int
    ks: float
    epsilon: float

    @property
    def ok(self) -> bool:
        return self.ks <= self.epsilon


def monte_carlo_check(coupling: PiecewiseCoupling, target: Optional[MixtureDistribution] = None,
                      N: int = 10**6, seed: int = 0) -> MonteCarloReport:
    target = target if target is not None else coupling.target
    if target is None:
        raise ValueError("no target given and the coupling declares none")
    rng = np.random.default_rng(seed)
    _, _, s = sample(coupling, N, rng)
    return MonteCarloReport(N, seed, ks_distance(s, target), dkw_epsilon(N))
