"""Exact mixtures of point masses and uniform pieces.

Every distribution handled by the package is a finite mixture

    sum_i  m_i * delta_{x_i}  +  sum_j  w_j * U[lo_j, hi_j]

with rational parameters. All arithmetic is done with ``fractions.Fraction``
so that moment, stop-loss and convex-order computations are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .decision import Decision, Rule, Verdict

RationalLike = Union[int, str, Fraction]


def parse_rational(value: RationalLike) -> Fraction:
    """Parse ``int``, ``Fraction`` or a ``"p/q"`` / ``"p"`` string exactly.

    Floats are rejected on purpose: a binary float is almost never the
    rational the caller had in mind.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise TypeError(f"cannot interpret {type(value).__name__} as an exact rational")


Q = parse_rational


@dataclass(frozen=True, order=True)
class Atom:
    location: Fraction
    mass: Fraction

    def __post_init__(self):
        object.__setattr__(self, "location", Q(self.location))
        object.__setattr__(self, "mass", Q(self.mass))
        if self.mass <= 0:
            raise ValueError(f"atom mass must be positive, got {self.mass}")


@dataclass(frozen=True, order=True)
class UniformPiece:
    lo: Fraction
    hi: Fraction
    weight: Fraction

    def __post_init__(self):
        for name in ("lo", "hi", "weight"):
            object.__setattr__(self, name, Q(getattr(self, name)))
        if not self.lo < self.hi:
            raise ValueError(f"piece needs lo < hi, got [{self.lo}, {self.hi}]")
        if self.weight <= 0:
            raise ValueError(f"piece weight must be positive, got {self.weight}")

    @property
    def density(self) -> Fraction:
        return self.weight / (self.hi - self.lo)


@dataclass(frozen=True)
class StopLossValue:
    k: Fraction
    value: Fraction


class MixtureDistribution:
    """Finite mixture of atoms and uniform pieces with total mass one.

    Atoms at equal locations are merged and sorted; pieces are sorted by
    ``lo`` but may overlap (densities add).
    """

    __slots__ = ("atoms", "pieces")

    def __init__(self, atoms: Iterable[Atom] = (), pieces: Iterable[UniformPiece] = ()):
        merged: dict[Fraction, Fraction] = {}
        for atom in atoms:
            merged[atom.location] = merged.get(atom.location, Fraction(0)) + atom.mass
        atoms_t = tuple(Atom(x, m) for x, m in sorted(merged.items()))
        pieces_t = tuple(sorted(pieces))
        total = sum((a.mass for a in atoms_t), Fraction(0)) + sum(
            (p.weight for p in pieces_t), Fraction(0)
        )
        if total != 1:
            raise ValueError(f"total mass must be exactly 1, got {total}")
        object.__setattr__(self, "atoms", atoms_t)
        object.__setattr__(self, "pieces", pieces_t)

    def __setattr__(self, name, value):
        raise AttributeError("MixtureDistribution is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def point_mass(cls, x: RationalLike) -> "MixtureDistribution":
        return cls([Atom(Q(x), Fraction(1))])

    @classmethod
    def uniform(cls, lo: RationalLike, hi: RationalLike) -> "MixtureDistribution":
        return cls(pieces=[UniformPiece(Q(lo), Q(hi), Fraction(1))])

    @classmethod
    def discrete(cls, pairs: Iterable[tuple[RationalLike, RationalLike]]) -> "MixtureDistribution":
        """Atoms from ``(location, mass)`` pairs; zero masses are dropped."""
        return cls([Atom(Q(x), Q(m)) for x, m in pairs if Q(m) != 0])

    @classmethod
    def step_density(
        cls, cells: Iterable[tuple[RationalLike, RationalLike, RationalLike]]
    ) -> "MixtureDistribution":
        """Pieces from ``(lo, hi, weight)`` triples; zero weights are dropped."""
        return cls(pieces=[UniformPiece(Q(lo), Q(hi), Q(w)) for lo, hi, w in cells if Q(w) != 0])

    # -- basic structure ----------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, MixtureDistribution):
            return NotImplemented
        return self.atoms == other.atoms and self.pieces == other.pieces

    def __hash__(self):
        return hash((self.atoms, self.pieces))

    def __repr__(self):
        parts = [f"{a.mass}*δ({a.location})" for a in self.atoms]
        parts += [f"{p.weight}*U[{p.lo},{p.hi}]" for p in self.pieces]
        return "MixtureDistribution(" + " + ".join(parts) + ")"

    @property
    def is_discrete(self) -> bool:
        return not self.pieces

    @property
    def is_continuous(self) -> bool:
        return not self.atoms

    @property
    def locations(self) -> tuple[Fraction, ...]:
        return tuple(a.location for a in self.atoms)

    @property
    def masses(self) -> tuple[Fraction, ...]:
        return tuple(a.mass for a in self.atoms)

    def support_bounds(self) -> tuple[Fraction, Fraction]:
        lows = [a.location for a in self.atoms] + [p.lo for p in self.pieces]
        highs = [a.location for a in self.atoms] + [p.hi for p in self.pieces]
        return min(lows), max(highs)

    def support_within(self, lo: RationalLike, hi: RationalLike) -> bool:
        """Closed-interval support containment."""
        s_lo, s_hi = self.support_bounds()
        return Q(lo) <= s_lo and s_hi <= Q(hi)

    def breakpoints(self) -> list[Fraction]:
        pts = {a.location for a in self.atoms}
        for p in self.pieces:
            pts.add(p.lo)
            pts.add(p.hi)
        return sorted(pts)

    def density_cells(self) -> list[tuple[Fraction, Fraction, Fraction]]:
        """Partition of the hull of the pieces into ``(lo, hi, density)`` cells.

        Overlapping pieces add up; cells inside gaps carry density zero.
        """
        if not self.pieces:
            return []
        pts = sorted({p.lo for p in self.pieces} | {p.hi for p in self.pieces})
        cells = []
        for lo, hi in zip(pts, pts[1:]):
            d = sum((p.density for p in self.pieces if p.lo <= lo and hi <= p.hi), Fraction(0))
            cells.append((lo, hi, d))
        return cells

    # -- moments and transforms ---------------------------------------------

    def mean(self) -> Fraction:
        return sum((a.location * a.mass for a in self.atoms), Fraction(0)) + sum(
            (p.weight * (p.lo + p.hi) / 2 for p in self.pieces), Fraction(0)
        )

    def second_moment(self) -> Fraction:
        return sum((a.location**2 * a.mass for a in self.atoms), Fraction(0)) + sum(
            (p.weight * (p.lo**2 + p.lo * p.hi + p.hi**2) / 3 for p in self.pieces), Fraction(0)
        )

    def stop_loss(self, k: RationalLike) -> StopLossValue:
        """``E[(X - k)_+]`` computed exactly."""
        k = Q(k)
        total = Fraction(0)
        for a in self.atoms:
            if a.location > k:
                total += a.mass * (a.location - k)
        for p in self.pieces:
            if k <= p.lo:
                total += p.weight * ((p.lo + p.hi) / 2 - k)
            elif k < p.hi:
                total += p.density * (p.hi - k) ** 2 / 2
        return StopLossValue(k, total)

    def cdf(self, x: RationalLike) -> Fraction:
        """Right-continuous ``P(X <= x)``."""
        x = Q(x)
        total = sum((a.mass for a in self.atoms if a.location <= x), Fraction(0))
        for p in self.pieces:
            if x >= p.hi:
                total += p.weight
            elif x > p.lo:
                total += p.density * (x - p.lo)
        return total

    def cdf_left(self, x: RationalLike) -> Fraction:
        """``P(X < x)``."""
        x = Q(x)
        return self.cdf(x) - sum((a.mass for a in self.atoms if a.location == x), Fraction(0))

    def prob_open(self, lo: RationalLike, hi: RationalLike) -> Fraction:
        """``P(lo < X < hi)``."""
        lo, hi = Q(lo), Q(hi)
        if hi <= lo:
            return Fraction(0)
        return self.cdf_left(hi) - self.cdf(lo)

    def prob_closed(self, lo: RationalLike, hi: RationalLike) -> Fraction:
        """``P(lo <= X <= hi)``."""
        lo, hi = Q(lo), Q(hi)
        if hi < lo:
            return Fraction(0)
        return self.cdf(hi) - self.cdf_left(lo)

    def quantile(self, t: RationalLike) -> Fraction:
        """Left-continuous inverse ``inf{x : F(x) >= t}`` for ``t`` in (0, 1]."""
        t = Q(t)
        if not (0 < t <= 1):
            raise ValueError(f"quantile level must lie in (0, 1], got {t}")
        pts = self.breakpoints()
        prev_x, prev_f = None, Fraction(0)
        for x in pts:
            f_right = self.cdf(x)
            if f_right >= t:
                if prev_x is None:
                    return x
                f_left = self.cdf_left(x)
                if f_left >= t:
                    # t is reached inside (prev_x, x) on the continuous part
                    slope = (f_left - prev_f) / (x - prev_x)
                    return prev_x + (t - prev_f) / slope
                return x
            prev_x, prev_f = x, f_right
        raise AssertionError("cdf never reached level t; total mass is not 1")

    def scale_shift(self, scale: RationalLike, shift: RationalLike) -> "MixtureDistribution":
        """Law of ``scale * X + shift``; a negative scale reflects."""
        scale, shift = Q(scale), Q(shift)
        if scale == 0:
            raise ValueError("scale must be non-zero")
        atoms = [Atom(scale * a.location + shift, a.mass) for a in self.atoms]
        pieces = []
        for p in self.pieces:
            lo, hi = scale * p.lo + shift, scale * p.hi + shift
            pieces.append(UniformPiece(min(lo, hi), max(lo, hi), p.weight))
        return MixtureDistribution(atoms, pieces)

    def reflect(self, center: RationalLike) -> "MixtureDistribution":
        """Law of ``2 * center - X``."""
        return self.scale_shift(-1, 2 * Q(center))

    def equals_in_law(self, other: "MixtureDistribution") -> bool:
        """Equality as measures, insensitive to how pieces are split."""
        if self.atoms != other.atoms:
            return False
        return _canonical_cells(self) == _canonical_cells(other)


def _canonical_cells(dist: MixtureDistribution):
    cells = [c for c in dist.density_cells() if c[2] != 0]
    merged: list[list[Fraction]] = []
    for lo, hi, d in cells:
        if merged and merged[-1][1] == lo and merged[-1][2] == d:
            merged[-1][1] = hi
        else:
            merged.append([lo, hi, d])
    return [tuple(c) for c in merged]


def mixture(
    components: Sequence[MixtureDistribution], weights: Sequence[RationalLike]
) -> MixtureDistribution:
    """Convex combination ``sum_i w_i F_i``; weights must sum to one."""
    weights = [Q(w) for w in weights]
    if len(weights) != len(components):
        raise ValueError("one weight per component is required")
    if any(w < 0 for w in weights) or sum(weights) != 1:
        raise ValueError("weights must be non-negative and sum to 1")
    atoms, pieces = [], []
    for w, comp in zip(weights, components):
        if w == 0:
            continue
        atoms += [Atom(a.location, w * a.mass) for a in comp.atoms]
        pieces += [UniformPiece(p.lo, p.hi, w * p.weight) for p in comp.pieces]
    return MixtureDistribution(atoms, pieces)


def uniform_stop_loss(n: int, k: Fraction) -> Fraction:
    """Stop-loss transform of U[0, n] at ``k`` in [0, n]."""
    return (n - k) ** 2 / (2 * n)


def cx_gap(dist: MixtureDistribution, n: int, k: RationalLike) -> Fraction:
    """``E[(X-k)_+] - E[(U-k)_+]`` with ``U ~ U[0, n]``, for ``k`` in [0, n]."""
    k = Q(k)
    return dist.stop_loss(k).value - uniform_stop_loss(n, k)


def _quadratic_vertex(p: Fraction, q: Fraction, gp, gm, gq):
    """Vertex of the quadratic through (p, gp), ((p+q)/2, gm), (q, gq)."""
    h = (q - p) / 2
    a2 = (gp - 2 * gm + gq) / (2 * h * h)
    if a2 == 0:
        return None
    a1 = (gq - gp) / (2 * h)  # derivative at the midpoint
    mid = (p + q) / 2
    vertex = mid - a1 / (2 * a2)
    if p < vertex < q:
        return vertex
    return None


def max_cx_gap(dist: MixtureDistribution, n: int) -> tuple[Fraction, Fraction]:
    """Exact ``max_{k in [0,n]}`` of :func:`cx_gap` and a maximiser.

    The gap is quadratic between consecutive breakpoints, so the maximum is
    attained at a breakpoint or at the vertex of one of those quadratics.
    """
    pts = {Fraction(0), Fraction(n)}
    pts.update(x for x in dist.breakpoints() if 0 <= x <= n)
    pts = sorted(pts)
    best_k, best = pts[0], cx_gap(dist, n, pts[0])
    values = {pts[0]: best}
    for x in pts[1:]:
        values[x] = cx_gap(dist, n, x)
    for p, q in zip(pts, pts[1:]):
        mid = (p + q) / 2
        gm = cx_gap(dist, n, mid)
        candidates = [(q, values[q]), (mid, gm)]
        v = _quadratic_vertex(p, q, values[p], gm, values[q])
        if v is not None:
            candidates.append((v, cx_gap(dist, n, v)))
        for k, g in candidates:
            if g > best:
                best_k, best = k, g
    return best_k, best


def convex_order_vs_uniform(dist: MixtureDistribution, n: int) -> Decision:
    """Decide ``dist <=_cx U[0, n]`` exactly.

    Never returns Unknown. NonMember certificates carry either the failing
    mean/support fact or a threshold ``k`` with a positive stop-loss gap.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    target_mean = Fraction(n, 2)
    mu = dist.mean()
    lo, hi = dist.support_bounds()
    if mu != target_mean:
        return Decision(
            Verdict.NON_MEMBER,
            Rule.SUPPORT_OR_MEAN_VIOLATION,
            {"kind": "mean", "mean": mu, "required": target_mean},
        )
    if lo < 0 or hi > n:
        return Decision(
            Verdict.NON_MEMBER,
            Rule.SUPPORT_OR_MEAN_VIOLATION,
            {"kind": "support", "support": [lo, hi], "required": [Fraction(0), Fraction(n)]},
        )
    k, gap = max_cx_gap(dist, n)
    if gap > 0:
        return Decision(Verdict.NON_MEMBER, Rule.CX_VIOLATION, {"k": k, "gap": gap})
    return Decision(Verdict.MEMBER, Rule.CX_ORDER, {"max_gap": gap, "argmax_k": k})
