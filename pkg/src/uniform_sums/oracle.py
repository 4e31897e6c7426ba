"""Discretised membership oracle.

Each U[0,1] margin is replaced by the discrete uniform law on the cell
midpoints ``(j + 1/2) / m``, j = 0..m-1. A joint law of ``n`` such margins
is a non-negative array with every one-dimensional margin equal to ``1/m``.
The sum of the ``n`` coordinates takes the values ``(s + n/2) / m`` where
``s`` is the sum of the cell indices; a *grid target* prescribes the mass of
every index sum ``s``.

Feasibility of a target is decided exactly with :class:`ExactLP`. The
answer concerns the discrete problem only. It is evidence about the
continuous problem when the target's atoms sit on the sum grid and the
parameters are compatible with the grid scale.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .distributions import MixtureDistribution, Q, RationalLike
from .exact_lp import ExactLP, check_farkas, check_optimal, check_primal

DEFAULT_MAX_M3 = 24


@dataclass(frozen=True)
class GridSpec:
    m: int
    n: int
    allow_large: bool = False

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("m must be at least 2")
        if self.n not in (2, 3):
            raise ValueError("the grid oracle supports n in {2, 3}")
        if self.n == 3 and self.m > DEFAULT_MAX_M3 and not self.allow_large:
            raise ValueError(
                f"n = 3 grids are capped at m <= {DEFAULT_MAX_M3}; pass allow_large=True to override"
            )

    @property
    def max_index(self) -> int:
        return self.n * (self.m - 1)

    def value(self, s: int) -> Fraction:
        """Sum value represented by index sum ``s``."""
        return Fraction(2 * s + self.n, 2 * self.m)

    def index_of(self, x: RationalLike) -> Optional[int]:
        """Index sum whose value is exactly ``x``, or None if ``x`` is off-grid."""
        t = self.m * Q(x) - Fraction(self.n, 2)
        if t.denominator == 1 and 0 <= t <= self.max_index:
            return int(t)
        return None

    def cells(self):
        return itertools.product(range(self.m), repeat=self.n)

    def cell_count(self) -> int:
        return self.m**self.n


@dataclass(frozen=True)
class GridTarget:
    masses: tuple[Fraction, ...]

    def __post_init__(self):
        masses = tuple(Q(v) for v in self.masses)
        object.__setattr__(self, "masses", masses)
        if any(v < 0 for v in masses):
            raise ValueError("target masses must be non-negative")
        if sum(masses) != 1:
            raise ValueError("target masses must sum to 1")

    def mean_index(self) -> Fraction:
        return sum((s * v for s, v in enumerate(self.masses)), Fraction(0))

    def check_spec(self, spec: GridSpec) -> None:
        if len(self.masses) != spec.max_index + 1:
            raise ValueError(
                f"target has {len(self.masses)} entries, grid with n={spec.n}, m={spec.m} "
                f"needs {spec.max_index + 1}"
            )


@dataclass
class GridJoint:
    """Joint cell masses keyed by index tuple (row-major when listed)."""

    spec: GridSpec
    entries: dict[tuple[int, ...], Fraction]

    def to_nested(self) -> list:
        def build(prefix):
            if len(prefix) == self.spec.n:
                return self.entries.get(tuple(prefix), Fraction(0))
            return [build(prefix + [i]) for i in range(self.spec.m)]

        return build([])


@dataclass
class FeasibilityResult:
    feasible: bool
    witness: Optional[GridJoint] = None
    certificate: Optional[dict] = None

    @property
    def verdict(self) -> str:
        return "Feasible" if self.feasible else "Infeasible"


def _constraint_columns(spec: GridSpec, with_sums: bool):
    """Columns of the constraint matrix, one per cell, in row-major cell order.

    Rows ``d*m + i`` hold margin ``d`` at cell ``i``; when ``with_sums`` is
    set, row ``n*m + s`` holds index sum ``s``.
    """
    n, m = spec.n, spec.m
    cols = []
    for cell in spec.cells():
        col = [(d * m + i, 1) for d, i in enumerate(cell)]
        if with_sums:
            col.append((n * m + sum(cell), 1))
        cols.append(col)
    return cols


def discretize(dist: MixtureDistribution, n: int, m: int) -> GridTarget:
    """Bin a law on [0, n] onto the sum grid of ``GridSpec(m, n)``.

    Mass at a grid value stays there; other mass inside the grid hull is
    split between the two neighbouring grid values so that its mean is kept
    (linear interpolation weights). Mass outside the hull
    ``[n/(2m), n - n/(2m)]`` is moved to the nearest end cell; the mean is
    then preserved only when that outside mass is placed symmetrically.
    """
    if not dist.support_within(0, n):
        raise ValueError(f"support {dist.support_bounds()} is not inside [0, {n}]")
    K = n * (m - 1)
    masses = [Fraction(0)] * (K + 1)
    lo_v = Fraction(n, 2 * m)
    hi_v = lo_v + Fraction(K, m)

    def to_t(x):  # grid coordinate: t = s at value v_s
        return m * x - Fraction(n, 2)

    for atom in dist.atoms:
        x = atom.location
        if x <= lo_v:
            masses[0] += atom.mass
        elif x >= hi_v:
            masses[K] += atom.mass
        else:
            t = to_t(x)
            s = t.numerator // t.denominator
            frac = t - s
            masses[s] += atom.mass * (1 - frac)
            if frac:
                masses[s + 1] += atom.mass * frac
    for piece in dist.pieces:
        d = piece.density
        if piece.lo < lo_v:
            masses[0] += d * (min(piece.hi, lo_v) - piece.lo)
        if piece.hi > hi_v:
            masses[K] += d * (piece.hi - max(piece.lo, hi_v))
        a, b = max(piece.lo, lo_v), min(piece.hi, hi_v)
        if a >= b:
            continue
        ta, tb = to_t(a), to_t(b)
        s0 = ta.numerator // ta.denominator
        s = s0
        while s < tb and s < K:
            p, q = max(ta, Fraction(s)) - s, min(tb, Fraction(s + 1)) - s
            if q > p:
                # mass d/m spread over local coordinate [p, q] with hat weights
                right = (q * q - p * p) / 2
                masses[s] += d / m * ((q - p) - right)
                masses[s + 1] += d / m * right
            s += 1
    return GridTarget(tuple(masses))


def target_from_atoms(dist: MixtureDistribution, spec: GridSpec) -> GridTarget:
    """Grid target of a discrete law whose atoms all sit on grid values."""
    masses = [Fraction(0)] * (spec.max_index + 1)
    if dist.pieces:
        raise ValueError("target_from_atoms needs a purely atomic law")
    for atom in dist.atoms:
        s = spec.index_of(atom.location)
        if s is None:
            raise ValueError(f"atom {atom.location} is not on the n={spec.n}, m={spec.m} grid")
        masses[s] += atom.mass
    return GridTarget(tuple(masses))


def grid_compatible(dist: MixtureDistribution, spec: GridSpec) -> bool:
    return dist.is_discrete and all(spec.index_of(x) is not None for x in dist.locations)


def refine_target(target: GridTarget, spec: GridSpec) -> tuple[GridTarget, GridSpec]:
    """Same atoms expressed on the grid with ``2m`` cells (n even only)."""
    if spec.n % 2:
        raise ValueError("grid values survive halving of the cells only for even n")
    fine = GridSpec(2 * spec.m, spec.n, spec.allow_large)
    masses = [Fraction(0)] * (fine.max_index + 1)
    for s, v in enumerate(target.masses):
        masses[2 * s + spec.n // 2] += v
    return GridTarget(tuple(masses)), fine


def verify_witness(joint: GridJoint, target: GridTarget) -> bool:
    """Check margins and index-sum masses by direct summation."""
    spec = joint.spec
    margins = [[Fraction(0)] * spec.m for _ in range(spec.n)]
    sums = [Fraction(0)] * (spec.max_index + 1)
    for cell, v in joint.entries.items():
        if v < 0:
            return False
        for d, i in enumerate(cell):
            margins[d][i] += v
        sums[sum(cell)] += v
    unit = Fraction(1, spec.m)
    if any(v != unit for row in margins for v in row):
        return False
    return tuple(sums) == target.masses


def verify_certificate(certificate: dict, target: GridTarget, spec: GridSpec) -> bool:
    """Check a Farkas certificate by direct evaluation.

    ``certificate`` holds ``margins`` (n lists of m rationals) and ``sums``
    (one rational per index sum). It proves infeasibility when every cell
    has a non-negative coefficient and the right-hand side pairs negatively.
    """
    ym = certificate["margins"]
    ys = certificate["sums"]
    for cell in spec.cells():
        if sum((ym[d][i] for d, i in enumerate(cell)), Fraction(0)) + ys[sum(cell)] < 0:
            return False
    rhs = Fraction(1, spec.m) * sum((v for row in ym for v in row), Fraction(0))
    rhs += sum((t * y for t, y in zip(target.masses, ys)), Fraction(0))
    return rhs < 0


def feasible(target: GridTarget, spec: GridSpec) -> FeasibilityResult:
    """Decide whether some joint with uniform grid margins has the target sum law."""
    target.check_spec(spec)
    n, m = spec.n, spec.m
    columns = _constraint_columns(spec, with_sums=True)
    b = [Fraction(1, m)] * (n * m) + list(target.masses)
    result = ExactLP(columns, b).solve()
    if result.status == "optimal":
        assert check_primal(columns, b, result.x)
        cells = list(spec.cells())
        joint = GridJoint(spec, {cells[j]: v for j, v in enumerate(result.x) if v})
        if not verify_witness(joint, target):
            raise AssertionError("solver witness failed independent verification")
        return FeasibilityResult(True, witness=joint)
    y = result.farkas
    assert check_farkas(columns, b, y)
    cert = {
        "margins": [y[d * m:(d + 1) * m] for d in range(n)],
        "sums": y[n * m:],
    }
    if not verify_certificate(cert, target, spec):
        raise AssertionError("Farkas certificate failed independent verification")
    return FeasibilityResult(False, certificate=cert)


@dataclass
class ExtremeResult:
    value: Fraction
    joint: GridJoint
    duals: list[Fraction]


def grid_extreme(spec: GridSpec, lo_cell: int, hi_cell: int, sense: str) -> ExtremeResult:
    """Exact min or max of ``P(lo_cell <= index sum <= hi_cell)`` over all joints."""
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")
    if not 0 <= lo_cell <= hi_cell <= spec.max_index:
        raise ValueError(f"need 0 <= lo_cell <= hi_cell <= {spec.max_index}")
    columns = _constraint_columns(spec, with_sums=False)
    b = [Fraction(1, spec.m)] * (spec.n * spec.m)
    cells = list(spec.cells())
    sgn = 1 if sense == "min" else -1
    cost = [sgn if lo_cell <= sum(c) <= hi_cell else 0 for c in cells]
    result = ExactLP(columns, b).solve(cost)
    if result.status != "optimal":
        raise AssertionError(f"margin polytope LP returned {result.status}")
    if not check_optimal(columns, b, cost, result.x, result.duals):
        raise AssertionError("optimality certificate failed independent verification")
    joint = GridJoint(spec, {cells[j]: v for j, v in enumerate(result.x) if v})
    return ExtremeResult(sgn * result.objective, joint, result.duals)


def grid_extreme_prob(spec: GridSpec, lo_cell: int, hi_cell: int, sense: str) -> Fraction:
    return grid_extreme(spec, lo_cell, hi_cell, sense).value


def cells_in_interval(spec: GridSpec, lo: RationalLike, hi: RationalLike, closed: bool) -> Optional[tuple[int, int]]:
    """Index-sum range whose grid values lie in ``[lo, hi]`` (closed) or ``(lo, hi)``."""
    lo, hi = Q(lo), Q(hi)
    idx = [
        s for s in range(spec.max_index + 1)
        if (lo <= spec.value(s) <= hi if closed else lo < spec.value(s) < hi)
    ]
    if not idx:
        return None
    return idx[0], idx[-1]
