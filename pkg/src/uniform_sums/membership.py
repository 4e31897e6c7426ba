"""Deciders for membership in the set of laws of ``U_1 + ... + U_n``.

For ``n >= 3`` the set coincides with the laws dominated in convex order by
U[0, n], so membership is decided exactly by the stop-loss comparison. For
``n = 2`` only partial characterisations exist: exact rules for two-point
and equidistant three-point laws, and sufficient conditions for unimodal
step densities and for densities that dominate a uniform block around 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .decision import UNKNOWN, Decision, Rule, Verdict
from .distributions import (
    MixtureDistribution,
    Q,
    RationalLike,
    convex_order_vs_uniform,
    uniform_stop_loss,
)


class NotEquidistantError(ValueError):
    """Three atoms that do not form an arithmetic progression."""


class WrongMeanError(ValueError):
    """Input whose mean differs from the one the rule presupposes."""


class ShapeKind(str, enum.Enum):
    NONE = "none"
    UNIMODAL = "unimodal"
    MONOTONE = "monotone"
    UNIMODAL_SYMMETRIC = "unimodal-symmetric"


@dataclass(frozen=True)
class ShapeHint:
    """Declared shape of a step density, verified before it is trusted.

    ``mode`` is used with ``UNIMODAL``; ``direction`` ("increasing" or
    "decreasing") with ``MONOTONE``.
    """

    kind: ShapeKind = ShapeKind.NONE
    mode: Optional[Fraction] = None
    direction: Optional[str] = None

    def __post_init__(self):
        if self.kind is ShapeKind.UNIMODAL and self.mode is None:
            raise ValueError("a unimodal hint needs a mode")
        if self.kind is ShapeKind.MONOTONE and self.direction not in ("increasing", "decreasing"):
            raise ValueError("a monotone hint needs direction 'increasing' or 'decreasing'")
        if self.mode is not None:
            object.__setattr__(self, "mode", Q(self.mode))


NO_HINT = ShapeHint()


def _is_integer(x: Fraction) -> bool:
    return x.denominator == 1


def non_integrity(x: RationalLike) -> Fraction:
    """``min(ceil(x)/x - 1, 1 - floor(x)/x)``; zero exactly at integers."""
    x = Q(x)
    if x <= 0:
        raise ValueError("non-integrity is defined for x > 0")
    fl = x.numerator // x.denominator
    ce = fl if _is_integer(x) else fl + 1
    return min(Fraction(ce) / x - 1, 1 - Fraction(fl) / x)


# --------------------------------------------------------------------------
# n >= 3


def decide_n_ge_3(dist: MixtureDistribution, n: int) -> Decision:
    if n < 3:
        raise ValueError("decide_n_ge_3 needs n >= 3; use the n = 2 deciders")
    return convex_order_vs_uniform(dist, n).relabel(Rule.CX_CHARACTERIZATION_N_GE_3)


# --------------------------------------------------------------------------
# n = 2, atomic rules


def _mean_support_violation(dist: MixtureDistribution) -> Optional[Decision]:
    mu = dist.mean()
    if mu != 1:
        return Decision(Verdict.NON_MEMBER, Rule.SUPPORT_OR_MEAN_VIOLATION,
                        {"kind": "mean", "mean": mu, "required": Fraction(1)})
    lo, hi = dist.support_bounds()
    if lo < 0 or hi > 2:
        return Decision(Verdict.NON_MEMBER, Rule.SUPPORT_OR_MEAN_VIOLATION,
                        {"kind": "support", "support": [lo, hi],
                         "required": [Fraction(0), Fraction(2)]})
    return None


def decide_biatomic_n2(dist: MixtureDistribution) -> Decision:
    """Two atoms ``{a, a+b}``: member iff the mean is 1, the support lies in
    [0, 2] and ``1/b`` is a positive integer."""
    if dist.pieces or len(dist.atoms) != 2:
        raise ValueError("decide_biatomic_n2 needs exactly two atoms and no pieces")
    a, top = dist.locations
    b = top - a
    violation = _mean_support_violation(dist)
    if violation is not None:
        return Decision(Verdict.NON_MEMBER, Rule.BI_ATOMIC,
                        {"clause": violation.certificate["kind"], **violation.certificate})
    inv = 1 / b
    if _is_integer(inv):
        return Decision(Verdict.MEMBER, Rule.BI_ATOMIC, {"a": a, "b": b, "q": inv})
    return Decision(Verdict.NON_MEMBER, Rule.BI_ATOMIC,
                    {"clause": "inverse-spacing", "a": a, "b": b, "inverse_b": inv})


def triatomic_threshold(a: Fraction, b: Fraction) -> tuple[str, Optional[Fraction]]:
    """Case label and minimal middle mass for support ``{a-b, a, a+b}``.

    Assumes ``0 < b <= a <= 1`` and mean one. Returns ``(case, threshold)``
    where ``threshold`` is None when no law on that support is a member.
    """
    if a == 1:
        return "i", non_integrity(1 / (2 * b))
    half_inv = 1 / (2 * b)
    if _is_integer(half_inv):
        return "ii", Fraction(0)
    if _is_integer(half_inv - Fraction(1, 2)):
        return "iii", a + b - 1
    return "none", None


def decide_triatomic_equidistant_n2(dist: MixtureDistribution) -> Decision:
    """Three equally spaced atoms with mean one.

    Laws centred above 1 are reflected through 1 first. With spacing ``b``
    and centre ``a <= 1`` the law is a member iff

    * ``a = 1`` and the middle mass is at least ``non_integrity(1/(2b))``;
    * ``a < 1`` and ``1/(2b)`` is an integer;
    * ``a < 1``, ``1/b`` is an odd integer and the middle mass is at least
      ``a + b - 1``.
    """
    if dist.pieces or len(dist.atoms) != 3:
        raise ValueError("decide_triatomic_equidistant_n2 needs exactly three atoms and no pieces")
    x1, x2, x3 = dist.locations
    if x2 - x1 != x3 - x2:
        raise NotEquidistantError(f"atoms {x1}, {x2}, {x3} are not equally spaced")
    if dist.mean() != 1:
        raise WrongMeanError(f"tri-atomic rule needs mean 1, got {dist.mean()}")
    reflected = x2 > 1
    if reflected:
        dist = dist.reflect(1)
        x1, x2, x3 = dist.locations
    a, b = x2, x2 - x1
    f1, f2, f3 = dist.masses
    base = {"a": a, "b": b, "f2": f2, "reflected": reflected}
    if x1 < 0:
        return Decision(Verdict.NON_MEMBER, Rule.TRI_ATOMIC,
                        {**base, "case": "support", "support": [x1, x3]})
    case, threshold = triatomic_threshold(a, b)
    cert = {**base, "case": case, "threshold": threshold}
    if threshold is None:
        cert["inverse_b"] = 1 / b
        return Decision(Verdict.NON_MEMBER, Rule.TRI_ATOMIC, cert)
    verdict = Verdict.MEMBER if f2 >= threshold else Verdict.NON_MEMBER
    return Decision(verdict, Rule.TRI_ATOMIC, cert)


# --------------------------------------------------------------------------
# n = 2, continuous sufficient rules


def _hull_densities(dist: MixtureDistribution) -> list[tuple[Fraction, Fraction, Fraction]]:
    return dist.density_cells()


def _nondecreasing(seq) -> bool:
    return all(x <= y for x, y in zip(seq, seq[1:]))


def _nonincreasing(seq) -> bool:
    return all(x >= y for x, y in zip(seq, seq[1:]))


def _unimodal_sequence(seq) -> bool:
    i = 0
    while i + 1 < len(seq) and seq[i] <= seq[i + 1]:
        i += 1
    return _nonincreasing(seq[i:])


def verify_shape(dist: MixtureDistribution, hint: ShapeHint) -> Optional[Rule]:
    """Rule justified by the (verified) shape of the step density, if any.

    Without a hint the shape is read off the density itself.
    """
    cells = _hull_densities(dist)
    dens = [d for _, _, d in cells]
    if hint.kind is ShapeKind.NONE:
        # monotone densities are unimodal with a boundary mode
        if _unimodal_sequence(dens):
            return Rule.UNIMODAL_SUFFICIENT
        return None
    if hint.kind is ShapeKind.MONOTONE:
        ok = _nondecreasing(dens) if hint.direction == "increasing" else _nonincreasing(dens)
        return Rule.MONOTONE_SUFFICIENT if ok else None
    if hint.kind is ShapeKind.UNIMODAL:
        left = [d for lo, _, d in cells if lo < hint.mode]
        right = [d for _, hi, d in cells if hi > hint.mode]
        if _nondecreasing(left) and _nonincreasing(right):
            return Rule.UNIMODAL_SUFFICIENT
        return None
    # unimodal and symmetric about the mean
    mu = dist.mean()
    mirrored = [(2 * mu - hi, 2 * mu - lo, d) for lo, hi, d in reversed(cells)]
    if _unimodal_sequence(dens) and mirrored == cells:
        return Rule.UNIMODAL_SUFFICIENT
    return None


def decide_unimodal_n2(dist: MixtureDistribution, hint: ShapeHint = NO_HINT) -> Decision:
    """A unimodal density on [0, 2] with mean one is always a member.

    Mean and support are necessary for any member, so failing them gives
    NonMember. A shape that cannot be verified gives Unknown, never
    NonMember.
    """
    if dist.atoms:
        raise ValueError("decide_unimodal_n2 needs a law without atoms")
    violation = _mean_support_violation(dist)
    if violation is not None:
        return violation
    rule = verify_shape(dist, hint)
    if rule is None:
        return UNKNOWN
    peak = max(_hull_densities(dist), key=lambda c: c[2])
    return Decision(Verdict.MEMBER, rule, {"hint": hint.kind.value, "peak_cell": [peak[0], peak[1]]})


def _min_density_on(dist: MixtureDistribution, lo: Fraction, hi: Fraction) -> Fraction:
    """Essential infimum of the step density on the open interval (lo, hi)."""
    cells = _hull_densities(dist)
    if not cells or lo < cells[0][0] or hi > cells[-1][1]:
        return Fraction(0)
    return min(d for c_lo, c_hi, d in cells if c_lo < hi and c_hi > lo)


def decide_density_dominance_n2(dist: MixtureDistribution) -> Decision:
    """Search for ``h > 0`` with density ``> 3b/(4h)`` on ``[1-h, 1+h]``.

    ``b`` is the length of the support hull. The essential minimum of the
    density over ``[1-h, 1+h]`` only changes when ``1 +- h`` crosses a
    breakpoint, while ``3b/(4h)`` decreases in ``h``, so it suffices to test
    ``h`` equal to each breakpoint distance from 1.
    """
    if dist.atoms:
        raise ValueError("decide_density_dominance_n2 needs a law without atoms")
    mu = dist.mean()
    if mu != 1:
        return Decision(Verdict.NON_MEMBER, Rule.SUPPORT_OR_MEAN_VIOLATION,
                        {"kind": "mean", "mean": mu, "required": Fraction(1)})
    lo, hi = dist.support_bounds()
    length = hi - lo
    one = Fraction(1)
    for h in sorted({abs(x - one) for x in dist.breakpoints() if x != one}):
        dmin = _min_density_on(dist, one - h, one + h)
        bound = 3 * length / (4 * h)
        if dmin > bound:
            return Decision(Verdict.MEMBER, Rule.DENSITY_DOMINANCE,
                            {"h": h, "min_density": dmin, "threshold": bound, "support_length": length})
    return UNKNOWN


# --------------------------------------------------------------------------
# dispatcher


def decide(dist: MixtureDistribution, n: int, hint: ShapeHint = NO_HINT) -> Decision:
    """Decide whether ``dist`` is the law of a sum of ``n`` U[0,1] variables."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if n >= 3:
        return decide_n_ge_3(dist, n)
    if dist.atoms == MixtureDistribution.point_mass(1).atoms and not dist.pieces:
        # X + (1 - X) = 1
        return Decision(Verdict.MEMBER, Rule.POINT_MASS, {"location": Fraction(1)})
    violation = _mean_support_violation(dist)
    if violation is not None:
        return violation
    cx = convex_order_vs_uniform(dist, 2)
    if not cx.is_member:
        return Decision(Verdict.NON_MEMBER, Rule.CX_VIOLATION, cx.certificate)
    if dist.is_discrete:
        if len(dist.atoms) == 2:
            return decide_biatomic_n2(dist)
        if len(dist.atoms) == 3:
            try:
                return decide_triatomic_equidistant_n2(dist)
            except NotEquidistantError:
                return UNKNOWN
        return UNKNOWN
    if dist.is_continuous:
        decision = decide_unimodal_n2(dist, hint)
        if decision.verdict is not Verdict.UNKNOWN:
            return decision
        return decide_density_dominance_n2(dist)
    return UNKNOWN


def scaling_closure_check(dist: MixtureDistribution, n: int, a: RationalLike) -> Decision:
    """Decide the law of ``a * S`` where ``dist`` is the law of a sum of ``n``
    U[-1, 1] variables (centred frame).

    The sum is mapped to the U[0, 1] frame by ``S -> (S + n) / 2`` before
    deciding.
    """
    a = Q(a)
    if not 0 <= a <= 1:
        raise ValueError("the scaling factor must lie in [0, 1]")
    if n < 3:
        raise ValueError("scaling closure is only guaranteed for n >= 3")
    if a == 0:
        scaled = MixtureDistribution.point_mass(Fraction(n, 2) + dist.mean() / 2)
    else:
        scaled = dist.scale_shift(a / 2, Fraction(n, 2))
    return decide(scaled, n)


def to_centered_frame(dist: MixtureDistribution, n: int) -> MixtureDistribution:
    """Map a law of sums of U[0,1] variables to the U[-1,1] frame: ``S -> 2S - n``."""
    return dist.scale_shift(2, -n)


# --------------------------------------------------------------------------
# independent certificate checks


def _stop_loss_direct(dist: MixtureDistribution, k: Fraction) -> Fraction:
    """``E[(X-k)_+]`` via ``E[X] - k + E[(k-X)_+]`` (put-call parity)."""
    put = Fraction(0)
    for a in dist.atoms:
        if a.location < k:
            put += a.mass * (k - a.location)
    for p in dist.pieces:
        if k >= p.hi:
            put += p.weight * (k - (p.lo + p.hi) / 2)
        elif k > p.lo:
            put += p.density * (k - p.lo) ** 2 / 2
    return dist.mean() - k + put


def recheck(decision: Decision, dist: MixtureDistribution, n: int) -> bool:
    """Re-verify a certificate from scratch, without calling the deciders.

    Unknown verdicts and Member verdicts from sufficient shape rules carry
    nothing to re-check and return True.
    """
    cert = decision.certificate
    v, rule = decision.verdict, decision.rule
    if v is Verdict.NON_MEMBER:
        kind = cert.get("kind") or cert.get("clause")
        if kind == "mean":
            return dist.mean() != Fraction(n, 2)
        if kind == "support":
            lo, hi = dist.support_bounds()
            return lo < 0 or hi > n
        if "k" in cert and "gap" in cert:
            k = cert["k"]
            gap = _stop_loss_direct(dist, k) - uniform_stop_loss(n, k)
            return gap == cert["gap"] and gap > 0
        if rule is Rule.BI_ATOMIC and kind == "inverse-spacing":
            if dist.pieces or len(dist.atoms) != 2:
                return False
            a, top = dist.locations
            return not _is_integer(1 / (top - a)) and dist.mean() == 1
        if rule is Rule.TRI_ATOMIC:
            return _recheck_triatomic(cert, dist, expect_member=False)
        return False
    if v is Verdict.MEMBER:
        if rule is Rule.DENSITY_DOMINANCE:
            h = cert["h"]
            lo, hi = dist.support_bounds()
            return (dist.mean() == 1 and h > 0
                    and _min_density_on(dist, 1 - h, 1 + h) > 3 * (hi - lo) / (4 * h))
        if rule is Rule.BI_ATOMIC:
            if dist.pieces or len(dist.atoms) != 2:
                return False
            a, top = dist.locations
            return dist.mean() == 1 and _is_integer(1 / (top - a)) and a >= 0 and top <= 2
        if rule is Rule.TRI_ATOMIC:
            return _recheck_triatomic(cert, dist, expect_member=True)
        if rule in (Rule.CX_CHARACTERIZATION_N_GE_3, Rule.CX_ORDER):
            return cert["max_gap"] <= 0 and dist.mean() == Fraction(n, 2)
    return True


def _recheck_triatomic(cert, dist, expect_member: bool) -> bool:
    if dist.pieces or len(dist.atoms) != 3 or dist.mean() != 1:
        return False
    if cert.get("reflected"):
        dist = dist.reflect(1)
    x1, x2, x3 = dist.locations
    a, b = x2, x2 - x1
    f2 = dist.masses[1]
    if cert["case"] == "support":
        return x1 < 0 and not expect_member
    if a == 1:
        ok = f2 >= non_integrity(1 / (2 * b))
    elif _is_integer(1 / (2 * b)):
        ok = True
    elif _is_integer(1 / b) and (1 / b).numerator % 2 == 1:
        ok = f2 >= a + b - 1
    else:
        ok = False
    return ok == expect_member
