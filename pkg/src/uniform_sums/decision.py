"""Verdicts returned by the membership deciders."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


class Verdict(str, enum.Enum):
    MEMBER = "Member"
    NON_MEMBER = "NonMember"
    UNKNOWN = "Unknown"


class Rule(str, enum.Enum):
    CX_CHARACTERIZATION_N_GE_3 = "CxCharacterization_nGe3"
    BI_ATOMIC = "BiAtomicRule"
    TRI_ATOMIC = "TriAtomicRule"
    UNIMODAL_SUFFICIENT = "UnimodalSufficient"
    MONOTONE_SUFFICIENT = "MonotoneSufficient"
    DENSITY_DOMINANCE = "DensityDominance"
    SUPPORT_OR_MEAN_VIOLATION = "SupportOrMeanViolation"
    CX_VIOLATION = "CxViolation"
    CX_ORDER = "CxOrder"
    POINT_MASS = "PointMass"
    NO_RULE_APPLIES = "NoRuleApplies"


def _encode(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {k: _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if isinstance(value, enum.Enum):
        return value.value
    return value


@dataclass(frozen=True)
class Decision:
    """A verdict, the rule that produced it, and a re-checkable certificate.

    Certificates are plain dicts. Rational entries are kept as ``Fraction``
    in memory and written as ``"p/q"`` strings by :meth:`to_json`.
    """

    verdict: Verdict
    rule: Rule
    certificate: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict is Verdict.UNKNOWN and self.rule is not Rule.NO_RULE_APPLIES:
            raise ValueError("Unknown verdicts must carry rule NoRuleApplies")

    @property
    def is_member(self) -> bool:
        return self.verdict is Verdict.MEMBER

    def relabel(self, rule: Rule) -> "Decision":
        return Decision(self.verdict, rule, dict(self.certificate))

    def to_json(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "rule": self.rule.value,
            "certificate": _encode(self.certificate),
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "Decision":
        from .distributions import parse_rational

        def decode(value):
            if isinstance(value, str):
                try:
                    return parse_rational(value)
                except ValueError:
                    return value
            if isinstance(value, dict):
                return {k: decode(v) for k, v in value.items()}
            if isinstance(value, list):
                return [decode(v) for v in value]
            return value

        return cls(
            Verdict(data["verdict"]),
            Rule(data["rule"]),
            decode(data.get("certificate", {})),
        )


UNKNOWN = Decision(Verdict.UNKNOWN, Rule.NO_RULE_APPLIES)
