"""JSON encodings with rationals written as ``"p/q"`` strings.

Distribution::

    {"atoms": [{"loc": "p/q", "mass": "p/q"}],
     "pieces": [{"lo": "p/q", "hi": "p/q", "weight": "p/q"}]}

Coupling::

    {"frame": {"x": [lo, hi], "y": [lo, hi]},
     "segments": [{"x_lo": .., "x_hi": .., "slope": 1 | -1, "intercept": ..}],
     "mixture": {"weight": .., "first": coupling, "second": coupling} | null,
     "target": distribution | null}

Grid targets are ``{"masses": [...]}``; grid joints are nested row-major
lists.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .coupling import CouplingMixture, CouplingSegment, PiecewiseCoupling
from .distributions import Atom, MixtureDistribution, UniformPiece, parse_rational
from .oracle import GridJoint, GridTarget


class MalformedInputError(ValueError):
    """Input that does not follow the documented JSON layout."""


class InvariantViolationError(ValueError):
    """Well-formed input describing an invalid object (e.g. mass not 1)."""


def rational_to_json(x: Fraction) -> str:
    return str(x)


def _rational(value: Any, where: str) -> Fraction:
    if isinstance(value, float):
        raise MalformedInputError(f"{where}: floats are not accepted, write {value!r} as a string 'p/q'")
    try:
        return parse_rational(value)
    except (TypeError, ValueError) as exc:
        raise MalformedInputError(f"{where}: {exc}") from exc


def _field(obj: Any, key: str, where: str) -> Any:
    if not isinstance(obj, dict):
        raise MalformedInputError(f"{where}: expected an object")
    if key not in obj:
        raise MalformedInputError(f"{where}: missing field {key!r}")
    return obj[key]


def _list(obj: Any, where: str) -> list:
    if not isinstance(obj, list):
        raise MalformedInputError(f"{where}: expected a list")
    return obj


# -- distributions -----------------------------------------------------------


def distribution_to_json(dist: MixtureDistribution) -> dict:
    return {
        "atoms": [{"loc": str(a.location), "mass": str(a.mass)} for a in dist.atoms],
        "pieces": [{"lo": str(p.lo), "hi": str(p.hi), "weight": str(p.weight)} for p in dist.pieces],
    }


def distribution_from_json(data: Any) -> MixtureDistribution:
    if not isinstance(data, dict):
        raise MalformedInputError("distribution: expected an object")
    raw_atoms = _list(data.get("atoms", []), "atoms")
    raw_pieces = _list(data.get("pieces", []), "pieces")
    atoms, pieces = [], []
    try:
        for i, entry in enumerate(raw_atoms):
            w = f"atoms[{i}]"
            atoms.append(Atom(_rational(_field(entry, "loc", w), w + ".loc"),
                              _rational(_field(entry, "mass", w), w + ".mass")))
        for i, entry in enumerate(raw_pieces):
            w = f"pieces[{i}]"
            pieces.append(UniformPiece(_rational(_field(entry, "lo", w), w + ".lo"),
                                       _rational(_field(entry, "hi", w), w + ".hi"),
                                       _rational(_field(entry, "weight", w), w + ".weight")))
        return MixtureDistribution(atoms, pieces)
    except MalformedInputError:
        raise
    except ValueError as exc:
        raise InvariantViolationError(str(exc)) from exc


# -- couplings ---------------------------------------------------------------


def coupling_to_json(c: PiecewiseCoupling) -> dict:
    return {
        "frame": {"x": [str(v) for v in c.x_margin], "y": [str(v) for v in c.y_margin]},
        "segments": [
            {"x_lo": str(s.x_lo), "x_hi": str(s.x_hi), "slope": s.slope, "intercept": str(s.intercept)}
            for s in c.segments
        ],
        "mixture": None if c.mix is None else {
            "weight": str(c.mix.weight),
            "first": coupling_to_json(c.mix.first),
            "second": coupling_to_json(c.mix.second),
        },
        "target": None if c.target is None else distribution_to_json(c.target),
    }


def coupling_from_json(data: Any) -> PiecewiseCoupling:
    frame = _field(data, "frame", "coupling")
    xm = _list(_field(frame, "x", "frame"), "frame.x")
    ym = _list(_field(frame, "y", "frame"), "frame.y")
    if len(xm) != 2 or len(ym) != 2:
        raise MalformedInputError("frame.x and frame.y must have two entries")
    x_margin = tuple(_rational(v, "frame.x") for v in xm)
    y_margin = tuple(_rational(v, "frame.y") for v in ym)
    segments = []
    try:
        for i, s in enumerate(_list(data.get("segments", []), "segments")):
            w = f"segments[{i}]"
            slope = _field(s, "slope", w)
            if slope not in (1, -1) or isinstance(slope, bool):
                raise MalformedInputError(f"{w}.slope must be 1 or -1")
            segments.append(CouplingSegment(_rational(_field(s, "x_lo", w), w + ".x_lo"),
                                            _rational(_field(s, "x_hi", w), w + ".x_hi"),
                                            slope,
                                            _rational(_field(s, "intercept", w), w + ".intercept")))
        mix = None
        if data.get("mixture") is not None:
            m = data["mixture"]
            mix = CouplingMixture(_rational(_field(m, "weight", "mixture"), "mixture.weight"),
                                  coupling_from_json(_field(m, "first", "mixture")),
                                  coupling_from_json(_field(m, "second", "mixture")))
        target = None
        if data.get("target") is not None:
            target = distribution_from_json(data["target"])
        return PiecewiseCoupling(x_margin, y_margin, tuple(segments), mix, target)
    except (MalformedInputError, InvariantViolationError):
        raise
    except ValueError as exc:
        raise InvariantViolationError(str(exc)) from exc


# -- grid objects ------------------------------------------------------------


def grid_target_to_json(t: GridTarget) -> dict:
    return {"masses": [str(v) for v in t.masses]}


def grid_target_from_json(data: Any) -> GridTarget:
    masses = [_rational(v, f"masses[{i}]") for i, v in enumerate(_list(_field(data, "masses", "target"), "masses"))]
    try:
        return GridTarget(tuple(masses))
    except ValueError as exc:
        raise InvariantViolationError(str(exc)) from exc


def grid_joint_to_json(j: GridJoint) -> dict:
    def enc(v):
        return [enc(x) for x in v] if isinstance(v, list) else str(v)

    return {"n": j.spec.n, "m": j.spec.m, "entries": enc(j.to_nested())}


def encode_fractions(value: Any) -> Any:
    """Recursively replace Fractions by ``"p/q"`` strings."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {k: encode_fractions(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode_fractions(v) for v in value]
    return value
