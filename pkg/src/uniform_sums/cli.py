"""Command-line front end.

Exit codes: 0 Member / Feasible / verified, 1 NonMember / Infeasible /
not realisable, 2 Unknown, 64 malformed input or usage, 65 invariant
violation (e.g. masses not summing to one, coupling failing verification).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from . import bounds as bounds_mod
from . import coupling as cp
from .decision import Verdict
from .distributions import MixtureDistribution, parse_rational
from .membership import ShapeHint, ShapeKind, decide
from .oracle import (
    GridSpec,
    discretize,
    feasible,
    grid_compatible,
    grid_extreme,
    target_from_atoms,
)
from .serialization import (
    InvariantViolationError,
    MalformedInputError,
    coupling_from_json,
    coupling_to_json,
    distribution_from_json,
    distribution_to_json,
    encode_fractions,
    grid_joint_to_json,
    grid_target_from_json,
    grid_target_to_json,
)

EXIT_MEMBER, EXIT_NON_MEMBER, EXIT_UNKNOWN = 0, 1, 2
EXIT_MALFORMED, EXIT_INVARIANT = 64, 65
DEFAULT_SEED = 20190101

VERDICT_EXIT = {Verdict.MEMBER: EXIT_MEMBER, Verdict.NON_MEMBER: EXIT_NON_MEMBER, Verdict.UNKNOWN: EXIT_UNKNOWN}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would read as Unknown
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_MALFORMED, f"{self.prog}: error: {message}\n")


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _load_json(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise MalformedInputError(f"{path}: {exc.strerror}") from exc


def _write_json(path: str, payload: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


class Output:
    def __init__(self, as_json: bool, quiet: bool):
        self.as_json = as_json
        self.quiet = quiet

    def emit(self, payload: dict, text: str) -> None:
        if self.as_json:
            print(json.dumps(encode_fractions(payload), sort_keys=False))
        elif not self.quiet:
            print(text)


# -- commands ----------------------------------------------------------------


def _hint(args) -> ShapeHint:
    if args.assume_unimodal is not None:
        return ShapeHint(ShapeKind.UNIMODAL, mode=args.assume_unimodal)
    if args.assume_monotone is not None:
        return ShapeHint(ShapeKind.MONOTONE, direction=args.assume_monotone)
    if args.assume_symmetric:
        return ShapeHint(ShapeKind.UNIMODAL_SYMMETRIC)
    return ShapeHint()


def run_check(args, out: Output) -> int:
    dist = distribution_from_json(_load_json(args.dist))
    decision = decide(dist, args.n, _hint(args))
    payload = decision.to_json()
    # the decision JSON is the primary output of check, so it is printed
    # even without --json
    if out.as_json or not out.quiet:
        print(json.dumps(payload))
    return VERDICT_EXIT[decision.verdict]


def _synthesize(args) -> cp.PiecewiseCoupling:
    if args.kind == "biatomic":
        if args.b_inv is None or args.a is None:
            raise UsageError("biatomic synthesis needs --b-inv and --a")
        return cp.synthesize_biatomic(args.b_inv, args.a)
    if args.kind == "triatomic":
        if args.case is None or args.T is None:
            raise UsageError("triatomic synthesis needs --case and --T")
        c = args.c if args.c is not None else Fraction(1)
        return cp.synthesize_triatomic(args.case, cp.TriAtomicParams(args.T, c, args.p1))
    if args.kind == "law":
        if args.dist is None:
            raise UsageError("law synthesis needs --dist")
        dist = distribution_from_json(_load_json(args.dist))
        if len(dist.atoms) == 3 and not dist.pieces:
            return cp.synthesize_triatomic_law(dist)
        if len(dist.atoms) == 2 and not dist.pieces:
            a, top = dist.locations
            inv = 1 / (top - a)
            if inv.denominator != 1:
                raise ValueError(f"1/b = {inv} is not an integer; the law is not a sum of two uniforms")
            if dist.mean() != 1:
                raise ValueError(f"mean {dist.mean()} differs from 1")
            return cp.synthesize_biatomic(int(inv), a)
        if dist.atoms == MixtureDistribution.point_mass(1).atoms and not dist.pieces:
            return cp.antithetic_coupling()
        raise ValueError("only two- and three-point laws (and the point mass at 1) are synthesised")
    if args.kind == "comonotonic":
        return cp.identity_coupling()
    if args.kind == "antithetic":
        return cp.antithetic_coupling()
    raise UsageError(f"unknown kind {args.kind}")


def run_synthesize(args, out: Output) -> int:
    try:
        coupling = _synthesize(args)
    except (MalformedInputError, InvariantViolationError, UsageError):
        raise
    except ValueError as exc:
        out.emit({"realisable": False, "reason": str(exc)}, f"not realisable: {exc}")
        return EXIT_NON_MEMBER
    report = cp.verify_coupling(coupling)
    if not report.ok:
        raise InvariantViolationError("synthesised coupling failed verification: " + "; ".join(report.discrepancies))
    frames = {"frame": coupling_to_json(coupling)}
    if coupling.x_margin != (0, 1) or coupling.y_margin != (0, 1):
        frames["normalized"] = coupling_to_json(coupling.normalized())
    else:
        frames["normalized"] = frames["frame"]
    if args.out:
        _write_json(args.out, frames["normalized"] if args.normalized_only else frames)
    text = f"coupling with {_count_segments(coupling)} segments verified exactly; sum law {report.sum_law}"
    out.emit({"verified": True, **frames}, text)
    return EXIT_MEMBER


def _count_segments(c: cp.PiecewiseCoupling) -> int:
    if c.mix is not None:
        return _count_segments(c.mix.first) + _count_segments(c.mix.second)
    return len(c.segments)


def run_bounds(args, out: Output) -> int:
    if args.n < 3:
        sys.stderr.write("sharp interval bounds are only established for n >= 3; refusing to extrapolate\n")
        return EXIT_MALFORMED
    results = {}
    senses = ["min", "max"] if args.sense is None else [args.sense]
    for sense in senses:
        fn = bounds_mod.min_open_interval if sense == "min" else bounds_mod.max_closed_interval
        try:
            r = fn(args.n, args.a, args.b)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        results[sense] = {
            "value": r.value,
            "interval": "open" if sense == "min" else "closed",
            "attaining": distribution_to_json(r.attaining),
            "attaining_kind": r.attaining_kind.value,
        }
    if args.emit_attaining:
        _write_json(args.emit_attaining, encode_fractions({k: v["attaining"] for k, v in results.items()}))
    lo, hi = args.a, args.a + args.b
    lines = []
    if "min" in results:
        lines.append(f"min P({lo} < S < {hi}) = {results['min']['value']}")
    if "max" in results:
        lines.append(f"max P({lo} <= S <= {hi}) = {results['max']['value']}")
    out.emit({"n": args.n, "a": args.a, "b": args.b, **results}, "\n".join(lines))
    return 0


def _load_grid_target(path: str, spec: GridSpec):
    data = _load_json(path)
    if isinstance(data, dict) and "masses" in data:
        return grid_target_from_json(data)
    dist = distribution_from_json(data)
    if grid_compatible(dist, spec):
        return target_from_atoms(dist, spec)
    return discretize(dist, spec.n, spec.m)


def run_oracle(args, out: Output) -> int:
    try:
        spec = GridSpec(args.m, args.n, allow_large=args.allow_large)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.sense is not None:
        if args.range is None:
            raise UsageError("--sense needs --range LO:HI (index sums)")
        try:
            lo, hi = (int(v) for v in args.range.split(":"))
        except ValueError as exc:
            raise UsageError("--range must look like LO:HI with integers") from exc
        if not 0 <= lo <= hi <= spec.max_index:
            raise UsageError(f"--range needs 0 <= LO <= HI <= {spec.max_index} for n={spec.n}, m={spec.m}")
        res = grid_extreme(spec, lo, hi, args.sense)
        if args.emit_witness:
            _write_json(args.emit_witness, grid_joint_to_json(res.joint))
        out.emit({"n": spec.n, "m": spec.m, "sense": args.sense, "range": [lo, hi], "value": res.value},
                 f"{args.sense} P({lo} <= index sum <= {hi}) = {res.value} ~ {float(res.value):.6f}")
        return 0
    if args.target is None:
        raise UsageError("oracle needs --target, or --sense with --range")
    target = _load_grid_target(args.target, spec)
    try:
        target.check_spec(spec)
    except ValueError as exc:
        raise InvariantViolationError(str(exc)) from exc
    result = feasible(target, spec)
    payload = {"n": spec.n, "m": spec.m, "verdict": result.verdict, "target": grid_target_to_json(target)}
    if result.feasible and args.emit_witness:
        _write_json(args.emit_witness, grid_joint_to_json(result.witness))
    if not result.feasible:
        payload["certificate"] = result.certificate
    out.emit(payload, result.verdict)
    return 0 if result.feasible else 1


def _load_coupling(path: str) -> cp.PiecewiseCoupling:
    data = _load_json(path)
    if isinstance(data, dict) and "normalized" in data and "frame" in data and isinstance(data["frame"], dict) \
            and "segments" not in data:
        data = data["normalized"]
    return coupling_from_json(data)


def run_verify(args, out: Output) -> int:
    coupling = _load_coupling(args.coupling)
    target = distribution_from_json(_load_json(args.target)) if args.target else coupling.target
    if target is None:
        raise UsageError("the coupling declares no target; pass --target")
    report = cp.verify_coupling(coupling, target)
    payload = {
        "margin_x_ok": report.margin_x_ok,
        "margin_y_ok": report.margin_y_ok,
        "sum_law_ok": report.sum_law_ok,
        "discrepancies": report.discrepancies,
    }
    text = "exact: ok" if report.ok else "exact: FAILED\n  " + "\n  ".join(report.discrepancies)
    ok = report.ok
    if args.mc:
        mc = cp.monte_carlo_check(coupling, target, args.mc, args.seed)
        payload["monte_carlo"] = {"N": mc.N, "seed": mc.seed, "ks": mc.ks, "dkw_epsilon": mc.epsilon, "ok": mc.ok}
        text += f"\nmonte carlo: N={mc.N} KS={mc.ks:.6g} band={mc.epsilon:.6g} {'ok' if mc.ok else 'FAILED'}"
        ok = ok and mc.ok
    out.emit(payload, text)
    return 0 if ok else EXIT_INVARIANT


def run_sample(args, out: Output) -> int:
    coupling = _load_coupling(args.coupling)
    report_target = coupling.target
    if args.target:
        report_target = distribution_from_json(_load_json(args.target))
    issues = cp.structural_issues(coupling)
    if issues:
        raise InvariantViolationError("invalid coupling: " + "; ".join(issues))
    rng = np.random.default_rng(args.seed)
    x, y, s = cp.sample(coupling, args.N, rng)
    if not out.quiet:
        np.savetxt(sys.stdout, np.column_stack([x, y, s]), fmt="%.17g")
    if report_target is not None:
        ks = cp.ks_distance(s, report_target)
        eps = cp.dkw_epsilon(args.N)
        print(f"# KS {ks:.17g} DKW99 {eps:.17g} N {args.N} seed {args.seed}")
    else:
        print(f"# KS n/a (no target) N {args.N} seed {args.seed}")
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help=f"random seed (default {DEFAULT_SEED})")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS, help="suppress human-readable output")

    p = _Parser(prog="uniform-sums", description="Laws of sums of U[0,1] variables under arbitrary dependence.",
                parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", parents=[common], help="decide membership of a distribution")
    c.add_argument("dist", help="distribution JSON file ('-' for stdin)")
    c.add_argument("--n", type=int, required=True)
    g = c.add_mutually_exclusive_group()
    g.add_argument("--assume-unimodal", metavar="MODE", type=_rational_arg)
    g.add_argument("--assume-monotone", choices=["increasing", "decreasing"])
    g.add_argument("--assume-symmetric", action="store_true", help="unimodal and symmetric about the mean")

    s = sub.add_parser("synthesize", parents=[common], help="emit an explicit coupling")
    s.add_argument("--kind", required=True, choices=["biatomic", "triatomic", "law", "comonotonic", "antithetic"])
    s.add_argument("--b-inv", type=int)
    s.add_argument("--a", type=_rational_arg)
    s.add_argument("--case", choices=["A", "B", "C"])
    s.add_argument("--T", type=_rational_arg)
    s.add_argument("--c", type=_rational_arg)
    s.add_argument("--p1", type=_rational_arg)
    s.add_argument("--dist", help="two- or three-point law (U[0,1] frame) to realise")
    s.add_argument("--out", help="write coupling JSON here")
    s.add_argument("--normalized-only", action="store_true", help="with --out, write only the U[0,1] frame")

    b = sub.add_parser("bounds", parents=[common], help="sharp interval probability bounds")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--a", type=_rational_arg, required=True)
    b.add_argument("--b", type=_rational_arg, required=True)
    b.add_argument("--sense", choices=["min", "max"])
    b.add_argument("--emit-attaining", metavar="OUT")

    o = sub.add_parser("oracle", parents=[common], help="exact grid feasibility / extreme probabilities")
    o.add_argument("--n", type=int, required=True, choices=[2, 3])
    o.add_argument("--m", type=int, required=True)
    o.add_argument("--target", help="grid target {'masses': [...]} or a distribution JSON")
    o.add_argument("--sense", choices=["min", "max"])
    o.add_argument("--range", metavar="LO:HI", help="index-sum range for --sense")
    o.add_argument("--emit-witness", metavar="OUT")
    o.add_argument("--allow-large", action="store_true", help="lift the m <= 24 cap for n = 3")

    v = sub.add_parser("verify", parents=[common], help="verify a coupling exactly (and optionally by simulation)")
    v.add_argument("coupling")
    v.add_argument("--target", help="distribution JSON; defaults to the coupling's declared target")
    v.add_argument("--mc", type=int, metavar="N", help="also run a Monte Carlo KS check with N samples")

    sm = sub.add_parser("sample", parents=[common], help="print (x, y, x+y) samples and a KS line")
    sm.add_argument("coupling")
    sm.add_argument("--N", type=int, default=1000)
    sm.add_argument("--target", help="distribution JSON for the KS line")
    return p


COMMANDS = {
    "check": run_check,
    "synthesize": run_synthesize,
    "bounds": run_bounds,
    "oracle": run_oracle,
    "verify": run_verify,
    "sample": run_sample,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.seed = getattr(args, "seed", DEFAULT_SEED)
    out = Output(getattr(args, "json", False), getattr(args, "quiet", False))
    try:
        return COMMANDS[args.command](args, out)
    except MalformedInputError as exc:
        sys.stderr.write(f"malformed input: {exc}\n")
        return EXIT_MALFORMED
    except UsageError as exc:
        sys.stderr.write(f"usage: {exc}\n")
        return EXIT_MALFORMED
    except InvariantViolationError as exc:
        sys.stderr.write(f"invariant violation: {exc}\n")
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
