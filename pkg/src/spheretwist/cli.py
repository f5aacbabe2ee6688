"""Command-line front end.

    spheretwist solve    --input instance.json [--flatten]
    spheretwist verify   --plan plan.json --input points.json [--samples N --seed S]
    spheretwist trace    --plan plan.json [--samples N] [--input points.json]
    spheretwist forest-reduce --input forest.json [--pretty]
    spheretwist classify --input pair.json

Exit status: 0 success, 1 a verification row failed, 2 invalid input,
3 internal geometric infeasibility (a bug if it ever happens).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .classify import SurfaceDescriptor, are_isomorphic
from .engine import (
    AutomorphismPlan,
    DegenerateRotationError,
    GeometricInfeasibilityError,
    TransitivityInstance,
    solve,
)
from .forest import ForestError, InfinitelyNearForest, reduce_fully
from .poly import OutsideDomainError
from .sampling import random_plane_point
from .sphere import SpherePoint, sphere_point_from_plane
from .tower import DomainError, RadicandRefinementError, TowerScalar, format_rational

__all__ = ["main", "build_parser", "RunReport", "trace_rows", "EXIT_OK", "EXIT_FAILED", "EXIT_INVALID", "EXIT_INFEASIBLE"]

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3

APPROX_DIGITS = 12


class ValidationError(Exception):
    pass


@dataclass
class RunReport:
    """Everything a subcommand produced; ``timing`` is the only nondeterministic field."""

    command: Dict
    result: Dict = field(default_factory=dict)
    timing: Dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"command": self.command, "result": self.result, "timing": self.timing}

    @classmethod
    def from_json(cls, data) -> "RunReport":
        return cls(data["command"], data.get("result", {}), data.get("timing", {}))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"


# -- input helpers ----------------------------------------------------------


def _load(path: Optional[str]):
    try:
        if path is None or path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON in {path or 'stdin'}: {exc}") from exc
    except OSError as exc:
        raise ValidationError(str(exc)) from exc


def _point(data, where: str) -> SpherePoint:
    try:
        return SpherePoint.from_json(data)
    except (DomainError, ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        raise ValidationError(f"{where}: {json.dumps(data, sort_keys=True)}: {exc}") from exc


def _points(doc, key: str) -> List[SpherePoint]:
    raw = doc.get(key, [])
    if not isinstance(raw, list):
        raise ValidationError(f"{key!r} must be a list of points")
    return [_point(p, f"{key}[{i}]") for i, p in enumerate(raw)]


def parse_instance(doc) -> TransitivityInstance:
    if not isinstance(doc, dict):
        raise ValidationError("instance document must be a JSON object")
    sources, targets, fixed = (_points(doc, k) for k in ("sources", "targets", "fixed"))
    try:
        return TransitivityInstance(sources, targets, fixed)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def parse_plan(doc) -> AutomorphismPlan:
    if isinstance(doc, dict) and "result" in doc and "plan" in doc["result"]:
        doc = doc["result"]["plan"]
    try:
        return AutomorphismPlan.from_json(doc)
    except (DomainError, ValueError, KeyError, TypeError) as exc:
        raise ValidationError(f"invalid plan document: {exc}") from exc


def _approx(s: TowerScalar) -> str:
    return s.to_decimal(APPROX_DIGITS)


# -- subcommands ------------------------------------------------------------


def cmd_solve(args) -> RunReport:
    inst = parse_instance(_load(args.input))
    plan = solve(inst)
    result = {
        "plan": plan.to_json(),
        "certificate": [r.to_json() for r in plan.certificate],
        "provenance": plan.provenance,
        "verified": plan.verified,
    }
    if args.flatten:
        flat = plan.flatten()
        result["flattened"] = flat.to_json()
        result["degrees"] = plan.degree_report(flat)
    status = EXIT_OK if plan.verified else EXIT_INFEASIBLE
    return RunReport({"name": "solve", "flatten": bool(args.flatten)}, result), status


def _verify_row(plan: AutomorphismPlan, source: SpherePoint, target: Optional[SpherePoint]) -> dict:
    row = {"source": source.to_json()}
    try:
        image = plan.apply(source)
    except (OutsideDomainError, ZeroDivisionError, DomainError) as exc:
        row.update(image=None, ok=False, error=str(exc))
        return row
    row["image"] = image.to_json()
    ok = image.on_sphere()
    if target is not None:
        row["target"] = target.to_json()
        ok = ok and image == target
    row["ok"] = ok
    return row


def cmd_verify(args) -> RunReport:
    plan = parse_plan(_load(args.plan))
    rows: List[dict] = []
    if args.input is not None:
        doc = _load(args.input)
        if isinstance(doc, dict) and "points" in doc:
            rows += [_verify_row(plan, p, None) for p in _points(doc, "points")]
        else:
            inst = parse_instance(doc)
            rows += [_verify_row(plan, s, t) for s, t in zip(inst.all_sources, inst.all_targets)]
    elif plan.certificate:
        rows += [_verify_row(plan, r.source, r.target) for r in plan.certificate]
    if args.samples:
        rng = random.Random(args.seed)
        back = plan.inverse()
        for _ in range(args.samples):
            p = random_plane_point(rng)
            row = _verify_row(plan, p, None)
            if row["ok"]:
                row["ok"] = back.apply(SpherePoint.from_json(row["image"])) == p
                row["check"] = "inverse round trip"
            rows.append(row)
    passed = sum(1 for r in rows if r["ok"])
    result = {"rows": rows, "passed": passed, "failed": len(rows) - passed}
    command = {"name": "verify", "samples": args.samples, "seed": args.seed}
    return RunReport(command, result), (EXIT_OK if passed == len(rows) else EXIT_FAILED)


def sweep(samples: int) -> List[Fraction]:
    """``samples`` evenly spaced rationals on ``[-2, 2]``."""
    if samples <= 1:
        return [Fraction(0)] * samples
    return [Fraction(-2) + Fraction(4 * k, samples - 1) for k in range(samples)]


TRACE_HEADER = ["sample", "u", "v", "step", "kind", "x", "y", "z", "x_approx", "y_approx", "z_approx"]


def trace_rows(plan: AutomorphismPlan, params: Sequence, points: Sequence[SpherePoint] = ()) -> List[list]:
    """One CSV row per (sample, stage) of each trajectory; stage 0 is the input."""
    rows = []
    items = [(u, v, sphere_point_from_plane(u, v)) for u, v in params]
    items += [("", "", p) for p in points]
    for k, (u, v, p) in enumerate(items):
        u = format_rational(u) if u != "" else ""
        v = format_rational(v) if v != "" else ""
        kinds = ["input"] + [s.kind for s in plan.steps]
        for step, (kind, q) in enumerate(zip(kinds, plan.trajectory(p))):
            rows.append([k, u, v, step, kind, *(str(c) for c in q), *(_approx(c) for c in q)])
    return rows


def cmd_trace(args):
    plan = parse_plan(_load(args.plan))
    extra = _points(_load(args.input), "points") if args.input else []
    params = [(u, Fraction(0)) for u in sweep(args.samples)]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRACE_HEADER)
    writer.writerows(trace_rows(plan, params, extra))
    return buf.getvalue(), EXIT_OK


def cmd_forest_reduce(args) -> RunReport:
    try:
        forest = InfinitelyNearForest.from_json(_load(args.input))
    except ForestError as exc:
        raise ValidationError(str(exc)) from exc
    tr = reduce_fully(forest, trace=True)
    result = {
        "initial": forest.to_json(),
        "final": tr.final.to_json(),
        "steps": tr.steps,
        "initial_total_height": forest.total_height,
        "heights": tr.heights,
        "nesting_counts": [f.nesting_count for f in tr.forests],
        "normal_form": tr.final.is_normal_form(),
    }
    if args.pretty:
        result["pretty"] = {"initial": forest.pretty(), "final": tr.final.pretty()}
    return RunReport({"name": "forest-reduce"}, result), EXIT_OK


def cmd_classify(args) -> RunReport:
    doc = _load(args.input)
    try:
        X = SurfaceDescriptor.from_json(doc["X"])
        Y = SurfaceDescriptor.from_json(doc["Y"])
    except (KeyError, TypeError, ValueError, DomainError) as exc:
        raise ValidationError(f"invalid descriptor pair: {exc}") from exc
    decision = are_isomorphic(X, Y)
    result = decision.to_json()
    result["invariants"] = {"X": list(X.invariant), "Y": list(Y.invariant)}
    if decision.witness is not None:
        result["witness_verified"] = decision.witness.verified
    return RunReport({"name": "classify"}, result), EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "verify": cmd_verify,
    "trace": cmd_trace,
    "forest-reduce": cmd_forest_reduce,
    "classify": cmd_classify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spheretwist", description="Exact algebraic automorphisms of the 2-sphere.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--output", "-o", help="write here instead of stdout")
        return p

    p = add("solve", "build a certified plan for an instance")
    p.add_argument("--input", "-i", help="instance JSON (default stdin)")
    p.add_argument("--flatten", action="store_true", help="also emit the plan as one rational map with degrees")

    p = add("verify", "re-evaluate a plan at points")
    p.add_argument("--plan", required=True, help="plan JSON or a solve report")
    p.add_argument("--input", "-i", help="instance or {points: [...]} document")
    p.add_argument("--samples", type=int, default=0, help="random round-trip checks")
    p.add_argument("--seed", type=int, default=0)

    p = add("trace", "CSV trajectories of a parameter sweep")
    p.add_argument("--plan", required=True)
    p.add_argument("--input", "-i", help="extra {points: [...]} to trace")
    p.add_argument("--samples", type=int, default=11)

    p = add("forest-reduce", "reduce a blow-up forest to height 0")
    p.add_argument("--input", "-i")
    p.add_argument("--pretty", action="store_true", help="include indented tree drawings")

    p = add("classify", "decide isomorphism of two surface descriptors")
    p.add_argument("--input", "-i", help="{X: descriptor, Y: descriptor}")
    return parser


def _emit(text: str, path: Optional[str]):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        out, status = COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (GeometricInfeasibilityError, DegenerateRotationError, RadicandRefinementError) as exc:
        print(f"internal infeasibility: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    if isinstance(out, RunReport):
        out.timing = {"seconds": round(time.perf_counter() - start, 6)}
        out = out.dumps()
    _emit(out, args.output)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
