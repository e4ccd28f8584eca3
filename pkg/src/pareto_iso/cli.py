"""Command line: pareto-iso {mixvol, frontier, check, oracle, revolve}."""
from __future__ import annotations

import argparse
import math
import sys
from io import StringIO

from . import io
from .criteria import (
    Tolerances,
    external_urysohn_check,
    internal_urysohn_check,
    optimal_hulls_check,
)
from .errors import ValidationError
from .geometry import Ball
from .mixed import area, mixed_area, pairing, perimeter, solid_of_revolution
from .pareto import DOMINANCE_TOL, ParetoPoint, brute_force_oracle, frontier_sweep
from .problems import (
    VERTICAL,
    InternalUrysohnStadiumProblem,
    LeidenfrostProblem,
    VectorIsoperimetricProblem,
)

EXIT_OK, EXIT_INTERNAL, EXIT_VALIDATION, EXIT_INFEASIBLE = 0, 1, 2, 3
MAX_SEED = 2**64 - 1


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value <= MAX_SEED:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def _resolution(text: str) -> int:
    value = int(text)
    if value < 8:
        raise argparse.ArgumentTypeError("resolution must be at least 8")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pareto-iso", description="Multiobjective isoperimetric problems for planar convex bodies.")
    p.add_argument("--tol-contact", type=float, default=Tolerances.contact)
    p.add_argument("--tol-mass", type=float, default=Tolerances.mass)
    p.add_argument("--tol-dominance", type=float, default=DOMINANCE_TOL)
    p.add_argument("--resolution", type=_resolution, default=None,
                   help="grid resolution M, overrides the value in instance files")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("mixvol", help="area, perimeter and mixed area of two bodies")
    s.add_argument("body_a")
    s.add_argument("body_b")

    s = sub.add_parser("frontier", help="Pareto frontier of a parametric problem as CSV")
    s.add_argument("--problem", required=True)
    s.add_argument("--grid", type=int, default=21)
    s.add_argument("--seed", type=_seed, default=0)
    s.add_argument("--out", default="-")

    s = sub.add_parser("check", help="verify a Pareto-optimality criterion for a candidate")
    s.add_argument("--criterion", required=True, choices=["urysohn-internal", "urysohn-external", "hulls"])
    s.add_argument("--instance", required=True)
    s.add_argument("--candidate", required=True)
    s.add_argument("--out", default="-")

    s = sub.add_parser("oracle", help="random search for a body dominating a candidate")
    s.add_argument("--problem", required=True)
    s.add_argument("--candidate", required=True)
    s.add_argument("--samples", type=_nonneg, default=10_000)
    s.add_argument("--seed", type=_seed, default=0)

    s = sub.add_parser("revolve", help="volume and lateral area of the solid of revolution")
    s.add_argument("--body", required=True)
    s.add_argument("--axis", type=float, default=90.0, help="axis direction in degrees")
    return p


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _with_resolution(data: dict, args) -> dict:
    if args.resolution is not None:
        data = dict(data, resolution=args.resolution)
    return data


def _problem(args):
    data = io.load_json(args.problem)
    name, inst = io.instance_from_json(_with_resolution(data, args))
    if name == "vector-isoperimetric":
        return name, VectorIsoperimetricProblem(inst)
    if name == "leidenfrost":
        return name, LeidenfrostProblem(inst["area"], inst["resolution"])
    if name in ("urysohn-internal", "rotational"):
        return name, InternalUrysohnStadiumProblem(inst)
    raise ValidationError(f"problem {name!r} has no parametric family")


def cmd_mixvol(args) -> int:
    a = io.body_from_json(io.load_json(args.body_a))
    b = io.body_from_json(io.load_json(args.body_b))
    out = {
        "area_a": area(a),
        "area_b": area(b),
        "perimeter_a": perimeter(a),
        "perimeter_b": perimeter(b),
        "mixed_area": mixed_area(a, b),
        "pairing_ab": pairing(a, b),
        "pairing_ba": pairing(b, a),
        "pairing_a_ball": pairing(a, Ball(1.0)),
    }
    sys.stdout.write(io.dumps({k: io._num(v) for k, v in out.items()}))
    return EXIT_OK


def cmd_frontier(args) -> int:
    if args.grid < 2:
        raise ValidationError("--grid must be at least 2")
    name, problem = _problem(args)
    points = frontier_sweep(problem, args.grid, seed=args.seed, dominance_tol=args.tol_dominance, workers=None)
    extra = None
    if name in ("leidenfrost", "rotational"):
        axis = VERTICAL if name == "leidenfrost" else problem.inst.direction
        extra = []
        for p in points:
            rev = solid_of_revolution(p.body, axis)
            extra.append({"volume": rev.volume, "lateral_area": rev.lateral_area,
                          "axial_breadth": rev.vertical_breadth})
    buf = StringIO()
    io.write_frontier_csv(buf, points, problem.objective_names, extra)
    _write(args.out, buf.getvalue())
    return EXIT_OK


def cmd_check(args) -> int:
    tol = Tolerances(contact=args.tol_contact, mass=args.tol_mass)
    data = _with_resolution(io.load_json(args.instance), args)
    name, inst = io.instance_from_json(data)
    if name != args.criterion:
        raise ValidationError(f"instance is a {name!r} problem, expected {args.criterion!r}")
    cand = io.load_json(args.candidate)
    if args.criterion == "hulls":
        if isinstance(cand, dict) and "candidates" in cand:
            cand = cand["candidates"]
        if isinstance(cand, dict):
            cand = [cand]
        report = optimal_hulls_check(io.hulls_instance(inst, [io.body_from_json(c) for c in cand]), tol)
    elif args.criterion == "urysohn-internal":
        report = internal_urysohn_check(io.body_from_json(cand), inst, tol)
    else:
        report = external_urysohn_check(io.body_from_json(cand), inst, tol)
    _write(args.out, io.dumps(io.report_to_json(report)))
    return EXIT_OK if report.feasible else EXIT_INFEASIBLE


def cmd_oracle(args) -> int:
    _, problem = _problem(args)
    body = io.body_from_json(io.load_json(args.candidate))
    fitted = problem.rescale(body)
    if fitted is None:
        raise ValidationError("candidate cannot satisfy the problem constraints")
    obj = problem.objectives(fitted)
    cand = ParetoPoint(tuple(float(v) for v in obj), (), fitted)
    verdict = brute_force_oracle(problem, cand, args.samples, seed=args.seed,
                                 rel_tol=args.tol_dominance, workers=None)
    out = {
        "objectives": [io._num(v) for v in obj],
        "dominated": verdict.dominated,
        "samples_used": verdict.samples_used,
        "witness": None if verdict.witness is None else io.body_to_json(verdict.witness),
        "witness_objectives": None if verdict.witness_objectives is None
        else [io._num(v) for v in verdict.witness_objectives],
    }
    sys.stdout.write(io.dumps(out))
    return EXIT_OK


def cmd_revolve(args) -> int:
    body = io.body_from_json(io.load_json(args.body))
    rev = solid_of_revolution(body, math.radians(args.axis))
    out = {"volume": rev.volume, "lateral_area": rev.lateral_area, "axial_breadth": rev.vertical_breadth}
    sys.stdout.write(io.dumps({k: io._num(v) for k, v in out.items()}))
    return EXIT_OK


COMMANDS = {
    "mixvol": cmd_mixvol,
    "frontier": cmd_frontier,
    "check": cmd_check,
    "oracle": cmd_oracle,
    "revolve": cmd_revolve,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
