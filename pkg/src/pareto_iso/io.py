"""JSON and CSV formats.  Angles are in degrees in every file."""
from __future__ import annotations

import csv
import json
import math
from typing import Any

import numpy as np

from .errors import ValidationError
from .geometry import (
    DEFAULT_RESOLUTION,
    Ball,
    ConvexBody2D,
    point,
    segment,
    stadium,
    translate,
)
from .measures import SurfaceAreaMeasure
from .problems import HullsInstance, UrysohnFlatteningInstance, VectorIsoperimetricInstance

PROBLEMS = (
    "vector-isoperimetric",
    "leidenfrost",
    "urysohn-internal",
    "urysohn-external",
    "rotational",
    "hulls",
)


def _num(x) -> float:
    """Round-trip exact float formatting (17 significant digits)."""
    return float(f"{float(x):.17g}")


def _field(d: dict, key: str, kind=float):
    if key not in d:
        raise ValidationError(f"missing field {key!r}")
    try:
        value = kind(d[key])
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad value for {key!r}: {d[key]!r}") from exc
    if kind is float and not math.isfinite(value):
        raise ValidationError(f"non-finite value for {key!r}")
    return value


def _resolution(d: dict) -> int:
    m = int(d.get("resolution", DEFAULT_RESOLUTION))
    if m < 8:
        raise ValidationError("resolution must be at least 8")
    return m


def body_from_json(d: Any) -> ConvexBody2D:
    if not isinstance(d, dict) or "type" not in d:
        raise ValidationError("body must be an object with a 'type' field")
    kind = d["type"]
    center = np.asarray(d.get("center", [0.0, 0.0]), dtype=float)
    if kind == "polygon":
        pts = np.asarray(d.get("vertices", []), dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or not np.all(np.isfinite(pts)):
            raise ValidationError("polygon vertices must be a list of finite [x, y] pairs")
        return ConvexBody2D(pts)
    if kind == "ball":
        body = Ball(_field(d, "radius"), _resolution(d))
    elif kind == "stadium":
        body = stadium(_field(d, "radius"), _field(d, "length"), _resolution(d))
    elif kind == "segment":
        body = segment(_field(d, "length"), math.radians(float(d.get("angle", 0.0))))
    elif kind == "point":
        return point(center)
    else:
        raise ValidationError(f"unknown body type {kind!r}")
    return body if not np.any(center) else translate(body, center)


def body_to_json(body: ConvexBody2D) -> dict:
    if isinstance(body, Ball):
        return {"type": "ball", "radius": _num(body.radius), "resolution": body.resolution}
    return {"type": "polygon", "vertices": [[_num(x), _num(y)] for x, y in body.vertices]}


def measure_to_json(m: SurfaceAreaMeasure) -> dict:
    return {"atoms": [[_num(math.degrees(a)), _num(w)] for a, w in m.atoms()]}


def measure_from_json(d: Any) -> SurfaceAreaMeasure:
    try:
        atoms = [(math.radians(float(a)), float(w)) for a, w in d["atoms"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError("measure must be {'atoms': [[deg, weight], ...]}") from exc
    if not atoms:
        return SurfaceAreaMeasure.empty()
    angles, weights = zip(*atoms)
    return SurfaceAreaMeasure.from_atoms(angles, weights)


def instance_from_json(d: Any):
    """Returns (problem name, instance object or plain dict of parameters)."""
    if not isinstance(d, dict) or d.get("problem") not in PROBLEMS:
        raise ValidationError(f"'problem' must be one of {', '.join(PROBLEMS)}")
    name = d["problem"]
    if name == "vector-isoperimetric":
        bodies = tuple(body_from_json(b) for b in d.get("bodies", []))
        return name, VectorIsoperimetricInstance(bodies, _field(d, "area"))
    if name == "leidenfrost":
        return name, {"area": float(d.get("area", math.pi)),
                      "resolution": int(d.get("resolution", 4096))}
    if name == "hulls":
        containers = tuple(body_from_json(b) for b in d.get("containers", []))
        candidates = tuple(body_from_json(b) for b in d.get("candidates", []))
        return name, {"containers": containers, "candidates": candidates, "resolution": _resolution(d)}
    mode = "external" if name == "urysohn-external" else "internal"
    inst = UrysohnFlatteningInstance(
        body_from_json(d.get("x0")),
        math.radians(_field(d, "direction")),
        _field(d, "t"),
        mode,
        _resolution(d),
    )
    return name, inst


def instance_to_json(name: str, inst) -> dict:
    if name == "vector-isoperimetric":
        return {"problem": name, "bodies": [body_to_json(b) for b in inst.bodies], "area": _num(inst.area)}
    if name == "leidenfrost":
        return {"problem": name, "area": _num(inst["area"]), "resolution": inst["resolution"]}
    if name == "hulls":
        out = {"problem": name, "containers": [body_to_json(b) for b in inst.containers]}
        if inst.candidates:
            out["candidates"] = [body_to_json(b) for b in inst.candidates]
        out["resolution"] = inst.resolution
        return out
    return {
        "problem": name,
        "x0": body_to_json(inst.x0),
        "direction": _num(math.degrees(inst.direction)),
        "t": _num(inst.t),
        "resolution": inst.resolution,
    }


def hulls_instance(spec: dict, candidates) -> HullsInstance:
    return HullsInstance(tuple(spec["containers"]), tuple(candidates), spec["resolution"])


def report_to_json(report) -> dict:
    alpha = report.alpha
    if isinstance(alpha, (list, tuple)):
        alpha = [_num(a) for a in alpha]
    elif alpha is not None:
        alpha = _num(alpha)
    contact = report.contact
    if contact and isinstance(contact[0], list):
        contact = [[_num(c) for c in row] for row in contact]
    else:
        contact = [_num(c) for c in contact]
    return {
        "criterion": report.criterion,
        "feasible": bool(report.feasible),
        "alpha": alpha,
        "beta": None if report.beta is None else _num(report.beta),
        "contact_deg": contact,
        "measures": {k: measure_to_json(v) for k, v in report.measures.items()},
        "residuals": {k: _num(v) for k, v in report.residuals.items()},
        "message": report.message,
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON in {path}: {exc.msg} (line {exc.lineno})") from exc


def write_frontier_csv(fh, points, objective_names, extra=None) -> None:
    """One row per frontier point: weights, objectives, parameters, optional extra columns."""
    if not points:
        fh.write("")
        return
    n_w = len(points[0].weights)
    n_p = len(points[0].params)
    header = [f"w_{j + 1}" for j in range(n_w)]
    header += [f"obj_{n}" for n in objective_names]
    header += [f"param_{j + 1}" for j in range(n_p)]
    extra_names = list(extra[0].keys()) if extra else []
    header += extra_names
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    for i, p in enumerate(points):
        row = list(p.weights) + list(p.objectives) + list(p.params)
        if extra:
            row += [extra[i][k] for k in extra_names]
        writer.writerow([f"{float(v):.17g}" for v in row])
