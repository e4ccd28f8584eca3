"""Concrete vector problems and their parametric solution families."""
from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .errors import DomainError
from .geometry import (
    DEFAULT_RESOLUTION,
    Ball,
    ConvexBody2D,
    breadth,
    contains,
    minkowski_combination,
    minkowski_sum,
    scale,
    segment,
    stadium,
    translate,
)
from .mixed import (
    RevolutionQuantities,
    area,
    is_axially_symmetric,
    pairing,
    perimeter,
    solid_of_revolution,
)
from .pareto import ParametricProblem, ParetoPoint, frontier_sweep

# the r = 0.5 closed form must hold to 1e-6; the polygonal disk error is ~10/M^2
LEIDENFROST_RESOLUTION = 4096
VERTICAL = 0.5 * np.pi


def _polygon_disk_factor(resolution: int) -> float:
    """Perimeter / (2 r) of the support-wise regular polygon (pi in the limit)."""
    return resolution * np.tan(np.pi / resolution)


@dataclass(frozen=True, eq=False)
class VectorIsoperimetricInstance:
    bodies: tuple[ConvexBody2D, ...]
    area: float

    def __post_init__(self):
        if len(self.bodies) < 1:
            raise DomainError("need at least one reference body")
        if not self.area > 0:
            raise DomainError("prescribed area must be positive")


@dataclass(frozen=True, eq=False)
class UrysohnFlatteningInstance:
    x0: ConvexBody2D
    direction: float
    t: float
    mode: str = "internal"
    resolution: int = DEFAULT_RESOLUTION

    def __post_init__(self):
        if not self.t > 0:
            raise DomainError("integral-breadth level t must be positive")
        if self.mode not in ("internal", "external"):
            raise DomainError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True, eq=False)
class HullsInstance:
    containers: tuple[ConvexBody2D, ...]
    candidates: tuple[ConvexBody2D, ...]
    resolution: int = DEFAULT_RESOLUTION

    def __post_init__(self):
        if len(self.containers) != len(self.candidates) or not self.containers:
            raise DomainError("one candidate per container required")


@dataclass(frozen=True, eq=False)
class RevolvedPoint:
    point: ParetoPoint
    revolution: RevolutionQuantities


class VectorIsoperimetricProblem(ParametricProblem):
    """Minkowski combinations sum_j alpha_j y_j rescaled to the prescribed area.

    The family is scale free, so the parameters are the m - 1 log-ratios
    log(alpha_j / alpha_m), each bounded by |log(min_ratio)|.
    """

    def __init__(self, inst: VectorIsoperimetricInstance, min_ratio: float = 1e-3):
        self.inst = inst
        m = len(inst.bodies)
        self.objective_names = tuple(f"pairing_{j + 1}" for j in range(m))
        span = abs(np.log(min_ratio))
        self.bounds = [(-span, span)] * (m - 1)

    def _combination(self, params):
        w = np.exp(np.append(np.asarray(params, dtype=float), 0.0))
        alpha = w / w.sum()
        x = minkowski_combination(self.inst.bodies, alpha)
        a = area(x)
        if not a > 0:
            return None, None
        s = np.sqrt(self.inst.area / a)
        return scale(x, s), alpha * s

    def realize(self, params):
        return self._combination(params)[0]

    def report_params(self, params, body):
        return tuple(float(a) for a in self._combination(params)[1])

    def objectives(self, body):
        return np.array([pairing(y, body) for y in self.inst.bodies])

    def rescale(self, body):
        a = area(body)
        if not a > 0:
            return None
        return scale(body, np.sqrt(self.inst.area / a))


def solve_vector_isoperimetric(
    inst: VectorIsoperimetricInstance,
    weight_grid: int,
    seed: int = 0,
    workers: int | None = 1,
    **kwargs,
) -> list[ParetoPoint]:
    return frontier_sweep(VectorIsoperimetricProblem(inst), weight_grid, seed=seed, workers=workers, **kwargs)


class LeidenfrostProblem(ParametricProblem):
    """Stadiums of fixed area; objectives (perimeter, vertical breadth).

    Parameter is the disk radius r; the segment length follows from the area.
    On a grid with M divisible by 4 the polygonal stadium has perimeter
    2cr + 2L, vertical breadth 2r and area cr^2 + 2rL with c = M tan(pi/M),
    which ``evaluate`` uses directly.
    """

    objective_names = ("perimeter", "vertical_breadth")

    def __init__(self, area: float = np.pi, resolution: int = LEIDENFROST_RESOLUTION,
                 min_radius_fraction: float = 0.05):
        if not area > 0:
            raise DomainError("area must be positive")
        if resolution % 4:
            raise DomainError("resolution must be divisible by 4")
        self.area = float(area)
        self.resolution = resolution
        self.c = _polygon_disk_factor(resolution)
        r_max = np.sqrt(self.area / self.c)
        self.bounds = [(min_radius_fraction * r_max, r_max)]

    def segment_length(self, r: float) -> float:
        return max(0.0, (self.area - self.c * r * r) / (2.0 * r))

    def evaluate(self, params):
        r = float(params[0])
        return np.array([2.0 * self.c * r + 2.0 * self.segment_length(r), 2.0 * r])

    def realize(self, params):
        r = float(params[0])
        return stadium(r, self.segment_length(r), self.resolution)

    def report_params(self, params, body):
        r = float(params[0])
        return (r, self.segment_length(r))

    def objectives(self, body):
        return np.array([perimeter(body), breadth(body, VERTICAL)])

    def rescale(self, body):
        a = area(body)
        if not a > 0:
            return None
        return scale(body, np.sqrt(self.area / a))


def leidenfrost_frontier(
    area: float,
    grid: int,
    resolution: int = LEIDENFROST_RESOLUTION,
    seed: int = 0,
    workers: int | None = 1,
) -> list[RevolvedPoint]:
    """Plane stadium frontier with the spheroid obtained by rotating each stadium."""
    problem = LeidenfrostProblem(area, resolution)
    points = frontier_sweep(problem, grid, seed=seed, workers=workers)
    return [RevolvedPoint(p, solid_of_revolution(p.body, VERTICAL)) for p in points]


class InternalUrysohnStadiumProblem(ParametricProblem):
    """Stadiums inside x0 with <x, B> = t; objectives (-area, breadth along z).

    The segment is orthogonal to the flattening direction and the stadium is
    centred at the vertex centroid of x0.
    """

    objective_names = ("neg_area", "breadth")

    def __init__(self, inst: UrysohnFlatteningInstance, min_radius_fraction: float = 0.05):
        self.inst = inst
        self.c = _polygon_disk_factor(inst.resolution)
        r_max = inst.t / self.c
        self.bounds = [(min_radius_fraction * r_max, r_max)]
        self.center = inst.x0.centroid()
        self.tol = 1e-12 * max(inst.x0.scale, 1.0)

    def segment_length(self, r: float) -> float:
        return max(0.0, self.inst.t - self.c * r)

    def realize(self, params):
        r = float(params[0])
        disk = ConvexBody2D(Ball(r, self.inst.resolution).vertices, validate=False)
        seg = segment(self.segment_length(r), self.inst.direction + 0.5 * np.pi)
        body = translate(minkowski_sum(disk, seg), self.center)
        return body if contains(self.inst.x0, body, self.tol) else None

    def report_params(self, params, body):
        r = float(params[0])
        return (r, self.segment_length(r))

    def objectives(self, body):
        return np.array([-area(body), breadth(body, self.inst.direction)])

    def rescale(self, body):
        p = perimeter(body)
        if not p > 0:
            return None
        body = scale(body, 2.0 * self.inst.t / p)
        body = translate(body, self.center - body.centroid())
        return body if contains(self.inst.x0, body, self.tol) else None


def rotational_isoperimetric(
    inst: UrysohnFlatteningInstance,
    grid: int,
    seed: int = 0,
    workers: int | None = 1,
) -> list[RevolvedPoint]:
    """Solve the plane internal problem on stadiums, then rotate about the flattening axis."""
    if not is_axially_symmetric(inst.x0, inst.direction):
        raise DomainError("x0 is not symmetric about the flattening axis")
    points = frontier_sweep(InternalUrysohnStadiumProblem(inst), grid, seed=seed, workers=workers)
    return [RevolvedPoint(p, solid_of_revolution(p.body, inst.direction)) for p in points]


def integral_breadth_ratio(body: ConvexBody2D) -> float:
    """<body, B> / perimeter; 1/2 for every planar body."""
    return pairing(body, Ball(1.0)) / perimeter(body)

