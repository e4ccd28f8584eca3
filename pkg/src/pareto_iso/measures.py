"""Atomic surface-area measures on the unit circle.

An atom is (outward normal angle, edge length).  In the plane the Blaschke sum
of measures and the Minkowski sum of bodies agree up to translation, which is
what makes ``reconstruct`` useful.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyMeasureError,
    GridMismatchError,
    NotASurfaceMeasureError,
    UnboundedBodyError,
    ValidationError,
)
from .geometry import (
    TWO_PI,
    Ball,
    ConvexBody2D,
    centered,
    grid_angles,
    normalize_angle,
    segment,
    unit,
)

ANGLE_TOL = 1e-9
CLOSURE_TOL = 1e-9


def _circular_distance(a, b):
    d = np.abs(np.asarray(a) - np.asarray(b)) % TWO_PI
    return np.minimum(d, TWO_PI - d)


@dataclass(frozen=True, eq=False)
class SurfaceAreaMeasure:
    """Sorted atoms with strictly increasing angles and positive weights."""

    angles: np.ndarray
    weights: np.ndarray

    @classmethod
    def from_atoms(cls, angles, weights, angle_tol: float = ANGLE_TOL) -> "SurfaceAreaMeasure":
        a = normalize_angle(np.asarray(angles, dtype=float).ravel())
        w = np.asarray(weights, dtype=float).ravel()
        if a.shape != w.shape:
            raise ValidationError("angles and weights differ in length")
        if np.any(~np.isfinite(w)) or np.any(~np.isfinite(a)):
            raise ValidationError("non-finite atom")
        if np.any(w < 0):
            raise ValidationError("negative atom weight")
        keep = w > 0
        a, w = a[keep], w[keep]
        if len(a) == 0:
            return cls.empty()
        order = np.argsort(a, kind="stable")
        a, w = a[order], w[order]
        # group atoms closer than angle_tol
        new_group = np.concatenate([[True], np.diff(a) > angle_tol])
        gid = np.cumsum(new_group) - 1
        n = gid[-1] + 1
        gw = np.bincount(gid, weights=w, minlength=n)
        ga = np.bincount(gid, weights=w * a, minlength=n) / gw
        if n > 1 and ga[0] + TWO_PI - ga[-1] <= angle_tol:
            gw[0] += gw[-1]
            ga, gw = ga[:-1], gw[:-1]
        return cls._raw(ga, gw)

    @classmethod
    def _raw(cls, angles, weights) -> "SurfaceAreaMeasure":
        angles = np.array(angles, dtype=float)
        weights = np.array(weights, dtype=float)
        angles.setflags(write=False)
        weights.setflags(write=False)
        return cls(angles, weights)

    @classmethod
    def empty(cls) -> "SurfaceAreaMeasure":
        return cls._raw(np.zeros(0), np.zeros(0))

    def __len__(self):
        return len(self.angles)

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    @property
    def barycenter(self) -> np.ndarray:
        """First moment sum w_i u_i; zero for the measure of a closed polygon."""
        if len(self) == 0:
            return np.zeros(2)
        return self.weights @ unit(self.angles)

    def closure_defect(self) -> float:
        return float(np.linalg.norm(self.barycenter))

    def is_closed(self, tol: float = CLOSURE_TOL) -> bool:
        return self.closure_defect() <= tol * max(self.total_mass, np.finfo(float).tiny)

    def scaled(self, alpha: float) -> "SurfaceAreaMeasure":
        if alpha < 0:
            raise ValidationError("negative measure scale")
        if alpha == 0:
            return self.empty()
        return self._raw(self.angles, alpha * self.weights)

    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.angles.tolist(), self.weights.tolist()))


@dataclass(frozen=True)
class DiracPair:
    """beta * (delta_z + delta_{-z})."""

    direction: float
    beta: float

    def measure(self) -> SurfaceAreaMeasure:
        if self.beta < 0:
            raise ValidationError("negative Dirac weight")
        return SurfaceAreaMeasure.from_atoms(
            [self.direction, self.direction + np.pi], [self.beta, self.beta]
        )


def surface_measure(body: ConvexBody2D) -> SurfaceAreaMeasure:
    """One atom per edge: outward normal angle, edge length."""
    if isinstance(body, Ball):
        return ball_measure(body.radius, body.resolution)
    if body.kind == "point":
        raise EmptyMeasureError("a point has no boundary")
    e = body.edges()
    normals = np.arctan2(e[:, 1], e[:, 0]) - 0.5 * np.pi
    return SurfaceAreaMeasure.from_atoms(normals, np.linalg.norm(e, axis=1))


def blaschke_sum(
    m1: SurfaceAreaMeasure, m2: SurfaceAreaMeasure, angle_tol: float = ANGLE_TOL
) -> SurfaceAreaMeasure:
    return SurfaceAreaMeasure.from_atoms(
        np.concatenate([m1.angles, m2.angles]),
        np.concatenate([m1.weights, m2.weights]),
        angle_tol,
    )


def ball_measure(radius: float, resolution: int) -> SurfaceAreaMeasure:
    """Uniform perimeter density of the disk binned to the angle grid."""
    if radius < 0:
        raise ValidationError("negative radius")
    if resolution < 3:
        raise ValidationError("resolution must be at least 3")
    if radius == 0:
        return SurfaceAreaMeasure.empty()
    return SurfaceAreaMeasure._raw(
        grid_angles(resolution), np.full(resolution, radius * TWO_PI / resolution)
    )


def reconstruct(
    m: SurfaceAreaMeasure,
    angle_tol: float = ANGLE_TOL,
    closure_tol: float = CLOSURE_TOL,
) -> ConvexBody2D:
    """Polygon with the given surface measure, vertex centroid at the origin."""
    if len(m) < 2:
        raise NotASurfaceMeasureError("a surface measure needs at least two atoms")
    mass = m.total_mass
    gaps = np.diff(np.concatenate([m.angles, [m.angles[0] + TWO_PI]]))
    if len(m) == 2 and abs(gaps[0] - np.pi) <= angle_tol:
        if abs(m.weights[0] - m.weights[1]) > closure_tol * mass:
            raise NotASurfaceMeasureError("antipodal atoms of unequal weight")
        length = 0.5 * mass
        return segment(length, m.angles[0] + 0.5 * np.pi)
    if gaps.max() >= np.pi - angle_tol:
        raise UnboundedBodyError("atoms confined to a half-circle")
    edges = m.weights[:, None] * unit(m.angles + 0.5 * np.pi)
    gap = edges.sum(axis=0)
    if np.linalg.norm(gap) > closure_tol * mass:
        raise NotASurfaceMeasureError(
            f"barycenter {np.linalg.norm(gap):.3e} exceeds closure tolerance"
        )
    n = len(edges)
    pts = np.concatenate([np.zeros((1, 2)), np.cumsum(edges[:-1], axis=0)])
    pts -= np.outer(np.arange(n) / n, gap)
    return centered(ConvexBody2D(pts))


def bin_to_grid(
    m: SurfaceAreaMeasure, resolution: int, angle_tol: float = ANGLE_TOL
) -> np.ndarray:
    """Weights on the uniform grid; every atom must sit on a grid angle."""
    out = np.zeros(resolution)
    if len(m) == 0:
        return out
    pos = m.angles * resolution / TWO_PI
    idx = np.rint(pos).astype(int) % resolution
    off = _circular_distance(m.angles, grid_angles(resolution)[idx])
    if np.any(off > angle_tol):
        bad = m.angles[off > angle_tol][0]
        raise GridMismatchError(
            f"atom at {np.degrees(bad):.9f} deg is off the {resolution}-direction grid"
        )
    np.add.at(out, idx, m.weights)
    return out


def measure_from_grid(values, resolution: int, floor: float = 0.0) -> SurfaceAreaMeasure:
    values = np.asarray(values, dtype=float)
    keep = values > floor
    return SurfaceAreaMeasure._raw(grid_angles(resolution)[keep], values[keep])


def dominance_gap(
    m1: SurfaceAreaMeasure, m2: SurfaceAreaMeasure, angle_tol: float = ANGLE_TOL
) -> float:
    """Smallest (m1 - m2) over the atoms of m2 after angle alignment."""
    if len(m2) == 0:
        return 0.0
    if len(m1) == 0:
        return float(-m2.weights.max())
    near = _circular_distance(m2.angles[:, None], m1.angles[None, :]) <= angle_tol
    covered = near.astype(float) @ m1.weights
    return float(np.min(covered - m2.weights))


def measure_dominates(
    m1: SurfaceAreaMeasure,
    m2: SurfaceAreaMeasure,
    angle_tol: float = ANGLE_TOL,
    mass_tol: float = 1e-9,
) -> bool:
    """Binwise reading of m1 >> m2: m1 covers every atom of m2 up to mass_tol."""
    return dominance_gap(m1, m2, angle_tol) >= -mass_tol
