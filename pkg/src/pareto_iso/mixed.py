"""Area, perimeter, mixed area and solids of revolution.

The pairing <y, x> is the mixed area V1(x, y) = 1/2 * integral of h_y d mu(x);
the dimension is fixed at N = 2.  Whenever one argument is a ``Ball`` the
exact disk value is used (Cauchy: V1(K, rB) = r * perimeter(K) / 2).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainError
from .geometry import Ball, ConvexBody2D, breadth, support, unit
from .measures import surface_measure

DIMENSION = 2
# printed factor 2N of the mixed-volume identity for the external problem
LITERAL_FLATTENING_COEF = 2.0 * DIMENSION


def area(body: ConvexBody2D) -> float:
    if isinstance(body, Ball):
        return np.pi * body.radius**2
    if body.kind != "polygon":
        return 0.0
    v = body.vertices
    w = np.roll(v, -1, axis=0)
    return 0.5 * float(np.sum(v[:, 0] * w[:, 1] - v[:, 1] * w[:, 0]))


def perimeter(body: ConvexBody2D) -> float:
    """Length of the boundary; a segment of length L counts both sides (2L)."""
    if isinstance(body, Ball):
        return 2.0 * np.pi * body.radius
    return float(np.linalg.norm(body.edges(), axis=1).sum())


def mixed_area(k: ConvexBody2D, l: ConvexBody2D) -> float:
    """V1(k, l) = 1/2 sum_i h_k(theta_i) w_i over the atoms of mu(l)."""
    if isinstance(k, Ball) and isinstance(l, Ball):
        return np.pi * k.radius * l.radius
    if isinstance(k, Ball):
        return 0.5 * k.radius * perimeter(l)
    if isinstance(l, Ball):
        return 0.5 * l.radius * perimeter(k)
    if l.kind == "point":
        return 0.0
    m = surface_measure(l)
    return 0.5 * float(support(k, m.angles) @ m.weights)


def pairing(y: ConvexBody2D, x: ConvexBody2D) -> float:
    """<y, x> = (1/N) integral of h_y d mu(x) with N = 2."""
    return mixed_area(y, x)


_UNIT_BALL = Ball(1.0)


def urysohn_slackness(
    xbar: ConvexBody2D,
    x: ConvexBody2D,
    alpha: float,
    beta: float,
    zbar: float,
    flattening_coef: float = LITERAL_FLATTENING_COEF,
) -> float:
    """V(xbar) + V1(x, xbar) - alpha V1(B, xbar) - coef * beta * b_zbar(xbar).

    ``flattening_coef`` defaults to the printed 2N.  Pairing the measure
    relation with h_xbar gives 1/N instead; the external checker uses that.
    """
    if alpha < 0 or beta < 0:
        raise DomainError("multipliers must be nonnegative")
    return (
        area(xbar)
        + mixed_area(x, xbar)
        - alpha * pairing(_UNIT_BALL, xbar)
        - flattening_coef * beta * breadth(xbar, zbar)
    )


@dataclass(frozen=True)
class RevolutionQuantities:
    volume: float
    lateral_area: float
    vertical_breadth: float


def _clip_halfplane(poly: np.ndarray) -> np.ndarray:
    """Keep the part of a closed polygon (s, z) with s >= 0."""
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        pin, qin = p[0] >= 0, q[0] >= 0
        if pin:
            out.append(p)
        if pin != qin:
            t = p[0] / (p[0] - q[0])
            out.append(np.array([0.0, p[1] + t * (q[1] - p[1])]))
    return np.array(out).reshape(-1, 2)


def meridian_frame(meridian: ConvexBody2D, axis_direction: float) -> np.ndarray:
    """Vertices in (radial, axial) coordinates about the axis through the centroid."""
    a = unit(axis_direction)
    n = np.array([a[1], -a[0]])
    d = meridian.vertices - meridian.centroid()
    return np.stack([d @ n, d @ a], axis=1)


def is_axially_symmetric(meridian: ConvexBody2D, axis_direction: float, tol: float = 1e-9) -> bool:
    """Mirror image of the vertex set about the axis through the centroid is the vertex set."""
    local = meridian_frame(meridian, axis_direction)
    scale = max(float(np.max(np.abs(local))), np.finfo(float).tiny)
    dist, _ = cKDTree(local).query(local * np.array([-1.0, 1.0]))
    return bool(np.max(dist) <= tol * scale)


def solid_of_revolution(
    meridian: ConvexBody2D, axis_direction: float = 0.5 * np.pi, tol: float = 1e-9
) -> RevolutionQuantities:
    """Rotate a meridian symmetric about the axis through its centroid.

    Exact for polygons: every edge sweeps a frustum.
    """
    if not is_axially_symmetric(meridian, axis_direction, tol):
        raise DomainError("meridian is not symmetric about the rotation axis")
    vb = float(breadth(meridian, axis_direction))
    if meridian.kind != "polygon":
        return RevolutionQuantities(0.0, 0.0, vb)
    half = _clip_halfplane(meridian_frame(meridian, axis_direction))
    s1, z1 = half[:, 0], half[:, 1]
    s2, z2 = np.roll(s1, -1), np.roll(z1, -1)
    volume = abs(np.pi / 3.0 * np.sum((z2 - z1) * (s1**2 + s1 * s2 + s2**2)))
    slant = np.hypot(s2 - s1, z2 - z1)
    surface = float(np.pi * np.sum((s1 + s2) * slant))
    return RevolutionQuantities(float(volume), surface, vb)
