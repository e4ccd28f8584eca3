"""Forward construction of criterion instances with known multipliers.

Each builder picks the figure and the multipliers first, assembles the
candidate from its surface measure and then chooses x0 so that the contact
set is exactly where the figure lives.  Used by the tests and the CLI demo.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import (
    TWO_PI,
    ConvexBody2D,
    from_support,
    grid_angles,
    minkowski_sum,
    segment,
    support_grid,
    translate,
)
from .measures import measure_from_grid, reconstruct
from .problems import UrysohnFlatteningInstance


@dataclass(frozen=True, eq=False)
class SynthesizedCase:
    inst: UrysohnFlatteningInstance
    xbar: ConvexBody2D
    figure: ConvexBody2D
    alpha: float
    beta: float


def grid_zonogon(rng: np.random.Generator, resolution: int, lengths, forbidden=()):
    """Sum of segments whose normals are distinct grid directions.

    Returns the body, its binned surface measure and the occupied bins.
    """
    half = resolution // 2
    banned = {k % half for k in forbidden}
    choices = np.array([k for k in range(half) if k not in banned])
    idx = rng.choice(choices, size=len(lengths), replace=False)
    w = np.zeros(resolution)
    body = None
    for k, length in zip(idx, lengths):
        seg = segment(float(length), TWO_PI * k / resolution + 0.5 * np.pi)
        body = seg if body is None else minkowski_sum(body, seg)
        w[k] += length
        w[k + half] += length
    bins = np.flatnonzero(w > 0)
    return body, w, bins


def _direction_bin(rng: np.random.Generator, resolution: int) -> int:
    return int(rng.integers(0, resolution // 2))


def _dirac(resolution: int, k: int) -> np.ndarray:
    d = np.zeros(resolution)
    d[k] = d[(k + resolution // 2) % resolution] = 1.0
    return d


def internal_feasible(
    rng: np.random.Generator, resolution: int = 1024, alpha: float | None = None, beta: float | None = None
) -> SynthesizedCase:
    """mu(xbar) = mu(x) + alpha mu(B) + beta Diracs with x0 circumscribed along supp mu(x)."""
    M = resolution
    kz = _direction_bin(rng, M)
    alpha = float(rng.uniform(0.2, 2.0)) if alpha is None else float(alpha)
    beta = float(rng.uniform(0.1, 1.0)) if beta is None else float(beta)
    n_seg = int(rng.integers(2, 5))
    figure, w, bins = grid_zonogon(rng, M, rng.uniform(0.2, 1.0, n_seg), forbidden=(kz,))
    m = w + alpha * TWO_PI / M + beta * _dirac(M, kz)
    xbar = reconstruct(measure_from_grid(m, M))
    theta = grid_angles(M)[bins]
    x0 = from_support(theta, support_grid(xbar, M)[bins])
    t = 0.5 * _perimeter(xbar)
    inst = UrysohnFlatteningInstance(x0, TWO_PI * kz / M, t, "internal", M)
    return SynthesizedCase(inst, xbar, figure, alpha, beta)


def internal_infeasible(rng: np.random.Generator, resolution: int = 1024) -> SynthesizedCase:
    """A small grid zonogon strictly inside a large box: no contact, positive residual mass."""
    M = resolution
    kz = _direction_bin(rng, M)
    n_seg = int(rng.integers(2, 5))
    xbar, _, _ = grid_zonogon(rng, M, rng.uniform(0.2, 1.0, n_seg))
    box = ConvexBody2D.from_points(np.array([[-10.0, -10.0], [10.0, -10.0], [10.0, 10.0], [-10.0, 10.0]]))
    xbar = translate(xbar, -xbar.centroid())
    inst = UrysohnFlatteningInstance(box, TWO_PI * kz / M, 0.5 * _perimeter(xbar), "internal", M)
    return SynthesizedCase(inst, xbar, xbar, 0.0, 0.0)


def external_feasible(
    rng: np.random.Generator, resolution: int = 1024, alpha: float | None = None, beta: float | None = None
) -> SynthesizedCase:
    """mu(xbar) + mu(x) = alpha mu(B) + beta Diracs with x0 the hull of xbar's contact edges."""
    M = resolution
    kz = _direction_bin(rng, M)
    alpha = float(rng.uniform(0.5, 2.0)) if alpha is None else float(alpha)
    beta = float(rng.uniform(0.1, 1.0)) if beta is None else float(beta)
    cap = 0.5 * alpha * TWO_PI / M
    n_seg = int(rng.integers(2, 5))
    figure, w, bins = grid_zonogon(rng, M, rng.uniform(0.2, 1.0, n_seg) * cap, forbidden=(kz,))
    m = alpha * TWO_PI / M + beta * _dirac(M, kz) - w
    xbar = reconstruct(measure_from_grid(m, M))
    verts = xbar.vertices
    # outward normal of edge v_i -> v_{i+1} for a CCW polygon is (dy, -dx)
    e = xbar.edges()
    normals = np.mod(np.arctan2(-e[:, 0], e[:, 1]), TWO_PI)
    edge_bin = np.rint(normals * M / TWO_PI).astype(int) % M
    keep = np.isin(edge_bin, bins)
    pts = np.concatenate([verts[keep], np.roll(verts, -1, axis=0)[keep]])
    x0 = ConvexBody2D.from_points(pts)
    t = 0.5 * _perimeter(xbar)
    inst = UrysohnFlatteningInstance(x0, TWO_PI * kz / M, t, "external", M)
    return SynthesizedCase(inst, xbar, figure, alpha, beta)


def _perimeter(body: ConvexBody2D) -> float:
    return float(np.linalg.norm(body.edges(), axis=1).sum())
