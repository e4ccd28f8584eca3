"""Random convex bodies for the brute-force oracle and for tests."""
from __future__ import annotations

import numpy as np

from .geometry import ConvexBody2D, from_support, grid_angles


def random_hull_polygon(rng: np.random.Generator, k: int | None = None) -> ConvexBody2D:
    """Convex hull of k uniform points in the unit square, k in [5, 50]."""
    if k is None:
        k = int(rng.integers(5, 51))
    while True:
        body = ConvexBody2D.from_points(rng.uniform(-1.0, 1.0, size=(k, 2)))
        if body.kind == "polygon":
            return body


def random_support_polygon(rng: np.random.Generator) -> ConvexBody2D:
    """Perturbed ellipse support values on a coarse grid, pushed back to a convex body.

    The half-plane intersection of the perturbed values is the largest body
    whose support function stays below them, which is the projection used here.
    """
    m = int(rng.integers(8, 65))
    theta = grid_angles(m) + rng.uniform(0, 2 * np.pi / m)
    a, b = rng.uniform(0.3, 1.0, size=2)
    phi = rng.uniform(0, np.pi)
    h = np.sqrt((a * np.cos(theta - phi)) ** 2 + (b * np.sin(theta - phi)) ** 2)
    sigma = rng.uniform(0.0, 0.3)
    h = h * np.exp(sigma * rng.standard_normal(m))
    return from_support(theta, h)


def random_body(rng: np.random.Generator) -> ConvexBody2D:
    """Either scheme with probability 1/2."""
    if rng.random() < 0.5:
        return random_support_polygon(rng)
    return random_hull_polygon(rng)
