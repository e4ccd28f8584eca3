import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from pareto_iso.geometry import ConvexBody2D
from pareto_iso.sampling import random_body, random_hull_polygon

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def polygons(draw):
    """Either hypothesis-drawn points or one of the sampling schemes."""
    if draw(st.booleans()):
        pts = draw(
            st.lists(
                st.tuples(st.floats(-5, 5, allow_nan=False), st.floats(-5, 5, allow_nan=False)),
                min_size=3,
                max_size=30,
            )
        )
        body = ConvexBody2D.from_points(np.array(pts))
        if body.kind == "polygon" and body.scale > 1e-2:
            e = body.edges()
            f = np.roll(e, -1, axis=0)
            turn = e[:, 0] * f[:, 1] - e[:, 1] * f[:, 0]
            if np.linalg.norm(e, axis=1).min() > 1e-4 * body.scale and turn.min() > 1e-8 * body.scale**2:
                return body
    rng = np.random.default_rng(draw(seeds))
    return random_body(rng)


def support_brute(body, theta):
    """max over vertices of <v, u(theta)>."""
    theta = np.atleast_1d(theta)
    u = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    return (body.vertices @ u.T).max(axis=0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def unit_square():
    return ConvexBody2D([[0, 0], [1, 0], [1, 1], [0, 1]])


def random_polygons(rng, n):
    return [random_hull_polygon(rng) for _ in range(n)]
