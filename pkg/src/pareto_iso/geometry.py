"""Planar convex bodies and the Minkowski algebra on them.

A body is stored as its vertex list in counter-clockwise order.  Segments
(two vertices) and points (one vertex) are ordinary bodies.  The vertex list
is rotated so that the first edge is the one with the smallest direction
angle in [0, 2pi); Minkowski sums rely on that.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import DomainError, InvalidBodyError

TWO_PI = 2.0 * np.pi
DEFAULT_RESOLUTION = 1024
COLLINEAR_TOL = 1e-12
_WRAP_EPS = 1e-14


def normalize_angle(theta):
    """Map angles into [0, 2pi); values within rounding of 2pi fold to 0."""
    t = np.mod(theta, TWO_PI)
    top = TWO_PI - _WRAP_EPS
    return np.where(t >= top, 0.0, t) if np.ndim(t) else (0.0 if t >= top else float(t))


def unit(theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def grid_angles(resolution: int) -> np.ndarray:
    return TWO_PI * np.arange(resolution) / resolution


def _next(a: np.ndarray) -> np.ndarray:
    """a shifted by one along axis 0 (a[i + 1], cyclic); cheaper than np.roll."""
    return np.concatenate([a[1:], a[:1]])


def _prev(a: np.ndarray) -> np.ndarray:
    return np.concatenate([a[-1:], a[:-1]])


def _cross(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def _edge_angles(edges: np.ndarray) -> np.ndarray:
    return normalize_angle(np.arctan2(edges[:, 1], edges[:, 0]))


def _drop_duplicates(v: np.ndarray, tol: float) -> np.ndarray:
    while len(v) > 1:
        gap = np.linalg.norm(_next(v) - v, axis=1)
        keep = gap > tol
        if keep.all():
            break
        if not keep.any():
            return v[:1]
        # drop one vertex per duplicate pair
        v = v[keep]
    return v


def _merge_collinear(v: np.ndarray, tol: float) -> np.ndarray:
    while len(v) > 2:
        prev = _prev(v)
        nxt = _next(v)
        chord = nxt - prev
        length = np.linalg.norm(chord, axis=1)
        dist = np.abs(_cross(chord, v - prev)) / np.where(length > 0, length, 1.0)
        # a vertex sitting between its neighbours on a straight line
        between = np.einsum("ij,ij->i", v - prev, nxt - v) > 0
        drop = (dist <= tol) & between
        if not drop.any() or drop.all():
            break
        v = v[~drop]
    return v


def _collinear_extremes(v: np.ndarray, tol: float) -> np.ndarray:
    c = v.mean(axis=0)
    d = v - c
    _, _, vt = np.linalg.svd(d, full_matrices=False)
    axis = vt[0]
    s = d @ axis
    lo, hi = v[np.argmin(s)], v[np.argmax(s)]
    if np.linalg.norm(hi - lo) <= tol:
        return v[:1]
    return np.array([lo, hi])


def _rotate_to_canonical_start(v: np.ndarray) -> np.ndarray:
    if len(v) < 2:
        return v
    edges = _next(v) - v
    start = int(np.argmin(_edge_angles(edges)))
    return np.roll(v, -start, axis=0)


def _canonical(v: np.ndarray) -> np.ndarray:
    scale = float(np.max(np.abs(v))) if len(v) else 0.0
    tol = COLLINEAR_TOL * max(scale, np.finfo(float).tiny)
    v = _drop_duplicates(v, tol)
    if len(v) <= 2:
        return _rotate_to_canonical_start(v)
    edges = _next(v) - v
    signed = 0.5 * np.sum(_cross(v, _next(v)))
    diameter = np.max(np.linalg.norm(edges, axis=1))
    if abs(signed) <= tol * diameter * len(v):
        return _rotate_to_canonical_start(_collinear_extremes(v, tol))
    if signed < 0:
        v = v[::-1].copy()
    v = _merge_collinear(v, tol)
    if len(v) <= 2:
        return _rotate_to_canonical_start(v)
    edges = _next(v) - v
    turns = _cross(edges, _next(edges))
    lengths = np.linalg.norm(edges, axis=1)
    if np.any(turns < -tol * (lengths + _next(lengths))):
        raise InvalidBodyError("vertices do not form a convex polygon")
    ang = np.arctan2(turns, np.einsum("ij,ij->i", edges, _next(edges)))
    if abs(ang.sum() - TWO_PI) > 1e-6:
        raise InvalidBodyError("polygon winds more than once")
    return _rotate_to_canonical_start(v)


class ConvexBody2D:
    """Compact convex subset of the plane given by its vertices."""

    __slots__ = ("_v",)

    def __init__(self, vertices, *, validate: bool = True):
        v = np.array(vertices, dtype=float).reshape(-1, 2)
        if len(v) == 0:
            raise InvalidBodyError("body has no vertices")
        if not np.all(np.isfinite(v)):
            raise InvalidBodyError("non-finite vertex coordinates")
        if validate:
            v = _canonical(v)
        v.setflags(write=False)
        self._v = v

    @classmethod
    def from_points(cls, points) -> "ConvexBody2D":
        return cls(convex_hull(points))

    @property
    def vertices(self) -> np.ndarray:
        return self._v

    @property
    def kind(self) -> str:
        return {1: "point", 2: "segment"}.get(len(self._v), "polygon")

    @property
    def scale(self) -> float:
        """Coordinate magnitude used to make tolerances relative."""
        return float(np.max(np.abs(self._v)))

    def edges(self) -> np.ndarray:
        if len(self._v) == 1:
            return np.zeros((0, 2))
        return np.roll(self._v, -1, axis=0) - self._v

    def centroid(self) -> np.ndarray:
        """Vertex centroid."""
        return self._v.mean(axis=0)

    def __len__(self):
        return len(self._v)

    def __repr__(self):
        return f"{type(self).__name__}({self.kind}, n={len(self._v)})"


class Ball(ConvexBody2D):
    """Disk of given radius centred at the origin.

    The vertex list is the regular polygon whose support function equals the
    radius on the ``resolution`` grid directions.  Area, perimeter, surface
    measure and mixed areas of a ``Ball`` use the exact disk values instead
    (see ``mixed`` and ``measures``).
    """

    __slots__ = ("radius", "resolution")

    def __init__(self, radius: float, resolution: int = DEFAULT_RESOLUTION):
        if not radius > 0:
            raise DomainError("ball radius must be positive")
        if resolution < 3:
            raise DomainError("ball resolution must be at least 3")
        phi = (2 * np.arange(resolution) + 1) * np.pi / resolution
        verts = radius / np.cos(np.pi / resolution) * unit(phi)
        super().__init__(_rotate_to_canonical_start(verts), validate=False)
        self.radius = float(radius)
        self.resolution = int(resolution)

    def __repr__(self):
        return f"Ball(r={self.radius}, M={self.resolution})"


def ball(radius: float, resolution: int = DEFAULT_RESOLUTION) -> ConvexBody2D:
    """Ball factory that accepts radius 0 (returns the origin point)."""
    if radius < 0:
        raise DomainError("negative radius")
    if radius == 0:
        return point((0.0, 0.0))
    return Ball(radius, resolution)


def point(p: Sequence[float]) -> ConvexBody2D:
    return ConvexBody2D([p])


def segment(length: float, angle: float = 0.0) -> ConvexBody2D:
    """Segment of given length through the origin, direction ``angle`` (radians)."""
    if length < 0:
        raise DomainError("negative segment length")
    half = 0.5 * length * unit(angle)
    return ConvexBody2D([-half, half])


def _monotone_chain(pts: np.ndarray) -> np.ndarray:
    def half(seq):
        out: list = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-1] - out[-2], p - out[-2]) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    return np.array(lower[:-1] + upper[:-1])


def _hull_indices(pts: np.ndarray) -> np.ndarray | None:
    """CCW hull vertex indices from qhull, None for degenerate (flat) input."""
    try:
        return ConvexHull(pts).vertices
    except QhullError:
        return None


def convex_hull(points) -> np.ndarray:
    """CCW hull vertices without repetition (qhull; monotone chain for flat input)."""
    pts = np.unique(np.asarray(points, dtype=float).reshape(-1, 2), axis=0)
    if len(pts) <= 2:
        return pts
    idx = _hull_indices(pts)
    return _monotone_chain(pts) if idx is None else pts[idx]


def as_body(b) -> ConvexBody2D:
    return b if isinstance(b, ConvexBody2D) else ConvexBody2D(b)


def support(body: ConvexBody2D, theta):
    """Support function h(theta) = max over vertices of <v, (cos, sin)>."""
    u = unit(theta)
    vals = body.vertices @ u.reshape(-1, 2).T
    out = vals.max(axis=0)
    return float(out[0]) if np.ndim(theta) == 0 else out.reshape(np.shape(theta))


def support_grid(body: ConvexBody2D, resolution: int) -> np.ndarray:
    return support(body, grid_angles(resolution))


def is_discretely_convex(h: np.ndarray, tol: float = 0.0) -> bool:
    """h_{k-1} + h_{k+1} >= 2 h_k cos(2pi/M) on a uniform grid."""
    h = np.asarray(h, dtype=float)
    m = len(h)
    lhs = np.roll(h, 1) + _next(h)
    return bool(np.all(lhs - 2 * h * np.cos(TWO_PI / m) >= -tol))


def breadth(body: ConvexBody2D, theta):
    return support(body, theta) + support(body, np.asarray(theta) + np.pi)


def translate(body: ConvexBody2D, t) -> ConvexBody2D:
    return ConvexBody2D(body.vertices + np.asarray(t, dtype=float), validate=False)


def centered(body: ConvexBody2D) -> ConvexBody2D:
    if isinstance(body, Ball):
        return body
    return translate(body, -body.centroid())


def scale(body: ConvexBody2D, alpha: float) -> ConvexBody2D:
    if alpha < 0:
        raise DomainError("scale factor must be nonnegative")
    if alpha == 0:
        return point((0.0, 0.0))
    if isinstance(body, Ball):
        return Ball(alpha * body.radius, body.resolution)
    return ConvexBody2D(alpha * body.vertices, validate=False)


def minkowski_sum(a: ConvexBody2D, b: ConvexBody2D) -> ConvexBody2D:
    """Sum by merging the edge sequences of both bodies by direction angle."""
    if isinstance(a, Ball) and isinstance(b, Ball) and a.resolution == b.resolution:
        return Ball(a.radius + b.radius, a.resolution)
    ea, eb = a.edges(), b.edges()
    start = a.vertices[0] + b.vertices[0]
    if len(ea) == 0 or len(eb) == 0:
        other = b if len(ea) == 0 else a
        return ConvexBody2D(other.vertices - other.vertices[0] + start, validate=False)
    edges = np.concatenate([ea, eb])
    order = np.argsort(_edge_angles(edges), kind="stable")
    pts = start + np.concatenate([np.zeros((1, 2)), np.cumsum(edges[order][:-1], axis=0)])
    return ConvexBody2D(pts)


def minkowski_combination(bodies: Sequence[ConvexBody2D], weights: Sequence[float]) -> ConvexBody2D:
    if len(bodies) != len(weights) or not bodies:
        raise DomainError("need one weight per body")
    out = scale(bodies[0], weights[0])
    for b, w in zip(bodies[1:], weights[1:]):
        out = minkowski_sum(out, scale(b, w))
    return out


def _test_directions(outer: ConvexBody2D) -> np.ndarray:
    e = outer.edges()
    if outer.kind == "polygon":
        return np.stack([e[:, 1], -e[:, 0]], axis=1) / np.linalg.norm(e, axis=1)[:, None]
    if outer.kind == "segment":
        d = e[0] / np.linalg.norm(e[0])
    else:
        d = np.array([1.0, 0.0])
    n = np.array([-d[1], d[0]])
    return np.array([d, -d, n, -n])


def contains(outer: ConvexBody2D, inner: ConvexBody2D, tol: float = 0.0) -> bool:
    """True iff every vertex of ``inner`` lies in ``outer`` up to ``tol``."""
    if isinstance(outer, Ball):
        # nearest grid normal gives the binding constraint for each vertex
        v = inner.vertices
        step = TWO_PI / outer.resolution
        phi = np.arctan2(v[:, 1], v[:, 0])
        off = phi - step * np.rint(phi / step)
        return bool(np.all(np.hypot(v[:, 0], v[:, 1]) * np.cos(off) <= outer.radius + tol))
    u = _test_directions(outer)
    h_out = (outer.vertices @ u.T).max(axis=0)
    h_in = (inner.vertices @ u.T).max(axis=0)
    return bool(np.all(h_in <= h_out + tol))


def convex_hull_union(bodies: Iterable[ConvexBody2D]) -> ConvexBody2D:
    bodies = list(bodies)
    if not bodies:
        raise DomainError("convex hull of an empty collection")
    return ConvexBody2D.from_points(np.concatenate([b.vertices for b in bodies]))


def stadium(r: float, length: float, resolution: int = DEFAULT_RESOLUTION) -> ConvexBody2D:
    """Disk of radius r plus a centred horizontal segment of the given length."""
    if r < 0 or length < 0:
        raise DomainError("stadium parameters must be nonnegative")
    if r + length <= 0:
        raise DomainError("stadium with r = L = 0 is a point")
    seg = segment(length, 0.0)
    if r == 0:
        return seg
    disk = ConvexBody2D(Ball(r, resolution).vertices, validate=False)
    if length == 0:
        return disk
    return minkowski_sum(disk, seg)


def _chebyshev_center(u: np.ndarray, h: np.ndarray) -> tuple[np.ndarray, float]:
    """Centre and radius of the largest disk inside {<x, u_k> <= h_k}."""
    from scipy.optimize import linprog

    a = np.hstack([u, np.ones((len(u), 1))])
    res = linprog([0.0, 0.0, -1.0], A_ub=a, b_ub=h, bounds=[(None, None)] * 2 + [(0, None)],
                  method="highs")
    if res.status != 0:
        raise DomainError("half-planes do not bound a region")
    return res.x[:2], float(res.x[2])


def from_support(angles, values) -> ConvexBody2D:
    """Intersection of the half-planes <x, u_k> <= h_k.

    Works in the polar: the intersection is the polar of the hull of u_k / h_k,
    which needs the origin strictly inside.  Otherwise the constraints are
    re-centred at the Chebyshev centre first.
    """
    angles = np.asarray(angles, dtype=float)
    h = np.asarray(values, dtype=float)
    u = unit(angles)
    shift = np.zeros(2)
    if np.any(h <= 1e-9 * max(float(np.max(np.abs(h))), 1e-300)):
        shift, radius = _chebyshev_center(u, h)
        if radius <= 0:
            raise DomainError("half-planes have an empty interior")
        h = h - u @ shift
    dual = u / h[:, None]
    idx = _hull_indices(dual)
    if idx is None or len(idx) < 3:
        raise DomainError("half-planes do not bound a region")
    if not contains(ConvexBody2D(dual[idx], validate=False), point((0.0, 0.0)), 0.0):
        raise DomainError("half-planes do not bound a region")
    # each hull vertex is one constraint; consecutive constraints meet at a vertex
    j = _next(idx)
    ui, uj, hi, hj = u[idx], u[j], h[idx], h[j]
    det = ui[:, 0] * uj[:, 1] - ui[:, 1] * uj[:, 0]
    x = (hi * uj[:, 1] - hj * ui[:, 1]) / det
    y = (ui[:, 0] * hj - uj[:, 0] * hi) / det
    return ConvexBody2D(np.stack([x, y], axis=1) + shift)
