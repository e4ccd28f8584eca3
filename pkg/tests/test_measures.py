import numpy as np
import pytest
from hypothesis import given, strategies as st

from pareto_iso.errors import (
    EmptyMeasureError,
    GridMismatchError,
    NotASurfaceMeasureError,
    UnboundedBodyError,
    ValidationError,
)
from pareto_iso.geometry import Ball, ConvexBody2D, minkowski_sum, point, scale, segment, support_grid, translate
from pareto_iso.measures import (
    DiracPair,
    SurfaceAreaMeasure,
    ball_measure,
    bin_to_grid,
    blaschke_sum,
    measure_dominates,
    reconstruct,
    surface_measure,
)
from pareto_iso.mixed import perimeter

from conftest import polygons

SQUARE_ATOMS = [(0.0, 1.0), (0.5 * np.pi, 1.0), (np.pi, 1.0), (1.5 * np.pi, 1.0)]


def atoms(pairs):
    a, w = zip(*pairs)
    return SurfaceAreaMeasure.from_atoms(a, w)


def vertex_distance(a, b):
    """Max vertex distance after moving both vertex centroids to the origin."""
    if len(a) != len(b):
        return np.inf
    return float(np.max(np.linalg.norm((a.vertices - a.centroid()) - (b.vertices - b.centroid()), axis=1)))


def support_distance(a, b, m=720):
    ha, hb = support_grid(a, m), support_grid(b, m)
    theta = 2 * np.pi * np.arange(m) / m
    u = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    # best translation in the least-squares sense, then the max deviation
    t, *_ = np.linalg.lstsq(u, ha - hb, rcond=None)
    return float(np.max(np.abs(ha - hb - u @ t)))


class TestMeasureType:
    def test_negative_weight_rejected(self):
        with pytest.raises(ValidationError):
            atoms([(0.0, -1.0)])

    def test_atoms_merge_across_wraparound(self):
        m = atoms([(0.0, 1.0), (2 * np.pi - 1e-12, 2.0)])
        assert len(m) == 1 and m.total_mass == pytest.approx(3.0)

    def test_angles_normalized(self):
        m = atoms([(-0.5 * np.pi, 1.0)])
        assert m.angles[0] == pytest.approx(1.5 * np.pi)


class TestSurfaceMeasure:
    def test_unit_square(self, unit_square):
        m = surface_measure(unit_square)
        assert np.allclose(m.angles, [a for a, _ in SQUARE_ATOMS])
        assert np.allclose(m.weights, 1.0)

    def test_segment_two_sided(self):
        m = surface_measure(segment(2.0))
        assert np.allclose(m.angles, [0.5 * np.pi, 1.5 * np.pi])
        assert np.allclose(m.weights, 2.0)

    def test_point_has_no_measure(self):
        with pytest.raises(EmptyMeasureError):
            surface_measure(point((0, 0)))

    def test_random_triangle_closure(self, rng):
        for _ in range(50):
            tri = ConvexBody2D.from_points(rng.uniform(-1, 1, (3, 2)))
            m = surface_measure(tri)
            assert m.closure_defect() <= 1e-12 * perimeter(tri)

    @given(polygons(), st.floats(-10, 10), st.floats(-10, 10))
    def test_translation_invariance(self, body, dx, dy):
        a = surface_measure(body)
        b = surface_measure(translate(body, (dx, dy)))
        assert np.allclose(a.angles, b.angles, atol=1e-9) and np.allclose(a.weights, b.weights, rtol=1e-9)

    @given(polygons())
    def test_mass_equals_perimeter(self, body):
        assert surface_measure(body).total_mass == pytest.approx(perimeter(body), rel=1e-12)

    @given(polygons(), st.floats(0.01, 100))
    def test_scaling_degree_one(self, body, alpha):
        a = surface_measure(body)
        b = surface_measure(scale(body, alpha))
        assert np.allclose(b.weights, alpha * a.weights, rtol=1e-9)

    @given(polygons(), polygons())
    def test_additivity(self, a, b):
        direct = surface_measure(minkowski_sum(a, b))
        summed = blaschke_sum(surface_measure(a), surface_measure(b))
        assert len(direct) == len(summed)
        assert np.allclose(direct.angles, summed.angles, atol=1e-9)
        assert np.allclose(direct.weights, summed.weights, rtol=1e-9, atol=1e-12 * max(a.scale, b.scale))


class TestBlaschke:
    def test_square_doubles(self, unit_square):
        m = blaschke_sum(surface_measure(unit_square), surface_measure(unit_square))
        assert np.allclose(m.weights, 2.0)

    def test_empty_identity(self, unit_square):
        mu = surface_measure(unit_square)
        m = blaschke_sum(mu, SurfaceAreaMeasure.empty())
        assert np.array_equal(m.angles, mu.angles) and np.array_equal(m.weights, mu.weights)

    @given(polygons(), polygons())
    def test_blaschke_equals_minkowski(self, a, b):
        s = reconstruct(blaschke_sum(surface_measure(a), surface_measure(b)))
        assert support_distance(s, minkowski_sum(a, b)) <= 1e-9 * max(a.scale, b.scale, 1.0)


class TestReconstruct:
    def test_square(self):
        body = reconstruct(atoms(SQUARE_ATOMS))
        assert np.allclose(body.centroid(), 0.0, atol=1e-15)
        assert np.allclose(np.sort(np.abs(body.vertices).ravel()), 0.5)

    def test_ball_measure_perimeter(self):
        body = reconstruct(ball_measure(1.0, 1024))
        assert perimeter(body) == pytest.approx(2 * np.pi, abs=1e-3)

    def test_ball_measure_breadth(self):
        body = reconstruct(ball_measure(2.0, 1024))
        h = support_grid(body, 1024)
        assert np.allclose(h + np.roll(h, 512), 4.0, atol=1e-2)

    def test_antipodal_pair_is_segment(self):
        body = reconstruct(atoms([(0.5 * np.pi, 2.0), (1.5 * np.pi, 2.0)]))
        assert body.kind == "segment" and perimeter(body) == pytest.approx(4.0)

    def test_closure_violation(self):
        with pytest.raises(NotASurfaceMeasureError):
            reconstruct(atoms([(0, 1), (2.0, 1), (4.0, 1.5)]))

    def test_half_circle_unbounded(self):
        with pytest.raises(UnboundedBodyError):
            reconstruct(atoms([(0.0, 1.0), (0.5 * np.pi, 1.0)]))

    def test_empty_measure(self):
        with pytest.raises(NotASurfaceMeasureError):
            reconstruct(SurfaceAreaMeasure.empty())

    @given(polygons())
    def test_roundtrip_body(self, body):
        back = reconstruct(surface_measure(body))
        assert vertex_distance(back, body) <= 1e-9 * body.scale

    @given(polygons())
    def test_roundtrip_measure(self, body):
        mu = surface_measure(body)
        again = surface_measure(reconstruct(mu))
        assert np.allclose(again.angles, mu.angles, atol=1e-9)
        assert np.allclose(again.weights, mu.weights, rtol=1e-9, atol=1e-12 * body.scale)


class TestBallMeasure:
    def test_radius_zero_empty(self):
        assert len(ball_measure(0.0, 64)) == 0

    def test_four_atoms(self):
        m = ball_measure(1.0, 4)
        assert np.allclose(m.weights, np.pi / 2) and m.total_mass == pytest.approx(2 * np.pi)

    def test_ball_surface_measure_is_binned_disk(self):
        m = surface_measure(Ball(1.5, 64))
        assert np.allclose(m.weights, 1.5 * 2 * np.pi / 64)

    def test_dirac_pair(self):
        m = DiracPair(0.25 * np.pi, 0.5).measure()
        assert np.allclose(m.angles, [0.25 * np.pi, 1.25 * np.pi]) and np.allclose(m.weights, 0.5)


class TestGridAndDominance:
    def test_bin_to_grid(self, unit_square):
        w = bin_to_grid(surface_measure(unit_square), 8)
        assert np.allclose(w, [1, 0, 1, 0, 1, 0, 1, 0])

    def test_off_grid_atom(self):
        with pytest.raises(GridMismatchError):
            bin_to_grid(atoms([(0.1, 1.0)]), 8)

    def test_reflexive(self, unit_square):
        mu = surface_measure(unit_square)
        assert measure_dominates(mu, mu)

    def test_bigger_square(self, unit_square):
        assert measure_dominates(surface_measure(scale(unit_square, 2)), surface_measure(unit_square))

    def test_rotated_square(self, unit_square):
        diamond = ConvexBody2D([[1, 0], [0, 1], [-1, 0], [0, -1]])
        assert not measure_dominates(surface_measure(unit_square), surface_measure(diamond))

    @given(polygons(), polygons())
    def test_minkowski_sum_dominates_summand(self, a, b):
        assert measure_dominates(surface_measure(minkowski_sum(a, b)), surface_measure(a))
