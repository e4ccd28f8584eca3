import numpy as np
import pytest
from hypothesis import given

from pareto_iso.criteria import (
    Tolerances,
    contact_set,
    external_urysohn_check,
    internal_urysohn_check,
    optimal_hulls_check,
    verify_external_certificate,
)
from pareto_iso.errors import DomainError, GridMismatchError, PreconditionError
from pareto_iso.geometry import TWO_PI, Ball, ConvexBody2D, grid_angles, point, translate
from pareto_iso.measures import ball_measure, bin_to_grid, surface_measure
from pareto_iso.problems import HullsInstance, UrysohnFlatteningInstance
from pareto_iso.synthesis import external_feasible, internal_feasible, internal_infeasible

from conftest import seeds

M = 1024


def box(half):
    return ConvexBody2D([[-half, -half], [half, -half], [half, half], [-half, half]])


def reassemble_internal(report, inst):
    """Rebuild mu(xbar) from the reported pieces on the grid."""
    fig = bin_to_grid(report.measures["figure"], inst.resolution)
    d = np.zeros(inst.resolution)
    k = int(round(inst.direction * inst.resolution / TWO_PI)) % inst.resolution
    d[k] = d[(k + inst.resolution // 2) % inst.resolution] = 1.0
    return fig + report.alpha * TWO_PI / inst.resolution + report.beta * d


class TestInternal:
    def test_synthesized_fixed_multipliers(self):
        case = internal_feasible(np.random.default_rng(0), alpha=0.3, beta=0.2)
        rep = internal_urysohn_check(case.xbar, case.inst)
        assert rep.feasible
        assert rep.alpha == pytest.approx(0.3, abs=1e-6)
        assert rep.beta == pytest.approx(0.2, abs=1e-6)

    def test_zero_beta(self):
        case = internal_feasible(np.random.default_rng(1), alpha=0.7, beta=0.0)
        rep = internal_urysohn_check(case.xbar, case.inst)
        assert rep.feasible and rep.beta <= 1e-9

    @given(seeds)
    def test_sound_and_complete_on_synthesis(self, seed):
        case = internal_feasible(np.random.default_rng(seed))
        rep = internal_urysohn_check(case.xbar, case.inst)
        assert rep.feasible
        assert abs(rep.alpha - case.alpha) <= 1e-6 and abs(rep.beta - case.beta) <= 1e-6
        target = bin_to_grid(surface_measure(case.xbar), M)
        mass_tol = Tolerances().mass * target.sum()
        assert np.max(np.abs(reassemble_internal(rep, case.inst) - target)) <= mass_tol
        contact = np.degrees(grid_angles(M)[contact_set(case.xbar, case.inst.x0, M, 1e-7 * case.inst.x0.scale)])
        fig_deg = np.degrees(rep.measures["figure"].angles)
        assert np.all(np.min(np.abs(fig_deg[:, None] - contact[None, :]), axis=1) < 1e-9)
        # the recovered figure is itself a closed measure
        assert rep.measures["figure"].closure_defect() <= 1e-9 * max(1.0, rep.measures["figure"].total_mass)

    @given(seeds)
    def test_rejects_interior_zonogon(self, seed):
        case = internal_infeasible(np.random.default_rng(seed))
        rep = internal_urysohn_check(case.xbar, case.inst)
        assert not rep.feasible and rep.contact == []

    def test_interior_disk_is_certifiable(self):
        # a disk has mu = alpha mu(B) with no residual, so the empty contact set is no obstacle
        inst = UrysohnFlatteningInstance(box(5.0), 0.0, 0.5 * TWO_PI * 0.1, "internal", M)
        rep = internal_urysohn_check(Ball(0.1, M), inst)
        assert rep.feasible
        assert rep.alpha == pytest.approx(0.1, abs=1e-9) and rep.beta <= 1e-9
        assert len(rep.measures["figure"]) == 0

    def test_interior_square_rejected(self):
        inst = UrysohnFlatteningInstance(box(5.0), 0.0, 1.0, "internal", M)
        assert not internal_urysohn_check(box(0.5), inst).feasible

    def test_not_contained(self):
        inst = UrysohnFlatteningInstance(box(0.5), 0.0, 1.0, "internal", M)
        with pytest.raises(PreconditionError):
            internal_urysohn_check(box(1.0), inst)

    def test_breadth_constraint_violated(self):
        inst = UrysohnFlatteningInstance(box(5.0), 0.0, 100.0, "internal", M)
        with pytest.raises(PreconditionError):
            internal_urysohn_check(box(1.0), inst)

    def test_off_grid_candidate(self):
        tri = ConvexBody2D([[0, 0], [1, 0.1], [0.2, 1]])
        inst = UrysohnFlatteningInstance(box(5.0), 0.0, 0.1, "internal", M)
        with pytest.raises(GridMismatchError):
            internal_urysohn_check(tri, inst)

    def test_off_grid_direction(self):
        inst = UrysohnFlatteningInstance(box(5.0), 0.001, 1.0, "internal", M)
        with pytest.raises(DomainError):
            internal_urysohn_check(box(1.0), inst)


class TestExternal:
    def test_disk_identity(self):
        b = Ball(1.0, M)
        inst = UrysohnFlatteningInstance(b, 0.0, np.pi, "external", M)
        rep = verify_external_certificate(b, b, 2.0, 0.0, inst)
        assert rep.feasible
        assert abs(rep.residuals["slackness_literal"]) <= 1e-6
        assert abs(rep.residuals["slackness"]) <= 1e-6

    def test_disk_lp_finds_a_certificate(self):
        b = Ball(1.0, M)
        rep = external_urysohn_check(b, UrysohnFlatteningInstance(b, 0.0, np.pi, "external", M))
        assert rep.feasible

    def test_synthesized_fixed_multipliers(self):
        case = external_feasible(np.random.default_rng(3), alpha=0.8, beta=0.2)
        rep = external_urysohn_check(case.xbar, case.inst)
        assert rep.feasible
        assert rep.alpha == pytest.approx(0.8, abs=1e-6) and rep.beta == pytest.approx(0.2, abs=1e-6)

    @given(seeds)
    def test_sound_and_complete_on_synthesis(self, seed):
        case = external_feasible(np.random.default_rng(seed))
        rep = external_urysohn_check(case.xbar, case.inst)
        assert rep.feasible
        assert abs(rep.alpha - case.alpha) <= 1e-6 and abs(rep.beta - case.beta) <= 1e-6
        # recovered figure matches the planted one atom by atom
        planted = bin_to_grid(surface_measure(case.figure), M)
        got = bin_to_grid(rep.measures["figure"], M)
        assert np.max(np.abs(planted - got)) <= 1e-6
        assert rep.residuals["dominance_gap"] >= -2e-9 * bin_to_grid(surface_measure(case.xbar), M).sum()

    def test_containment_violated(self):
        inst = UrysohnFlatteningInstance(box(2.0), 0.0, 1.0, "external", M)
        with pytest.raises(PreconditionError):
            external_urysohn_check(box(1.0), inst)

    def test_polygon_inside_disk_fails(self):
        # a square containing a much smaller disk touches nowhere, so no figure can carry mass
        inst = UrysohnFlatteningInstance(Ball(0.1, M), 0.0, 1.0, "external", M)
        assert not external_urysohn_check(box(1.0), inst).feasible


class TestHulls:
    def test_ball_in_ball(self):
        b = Ball(1.0, M)
        rep = optimal_hulls_check(HullsInstance((b,), (b,), M))
        assert rep.feasible
        assert rep.alpha[0] == pytest.approx(1.0, abs=1e-9)
        nu = rep.measures["nu_1"]
        ref = ball_measure(1.0, M)
        assert np.array_equal(nu.angles, ref.angles)
        assert np.max(np.abs(nu.weights - ref.weights)) <= 1e-9
        assert len(rep.measures["mu_1"]) == 0

    def test_interior_square_rejected(self):
        rep = optimal_hulls_check(HullsInstance((Ball(2.0, M),), (box(0.5),), M))
        assert not rep.feasible

    def test_interior_disk_accepted(self):
        rep = optimal_hulls_check(HullsInstance((Ball(2.0, M),), (Ball(0.5, M),), M))
        assert rep.feasible and rep.alpha[0] == pytest.approx(2.0, abs=1e-9)

    def test_interior_polygonal_disk_accepted(self):
        # off-centre copy is a plain M-gon; its edge lengths exceed the disk bins by tan(x)/x
        disk = translate(Ball(0.5, M), (0.3, 0.0))
        rep = optimal_hulls_check(HullsInstance((Ball(2.0, M),), (disk,), M))
        factor = np.tan(np.pi / M) / (np.pi / M)
        assert rep.feasible and rep.alpha[0] == pytest.approx(2.0 / factor, rel=1e-9)

    def test_vanishing_multipliers(self):
        rep = optimal_hulls_check(HullsInstance((Ball(1.0, M),), (point((0, 0)),), M))
        assert not rep.feasible

    def test_two_touching_balls(self):
        b = Ball(1.0, M)
        rep = optimal_hulls_check(HullsInstance((b, b), (b, b), M))
        assert rep.feasible
        assert sum(rep.alpha) == pytest.approx(1.0, abs=1e-9)
        total = bin_to_grid(rep.measures["nu_1"], M) + bin_to_grid(rep.measures["nu_2"], M)
        assert np.allclose(total, TWO_PI / M, atol=1e-12)

    def test_square_in_its_own_square(self):
        # contact everywhere the square has mass, but nu must fill every grid bin
        rep = optimal_hulls_check(HullsInstance((box(1.0),), (box(1.0),), M))
        assert not rep.feasible

    def test_grid_mismatch(self):
        tri = ConvexBody2D([[0, 0], [1, 0.1], [0.2, 1]])
        with pytest.raises(DomainError):
            optimal_hulls_check(HullsInstance((Ball(3.0, M),), (tri,), M))

    def test_not_contained(self):
        with pytest.raises(PreconditionError):
            optimal_hulls_check(HullsInstance((Ball(0.1, M),), (box(1.0),), M))
