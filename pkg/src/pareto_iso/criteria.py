"""Feasibility checkers for the Pareto-optimality certificates.

All checks run on the shared grid of M directions: every surface measure is
binned to the grid (atoms off the grid are an error), the ball measure is the
uniform density 2*pi/M per bin and Dirac pairs must sit on grid directions.
A feasible report is a numerical certificate on that grid.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .errors import EmptyMeasureError, GridMismatchError, PreconditionError
from .geometry import (
    TWO_PI,
    Ball,
    ConvexBody2D,
    breadth,
    contains,
    grid_angles,
    support,
    support_grid,
    unit,
)
from .measures import (
    ANGLE_TOL,
    DiracPair,
    SurfaceAreaMeasure,
    bin_to_grid,
    blaschke_sum,
    measure_dominates,
    measure_from_grid,
    surface_measure,
)
from .mixed import DIMENSION, area, mixed_area, pairing, urysohn_slackness
from .problems import HullsInstance, UrysohnFlatteningInstance

# pairing mu(xbar) + mu(x) = alpha mu(B) + beta (d_z + d_-z) with h_xbar
CONSISTENT_FLATTENING_COEF = 1.0 / DIMENSION
_HIGHS = {"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10}


@dataclass(frozen=True)
class Tolerances:
    """contact: * body scale; mass: * total mass; slack: * scale**2; angle: radians."""

    contact: float = 1e-7
    mass: float = 1e-9
    angle: float = ANGLE_TOL
    slack: float = 1e-9


@dataclass(eq=False)
class CriterionReport:
    criterion: str
    feasible: bool
    alpha: float | list[float] | None = None
    beta: float | None = None
    measures: dict[str, SurfaceAreaMeasure] = field(default_factory=dict)
    contact: list[float] | list[list[float]] = field(default_factory=list)
    residuals: dict[str, float] = field(default_factory=dict)
    message: str = ""


def _grid_index(theta: float, resolution: int, angle_tol: float) -> int:
    pos = theta * resolution / TWO_PI
    k = int(np.rint(pos)) % resolution
    off = abs((theta - TWO_PI * k / resolution + np.pi) % TWO_PI - np.pi)
    if off > angle_tol:
        raise GridMismatchError(f"direction {np.degrees(theta)} deg is not a grid direction")
    return k


def _binned(body: ConvexBody2D, resolution: int, angle_tol: float) -> np.ndarray:
    try:
        return bin_to_grid(surface_measure(body), resolution, angle_tol)
    except EmptyMeasureError:
        return np.zeros(resolution)


def _dirac_bins(direction: float, resolution: int, angle_tol: float) -> np.ndarray:
    if resolution % 2:
        raise GridMismatchError("Dirac pairs need an even grid resolution")
    k = _grid_index(direction, resolution, angle_tol)
    d = np.zeros(resolution)
    d[k] = d[(k + resolution // 2) % resolution] = 1.0
    return d


def contact_set(inner: ConvexBody2D, outer: ConvexBody2D, resolution: int, tol: float) -> np.ndarray:
    """Boolean mask of grid directions where the two support functions meet."""
    return np.abs(support_grid(inner, resolution) - support_grid(outer, resolution)) <= tol


def _clip(poly: list[np.ndarray], a: np.ndarray, c: float) -> list[np.ndarray]:
    """Convex polygon intersected with {p : a.p <= c}."""
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        fp, fq = a @ p - c, a @ q - c
        if fp <= 0:
            out.append(p)
        if (fp < 0 < fq) or (fq < 0 < fp):
            out.append(p + fp / (fp - fq) * (q - p))
    return out


def _multiplier_region(m, b, d, contact, tol):
    """Vertices of {(alpha, beta) >= 0 : residual >= -tol, residual = 0 off contact}."""
    hi_a = np.min((m + tol)[b > 0] / b[b > 0])
    hi_b = np.min((m + tol)[d > 0] / d[d > 0]) if np.any(d > 0) else 0.0
    if hi_a < 0 or hi_b < 0:
        return []
    poly = [np.array(v, dtype=float) for v in [(0, 0), (hi_a, 0), (hi_a, hi_b), (0, hi_b)]]
    rows = {}
    for j in range(len(m)):
        rows[(b[j], d[j], m[j] + tol)] = None
        if not contact[j]:
            rows[(-b[j], -d[j], -(m[j] - tol))] = None
    for (ba, da, c) in rows:
        poly = _clip(poly, np.array([ba, da]), c)
        if not poly:
            break
    return poly


def internal_urysohn_check(
    xbar: ConvexBody2D,
    inst: UrysohnFlatteningInstance,
    tol: Tolerances = Tolerances(),
) -> CriterionReport:
    """Look for alpha, beta >= 0 with mu(xbar) - alpha mu(B) - beta (d_z + d_-z) >= 0 on the contact set only."""
    M = inst.resolution
    scale = max(inst.x0.scale, xbar.scale)
    if not contains(inst.x0, xbar, tol.contact * scale):
        raise PreconditionError("candidate is not contained in x0")
    if pairing(xbar, Ball(1.0, M)) < inst.t - tol.slack * max(inst.t, 1.0):
        raise PreconditionError("candidate violates the integral-breadth constraint")
    m = _binned(xbar, M, tol.angle)
    b = np.full(M, TWO_PI / M)
    d = _dirac_bins(inst.direction, M, tol.angle)
    contact = contact_set(xbar, inst.x0, M, tol.contact * scale)
    mass_tol = tol.mass * max(m.sum(), np.finfo(float).tiny)
    contact_deg = np.degrees(grid_angles(M)[contact]).tolist()

    region = _multiplier_region(m, b, d, contact, mass_tol)
    if not region:
        return CriterionReport(
            "urysohn-internal", False, contact=contact_deg,
            message="no alpha, beta >= 0 leaves a residual supported in the contact set",
        )
    verts = np.array(region)
    off = ~contact
    choice = verts.mean(axis=0)
    if off.any():
        coef = np.stack([b[off], d[off]], axis=1)
        sol, _, rank, _ = np.linalg.lstsq(coef, m[off], rcond=None)
        if rank == 2 and _inside(sol, m, b, d, contact, mass_tol):
            choice = sol
    alpha, beta = (float(max(v, 0.0)) for v in choice)
    resid = m - alpha * b - beta * d
    resid[np.abs(resid) <= mass_tol] = 0.0
    figure = measure_from_grid(resid, M)
    rhs = resid + alpha * b + beta * d
    on_contact = bool(np.all(contact[resid > 0]))
    return CriterionReport(
        "urysohn-internal",
        feasible=bool(on_contact and np.all(resid >= 0)),
        alpha=alpha,
        beta=beta,
        measures={
            "figure": figure,
            "candidate": measure_from_grid(m, M),
        },
        contact=contact_deg,
        residuals={
            "reassembly": float(np.max(np.abs(rhs - m))),
            "figure_closure": figure.closure_defect(),
            "region_vertices": float(len(region)),
        },
    )


def _inside(p, m, b, d, contact, tol) -> bool:
    if np.any(p < -tol):
        return False
    r = m - p[0] * b - p[1] * d
    return bool(np.all(r >= -2 * tol) and np.all(np.abs(r[~contact]) <= 2 * tol))


def external_urysohn_check(
    xbar: ConvexBody2D,
    inst: UrysohnFlatteningInstance,
    tol: Tolerances = Tolerances(),
) -> CriterionReport:
    """LP over (alpha, beta, figure weights on the contact set).

    Constraints: mu(xbar) + mu(x) dominates alpha mu(B) + beta Diracs binwise,
    mu(x) is closed, and the mixed-volume identity holds with flattening
    coefficient 1/N.  Among feasible certificates the smallest figure is taken.
    """
    M = inst.resolution
    scale = max(inst.x0.scale, xbar.scale)
    if not contains(xbar, inst.x0, tol.contact * scale):
        raise PreconditionError("candidate does not contain x0")
    if pairing(xbar, Ball(1.0, M)) < inst.t - tol.slack * max(inst.t, 1.0):
        raise PreconditionError("candidate violates the integral-breadth constraint")
    m = _binned(xbar, M, tol.angle)
    b = np.full(M, TWO_PI / M)
    d = _dirac_bins(inst.direction, M, tol.angle)
    contact = contact_set(xbar, inst.x0, M, tol.contact * scale)
    contact_deg = np.degrees(grid_angles(M)[contact]).tolist()
    h = support_grid(xbar, M)
    idx = np.flatnonzero(contact)
    k = len(idx)
    mass = max(m.sum(), np.finfo(float).tiny)
    mass_tol = tol.mass * mass
    slack_tol = tol.slack * max(scale, 1.0) ** 2
    volume = area(xbar)
    ball_pairing = 0.5 * float(h @ b)
    width = float(breadth(xbar, inst.direction))

    # rows scaled by the ball bin weight so alpha enters with coefficient ~1
    n = 2 + k
    a_ub, b_ub = [], []
    for j in range(M):
        row = np.zeros(n)
        row[0], row[1] = b[j], d[j]
        if contact[j]:
            row[2 + np.searchsorted(idx, j)] = -1.0
        a_ub.append(row / b[j])
        b_ub.append((m[j] + mass_tol) / b[j])
    u = unit(grid_angles(M)[idx])
    for comp in range(2):
        row = np.zeros(n)
        row[2:] = u[:, comp]
        a_ub += [row, -row]
        b_ub += [mass_tol, mass_tol]
    row = np.zeros(n)
    row[0] = ball_pairing
    row[1] = CONSISTENT_FLATTENING_COEF * width
    row[2:] = -0.5 * h[idx]
    a_ub += [row, -row]
    b_ub += [volume + slack_tol, -(volume - slack_tol)]
    cost = np.zeros(n)
    cost[2:] = 1.0
    res = linprog(cost, A_ub=np.array(a_ub), b_ub=np.array(b_ub), bounds=[(0, None)] * n,
                  method="highs", options=_HIGHS)
    if res.status != 0:
        return CriterionReport(
            "urysohn-external", False, contact=contact_deg,
            message=f"no certificate: {res.message}",
        )
    alpha, beta = float(res.x[0]), float(res.x[1])
    w = np.zeros(M)
    w[idx] = res.x[2:]
    w[w <= mass_tol] = 0.0
    figure = measure_from_grid(w, M)
    lhs = blaschke_sum(measure_from_grid(m, M), figure, tol.angle)
    rhs = blaschke_sum(SurfaceAreaMeasure._raw(grid_angles(M), alpha * b),
                       DiracPair(inst.direction, beta).measure(), tol.angle)
    dominated = measure_dominates(lhs, rhs, tol.angle, 2 * mass_tol)
    slack = volume + 0.5 * float(h @ w) - alpha * ball_pairing - CONSISTENT_FLATTENING_COEF * beta * width
    return CriterionReport(
        "urysohn-external",
        feasible=bool(dominated and abs(slack) <= 2 * slack_tol),
        alpha=alpha,
        beta=beta,
        measures={"figure": figure, "candidate": measure_from_grid(m, M)},
        contact=contact_deg,
        residuals={
            "slackness": float(slack),
            "figure_closure": figure.closure_defect(),
            "dominance_gap": float(np.min(m + w - alpha * b - beta * d)),
        },
    )


def verify_external_certificate(
    xbar: ConvexBody2D,
    figure: ConvexBody2D,
    alpha: float,
    beta: float,
    inst: UrysohnFlatteningInstance,
    tol: Tolerances = Tolerances(),
    flattening_coef: float = CONSISTENT_FLATTENING_COEF,
) -> CriterionReport:
    """Check a given (alpha, beta, x) against the external criterion."""
    M = inst.resolution
    scale = max(inst.x0.scale, xbar.scale)
    mu_bar = surface_measure(xbar)
    try:
        mu_x = surface_measure(figure)
    except EmptyMeasureError:
        mu_x = SurfaceAreaMeasure.empty()
    lhs = blaschke_sum(mu_bar, mu_x, tol.angle)
    rhs = blaschke_sum(SurfaceAreaMeasure._raw(grid_angles(M), np.full(M, alpha * TWO_PI / M)),
                       DiracPair(inst.direction, beta).measure(), tol.angle)
    mass_tol = tol.mass * max(lhs.total_mass, np.finfo(float).tiny)
    dominated = measure_dominates(lhs, rhs, tol.angle, mass_tol)
    gap = support(xbar, mu_x.angles) - support(inst.x0, mu_x.angles) if len(mu_x) else np.zeros(0)
    supported = bool(np.all(np.abs(gap) <= tol.contact * scale))
    slack = urysohn_slackness(xbar, figure, alpha, beta, inst.direction, flattening_coef)
    literal = urysohn_slackness(xbar, figure, alpha, beta, inst.direction)
    slack_tol = tol.slack * max(scale, 1.0) ** 2
    return CriterionReport(
        "urysohn-external",
        feasible=bool(dominated and supported and abs(slack) <= slack_tol),
        alpha=float(alpha),
        beta=float(beta),
        measures={"figure": mu_x, "candidate": mu_bar},
        residuals={"slackness": float(slack), "slackness_literal": float(literal),
                   "max_contact_gap": float(np.max(np.abs(gap))) if len(gap) else 0.0},
    )


def optimal_hulls_check(inst: HullsInstance, tol: Tolerances = Tolerances()) -> CriterionReport:
    """Find alpha_k >= 0 and splits alpha_k mu(xbar_k) = mu_k + nu_k with sum nu_k = mu(B).

    mu_k may only live where xbar_k touches y_k.  Per bin this is the interval
    condition sum_{k free} alpha_k m_kj <= b_j <= sum_k alpha_k m_kj, solved as
    one LP in alpha minimizing sum alpha.
    """
    M = inst.resolution
    for y, x in zip(inst.containers, inst.candidates):
        s = max(y.scale, x.scale)
        if not contains(y, x, tol.contact * s):
            raise PreconditionError("a candidate is not contained in its container")
    mk = np.array([_binned(x, M, tol.angle) for x in inst.candidates])
    contacts = np.array([
        contact_set(x, y, M, tol.contact * max(y.scale, x.scale))
        for y, x in zip(inst.containers, inst.candidates)
    ])
    b = np.full(M, TWO_PI / M)
    mass_tol = tol.mass * b.sum()
    n = len(mk)
    free = ~contacts
    # rows scaled by b_j; the lower bound is exact so alpha is not biased low
    a_ub = np.concatenate([-(mk.T), (mk * free).T]) / np.concatenate([b, b])[:, None]
    b_ub = np.concatenate([-np.ones(M), np.full(M, 1.0 + tol.mass)])
    contact_deg = [np.degrees(grid_angles(M)[c]).tolist() for c in contacts]
    res = linprog(np.ones(n), A_ub=a_ub, b_ub=b_ub, bounds=[(0, None)] * n,
                  method="highs", options=_HIGHS)
    if res.status != 0:
        return CriterionReport("hulls", False, contact=contact_deg,
                               message=f"no multipliers: {res.message}")
    alpha = np.maximum(res.x, 0.0)
    if alpha.sum() <= 1e-12:
        return CriterionReport("hulls", False, alpha=alpha.tolist(), contact=contact_deg,
                               message="multipliers vanish simultaneously")
    scaled = alpha[:, None] * mk
    nu = np.where(free, scaled, 0.0)
    remaining = b - nu.sum(axis=0)
    capacity = np.where(contacts, scaled, 0.0)
    cap_total = capacity.sum(axis=0)
    share = np.divide(capacity, cap_total, out=np.zeros_like(capacity), where=cap_total > 0)
    nu = nu + share * np.maximum(remaining, 0.0)
    mu = scaled - nu
    mu[np.abs(mu) <= mass_tol] = 0.0
    measures = {}
    for k in range(n):
        measures[f"mu_{k + 1}"] = measure_from_grid(mu[k], M)
        measures[f"nu_{k + 1}"] = measure_from_grid(nu[k], M)
    nu_err = float(np.max(np.abs(nu.sum(axis=0) - b)))
    split_err = float(np.max(np.abs(mu + nu - scaled)))
    support_ok = bool(np.all(contacts[mu > 0]))
    return CriterionReport(
        "hulls",
        feasible=bool(nu_err <= 2 * mass_tol and np.all(mu >= 0) and support_ok),
        alpha=alpha.tolist(),
        measures=measures,
        contact=contact_deg,
        residuals={"nu_sum": nu_err, "split": split_err},
    )
