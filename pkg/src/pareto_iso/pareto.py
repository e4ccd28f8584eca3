"""Weighted-sum scalarization, frontier sweeps and a sampling dominance oracle."""
from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, NoSolutionError
from .geometry import ConvexBody2D
from .sampling import random_body

THREADS_ENV = "PARETO_ISO_THREADS"
DOMINANCE_TOL = 1e-7
N_STARTS = 8
CONVERGENCE = 1e-10
ORACLE_CHUNK = 1000
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class ParetoPoint:
    objectives: tuple[float, ...]
    params: tuple[float, ...]
    body: ConvexBody2D
    weights: tuple[float, ...] = ()


@dataclass(frozen=True, eq=False)
class OracleVerdict:
    dominated: bool
    witness: ConvexBody2D | None
    samples_used: int
    witness_objectives: tuple[float, ...] | None = None


class ParametricProblem:
    """A feasible parametric family plus the objective evaluators.

    Subclasses set ``objective_names`` and ``bounds`` and implement ``realize``
    (parameters -> feasible body or None), ``objectives`` and ``rescale``
    (map an arbitrary body onto the equality constraints, None if impossible).
    """

    objective_names: tuple[str, ...] = ()
    bounds: list[tuple[float, float]] = []

    def realize(self, params) -> ConvexBody2D | None:
        raise NotImplementedError

    def objectives(self, body: ConvexBody2D) -> np.ndarray:
        raise NotImplementedError

    def rescale(self, body: ConvexBody2D) -> ConvexBody2D | None:
        raise NotImplementedError

    def report_params(self, params, body: ConvexBody2D) -> tuple[float, ...]:
        return tuple(float(p) for p in params)

    def evaluate(self, params) -> np.ndarray | None:
        body = self.realize(params)
        return None if body is None else self.objectives(body)


def resolve_workers(workers: int | None = None) -> int:
    if workers is None:
        try:
            workers = int(os.environ.get(THREADS_ENV, "0"))
        except ValueError:
            workers = 0
    if workers <= 0:
        workers = os.cpu_count() or 1
    return workers


def dominance_filter(points: Sequence[ParetoPoint], tol: float = 0.0) -> list[ParetoPoint]:
    """Drop every point that another point beats: <= everywhere and < by more than tol somewhere."""
    if not points:
        return []
    dims = {len(p.objectives) for p in points}
    if len(dims) != 1:
        raise DomainError("points have different objective dimensions")
    obj = np.array([p.objectives for p in points], dtype=float)
    le = np.all(obj[:, None, :] <= obj[None, :, :], axis=2)  # le[j, i]: j <= i
    lt = np.any(obj[:, None, :] < obj[None, :, :] - tol, axis=2)
    dominated = np.any(le & lt, axis=0)
    kept = [p for p, d in zip(points, dominated) if not d]
    return sorted(kept, key=lambda p: p.objectives[0])


def _golden(f, lo: float, hi: float, x0: float, f0: float, xtol: float):
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    best = min([(f0, x0), (fc, c), (fd, d), (f(lo), lo), (f(hi), hi)], key=lambda t: t[0])
    return best[1], best[0]


def _coordinate_descent(f, start: np.ndarray, bounds, rel_tol: float, max_rounds: int = 200):
    x = start.copy()
    fx = f(x)
    for _ in range(max_rounds):
        f_old = fx
        for i, (lo, hi) in enumerate(bounds):
            def line(t, i=i):
                y = x.copy()
                y[i] = t
                return f(y)

            xi, fx = _golden(line, lo, hi, x[i], fx, rel_tol * (hi - lo))
            x[i] = xi
        if math.isfinite(fx) and abs(f_old - fx) <= rel_tol * max(abs(fx), 1e-300):
            break
    return x, fx


def weighted_sum_scalarize(
    problem: ParametricProblem,
    weights: Sequence[float],
    n_starts: int = N_STARTS,
    seed: int = 0,
    rel_tol: float = CONVERGENCE,
) -> ParetoPoint:
    """Minimize sum_j w_j objective_j over the family (multi-start coordinate descent).

    Weights are normally on the simplex; any positive multiple gives the same argmin.
    """
    w = np.asarray(weights, dtype=float)
    if len(w) != len(problem.objective_names):
        raise DomainError("one weight per objective required")
    if np.any(w < 0) or not np.any(w > 0):
        raise DomainError("weights must be nonnegative and not all zero")

    def f(p):
        val = problem.evaluate(p)
        return math.inf if val is None else float(w @ val)

    bounds = problem.bounds
    lo = np.array([b[0] for b in bounds])
    hi = np.array([b[1] for b in bounds])
    rng = np.random.default_rng(seed)
    starts = [0.5 * (lo + hi)]
    if len(bounds) > 1:
        starts += [rng.uniform(lo, hi) for _ in range(n_starts - 1)]
    if not bounds:
        starts = [np.zeros(0)]
    best_x, best_f = None, math.inf
    for s in starts:
        x, fx = _coordinate_descent(f, s, bounds, rel_tol)
        if fx < best_f:
            best_x, best_f = x, fx
    if best_x is None:
        raise NoSolutionError("no feasible member of the family")
    body = problem.realize(best_x)
    return ParetoPoint(
        objectives=tuple(float(v) for v in problem.objectives(body)),
        params=problem.report_params(best_x, body),
        body=body,
        weights=tuple(float(v) for v in w),
    )


def simplex_grid(n_objectives: int, size: int) -> list[tuple[float, ...]]:
    """Uniform grid on the simplex with ``size`` points per edge."""
    if size < 2:
        raise DomainError("weight grid needs at least 2 points")
    steps = size - 1
    out = []
    for combo in itertools.product(range(steps + 1), repeat=n_objectives - 1):
        rest = steps - sum(combo)
        if rest >= 0:
            out.append(tuple(c / steps for c in combo) + (rest / steps,))
    return out


def _task_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1, dtype=np.uint64)[0])


def _scalarize_task(args):
    problem, weights, n_starts, seed = args
    return weighted_sum_scalarize(problem, weights, n_starts=n_starts, seed=seed)


def _map(fn, tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(fn, tasks))


def frontier_sweep(
    problem: ParametricProblem,
    weight_grid_size: int,
    seed: int = 0,
    n_starts: int = N_STARTS,
    dominance_tol: float = DOMINANCE_TOL,
    workers: int | None = 1,
) -> list[ParetoPoint]:
    """Scalarize on a uniform weight grid, then keep the non-dominated, distinct points."""
    grid = simplex_grid(len(problem.objective_names), weight_grid_size)
    tasks = [(problem, w, n_starts, _task_seed(seed, i)) for i, w in enumerate(grid)]
    points = _map(_scalarize_task, tasks, resolve_workers(workers))
    scale = max(max(abs(v) for v in p.objectives) for p in points)
    kept = dominance_filter(points, dominance_tol * scale)
    out: list[ParetoPoint] = []
    for p in kept:
        if out and np.allclose(p.objectives, out[-1].objectives, rtol=1e-9, atol=1e-12 * scale):
            continue
        out.append(p)
    return out


def _oracle_chunk(args):
    problem, targets, thresholds, seed, chunk_index, count = args
    rng = np.random.default_rng(_task_seed(seed, chunk_index))
    found: dict[int, tuple[int, ConvexBody2D, tuple[float, ...]]] = {}
    open_ = np.ones(len(targets), dtype=bool)
    for i in range(count):
        body = problem.rescale(random_body(rng))
        if body is None:
            continue
        obj = problem.objectives(body)
        hit = open_ & np.all(obj[None, :] < targets - thresholds, axis=1)
        for k in np.flatnonzero(hit):
            found[int(k)] = (i, body, tuple(float(v) for v in obj))
        open_ &= ~hit
        if not open_.any():
            break
    return found


def brute_force_oracle_many(
    problem: ParametricProblem,
    candidates: Sequence[ParetoPoint],
    n_samples: int,
    seed: int = 0,
    rel_tol: float = DOMINANCE_TOL,
    workers: int | None = 1,
) -> list[OracleVerdict]:
    """One shared sample stream checked against every candidate.

    A witness must beat each objective of a candidate by more than
    rel_tol * |objective|.  Results do not depend on ``workers``.
    """
    if n_samples < 0:
        raise DomainError("negative sample count")
    targets = np.array([c.objectives for c in candidates], dtype=float).reshape(len(candidates), -1)
    thresholds = rel_tol * np.abs(targets)
    witnesses: dict[int, tuple[int, ConvexBody2D, tuple[float, ...]]] = {}
    n_chunks = -(-n_samples // ORACLE_CHUNK)
    wave = resolve_workers(workers)
    for first in range(0, n_chunks, wave):
        open_idx = [k for k in range(len(candidates)) if k not in witnesses]
        if not open_idx:
            break
        tasks = []
        for ci in range(first, min(first + wave, n_chunks)):
            count = min(ORACLE_CHUNK, n_samples - ci * ORACLE_CHUNK)
            tasks.append((problem, targets[open_idx], thresholds[open_idx], seed, ci, count))
        for ci, found in zip(range(first, n_chunks), _map(_oracle_chunk, tasks, wave)):
            for local, (i, body, obj) in found.items():
                k = open_idx[local]
                if k not in witnesses:
                    witnesses[k] = (ci * ORACLE_CHUNK + i, body, obj)
    verdicts = []
    for k in range(len(candidates)):
        if k in witnesses:
            idx, body, obj = witnesses[k]
            verdicts.append(OracleVerdict(True, body, idx + 1, obj))
        else:
            verdicts.append(OracleVerdict(False, None, n_samples))
    return verdicts


def brute_force_oracle(
    problem: ParametricProblem,
    candidate: ParetoPoint,
    n_samples: int,
    seed: int = 0,
    rel_tol: float = DOMINANCE_TOL,
    workers: int | None = 1,
) -> OracleVerdict:
    return brute_force_oracle_many(problem, [candidate], n_samples, seed, rel_tol, workers)[0]

