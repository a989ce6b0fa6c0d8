"""Hybrid continuous/binary particle swarm over (x, z, placed) for every unit.

Positions and heights follow the classic inertia-weighted velocity rule;
placement flags share that velocity rule and are then resampled through a
sigmoid of the new velocity. Box bounds are enforced by clamping, with the
velocity zeroed in any clamped coordinate.

Each particle owns a seeded random stream (spawned from the swarm seed), and
the global best is refreshed once per iteration after all particles are
scored, so results do not depend on how evaluation is split across workers.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .config import ScenarioConfig, SwarmConfig
from .geometry import Placement
from .objective import evaluate_batch

log = logging.getLogger(__name__)

__all__ = ["SwarmConfig", "SwarmState", "SolveResult", "update_velocity", "update_binary", "solve"]


def update_velocity(v, x, p_best, g_best, swarm: SwarmConfig, r_p, r_g):
    v_new = (swarm.alpha * v
             + swarm.beta_p * r_p * (p_best - x)
             + swarm.beta_g * r_g * (g_best - x))
    if swarm.velocity_clamp is not None:
        v_new = np.clip(v_new, -swarm.velocity_clamp, swarm.velocity_clamp)
    return v_new


def placement_probability(v, transfer: str = "as_written"):
    """Probability that a flag is set after a velocity update.

    ``"as_written"`` is 1/(1 + exp(v)), decreasing in v; ``"standard"`` is the
    usual logistic 1/(1 + exp(-v)).
    """
    v = np.asarray(v, dtype=float)
    return expit(-v) if transfer == "as_written" else expit(v)


def update_binary(v_new, r_b, transfer: str = "as_written"):
    out = (np.asarray(r_b) < placement_probability(v_new, transfer)).astype(int)
    return int(out) if out.ndim == 0 else out


@dataclass
class SwarmState:
    """Read-only view of the swarm after an iteration (arrays are not copied)."""
    iteration: int
    x: np.ndarray
    z: np.ndarray
    placed: np.ndarray
    vx: np.ndarray
    vz: np.ndarray
    v_placed: np.ndarray
    personal_best_fitness: np.ndarray
    best_fitness: float
    best_coverage: float


@dataclass
class SolveResult:
    best_placements: list[Placement]
    best_fitness: float
    best_coverage: float
    feasible: bool
    iterations_run: int
    convergence_trace: list[tuple[float, float]] = field(default_factory=list)
    constraint_penalty: float = 0.0
    evaluations: int = 0

    @property
    def reported_coverage(self) -> float:
        return self.best_coverage if self.feasible else 0.0

    @property
    def lamps(self) -> int:
        return sum(p.placed for p in self.best_placements)


class _Evaluator:
    def __init__(self, cfg: ScenarioConfig, workers: int):
        self.cfg = cfg
        self.workers = workers
        self._pool = ThreadPoolExecutor(workers) if workers > 1 else None

    def __call__(self, x, z, e):
        if self._pool is None:
            return evaluate_batch(x, z, e, self.cfg)
        chunks = np.array_split(np.arange(len(x)), self.workers)
        parts = list(self._pool.map(lambda idx: evaluate_batch(x[idx], z[idx], e[idx], self.cfg),
                                    [c for c in chunks if len(c)]))
        return {k: np.concatenate([p[k] for p in parts]) for k in ("fitness", "coverage", "feasible",
                                                                     "constraint_penalty")}

    def close(self):
        if self._pool is not None:
            self._pool.shutdown()


def solve(cfg: ScenarioConfig, swarm: SwarmConfig | None = None, initial=None,
          callback=None) -> SolveResult:
    """Minimise the penalised fitness of ``cfg`` with a hybrid PSO/BPSO swarm.

    ``initial`` optionally fixes the starting layout of every particle as a
    tuple of (n_particles, num_elids) arrays ``(x, z, placed)``. ``callback``
    receives a `SwarmState` after every iteration, including iteration 0.
    """
    sw = swarm or cfg.swarm
    road = cfg.road
    n, m = sw.num_particles, cfg.num_elids
    rngs = [np.random.default_rng(s) for s in np.random.SeedSequence(sw.seed).spawn(n)]

    if initial is None:
        x = np.empty((n, m))
        z = np.empty((n, m))
        e = np.empty((n, m))
        for i, rng in enumerate(rngs):
            x[i] = rng.uniform(0.0, road.d_road, m)
            z[i] = rng.uniform(road.z_min, road.z_max, m)
            e[i] = rng.random(m) < 0.5
    else:
        x, z, e = (np.array(a, dtype=float).reshape(n, m) for a in initial)
        if np.any((x < 0) | (x > road.d_road)) or np.any((z < road.z_min) | (z > road.z_max)):
            raise ValueError("initial layout violates box bounds")
        if np.any((e != 0) & (e != 1)):
            raise ValueError("initial placement flags must be 0 or 1")
    vx = np.zeros((n, m))
    vz = np.zeros((n, m))
    ve = np.zeros((n, m))

    evaluate = _Evaluator(cfg, sw.workers)
    try:
        res = evaluate(x, z, e)
        f = res["fitness"]
        px, pz, pe, pf = x.copy(), z.copy(), e.copy(), f.copy()
        pcov, pfeas, ppen = res["coverage"].copy(), res["feasible"].copy(), res["constraint_penalty"].copy()
        g = int(np.argmin(pf))
        gx, gz, ge, gf = px[g].copy(), pz[g].copy(), pe[g].copy(), pf[g]
        gcov, gfeas, gpen = pcov[g], pfeas[g], ppen[g]
        trace = [(float(gf), float(gcov))]
        if callback is not None:
            callback(SwarmState(0, x, z, e, vx, vz, ve, pf, float(gf), float(gcov)))
        evals = n
        stall = 0
        t = 0
        draws = np.empty((n, m, 3, 2))
        r_b = np.empty((n, m))
        while t < sw.t_max:
            t += 1
            for i, rng in enumerate(rngs):
                draws[i] = rng.random((m, 3, 2))
                r_b[i] = rng.random(m)

            vx = update_velocity(vx, x, px, gx, sw, draws[:, :, 0, 0], draws[:, :, 0, 1])
            vz = update_velocity(vz, z, pz, gz, sw, draws[:, :, 1, 0], draws[:, :, 1, 1])
            ve = update_velocity(ve, e, pe, ge, sw, draws[:, :, 2, 0], draws[:, :, 2, 1])

            x = x + vx
            z = z + vz
            out = (x < 0.0) | (x > road.d_road)
            x = np.clip(x, 0.0, road.d_road)
            vx[out] = 0.0
            out = (z < road.z_min) | (z > road.z_max)
            z = np.clip(z, road.z_min, road.z_max)
            vz[out] = 0.0
            e = update_binary(ve, r_b, sw.binary_transfer).astype(float)

            res = evaluate(x, z, e)
            f = res["fitness"]
            evals += n
            better = f < pf
            px[better], pz[better], pe[better], pf[better] = x[better], z[better], e[better], f[better]
            pcov[better] = res["coverage"][better]
            pfeas[better] = res["feasible"][better]
            ppen[better] = res["constraint_penalty"][better]

            i = int(np.argmin(pf))
            improvement = gf - pf[i]
            if pf[i] < gf:
                gx, gz, ge, gf = px[i].copy(), pz[i].copy(), pe[i].copy(), pf[i]
                gcov, gfeas, gpen = pcov[i], pfeas[i], ppen[i]
            trace.append((float(gf), float(gcov)))
            if callback is not None:
                callback(SwarmState(t, x, z, e, vx, vz, ve, pf, float(gf), float(gcov)))

            stall = 0 if improvement > sw.xi else stall + 1
            if stall >= sw.stall_iterations:
                log.debug("stalled for %d iterations at t=%d", stall, t)
                break
    finally:
        evaluate.close()

    best = [Placement(float(a), float(b), int(c)) for a, b, c in zip(gx, gz, ge)]
    return SolveResult(
        best_placements=best,
        best_fitness=float(gf),
        best_coverage=float(gcov),
        feasible=bool(gfeas),
        iterations_run=t,
        convergence_trace=trace,
        constraint_penalty=float(gpen),
        evaluations=evals,
    )
