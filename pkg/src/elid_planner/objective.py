"""Relevance-weighted effective coverage, constraint penalties and PSO fitness.

The road axis is cut at every clipped coverage boundary (points of interest);
each resulting cell is credited once, with the widest placed unit that spans
it and the length-weighted relevance of the sectors it overlaps.

`evaluate_batch` is the numeric workhorse: it scores a whole swarm at once
and is the only path used for fitness values. The per-cell helpers below
(`points_of_interest`, `cell_width`, `cell_relevance`, `partition`) exist for
reporting and testing and agree with it to rounding.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import ScenarioConfig
from .datamodel import DataEnergyProfile, data_generated, energy_consumed
from .geometry import CoverageFootprint, Placement, RoadGeometry, footprint_arrays


@dataclass(frozen=True)
class PartitionCell:
    lo: float
    hi: float
    width: float
    gamma: float
    area: float


@dataclass(frozen=True)
class FitnessBreakdown:
    coverage: float
    lamp_count_penalty: float
    constraint_penalty: float
    fitness: float
    feasible: bool

    @property
    def reported_coverage(self) -> float:
        """Coverage under the reporting rule: any violated constraint scores zero."""
        return self.coverage if self.feasible else 0.0


def points_of_interest(footprints: Sequence[CoverageFootprint], placements: Sequence[Placement],
                       d_road: float) -> list[float]:
    # unplaced units still contribute boundaries; their width is zeroed later
    if len(footprints) != len(placements):
        raise ValueError("footprints and placements must be aligned")
    pts = [0.0, float(d_road)]
    for fp in footprints:
        pts += [fp.x_start, fp.x_end]
    return sorted(pts)


def cell_width(lo: float, hi: float, footprints: Sequence[CoverageFootprint],
               placements: Sequence[Placement], road: RoadGeometry) -> float:
    best = 0.0
    for fp, p in zip(footprints, placements):
        if p.placed and fp.x_start <= lo and hi <= fp.x_end:
            best = max(best, min(fp.l_width, road.width))
    return best


def cell_relevance(lo: float, hi: float, road: RoadGeometry) -> float:
    if hi <= lo:
        return 0.0
    total = 0.0
    for q_prev, q, score in zip(road.sector_starts, road.sector_ends, road.sector_scores):
        if q_prev < hi and q > lo:
            total += score * (min(hi, q) - max(lo, q_prev))
    return total / (hi - lo)


def partition(footprints, placements, road: RoadGeometry) -> list[PartitionCell]:
    psi = points_of_interest(footprints, placements, road.d_road)
    cells = []
    for lo, hi in zip(psi[:-1], psi[1:]):
        w = cell_width(lo, hi, footprints, placements, road)
        cells.append(PartitionCell(lo, hi, w, cell_relevance(lo, hi, road), (hi - lo) * w))
    return cells


def effective_coverage_cells(footprints, placements, road: RoadGeometry, eta: float = 1.0) -> float:
    """Cell-by-cell coverage ratio; a readable reference for `effective_coverage`."""
    total = sum(c.gamma * c.area for c in partition(footprints, placements, road))
    return total / (eta * road.width * road.d_road)


def _coverage_from_extents(x_start, x_end, capped_width, road: RoadGeometry, eta: float):
    """Coverage ratio per row; inputs are (n, m) arrays, capped_width already masked by placement."""
    n, m = x_start.shape
    psi = np.concatenate(
        [np.zeros((n, 1)), x_start, x_end, np.full((n, 1), road.d_road)], axis=1)
    psi.sort(axis=1)
    lo, hi = psi[:, :-1], psi[:, 1:]
    length = hi - lo

    kappa = (x_start[:, None, :] <= lo[:, :, None]) & (hi[:, :, None] <= x_end[:, None, :])
    width = np.where(kappa, capped_width[:, None, :], 0.0).max(axis=2) if m else np.zeros_like(lo)

    q = np.asarray(road.sector_ends)
    q_prev = np.asarray(road.sector_starts)
    score = np.asarray(road.sector_scores)
    lo3, hi3 = lo[:, :, None], hi[:, :, None]
    mu = (q_prev < hi3) & (q > lo3)
    weighted = np.where(mu, score * (np.minimum(hi3, q) - np.maximum(lo3, q_prev)), 0.0).sum(axis=2)
    safe = np.where(length > 0, length, 1.0)
    gamma = np.where(length > 0, weighted / safe, 0.0)

    return (gamma * (length * width)).sum(axis=1) / (eta * road.width * road.d_road)


def _penalty_term(load, limit, rho):
    # a zero limit forbids any load; the raw excess stands in for the ratio
    if limit > 0:
        h = load / limit - 1.0
    else:
        h = np.where(load > 0, load, -1.0)
    return h, rho * np.maximum(h, 0.0) ** 2


def evaluate_batch(x, z, eps, cfg: ScenarioConfig) -> dict:
    """Score ``n`` candidate layouts given as (n, m) arrays of position, height, flag."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    z = np.atleast_2d(np.asarray(z, dtype=float))
    eps = np.atleast_2d(np.asarray(eps, dtype=float))
    road, lidar = cfg.road, cfg.lidar
    fp = footprint_arrays(lidar, road, x, z, cfg.width_sign)
    capped = eps * np.minimum(fp["l_width"], road.width)
    coverage = _coverage_from_extents(fp["x_start"], fp["x_end"], capped, road, cfg.eta)

    d_m = data_generated(lidar, fp["a_total"])
    e_m = energy_consumed(lidar, d_m)
    h_thr, p_thr = _penalty_term((eps * d_m).sum(axis=1), cfg.bandwidth, cfg.rho)
    h_en, p_en = _penalty_term(eps * e_m, cfg.energy_limit, cfg.rho)
    constraint = p_thr + p_en.sum(axis=1)
    lamps = cfg.lam * eps.sum(axis=1)
    return {
        "coverage": coverage,
        "lamp_penalty": lamps,
        "constraint_penalty": constraint,
        "fitness": -coverage + lamps + constraint,
        "feasible": constraint == 0,
        "h_throughput": h_thr,
        "h_energy": h_en,
        "d_m": d_m,
        "e_m": e_m,
    }


def _as_arrays(placements: Sequence[Placement]):
    x = np.array([[p.x for p in placements]], dtype=float).reshape(1, -1)
    z = np.array([[p.z for p in placements]], dtype=float).reshape(1, -1)
    e = np.array([[p.placed for p in placements]], dtype=float).reshape(1, -1)
    return x, z, e


def effective_coverage(footprints: Sequence[CoverageFootprint], placements: Sequence[Placement],
                       road: RoadGeometry, eta: float = 1.0) -> float:
    if len(footprints) != len(placements):
        raise ValueError("footprints and placements must be aligned")
    xs = np.array([[fp.x_start for fp in footprints]], dtype=float).reshape(1, -1)
    xe = np.array([[fp.x_end for fp in footprints]], dtype=float).reshape(1, -1)
    w = np.array([[p.placed * min(fp.l_width, road.width) for fp, p in zip(footprints, placements)]],
                 dtype=float).reshape(1, -1)
    return float(_coverage_from_extents(xs, xe, w, road, eta)[0])


def constraint_penalties(placements: Sequence[Placement], profiles: Sequence[DataEnergyProfile],
                         bandwidth: float, energy_limit: float, rho: float = 1.0):
    """Exterior quadratic penalties for the shared throughput cap and per-unit energy caps.

    Returns ``(total, values)`` where ``values`` maps constraint names to
    ``(h, penalty)`` pairs; ``h <= 0`` means satisfied.
    """
    eps = np.array([p.placed for p in placements], dtype=float)
    d_m = np.array([pr.d_m for pr in profiles], dtype=float)
    e_m = np.array([pr.e_m for pr in profiles], dtype=float)
    h_thr, p_thr = _penalty_term((eps * d_m).sum(), bandwidth, rho)
    h_en, p_en = _penalty_term(eps * e_m, energy_limit, rho)
    values = {"throughput": (float(h_thr), float(p_thr))}
    for i, (h, p) in enumerate(zip(np.atleast_1d(h_en), np.atleast_1d(p_en))):
        values[f"energy[{i}]"] = (float(h), float(p))
    return float(p_thr + np.sum(p_en)), values


def penalty(h: float, rho: float = 1.0) -> float:
    return rho * max(h, 0.0) ** 2


def fitness(placements: Sequence[Placement], cfg: ScenarioConfig) -> FitnessBreakdown:
    if len(placements) == 0:
        return FitnessBreakdown(0.0, 0.0, 0.0, 0.0, True)
    for p in placements:
        p.validate(cfg.road)
    r = evaluate_batch(*_as_arrays(placements), cfg)
    return FitnessBreakdown(
        coverage=float(r["coverage"][0]),
        lamp_count_penalty=float(r["lamp_penalty"][0]),
        constraint_penalty=float(r["constraint_penalty"][0]),
        fitness=float(r["fitness"][0]),
        feasible=bool(r["feasible"][0]),
    )
