"""Brute-force checks for the analytic objective and for the swarm.

`raster_coverage` integrates coverage by sampling column midpoints along the
road instead of building the point-of-interest partition. `grid_search`
enumerates every grid layout for one or two units.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import ScenarioConfig
from .geometry import CoverageFootprint, Placement, RoadGeometry
from .objective import evaluate_batch

MAX_GRID_COMBINATIONS = 10**6


class GridTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class RasterConfig:
    resolution: float = 0.05
    mode: str = "columns"  # or "2d" to rasterise the lateral axis as well

    def __post_init__(self):
        if self.resolution <= 0:
            raise ValueError("resolution must be positive")
        if self.mode not in ("columns", "2d"):
            raise ValueError(f"unknown raster mode {self.mode!r}")


def _edges(lo: float, hi: float, step: float) -> np.ndarray:
    n = int(np.ceil((hi - lo) / step - 1e-9))
    e = lo + step * np.arange(n + 1)
    e[-1] = hi
    return e


def raster_coverage(footprints: Sequence[CoverageFootprint], placements: Sequence[Placement],
                    road: RoadGeometry, eta: float = 1.0, raster: RasterConfig | None = None) -> float:
    raster = raster or RasterConfig()
    edges = _edges(0.0, road.d_road, raster.resolution)
    centers = 0.5 * (edges[:-1] + edges[1:])
    col_len = np.diff(edges)

    sector = np.searchsorted(np.asarray(road.sector_ends), centers, side="right")
    sector = np.minimum(sector, len(road.sector_ends) - 1)
    relevance = np.asarray(road.sector_scores)[sector]

    if raster.mode == "columns":
        band = np.zeros_like(centers)
        for fp, p in zip(footprints, placements):
            if not p.placed:
                continue
            inside = (fp.x_start <= centers) & (centers <= fp.x_end)
            band = np.where(inside, np.maximum(band, min(fp.l_width, road.width)), band)
        covered = band
    else:
        y_edges = _edges(road.y_min, road.y_max, raster.resolution)
        y_mid = 0.5 * (y_edges[:-1] + y_edges[1:])
        y_len = np.diff(y_edges)
        mask = np.zeros((len(centers), len(y_mid)), dtype=bool)
        for fp, p in zip(footprints, placements):
            if not p.placed:
                continue
            inside = (fp.x_start <= centers) & (centers <= fp.x_end)
            depth = (y_mid - road.y_min) < min(fp.l_width, road.width)
            mask |= inside[:, None] & depth[None, :]
        covered = (mask * y_len).sum(axis=1)

    total = np.sum(covered * relevance * col_len)
    return float(total / (eta * road.width * road.d_road))


def _axis(lo: float, hi: float, step: float) -> np.ndarray:
    pts = np.arange(lo, hi + 1e-9 * max(1.0, abs(hi)), step)
    pts = pts[pts <= hi]
    if hi - pts[-1] > 1e-9:
        pts = np.append(pts, hi)
    return pts


def grid_search(cfg: ScenarioConfig, x_step: float = 1.0, z_step: float = 0.5,
                chunk: int = 50_000, max_combinations: int = MAX_GRID_COMBINATIONS):
    """Exhaustive minimiser of the penalised fitness over a (x, z, placed) grid.

    Returns ``(placements, fitness)``; ties resolve to the first layout in
    enumeration order.
    """
    m = cfg.num_elids
    if m > 2:
        raise GridTooLarge(f"grid search supports at most 2 units, scenario has {m}")
    xs = _axis(0.0, cfg.road.d_road, x_step)
    zs = _axis(cfg.road.z_min, cfg.road.z_max, z_step)
    per_unit = np.array(list(itertools.product(xs, zs, (0.0, 1.0))))
    total = len(per_unit) ** m
    if total > max_combinations:
        raise GridTooLarge(f"{total} grid combinations exceed the limit of {max_combinations}")

    best_f, best_row = np.inf, None
    idx = np.indices((len(per_unit),) * m).reshape(m, -1).T
    for start in range(0, len(idx), chunk):
        rows = per_unit[idx[start:start + chunk]]  # (k, m, 3)
        f = evaluate_batch(rows[:, :, 0], rows[:, :, 1], rows[:, :, 2], cfg)["fitness"]
        j = int(np.argmin(f))
        if f[j] < best_f:
            best_f, best_row = float(f[j]), rows[j]
    placements = [Placement(float(r[0]), float(r[1]), int(r[2])) for r in best_row]
    return placements, best_f
