"""Coverage footprint of a single elevated LiDAR on a straight roadway.

All angles are radians. Functions accept numpy arrays and broadcast, so the
same code path serves scalar reporting and whole-swarm evaluation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class GeometryError(ValueError):
    """Raised when a placement yields an unbounded or undefined footprint."""


@dataclass(frozen=True)
class LidarSpec:
    theta: float  # horizontal FoV
    phi: float  # vertical FoV
    f_scan: float  # Hz
    h_cov: float  # detection-zone height, m
    p_comm: float  # W
    p_rad: float  # W
    r_comm: float  # bytes/s
    octree_depth: int = 5

    def __post_init__(self):
        if not 0 < self.theta < math.pi:
            raise ValueError(f"theta must lie in (0, pi), got {self.theta}")
        if not 0 < self.phi < math.pi / 2:
            raise ValueError(f"phi must lie in (0, pi/2), got {self.phi}")
        if self.f_scan <= 0:
            raise ValueError(f"f_scan must be positive, got {self.f_scan}")
        if self.h_cov <= 0:
            raise ValueError(f"h_cov must be positive, got {self.h_cov}")
        if self.r_comm <= 0:
            raise ValueError(f"r_comm must be positive, got {self.r_comm}")
        if self.p_comm < 0 or self.p_rad < 0:
            raise ValueError("powers must be non-negative")
        if int(self.octree_depth) != self.octree_depth or self.octree_depth < 2:
            raise ValueError(f"octree_depth must be an integer >= 2, got {self.octree_depth}")


@dataclass(frozen=True)
class RoadGeometry:
    d_road: float
    y_min: float
    y_max: float
    z_min: float
    z_max: float
    sector_ends: tuple[float, ...]
    sector_scores: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "sector_ends", tuple(float(q) for q in self.sector_ends))
        object.__setattr__(self, "sector_scores", tuple(float(s) for s in self.sector_scores))
        if self.d_road <= 0:
            raise ValueError(f"d_road must be positive, got {self.d_road}")
        if not 0 < self.y_min < self.y_max:
            raise ValueError(f"need 0 < y_min < y_max, got y_min={self.y_min}, y_max={self.y_max}")
        if not 0 < self.z_min <= self.z_max:
            raise ValueError(f"need 0 < z_min <= z_max, got z_min={self.z_min}, z_max={self.z_max}")
        q, s = self.sector_ends, self.sector_scores
        if len(q) == 0:
            raise ValueError("at least one relevance sector is required")
        if len(q) != len(s):
            raise ValueError(f"sector_ends ({len(q)}) and sector_scores ({len(s)}) differ in length")
        if any(b <= a for a, b in zip((0.0,) + q[:-1], q)):
            raise ValueError("sector_ends must be strictly ascending and positive")
        if q[-1] != self.d_road:
            raise ValueError(f"last sector end {q[-1]} must equal d_road {self.d_road}")
        if any(not 0 <= v <= 1 for v in s):
            raise ValueError("sector_scores must lie in [0, 1]")

    @property
    def width(self) -> float:
        return self.y_max - self.y_min

    @property
    def sector_starts(self) -> tuple[float, ...]:
        return (0.0,) + self.sector_ends[:-1]


@dataclass(frozen=True)
class Placement:
    x: float
    z: float
    placed: int = 1

    def validate(self, road: RoadGeometry) -> None:
        if not 0 <= self.x <= road.d_road:
            raise ValueError(f"x={self.x} outside [0, {road.d_road}]")
        if not road.z_min <= self.z <= road.z_max:
            raise ValueError(f"z={self.z} outside [{road.z_min}, {road.z_max}]")
        if self.placed not in (0, 1):
            raise ValueError(f"placed flag must be 0 or 1, got {self.placed}")


@dataclass(frozen=True)
class CoverageFootprint:
    omega: float
    l_near: float
    l_far: float
    l_width: float
    a_total: float
    a_rect: float
    x_start: float
    x_end: float


def orientation_angle(z, y_min):
    """Tilt that aims the lowest beam at the near road edge: arctan(y_min / z)."""
    z = np.asarray(z, dtype=float)
    y_min = np.asarray(y_min, dtype=float)
    if np.any(z <= 0) or np.any(y_min <= 0):
        raise GeometryError("orientation_angle needs positive height and y_min")
    out = np.arctan(y_min / z)
    return float(out) if out.ndim == 0 else out


def lateral_width(z, omega, phi, sign: str = "plus"):
    """Depth of the coverage trapezoid perpendicular to the road.

    ``sign="plus"`` is ``z*(tan(omega+phi) + tan(omega))``; ``"minus"`` swaps
    the second term's sign, which measures only the strip beyond the near edge.
    """
    if sign == "plus":
        return z * (np.tan(omega + phi) + np.tan(omega))
    if sign == "minus":
        return z * (np.tan(omega + phi) - np.tan(omega))
    raise ValueError(f"unknown width sign {sign!r}")


def footprint_arrays(spec: LidarSpec, road: RoadGeometry, x, z, width_sign: str = "plus") -> dict:
    """Vectorised footprint; returns a dict of arrays keyed like CoverageFootprint."""
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    omega = np.arctan(road.y_min / z)
    if np.any(omega + spec.phi >= math.pi / 2):
        raise GeometryError("omega + phi >= pi/2: footprint is unbounded")
    sec_w = 1.0 / np.cos(omega)
    sec_wp = 1.0 / np.cos(omega + spec.phi)
    l_near = 2.0 * z * sec_w * math.tan(spec.theta / 2.0)
    l_far = l_near * sec_wp / sec_w
    l_width = lateral_width(z, omega, spec.phi, width_sign)
    return {
        "omega": omega,
        "l_near": l_near,
        "l_far": l_far,
        "l_width": l_width,
        "a_total": (l_near + l_far) * l_width / 2.0,
        "a_rect": l_near * l_width,
        "x_start": np.maximum(x - l_near, 0.0),
        "x_end": np.minimum(x + l_near, road.d_road),
    }


def footprint(spec: LidarSpec, road: RoadGeometry, p: Placement, width_sign: str = "plus") -> CoverageFootprint:
    if p.z <= 0:
        raise GeometryError(f"height must be positive, got {p.z}")
    arrs = footprint_arrays(spec, road, p.x, p.z, width_sign)
    return CoverageFootprint(**{k: float(v) for k, v in arrs.items()})


def footprints(spec: LidarSpec, road: RoadGeometry, placements: Sequence[Placement],
               width_sign: str = "plus") -> list[CoverageFootprint]:
    return [footprint(spec, road, p, width_sign) for p in placements]
