"""Worst-case octree data volume and per-unit energy draw."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import CoverageFootprint, LidarSpec

GB = 10**9  # decimal gigabyte, bytes
MAX_OCTREE_DEPTH = 22


@dataclass(frozen=True)
class DataEnergyProfile:
    g_cov: int
    d_m: float
    e_m: float


def octree_density(d: int) -> int:
    """Bytes per cubic metre for a fully subdivided octree of depth ``d``.

    The 12 extra bytes hold the scan origin as three float32 values.
    """
    if int(d) != d:
        raise ValueError(f"octree depth must be an integer, got {d}")
    d = int(d)
    if d < 2:
        raise ValueError(f"octree depth must be >= 2, got {d}")
    if d > MAX_OCTREE_DEPTH:
        raise ValueError(f"octree depth {d} exceeds supported maximum {MAX_OCTREE_DEPTH}")
    return 8 ** (d - 2) + 12


def data_generated(spec: LidarSpec, fp):
    """Data produced over the detection volume, h_cov * A_total * G_cov / f_scan.

    ``fp`` is a CoverageFootprint or a (array of) trapezoid area(s).
    """
    a_total = fp.a_total if isinstance(fp, CoverageFootprint) else fp
    return spec.h_cov * np.asarray(a_total, dtype=float) * octree_density(spec.octree_depth) / spec.f_scan


def energy_consumed(spec: LidarSpec, d_m):
    return spec.p_comm * np.asarray(d_m, dtype=float) / spec.r_comm + spec.p_rad / spec.f_scan


def profile(spec: LidarSpec, fp: CoverageFootprint) -> DataEnergyProfile:
    d_m = float(data_generated(spec, fp))
    return DataEnergyProfile(octree_density(spec.octree_depth), d_m, float(energy_consumed(spec, d_m)))
