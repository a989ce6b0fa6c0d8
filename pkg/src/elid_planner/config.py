"""Scenario configuration and its JSON file format.

Every physical quantity in a scenario file carries its unit in the key name
(``theta_deg``, ``bandwidth_gbps``, ...). Angles are converted to radians and
GB to bytes (10**9) at load time; in-memory objects are always SI.

Schema (all keys required unless a default is shown)::

    {
      "name": "table1",                       # optional
      "lidar": {"theta_deg", "phi_deg", "f_scan_hz", "h_cov_m", "p_comm_w",
                "p_rad_w", "r_comm_gbps", "octree_depth"},
      "road": {"d_road_m", "y_min_m", "y_max_m", "z_min_m", "z_max_m",
               "sector_ends_m": [...], "sector_scores": [...]},
      "limits": {"bandwidth_gbps", "energy_w"},
      "lambda": 0.25, "eta": 1.0, "num_elids": 20, "rho": 1.0,
      "delta_step_deg": 0.1, "gamma_step_m": 0.1,   # accepted, unused
      "width_sign": "plus",                          # or "minus"
      "swarm": {"num_particles", "alpha", "beta_p", "beta_g", "t_max", "xi",
                "stall_window": null, "seed": 0, "velocity_clamp": null,
                "binary_transfer": "standard", "workers": 1}
    }

``eta`` divides the coverage ratio as-is; values below 1 inflate it and are
not clamped.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .geometry import LidarSpec, RoadGeometry

GB = 10**9


class ScenarioError(ValueError):
    """Scenario file could not be parsed or violates an invariant."""


@dataclass(frozen=True)
class SwarmConfig:
    num_particles: int = 100
    alpha: float = 1.0
    beta_p: float = 2.0
    beta_g: float = 2.0
    t_max: int = 500
    xi: float = 1e-4
    stall_window: int | None = None
    seed: int = 0
    velocity_clamp: float | None = None
    # "as_written": sigma = 1/(1+exp(v)); "standard": sigma = 1/(1+exp(-v))
    binary_transfer: str = "standard"
    workers: int = 1

    def __post_init__(self):
        if self.num_particles < 1:
            raise ValueError("num_particles must be >= 1")
        if self.t_max < 1:
            raise ValueError("t_max must be >= 1")
        if self.xi < 0:
            raise ValueError("xi must be >= 0")
        if self.stall_window is not None and self.stall_window < 1:
            raise ValueError("stall_window must be >= 1")
        if self.velocity_clamp is not None and self.velocity_clamp <= 0:
            raise ValueError("velocity_clamp must be positive")
        if self.binary_transfer not in ("as_written", "standard"):
            raise ValueError(f"unknown binary_transfer {self.binary_transfer!r}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")

    @property
    def stall_iterations(self) -> int:
        if self.stall_window is not None:
            return self.stall_window
        return max(1, self.t_max // 10)


@dataclass(frozen=True)
class ScenarioConfig:
    lidar: LidarSpec
    road: RoadGeometry
    bandwidth: float  # bytes/s
    energy_limit: float  # W
    lam: float = 0.25
    eta: float = 1.0
    num_elids: int = 20
    rho: float = 1.0
    swarm: SwarmConfig = field(default_factory=SwarmConfig)
    delta_step: float = math.radians(0.1)
    gamma_step: float = 0.1
    width_sign: str = "plus"
    name: str = ""

    def __post_init__(self):
        if self.num_elids < 1:
            raise ValueError("num_elids must be >= 1")
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")
        if not 0 < self.eta <= 1:
            raise ValueError("eta must lie in (0, 1]")
        if self.rho < 0:
            raise ValueError("rho must be >= 0")
        if self.bandwidth < 0 or self.energy_limit < 0:
            raise ValueError("limits must be non-negative")
        if self.width_sign not in ("plus", "minus"):
            raise ValueError(f"width_sign must be 'plus' or 'minus', got {self.width_sign!r}")
        if math.atan(self.road.y_min / self.road.z_min) + self.lidar.phi >= math.pi / 2:
            raise ValueError("z_min too low: omega + phi reaches pi/2 inside the height bounds")

    def with_overrides(self, *, octree_depth=None, bandwidth=None, seed=None, **kw) -> "ScenarioConfig":
        cfg = self
        if octree_depth is not None:
            cfg = replace(cfg, lidar=replace(cfg.lidar, octree_depth=octree_depth))
        if bandwidth is not None:
            cfg = replace(cfg, bandwidth=bandwidth)
        if seed is not None:
            cfg = replace(cfg, swarm=replace(cfg.swarm, seed=seed))
        swarm_kw = {k: kw.pop(k) for k in list(kw) if k in SwarmConfig.__dataclass_fields__}
        if swarm_kw:
            cfg = replace(cfg, swarm=replace(cfg.swarm, **swarm_kw))
        return replace(cfg, **kw) if kw else cfg


_LIDAR_KEYS = ("theta_deg", "phi_deg", "f_scan_hz", "h_cov_m", "p_comm_w", "p_rad_w",
               "r_comm_gbps", "octree_depth")
_ROAD_KEYS = ("d_road_m", "y_min_m", "y_max_m", "z_min_m", "z_max_m", "sector_ends_m",
              "sector_scores")


def _require(section: dict, keys, where: str):
    if not isinstance(section, dict):
        raise ScenarioError(f"{where}: expected an object")
    missing = [k for k in keys if k not in section]
    if missing:
        raise ScenarioError(f"{where}: missing field(s) {', '.join(missing)}")


def scenario_from_dict(data: dict) -> ScenarioConfig:
    _require(data, ("lidar", "road", "limits"), "scenario")
    lid, road, lim = data["lidar"], data["road"], data["limits"]
    _require(lid, _LIDAR_KEYS, "lidar")
    _require(road, _ROAD_KEYS, "road")
    _require(lim, ("bandwidth_gbps", "energy_w"), "limits")
    swarm = data.get("swarm", {})
    unknown = set(swarm) - set(SwarmConfig.__dataclass_fields__)
    if unknown:
        raise ScenarioError(f"swarm: unknown field(s) {', '.join(sorted(unknown))}")
    try:
        lidar = LidarSpec(
            theta=math.radians(lid["theta_deg"]),
            phi=math.radians(lid["phi_deg"]),
            f_scan=float(lid["f_scan_hz"]),
            h_cov=float(lid["h_cov_m"]),
            p_comm=float(lid["p_comm_w"]),
            p_rad=float(lid["p_rad_w"]),
            r_comm=float(lid["r_comm_gbps"]) * GB,
            octree_depth=lid["octree_depth"],
        )
        geom = RoadGeometry(
            d_road=float(road["d_road_m"]),
            y_min=float(road["y_min_m"]),
            y_max=float(road["y_max_m"]),
            z_min=float(road["z_min_m"]),
            z_max=float(road["z_max_m"]),
            sector_ends=road["sector_ends_m"],
            sector_scores=road["sector_scores"],
        )
        return ScenarioConfig(
            lidar=lidar,
            road=geom,
            bandwidth=float(lim["bandwidth_gbps"]) * GB,
            energy_limit=float(lim["energy_w"]),
            lam=float(data.get("lambda", 0.25)),
            eta=float(data.get("eta", 1.0)),
            num_elids=int(data.get("num_elids", 20)),
            rho=float(data.get("rho", 1.0)),
            swarm=SwarmConfig(**swarm),
            delta_step=math.radians(data.get("delta_step_deg", 0.1)),
            gamma_step=float(data.get("gamma_step_m", 0.1)),
            width_sign=data.get("width_sign", "plus"),
            name=data.get("name", ""),
        )
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"invalid scenario: {exc}") from exc


def scenario_to_dict(cfg: ScenarioConfig) -> dict:
    lid, road, sw = cfg.lidar, cfg.road, cfg.swarm
    return {
        "name": cfg.name,
        "lidar": {
            "theta_deg": math.degrees(lid.theta),
            "phi_deg": math.degrees(lid.phi),
            "f_scan_hz": lid.f_scan,
            "h_cov_m": lid.h_cov,
            "p_comm_w": lid.p_comm,
            "p_rad_w": lid.p_rad,
            "r_comm_gbps": lid.r_comm / GB,
            "octree_depth": lid.octree_depth,
        },
        "road": {
            "d_road_m": road.d_road,
            "y_min_m": road.y_min,
            "y_max_m": road.y_max,
            "z_min_m": road.z_min,
            "z_max_m": road.z_max,
            "sector_ends_m": list(road.sector_ends),
            "sector_scores": list(road.sector_scores),
        },
        "limits": {"bandwidth_gbps": cfg.bandwidth / GB, "energy_w": cfg.energy_limit},
        "lambda": cfg.lam,
        "eta": cfg.eta,
        "num_elids": cfg.num_elids,
        "rho": cfg.rho,
        "delta_step_deg": math.degrees(cfg.delta_step),
        "gamma_step_m": cfg.gamma_step,
        "width_sign": cfg.width_sign,
        "swarm": {k: getattr(sw, k) for k in SwarmConfig.__dataclass_fields__},
    }


def load_scenario(path) -> ScenarioConfig:
    """Load a scenario file, or a bundled scenario by name (``table1``, ``tight_d9``)."""
    p = Path(path)
    if not p.exists() and p.suffix == "" and str(path) in bundled_scenarios():
        text = resources.files("elid_planner.scenarios").joinpath(f"{path}.json").read_text()
        source = f"<bundled {path}>"
    else:
        text = p.read_text(encoding="utf-8")
        source = str(p)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return scenario_from_dict(data)


def bundled_scenarios() -> list[str]:
    root = resources.files("elid_planner.scenarios")
    return sorted(f.name[:-5] for f in root.iterdir() if f.name.endswith(".json"))
