"""Placement planning for elevated roadside LiDAR units."""
from .config import ScenarioConfig, ScenarioError, SwarmConfig, load_scenario
from .geometry import CoverageFootprint, LidarSpec, Placement, RoadGeometry, footprint
from .objective import FitnessBreakdown, effective_coverage, evaluate_batch, fitness
from .solver import SolveResult, solve

__version__ = "0.1.0"

__all__ = [
    "CoverageFootprint", "FitnessBreakdown", "LidarSpec", "Placement", "RoadGeometry",
    "ScenarioConfig", "ScenarioError", "SolveResult", "SwarmConfig", "effective_coverage",
    "evaluate_batch", "fitness", "footprint", "load_scenario", "solve",
]
