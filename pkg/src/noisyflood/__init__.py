"""Monte Carlo simulation of probabilistic route-request flooding in noisy MANETs."""

__version__ = "0.1.0"

from .engine import FloodOutcome, FloodParams, flood, flood_batch, flood_coupled
from .metrics import MetricPoint, aggregate, relative_change, rch_of, ret_of
from .mobility import MobilityState, init_positions, step
from .model import Area, NodeState, ScenarioConfig, Topology, build_topology, density, n_intervals, pause_time
from .oracle import OracleResult, exact_metrics
from .runner import ResultTable, SweepSpec, run_scenario
from .seeding import derive_substream

__all__ = [
    "Area", "FloodOutcome", "FloodParams", "MetricPoint", "MobilityState", "NodeState", "OracleResult",
    "ResultTable", "ScenarioConfig", "SweepSpec", "Topology", "aggregate", "build_topology", "density",
    "derive_substream", "exact_metrics", "flood", "flood_batch", "flood_coupled", "init_positions",
    "n_intervals", "pause_time", "rch_of", "relative_change", "ret_of", "run_scenario", "step",
]
