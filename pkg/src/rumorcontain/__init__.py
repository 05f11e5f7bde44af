"""Rumor containment by truth spreading on paired directed networks."""

from rumorcontain.errors import ConfigError, DomainError, IntegrationError, ParseError
from rumorcontain.graphs import (
    DirectedGraph,
    barabasi_albert,
    load_edge_list,
    named_small_graph,
    watts_strogatz,
)
from rumorcontain.dynamics import ExpectedState, Trajectory, URTUParams, derivative, integrate
from rumorcontain.objective import (
    EffectivenessReport,
    RCInstance,
    Strategy,
    effectiveness,
    gamma2_of,
)
from rumorcontain.optimizer import StrategyResult, highest_cost_effectiveness, solve_rc
from rumorcontain.experiments import SweepResult, SweepSpec, run_experiment_table, run_sweep

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DirectedGraph",
    "DomainError",
    "EffectivenessReport",
    "ExpectedState",
    "IntegrationError",
    "ParseError",
    "RCInstance",
    "Strategy",
    "StrategyResult",
    "SweepResult",
    "SweepSpec",
    "Trajectory",
    "URTUParams",
    "barabasi_albert",
    "derivative",
    "effectiveness",
    "gamma2_of",
    "highest_cost_effectiveness",
    "integrate",
    "load_edge_list",
    "named_small_graph",
    "run_experiment_table",
    "run_sweep",
    "solve_rc",
    "watts_strogatz",
]
