"""Minimum-energy broadcast range assignment for nodes on a line."""

__version__ = "0.1.0"

from .network import (
    CoverageResult,
    LinearNetwork,
    NetworkError,
    PathLoss,
    SideMinima,
    assignment_cost,
    distance,
    edge_source_assignment,
    load_network,
    min_positive_ranges,
    validate_broadcast,
)
from .assigners import (
    distributed_assign,
    expected_distributed_cost,
    identical_range,
    optimal_assign,
    suboptimal_assign,
)
from .oracle import OracleConfig, brute_force_optimal
from .protocol import run_protocol
