"""secact: secure sensor-activation games on range-limited networks.

Builds random sensor deployments with RBF-correlated Gaussian
measurements, scores links by belief-weighted secrecy capacity, and
finds pure equilibria of the repercussion-utility activation game by
sequential best-response learning. A harness reproduces compromise
probability and density sweeps with seeded Monte-Carlo aggregation.
"""

from .channel import (
    BeliefModel,
    ChannelParams,
    TypeAssignment,
    capacity,
    expected_secrecy_capacity,
    secrecy_capacity,
    snr,
)
from .config import ExperimentConfig, load_config
from .game import (
    EnergyModel,
    GameContext,
    StrategyProfile,
    best_response,
    build_context,
    expected_potential,
    expected_repercussion_utility,
    expected_utility,
    potential,
    realized_utility,
    repercussion_utility,
)
from .gaussfield import (
    CorrelationParams,
    CovarianceModel,
    EntropyValue,
    conditional_entropy,
    covariance,
    joint_entropy,
)
from .harness import (
    RunMetrics,
    SweepResult,
    emit_csv,
    emit_plot,
    run_single,
    sample_types,
    sweep_m,
    sweep_pe,
)
from .learning import LearningOutcome, run_learning, verify_gbne
from .oracle import (
    OracleReport,
    audit_potential_identity,
    enumerate_equilibria,
    expected_value_by_enumeration,
)
from .topology import Deployment, NetworkGraph, Position, build_graph, deploy_uniform, distance, place_sinks

__version__ = "0.1.0"

__all__ = [
    "BeliefModel",
    "ChannelParams",
    "CorrelationParams",
    "CovarianceModel",
    "Deployment",
    "EnergyModel",
    "EntropyValue",
    "ExperimentConfig",
    "GameContext",
    "LearningOutcome",
    "NetworkGraph",
    "OracleReport",
    "Position",
    "RunMetrics",
    "StrategyProfile",
    "SweepResult",
    "TypeAssignment",
    "audit_potential_identity",
    "best_response",
    "build_context",
    "build_graph",
    "capacity",
    "conditional_entropy",
    "covariance",
    "deploy_uniform",
    "distance",
    "emit_csv",
    "emit_plot",
    "enumerate_equilibria",
    "expected_potential",
    "expected_repercussion_utility",
    "expected_secrecy_capacity",
    "expected_utility",
    "expected_value_by_enumeration",
    "joint_entropy",
    "load_config",
    "place_sinks",
    "potential",
    "realized_utility",
    "repercussion_utility",
    "run_learning",
    "run_single",
    "sample_types",
    "secrecy_capacity",
    "snr",
    "sweep_m",
    "sweep_pe",
    "verify_gbne",
]
