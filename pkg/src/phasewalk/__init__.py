"""Discrete-time quantum walks on Z^d with per-step random phase noise,
their exact classical counterparts, and dispersion analytics."""

from .coins import (
    GroverParams,
    fourier_coin,
    generalized_grover,
    grover_coin,
    grover_from_r,
    is_unitary,
    memory_bias,
)
from .evolution import (
    EnsembleResult,
    PhaseDistribution,
    StepConfig,
    run_ensemble,
    run_trajectory,
)
from .kernels import HAVE_COMPILED, kernel_name
from .state import (
    Distribution,
    WalkState,
    new_initial_state,
    new_initial_state_with_coin_state,
    norm,
    position_distribution,
    second_moment,
)

__version__ = "0.1.0"

__all__ = [
    "Distribution",
    "EnsembleResult",
    "GroverParams",
    "HAVE_COMPILED",
    "PhaseDistribution",
    "StepConfig",
    "WalkState",
    "fourier_coin",
    "generalized_grover",
    "grover_coin",
    "grover_from_r",
    "is_unitary",
    "kernel_name",
    "memory_bias",
    "new_initial_state",
    "new_initial_state_with_coin_state",
    "norm",
    "position_distribution",
    "run_ensemble",
    "run_trajectory",
    "second_moment",
]
