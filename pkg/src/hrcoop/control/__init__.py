from .objectives import (
    ControlObjective,
    ObjectiveKind,
    RobotAction,
    TaskLevel,
    activation,
    build_levels,
    reference_rate,
    smoothstep,
    standard_objective_set,
    transition_activation,
)
from .solver import DampingConfig, SolverError, SolverOutput, damped_pinv, solve

__all__ = [
    "ControlObjective",
    "DampingConfig",
    "ObjectiveKind",
    "RobotAction",
    "SolverError",
    "SolverOutput",
    "TaskLevel",
    "activation",
    "build_levels",
    "damped_pinv",
    "reference_rate",
    "smoothstep",
    "solve",
    "standard_objective_set",
    "transition_activation",
]
