from .graph import (
    ActionSpec,
    Agent,
    AndOrGraph,
    CooperationFailedError,
    GraphError,
    GraphLoadError,
    HyperArc,
    Node,
    StateChanges,
    UnknownIdError,
    load_graph,
    register_action_ended,
    update_feasibility,
)
from .paths import (
    CooperationPath,
    DeadlockError,
    GraphSolved,
    Suggestion,
    find_optimal_path,
    generate_all_paths,
    next_suggested_node,
    update_all_paths,
)

__all__ = [
    "ActionSpec",
    "Agent",
    "AndOrGraph",
    "CooperationFailedError",
    "CooperationPath",
    "DeadlockError",
    "GraphError",
    "GraphLoadError",
    "GraphSolved",
    "HyperArc",
    "Node",
    "StateChanges",
    "Suggestion",
    "UnknownIdError",
    "find_optimal_path",
    "generate_all_paths",
    "load_graph",
    "next_suggested_node",
    "register_action_ended",
    "update_all_paths",
    "update_feasibility",
]
