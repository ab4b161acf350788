"""Flexible human-robot cooperation at desk scale.

Subpackages:
    andor    -- AND/OR cooperation graphs: loading, feasibility, path
                enumeration, online cost updates and suggestions.
    gestures -- inertial feature extraction, gesture model training (GMM/GMR)
                and possibility-based online detection.
    control  -- prioritized control objectives, activation functions and the
                task-priority velocity solver.
    sim      -- planar dual-arm kinematic world: forward kinematics,
                Jacobians, obstacle clearance, integration.
    session  -- the cooperation orchestrator: event loop, path switching,
                robot action execution, timing ledger, trace logs.
    api      -- FastAPI service exposing sessions over HTTP and WebSocket.
"""

__version__ = "0.1.0"
