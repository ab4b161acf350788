from .world import (
    KinematicChain,
    Obstacle,
    PlanarWorld,
    SimError,
    WorldObject,
    clearance,
    forward_kinematics,
    joint_points,
    load_world,
    step,
)

__all__ = [
    "KinematicChain",
    "Obstacle",
    "PlanarWorld",
    "SimError",
    "WorldObject",
    "clearance",
    "forward_kinematics",
    "joint_points",
    "load_world",
    "step",
]
