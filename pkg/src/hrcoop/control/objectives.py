"""Prioritized control objectives and their activation functions.

A scalar objective either regulates a configuration-dependent variable to a
reference (equality) or keeps it above/below a threshold (inequality).
Inequality objectives fade in smoothly over an activation buffer so they stop
constraining the arm well inside the valid region.  A second activation
factor, driven by the running action pair, ramps action-specific objectives
in and out across transitions while safety objectives stay on throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class ObjectiveKind(str, Enum):
    EQUALITY = "equality"
    INEQUALITY_MIN = "inequality_min"
    INEQUALITY_MAX = "inequality_max"


@dataclass
class ControlObjective:
    id: str
    kind: ObjectiveKind
    variable: str                    # key resolved by the world registry
    priority_level: int
    gain: float = 1.0                # 1/s
    rate_limit: float = 1.0          # variable units / s
    activation_buffer: float = 0.1   # variable units
    x0: float | None = None
    x_min: float | None = None
    x_max: float | None = None
    safety: bool = False             # member of every action, alpha_p == 1

    def __post_init__(self):
        if self.gain <= 0:
            raise ValueError(f"objective {self.id!r}: gain must be positive")
        if self.activation_buffer <= 0:
            raise ValueError(f"objective {self.id!r}: activation_buffer must be positive")
        refs = {
            ObjectiveKind.EQUALITY: self.x0,
            ObjectiveKind.INEQUALITY_MIN: self.x_min,
            ObjectiveKind.INEQUALITY_MAX: self.x_max,
        }
        if refs[self.kind] is None or sum(
            v is not None for v in (self.x0, self.x_min, self.x_max)
        ) != 1:
            raise ValueError(
                f"objective {self.id!r}: exactly one of x0/x_min/x_max must be set, "
                f"matching kind {self.kind.value}"
            )


@dataclass
class TaskLevel:
    level: int
    objectives: list[ControlObjective]

    def __post_init__(self):
        self.objectives = sorted(self.objectives, key=lambda o: o.id)
        for obj in self.objectives:
            if obj.priority_level != self.level:
                raise ValueError(
                    f"objective {obj.id!r} at level {obj.priority_level} "
                    f"placed in level {self.level}"
                )


@dataclass
class RobotAction:
    name: str
    objective_ids: list[str]
    transition_ramp: float = 0.5     # seconds
    t_start: float | None = None     # stamped on activation
    objectives: list[ControlObjective] = field(default_factory=list)


def smoothstep(u: float) -> float:
    """Cubic 3u^2 - 2u^3 clamped to [0, 1]: exact saturation at both ends."""
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    return u * u * (3.0 - 2.0 * u)


def reference_rate(objective: ControlObjective, x_now: float) -> float:
    """Feedback rate driving the variable toward its reference or interior point."""
    if objective.kind == ObjectiveKind.EQUALITY:
        target = objective.x0
    elif objective.kind == ObjectiveKind.INEQUALITY_MIN:
        target = objective.x_min + objective.activation_buffer
    else:
        target = objective.x_max - objective.activation_buffer
    rate = objective.gain * (target - x_now)
    return max(-objective.rate_limit, min(objective.rate_limit, rate))


def activation(objective: ControlObjective, x_now: float) -> float:
    """Objective relevance in [0, 1]; zero strictly inside the validity region."""
    if objective.kind == ObjectiveKind.EQUALITY:
        return 1.0
    buffer = objective.activation_buffer
    if objective.kind == ObjectiveKind.INEQUALITY_MIN:
        return 1.0 - smoothstep((x_now - objective.x_min) / buffer)
    return 1.0 - smoothstep((objective.x_max - x_now) / buffer)


def transition_activation(
    prev_action: RobotAction | None,
    next_action: RobotAction | None,
    objective: ControlObjective,
    t_since_start: float,
) -> float:
    """Action-membership weight across a transition.

    Safety objectives and objectives shared by both actions stay at 1;
    objectives exclusive to the incoming action ramp 0 to 1 over the ramp
    time, outgoing ones mirror that, and objectives of neither action are off.
    """
    if objective.safety:
        return 1.0
    in_prev = prev_action is not None and objective.id in prev_action.objective_ids
    in_next = next_action is not None and objective.id in next_action.objective_ids
    if in_prev and in_next:
        return 1.0
    if in_next:
        ramp = next_action.transition_ramp
        return smoothstep(t_since_start / ramp) if ramp > 0 else 1.0
    if in_prev:
        ramp = (next_action or prev_action).transition_ramp
        return 1.0 - smoothstep(t_since_start / ramp) if ramp > 0 else 0.0
    return 0.0


def standard_objective_set(
    world,
    arm: str,
    ee_target: tuple[float, float, float] | None = None,
    preferred_pose: list[float] | None = None,
    clearance_margin: float = 0.03,
    clearance_buffer: float = 0.07,
) -> list[ControlObjective]:
    """The standard six-layer hierarchy for one arm.

    Level 1 guards the joint range (one margin objective per joint), level 2
    keeps obstacle clearance, level 3 manipulability; levels 4 and 5 drive the
    end-effector linear and angular position, level 6 the preferred pose.
    The safety levels 1-3 are flagged global.
    """
    chain = world.arms.get(arm)
    if chain is None:
        raise ValueError(f"unknown arm {arm!r}")
    objectives: list[ControlObjective] = []
    for i in range(chain.dof):
        objectives.append(
            ControlObjective(
                id=f"{arm}:joint_limit:{i}",
                kind=ObjectiveKind.INEQUALITY_MIN,
                variable=f"joint_margin:{arm}:{i}",
                priority_level=1,
                gain=3.0,
                rate_limit=1.0,
                activation_buffer=0.2,
                x_min=0.1,
                safety=True,
            )
        )
    for k in range(len(world.obstacles)):
        objectives.append(
            ControlObjective(
                id=f"{arm}:obstacle:{k}",
                kind=ObjectiveKind.INEQUALITY_MIN,
                variable=f"clearance:{arm}:{k}",
                priority_level=2,
                gain=3.0,
                rate_limit=0.8,
                activation_buffer=clearance_buffer,
                x_min=clearance_margin,
                safety=True,
            )
        )
    objectives.append(
        ControlObjective(
            id=f"{arm}:manipulability",
            kind=ObjectiveKind.INEQUALITY_MIN,
            variable=f"manipulability:{arm}",
            priority_level=3,
            gain=2.0,
            rate_limit=0.5,
            activation_buffer=0.02,
            x_min=0.01,
            safety=True,
        )
    )
    if ee_target is not None:
        x, y, theta = ee_target
        objectives.append(
            ControlObjective(
                id=f"{arm}:ee_x",
                kind=ObjectiveKind.EQUALITY,
                variable=f"ee_x:{arm}",
                priority_level=4,
                gain=1.5,
                rate_limit=0.6,
                x0=x,
            )
        )
        objectives.append(
            ControlObjective(
                id=f"{arm}:ee_y",
                kind=ObjectiveKind.EQUALITY,
                variable=f"ee_y:{arm}",
                priority_level=4,
                gain=1.5,
                rate_limit=0.6,
                x0=y,
            )
        )
        objectives.append(
            ControlObjective(
                id=f"{arm}:ee_theta",
                kind=ObjectiveKind.EQUALITY,
                variable=f"ee_theta:{arm}",
                priority_level=5,
                gain=1.5,
                rate_limit=1.0,
                x0=theta,
            )
        )
    pose = preferred_pose if preferred_pose is not None else list(chain.joints)
    for i in range(chain.dof):
        objectives.append(
            ControlObjective(
                id=f"{arm}:preferred_pose:{i}",
                kind=ObjectiveKind.EQUALITY,
                variable=f"joint:{arm}:{i}",
                priority_level=6,
                gain=0.5,
                rate_limit=0.5,
                x0=float(pose[i]),
            )
        )
    return objectives


def build_levels(objectives: list[ControlObjective]) -> list[TaskLevel]:
    """Group objectives into ascending task levels."""
    by_level: dict[int, list[ControlObjective]] = {}
    for obj in objectives:
        by_level.setdefault(obj.priority_level, []).append(obj)
    return [TaskLevel(level=k, objectives=v) for k, v in sorted(by_level.items())]
