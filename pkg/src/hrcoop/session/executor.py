"""Robot action execution: waypoint tracking through the priority solver.

One executor drives all arms of the world at the control rate.  The arm that
owns the running action tracks the action's current waypoint; every other arm
holds its preferred pose.  Consecutive actions hand over smoothly: the old
action's task objectives ramp out while the new ones ramp in, while safety
and pose-hold objectives, being common to every action, never leave the
stack.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..control import (
    ControlObjective,
    ObjectiveKind,
    RobotAction,
    build_levels,
    solve,
    standard_objective_set,
)
from ..sim import PlanarWorld, forward_kinematics, step
from .scenario import Motion

CONTROL_RATE_HZ = 100.0
CONTROL_DT = 1.0 / CONTROL_RATE_HZ


@dataclass
class ActiveAction:
    uid: str                    # unique per dispatch: action id + attempt
    arc_id: str
    action_id: str
    name: str
    motion: Motion
    spec: RobotAction
    waypoint_idx: int = 0
    t_start: float = 0.0


@dataclass
class TickTelemetry:
    moved: bool
    y_dot_max: float = 0.0
    residuals: list[float] = field(default_factory=list)
    activations: dict[str, float] = field(default_factory=dict)
    min_clearance: float | None = None
    max_joint_overrun: float = 0.0
    completed: ActiveAction | None = None


class RobotExecutor:
    def __init__(self, world: PlanarWorld, preferred_poses: dict[str, list[float]] | None = None):
        self.world = world
        self.preferred = preferred_poses or {
            name: list(chain.joints) for name, chain in world.arms.items()
        }
        self.current: ActiveAction | None = None
        self.previous: ActiveAction | None = None
        self._transition_t0 = 0.0
        self._uid_count = 0
        self._parked = False

    @property
    def busy(self) -> bool:
        return self.current is not None

    def start(self, arc_id: str, action_id: str, name: str, motion: Motion, t: float) -> ActiveAction:
        """Begin an action; a still-running one becomes the ramp-out side."""
        if self.current is not None:
            self.previous = self.current
        self._uid_count += 1
        uid = f"{action_id}#{self._uid_count}"
        spec = RobotAction(
            name=name,
            objective_ids=[f"{uid}:ee_x", f"{uid}:ee_y", f"{uid}:ee_theta"],
            transition_ramp=motion.transition_ramp,
            t_start=t,
        )
        self.current = ActiveAction(
            uid=uid,
            arc_id=arc_id,
            action_id=action_id,
            name=name,
            motion=motion,
            spec=spec,
            t_start=t,
        )
        self._transition_t0 = t
        self._parked = False
        return self.current

    def preempt(self, t: float) -> ActiveAction | None:
        """Abandon the running action; its objectives ramp out from now."""
        preempted = self.current
        if preempted is not None:
            self.previous = preempted
            self.current = None
            self._transition_t0 = t
            self._parked = False
        return preempted

    def tick(self, t: float) -> TickTelemetry:
        """One control step: solve, integrate, track waypoints."""
        if self.current is None and self.previous is None and self._parked:
            return self._safety_snapshot(moved=False)

        objectives, prev_spec, next_spec, t_since = self._assemble(t)
        out = solve(
            build_levels(objectives),
            self.world,
            prev_action=prev_spec,
            next_action=next_spec,
            t_since_start=t_since,
            speed_caps=self.world.speed_caps(),
        )
        step(self.world, out.y_dot, CONTROL_DT)
        y_max = float(np.abs(out.y_dot).max()) if out.y_dot.size else 0.0
        if self.current is None and self.previous is None and y_max < 1e-4:
            self._parked = True  # idle and settled: skip solving until dispatched

        completed = None
        if self.current is not None:
            completed = self._track_waypoints(t)
        telemetry = self._safety_snapshot(moved=True)
        telemetry.y_dot_max = y_max
        telemetry.residuals = out.residuals
        telemetry.activations = out.activations
        telemetry.completed = completed
        return telemetry

    def _assemble(self, t: float):
        objectives: list[ControlObjective] = []
        for arm in self.world.arms:
            background = standard_objective_set(
                self.world, arm, ee_target=None, preferred_pose=self.preferred[arm]
            )
            for obj in background:
                # Pose holds, like the safety layers, belong to every action.
                obj.safety = True
            objectives += background
        if self.current is not None:
            objectives += self._task_objectives(self.current)
        prev_spec = None
        if self.previous is not None:
            ramp = (self.current.spec if self.current else self.previous.spec).transition_ramp
            if t - self._transition_t0 <= ramp:
                objectives += self._task_objectives(self.previous)
                prev_spec = self.previous.spec
            else:
                self.previous = None
        next_spec = self.current.spec if self.current else None
        return objectives, prev_spec, next_spec, t - self._transition_t0

    def _task_objectives(self, action: ActiveAction) -> list[ControlObjective]:
        motion = action.motion
        idx = min(action.waypoint_idx, len(motion.waypoints) - 1)
        target = motion.waypoints[idx].target
        uid, arm = action.uid, motion.arm
        return [
            ControlObjective(
                id=f"{uid}:ee_x", kind=ObjectiveKind.EQUALITY, variable=f"ee_x:{arm}",
                priority_level=4, x0=target[0], gain=1.5, rate_limit=0.6,
            ),
            ControlObjective(
                id=f"{uid}:ee_y", kind=ObjectiveKind.EQUALITY, variable=f"ee_y:{arm}",
                priority_level=4, x0=target[1], gain=1.5, rate_limit=0.6,
            ),
            ControlObjective(
                id=f"{uid}:ee_theta", kind=ObjectiveKind.EQUALITY, variable=f"ee_theta:{arm}",
                priority_level=5, x0=target[2], gain=1.5, rate_limit=1.0,
            ),
        ]

    def _track_waypoints(self, t: float) -> ActiveAction | None:
        action = self.current
        motion = action.motion
        wp = motion.waypoints[action.waypoint_idx]
        pose = forward_kinematics(self.world.arms[motion.arm])
        pos_err = float(np.hypot(pose[0] - wp.target[0], pose[1] - wp.target[1]))
        ang_err = abs(_wrap(pose[2] - wp.target[2]))
        if pos_err > wp.tolerance_pos or ang_err > wp.tolerance_ang:
            return None
        self._apply_grasp(wp.grasp, motion.arm)
        action.waypoint_idx += 1
        if action.waypoint_idx < len(motion.waypoints):
            return None
        done = action
        self.previous = action
        self.current = None
        self._transition_t0 = t
        return done

    def _apply_grasp(self, grasp: dict | None, arm: str) -> None:
        if not grasp:
            return
        obj = self.world.objects.get(grasp.get("object", ""))
        if obj is None:
            return
        if grasp.get("op") == "pick":
            obj.attached_to = arm
            pose = forward_kinematics(self.world.arms[arm])
            obj.position = (pose[0], pose[1])
        elif grasp.get("op") == "place":
            obj.attached_to = None

    def _safety_snapshot(self, moved: bool) -> TickTelemetry:
        min_clear = None
        if self.world.obstacles:
            values = []
            for arm in self.world.arms:
                for k in range(len(self.world.obstacles)):
                    values.append(self.world.variable(f"clearance:{arm}:{k}")[0])
            min_clear = min(values)
        overrun = 0.0
        for chain in self.world.arms.values():
            for i, (lo, hi) in enumerate(chain.joint_limits):
                overrun = max(overrun, lo - chain.joints[i], chain.joints[i] - hi)
        return TickTelemetry(
            moved=moved,
            min_clearance=min_clear,
            max_joint_overrun=float(overrun),
        )


def _wrap(angle: float) -> float:
    return (angle + np.pi) % (2.0 * np.pi) - np.pi
