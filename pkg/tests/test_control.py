"""Activation functions and the task-priority solver against LS oracles."""

import numpy as np
import pytest

from hrcoop.control import (
    ControlObjective,
    ObjectiveKind,
    RobotAction,
    TaskLevel,
    activation,
    build_levels,
    damped_pinv,
    reference_rate,
    solve,
    standard_objective_set,
    transition_activation,
)
from hrcoop.sim import KinematicChain, Obstacle, PlanarWorld


def eq_obj(oid="o", level=1, gain=1.0, x0=2.0, rate_limit=10.0, variable="joint:a:0"):
    return ControlObjective(
        id=oid,
        kind=ObjectiveKind.EQUALITY,
        variable=variable,
        priority_level=level,
        gain=gain,
        rate_limit=rate_limit,
        x0=x0,
    )


def min_obj(oid="m", level=1, x_min=0.0, buffer=0.5, variable="joint:a:0"):
    return ControlObjective(
        id=oid,
        kind=ObjectiveKind.INEQUALITY_MIN,
        variable=variable,
        priority_level=level,
        activation_buffer=buffer,
        x_min=x_min,
    )


def two_arm_world(joints_a=(0.4, -0.7, 0.5, 0.2), joints_b=(-0.3, 0.8, -0.4, 0.1)):
    arms = {
        "a": KinematicChain(
            name="a",
            base=(-0.5, 0.0, np.pi / 2),
            links=[0.4, 0.4, 0.3, 0.15],
            joints=np.asarray(joints_a, dtype=float),
            joint_limits=[(-2.5, 2.5)] * 4,
        ),
        "b": KinematicChain(
            name="b",
            base=(0.5, 0.0, np.pi / 2),
            links=[0.4, 0.4, 0.3, 0.15],
            joints=np.asarray(joints_b, dtype=float),
            joint_limits=[(-2.5, 2.5)] * 4,
        ),
    }
    return PlanarWorld(arms=arms)


class TestReferenceRate:
    def test_equality_at_reference_is_zero(self):
        assert reference_rate(eq_obj(x0=2.0), 2.0) == 0.0

    def test_equality_formula(self):
        assert reference_rate(eq_obj(gain=1.0, x0=2.0, rate_limit=10.0), 1.0) == pytest.approx(1.0)

    def test_rate_limit_clamps(self):
        assert reference_rate(eq_obj(gain=5.0, x0=10.0, rate_limit=0.5), 0.0) == 0.5
        assert reference_rate(eq_obj(gain=5.0, x0=-10.0, rate_limit=0.5), 0.0) == -0.5

    def test_inequality_targets_interior_point(self):
        obj = min_obj(x_min=1.0, buffer=0.5)
        assert reference_rate(obj, 1.5) == 0.0
        assert reference_rate(obj, 1.0) == pytest.approx(0.5)


class TestActivation:
    def test_deep_inside_validity_region_is_zero(self):
        assert activation(min_obj(x_min=0.0, buffer=0.5), 10.0) == 0.0

    def test_violated_threshold_saturates(self):
        assert activation(min_obj(x_min=0.0, buffer=0.5), -0.2) == 1.0
        assert activation(min_obj(x_min=0.0, buffer=0.5), 0.0) == 1.0

    def test_buffer_midpoint_is_half(self):
        assert activation(min_obj(x_min=0.0, buffer=0.5), 0.25) == pytest.approx(0.5)

    def test_max_kind_mirrors(self):
        obj = ControlObjective(
            id="mx",
            kind=ObjectiveKind.INEQUALITY_MAX,
            variable="joint:a:0",
            priority_level=1,
            activation_buffer=0.5,
            x_max=1.0,
        )
        assert activation(obj, 1.2) == 1.0
        assert activation(obj, 0.75) == pytest.approx(0.5)
        assert activation(obj, 0.2) == 0.0

    def test_equality_always_one(self):
        assert activation(eq_obj(), -100.0) == 1.0

    def test_continuity_sampled(self):
        obj = min_obj(x_min=0.0, buffer=0.5)
        xs = np.arange(-0.5, 1.0, 1e-3)
        values = np.array([activation(obj, x) for x in xs])
        slope_bound = 1.5 / obj.activation_buffer  # max |d smoothstep/du| = 1.5
        assert np.abs(np.diff(values)).max() < 10 * slope_bound * 1e-3

    def test_exactly_one_reference_enforced(self):
        with pytest.raises(ValueError):
            ControlObjective(
                id="bad",
                kind=ObjectiveKind.EQUALITY,
                variable="joint:a:0",
                priority_level=1,
                x0=1.0,
                x_min=0.0,
            )


class TestTransitionActivation:
    def make_actions(self):
        prev = RobotAction(name="prev", objective_ids=["only_prev", "shared"], transition_ramp=1.0)
        nxt = RobotAction(name="next", objective_ids=["only_next", "shared"], transition_ramp=1.0)
        return prev, nxt

    def test_safety_always_one(self):
        prev, nxt = self.make_actions()
        obj = min_obj(oid="guard")
        obj.safety = True
        for t in (0.0, 0.5, 2.0):
            assert transition_activation(prev, nxt, obj, t) == 1.0

    def test_incoming_ramps_up(self):
        prev, nxt = self.make_actions()
        obj = eq_obj(oid="only_next")
        assert transition_activation(prev, nxt, obj, 0.0) == 0.0
        assert transition_activation(prev, nxt, obj, 0.5) == pytest.approx(0.5)
        assert transition_activation(prev, nxt, obj, 1.0) == 1.0

    def test_outgoing_ramps_down(self):
        prev, nxt = self.make_actions()
        obj = eq_obj(oid="only_prev")
        assert transition_activation(prev, nxt, obj, 0.0) == 1.0
        assert transition_activation(prev, nxt, obj, 0.5) == pytest.approx(0.5)
        assert transition_activation(prev, nxt, obj, 1.0) == 0.0

    def test_shared_stays_on(self):
        prev, nxt = self.make_actions()
        obj = eq_obj(oid="shared")
        for t in (0.0, 0.5, 2.0):
            assert transition_activation(prev, nxt, obj, t) == 1.0


class TestDampedPinv:
    def test_healthy_matrix_inverts_exactly(self):
        rng = np.random.default_rng(0)
        m = rng.uniform(0.5, 1.5, (3, 6))
        np.testing.assert_allclose(damped_pinv(m), np.linalg.pinv(m), atol=1e-10)

    def test_zero_matrix_gives_zero(self):
        np.testing.assert_array_equal(damped_pinv(np.zeros((2, 4))), np.zeros((4, 2)))


class TestSolve:
    def test_all_deactivated_gives_zero(self):
        world = two_arm_world()
        objectives = [min_obj(oid=f"m{i}", x_min=-10.0, buffer=0.1, variable=f"joint:a:{i}") for i in range(4)]
        levels = build_levels(objectives)
        out = solve(levels, world)
        np.testing.assert_array_equal(out.y_dot, np.zeros(world.dof))

    def test_single_level_matches_least_squares(self):
        world = two_arm_world()
        target = (0.15, 0.75, 1.2)
        objectives = [
            eq_obj(oid="x", level=1, gain=1.5, x0=target[0], variable="ee_x:a"),
            eq_obj(oid="y", level=1, gain=1.5, x0=target[1], variable="ee_y:a"),
            eq_obj(oid="t", level=1, gain=1.5, x0=target[2], variable="ee_theta:a"),
        ]
        out = solve(build_levels(objectives), world)
        rows, refs = [], []
        for obj in sorted(objectives, key=lambda o: o.id):
            value, row = world.variable(obj.variable)
            rows.append(row)
            refs.append(reference_rate(obj, value))
        jac, ref = np.vstack(rows), np.asarray(refs)
        oracle, *_ = np.linalg.lstsq(jac, ref, rcond=None)
        np.testing.assert_allclose(out.y_dot, oracle, atol=1e-8)

    def test_two_conflicting_levels_preserve_priority(self):
        world = two_arm_world()
        high = [
            eq_obj(oid="x1", level=1, x0=0.2, variable="ee_x:a"),
            eq_obj(oid="y1", level=1, x0=0.8, variable="ee_y:a"),
        ]
        low = [eq_obj(oid=f"p{i}", level=2, x0=1.5, variable=f"joint:a:{i}") for i in range(4)]
        full = solve(build_levels(high + low), world)
        only_high = solve(build_levels(high), world)
        assert full.residuals[0] <= only_high.residuals[0] + 1e-6 * max(1.0, only_high.residuals[0])
        assert np.linalg.norm(full.y_dot) > 0

    def test_deactivated_equals_removed_exactly(self):
        world = two_arm_world()
        active = [
            eq_obj(oid="x1", level=1, x0=0.2, variable="ee_x:a"),
            eq_obj(oid="y1", level=1, x0=0.8, variable="ee_y:a"),
        ]
        dead = min_obj(oid="gone", level=1, x_min=-100.0, buffer=0.1, variable="joint:a:0")
        with_dead = solve(build_levels(active + [dead]), world)
        without = solve(build_levels(active), world)
        np.testing.assert_array_equal(with_dead.y_dot, without.y_dot)
        assert with_dead.activations["gone"] == 0.0

    def test_velocity_cap_respected(self):
        world = two_arm_world()
        objectives = [
            eq_obj(oid="x1", level=1, gain=50.0, x0=5.0, rate_limit=100.0, variable="ee_x:a"),
            eq_obj(oid="y1", level=1, gain=50.0, x0=5.0, rate_limit=100.0, variable="ee_y:a"),
        ]
        caps = world.speed_caps()
        out = solve(build_levels(objectives), world, speed_caps=caps)
        assert np.all(np.abs(out.y_dot) <= caps + 1e-12)

    def test_bit_identical_outputs(self):
        world = two_arm_world()
        objectives = standard_objective_set(world, "a", ee_target=(0.1, 0.8, 1.0))
        first = solve(build_levels(objectives), world)
        second = solve(build_levels(objectives), world)
        np.testing.assert_array_equal(first.y_dot, second.y_dot)


class TestStandardObjectiveSet:
    def test_one_joint_limit_per_joint_at_level_one(self):
        world = two_arm_world()
        objectives = standard_objective_set(world, "a")
        limits = [o for o in objectives if o.priority_level == 1]
        assert len(limits) == 4
        assert all(o.safety for o in limits)

    def test_obstacle_above_end_effector_priority(self):
        world = two_arm_world()
        world.obstacles.append(Obstacle(center=(0.0, 0.8), radius=0.1))
        objectives = standard_objective_set(world, "a", ee_target=(0.1, 0.8, 1.0))
        avoid = next(o for o in objectives if "obstacle" in o.id)
        ee = next(o for o in objectives if o.id.endswith("ee_x"))
        assert avoid.priority_level < ee.priority_level

    def test_preferred_pose_is_last_level(self):
        world = two_arm_world()
        objectives = standard_objective_set(world, "a", ee_target=(0.1, 0.8, 1.0))
        last = max(o.priority_level for o in objectives)
        pose = [o for o in objectives if o.priority_level == last]
        assert all("preferred_pose" in o.id for o in pose)

    def test_unknown_arm(self):
        world = two_arm_world()
        with pytest.raises(ValueError):
            standard_objective_set(world, "zz")
