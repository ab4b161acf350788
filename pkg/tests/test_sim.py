"""Planar kinematics against independent numeric oracles."""

import numpy as np
import pytest

from hrcoop.sim import (
    KinematicChain,
    Obstacle,
    PlanarWorld,
    SimError,
    WorldObject,
    clearance,
    forward_kinematics,
    joint_points,
    step,
)


def make_chain(joints, links=(1.0, 1.0), base=(0.0, 0.0, 0.0), limits=None):
    n = len(joints)
    return KinematicChain(
        name="arm",
        base=base,
        links=list(links),
        joints=np.asarray(joints, dtype=float),
        joint_limits=limits or [(-3.2, 3.2)] * n,
    )


def fk_oracle(chain):
    """Compose 2x2 rotation matrices link by link."""
    rot = np.array(
        [
            [np.cos(chain.base[2]), -np.sin(chain.base[2])],
            [np.sin(chain.base[2]), np.cos(chain.base[2])],
        ]
    )
    pos = np.array(chain.base[:2], dtype=float)
    theta = chain.base[2]
    for length, angle in zip(chain.links, chain.joints):
        c, s = np.cos(angle), np.sin(angle)
        rot = rot @ np.array([[c, -s], [s, c]])
        pos = pos + rot @ np.array([length, 0.0])
        theta += angle
    return pos[0], pos[1], theta


def default_world(obstacles=()):
    arms = {
        "left": KinematicChain(
            name="left",
            base=(-0.55, 0.0, 0.5 * np.pi),
            links=[0.4, 0.4, 0.3, 0.15],
            joints=np.array([0.3, -0.5, 0.4, 0.2]),
            joint_limits=[(-2.5, 2.5)] * 4,
        ),
        "right": KinematicChain(
            name="right",
            base=(0.55, 0.0, 0.5 * np.pi),
            links=[0.4, 0.4, 0.3, 0.15],
            joints=np.array([-0.4, 0.6, -0.3, 0.1]),
            joint_limits=[(-2.5, 2.5)] * 4,
        ),
    }
    return PlanarWorld(arms=arms, obstacles=list(obstacles))


class TestForwardKinematics:
    def test_straight_two_link(self):
        pose = forward_kinematics(make_chain([0.0, 0.0]))
        assert pose == pytest.approx((2.0, 0.0, 0.0), abs=1e-12)

    def test_quarter_turn(self):
        pose = forward_kinematics(make_chain([np.pi / 2, 0.0]))
        assert pose == pytest.approx((0.0, 2.0, np.pi / 2), abs=1e-12)

    def test_random_configurations_match_rotation_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            n = rng.integers(2, 6)
            chain = make_chain(
                rng.uniform(-2.5, 2.5, n),
                links=rng.uniform(0.1, 0.6, n),
                base=(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-np.pi, np.pi)),
            )
            assert forward_kinematics(chain) == pytest.approx(fk_oracle(chain), abs=1e-12)


class TestJacobians:
    @staticmethod
    def finite_difference(world, key, h=1e-6):
        base = world.joint_vector()
        grad = np.zeros(world.dof)
        for j in range(world.dof):
            plus = base.copy()
            plus[j] += h
            minus = base.copy()
            minus[j] -= h
            values = []
            for vec in (plus, minus):
                for name in world.arms:
                    world.arms[name].joints = vec[world.arm_slice(name)].copy()
                values.append(world.variable(key)[0])
            grad[j] = (values[0] - values[1]) / (2 * h)
        for name in world.arms:
            world.arms[name].joints = base[world.arm_slice(name)].copy()
        return grad

    def test_joint_variable_is_unit_row(self):
        world = default_world()
        value, row = world.variable("joint:right:2")
        assert value == pytest.approx(-0.3)
        expected = np.zeros(world.dof)
        expected[world.arm_slice("right").start + 2] = 1.0
        np.testing.assert_array_equal(row, expected)

    def test_straight_arm_ee_x_row_vanishes(self):
        world = PlanarWorld(arms={"a": make_chain([0.0, 0.0])})
        _, row = world.variable("ee_x:a")
        np.testing.assert_allclose(row, [0.0, 0.0], atol=1e-12)

    def test_all_variables_match_finite_differences(self):
        rng = np.random.default_rng(23)
        obstacle = Obstacle(center=(0.1, 0.6), radius=0.08)
        for trial in range(100):
            world = default_world(obstacles=[obstacle])
            for name in world.arms:
                chain = world.arms[name]
                chain.joints = rng.uniform(-1.8, 1.8, chain.dof)
            for key in world.variable_keys():
                value, analytic = world.variable(key)
                numeric = self.finite_difference(world, key)
                np.testing.assert_allclose(
                    analytic, numeric, rtol=1e-5, atol=1e-6,
                    err_msg=f"{key} at trial {trial}",
                )

    def test_unknown_variable(self):
        world = default_world()
        with pytest.raises(SimError):
            world.variable("warp_drive:left")


class TestClearance:
    @staticmethod
    def dense_oracle(chain, obstacle, samples=4000):
        points = joint_points(chain)
        center = np.asarray(obstacle.center)
        best = np.inf
        for i in range(len(points) - 1):
            for s in np.linspace(0.0, 1.0, samples):
                q = points[i] + s * (points[i + 1] - points[i])
                best = min(best, float(np.linalg.norm(center - q)))
        return best - obstacle.radius

    def test_matches_dense_sampling(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            chain = make_chain(rng.uniform(-2, 2, 4), links=(0.4, 0.4, 0.3, 0.15))
            obstacle = Obstacle(
                center=(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2)),
                radius=rng.uniform(0.05, 0.3),
            )
            got = clearance(chain, obstacle)
            want = self.dense_oracle(chain, obstacle)
            assert got == pytest.approx(want, abs=1e-3)

    def test_obstacle_centered_on_link_penetrates(self):
        chain = make_chain([0.0, 0.0])
        obstacle = Obstacle(center=(1.0, 0.0), radius=0.2)
        assert clearance(chain, obstacle) == pytest.approx(-0.2, abs=1e-12)

    def test_tangent_obstacle_zero_clearance(self):
        chain = make_chain([0.0, 0.0])
        obstacle = Obstacle(center=(1.0, 0.3), radius=0.3)
        assert clearance(chain, obstacle) == pytest.approx(0.0, abs=1e-12)


class TestStep:
    def test_zero_velocity_keeps_configuration(self):
        world = default_world()
        before = world.joint_vector().copy()
        step(world, np.zeros(world.dof), 0.01)
        np.testing.assert_array_equal(world.joint_vector(), before)
        assert world.time == pytest.approx(0.01)

    def test_constant_velocity_integrates_linearly(self):
        world = default_world()
        before = world.joint_vector().copy()
        v = np.full(world.dof, 0.3)
        for _ in range(100):
            step(world, v, 0.01)
        np.testing.assert_allclose(world.joint_vector(), before + 0.3, atol=1e-12)

    def test_grasped_object_follows_end_effector(self):
        world = default_world()
        world.objects["plate"] = WorldObject(name="plate", position=(0.0, 0.0))
        world.objects["plate"].attached_to = "right"
        v = np.zeros(world.dof)
        v[world.arm_slice("right")] = 0.2
        step(world, v, 0.05)
        pose = forward_kinematics(world.arms["right"])
        assert world.objects["plate"].position == pytest.approx(pose[:2])

    def test_bad_dt_rejected(self):
        world = default_world()
        with pytest.raises(SimError):
            step(world, np.zeros(world.dof), 0.0)

    def test_dimension_mismatch_rejected(self):
        world = default_world()
        with pytest.raises(SimError):
            step(world, np.zeros(world.dof + 1), 0.01)

    def test_time_monotone(self):
        world = default_world()
        times = []
        for _ in range(5):
            step(world, np.zeros(world.dof), 0.01)
            times.append(world.time)
        assert times == sorted(times)
