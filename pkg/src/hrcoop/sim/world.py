"""Planar dual-arm kinematic world.

Serial revolute chains on fixed bases, disk obstacles and point objects that
can ride along with an end-effector once grasped.  Every scalar quantity a
control objective can reference (joint angles and margins, end-effector pose,
obstacle clearance, manipulability) is exposed together with its analytic
Jacobian row over the stacked joint vector of all arms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class SimError(Exception):
    """Invalid world input: bad dimensions, unknown names, bad time step."""


@dataclass
class KinematicChain:
    name: str
    base: tuple[float, float, float]       # x, y, theta
    links: list[float]                     # lengths, m
    joints: np.ndarray                     # revolute angles, rad
    joint_limits: list[tuple[float, float]]
    speed_cap: float = 1.5                 # rad/s

    def __post_init__(self):
        self.joints = np.asarray(self.joints, dtype=float)
        if len(self.links) < 2:
            raise SimError(f"chain {self.name!r} needs at least 2 links")
        if len(self.joints) != len(self.links):
            raise SimError(f"chain {self.name!r}: joints/links length mismatch")
        if len(self.joint_limits) != len(self.joints):
            raise SimError(f"chain {self.name!r}: joint_limits length mismatch")
        for i, (lo, hi) in enumerate(self.joint_limits):
            if not lo <= self.joints[i] <= hi:
                raise SimError(
                    f"chain {self.name!r}: joint {i} initialized outside [{lo}, {hi}]"
                )

    @property
    def dof(self) -> int:
        return len(self.joints)


@dataclass
class Obstacle:
    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise SimError("obstacle radius must be positive")


@dataclass
class WorldObject:
    name: str
    position: tuple[float, float]
    attached_to: str | None = None         # arm name while grasped


def joint_points(chain: KinematicChain) -> np.ndarray:
    """Base point plus each joint/end point: (n+1, 2)."""
    angles = chain.base[2] + np.cumsum(chain.joints)
    points = np.empty((chain.dof + 1, 2))
    points[0] = chain.base[:2]
    steps = np.column_stack([np.cos(angles), np.sin(angles)]) * np.asarray(chain.links)[:, None]
    points[1:] = points[0] + np.cumsum(steps, axis=0)
    return points


def forward_kinematics(chain: KinematicChain) -> tuple[float, float, float]:
    points = joint_points(chain)
    theta = chain.base[2] + float(chain.joints.sum())
    return float(points[-1, 0]), float(points[-1, 1]), theta


def positional_jacobian(chain: KinematicChain) -> np.ndarray:
    """2 x n matrix of end-effector (x, y) partials."""
    points = joint_points(chain)
    ee = points[-1]
    jac = np.empty((2, chain.dof))
    for j in range(chain.dof):
        r = ee - points[j]
        jac[0, j] = -r[1]
        jac[1, j] = r[0]
    return jac


def _jacobian_derivative(chain: KinematicChain) -> np.ndarray:
    """d(positional Jacobian)/d(joint k): (n, 2, n) tensor."""
    angles = chain.base[2] + np.cumsum(chain.joints)
    lengths = np.asarray(chain.links)
    cx = lengths * np.cos(angles)
    sx = lengths * np.sin(angles)
    n = chain.dof
    out = np.zeros((n, 2, n))
    for k in range(n):
        for j in range(n):
            m = max(j, k)
            out[k, 0, j] = -cx[m:].sum()
            out[k, 1, j] = -sx[m:].sum()
    return out


def manipulability(chain: KinematicChain) -> tuple[float, np.ndarray]:
    """sqrt(det(J J^T)) of the positional Jacobian, with its gradient."""
    jac = positional_jacobian(chain)
    gram = jac @ jac.T
    det = float(np.linalg.det(gram))
    m = float(np.sqrt(max(det, 0.0)))
    grad = np.zeros(chain.dof)
    if m > 1e-9:
        inv = np.linalg.inv(gram)
        djac = _jacobian_derivative(chain)
        for k in range(chain.dof):
            dgram = djac[k] @ jac.T + jac @ djac[k].T
            grad[k] = 0.5 * m * float(np.trace(inv @ dgram))
    return m, grad


def clearance(chain: KinematicChain, obstacle: Obstacle) -> float:
    """Minimum distance from the arm's segments to the disk boundary."""
    return _clearance_with_gradient(chain, obstacle)[0]


def _clearance_with_gradient(
    chain: KinematicChain, obstacle: Obstacle
) -> tuple[float, np.ndarray]:
    points = joint_points(chain)
    center = np.asarray(obstacle.center, dtype=float)
    best = None  # (distance, segment index, s along segment, closest point)
    for i in range(chain.dof):
        a, b = points[i], points[i + 1]
        d = b - a
        denom = float(d @ d)
        s = 0.0 if denom == 0.0 else float(np.clip((center - a) @ d / denom, 0.0, 1.0))
        q = a + s * d
        dist = float(np.linalg.norm(center - q))
        if best is None or dist < best[0]:
            best = (dist, i, s, q)
    dist, seg, s, q = best
    grad = np.zeros(chain.dof)
    if dist > 1e-12:
        unit = (center - q) / dist
        # Moving the closest point toward the obstacle shrinks the distance;
        # the along-segment motion is distance-neutral, so s stays fixed.
        dq = np.zeros((2, chain.dof))
        for j in range(chain.dof):
            da = _point_partial(points, seg, j)
            db = _point_partial(points, seg + 1, j)
            dq[:, j] = (1.0 - s) * da + s * db
        grad = -(unit @ dq)
    return dist - obstacle.radius, grad


def _point_partial(points: np.ndarray, idx: int, joint: int) -> np.ndarray:
    """d points[idx] / d joint; zero when the joint sits at or beyond the point."""
    if joint >= idx:
        return np.zeros(2)
    r = points[idx] - points[joint]
    return np.array([-r[1], r[0]])


class PlanarWorld:
    """Arms, obstacles, objects and the scalar-variable registry."""

    def __init__(
        self,
        arms: dict[str, KinematicChain],
        obstacles: list[Obstacle] | None = None,
        objects: dict[str, WorldObject] | None = None,
    ):
        self.arms = dict(arms)
        self.obstacles = list(obstacles or [])
        self.objects = dict(objects or {})
        self.time = 0.0
        self._offsets: dict[str, int] = {}
        offset = 0
        for name, chain in self.arms.items():
            self._offsets[name] = offset
            offset += chain.dof
        self.dof = offset

    def joint_vector(self) -> np.ndarray:
        return np.concatenate([chain.joints for chain in self.arms.values()])

    def speed_caps(self) -> np.ndarray:
        return np.concatenate(
            [np.full(chain.dof, chain.speed_cap) for chain in self.arms.values()]
        )

    def arm_slice(self, name: str) -> slice:
        if name not in self.arms:
            raise SimError(f"unknown arm {name!r}")
        start = self._offsets[name]
        return slice(start, start + self.arms[name].dof)

    def _embed(self, name: str, row: np.ndarray) -> np.ndarray:
        full = np.zeros(self.dof)
        full[self.arm_slice(name)] = row
        return full

    def variable(self, key: str) -> tuple[float, np.ndarray]:
        """Value and full-width Jacobian row of a registered scalar variable.

        Keys: ``joint:<arm>:<i>``, ``joint_margin:<arm>:<i>``, ``ee_x:<arm>``,
        ``ee_y:<arm>``, ``ee_theta:<arm>``, ``manipulability:<arm>``,
        ``clearance:<arm>:<obstacle index>``.
        """
        parts = key.split(":")
        kind = parts[0]
        if kind in ("ee_x", "ee_y", "ee_theta", "manipulability") and len(parts) == 2:
            arm = self.arms.get(parts[1])
            if arm is None:
                raise SimError(f"unknown arm in variable {key!r}")
            if kind == "manipulability":
                value, grad = manipulability(arm)
                return value, self._embed(parts[1], grad)
            if kind == "ee_theta":
                return (
                    arm.base[2] + float(arm.joints.sum()),
                    self._embed(parts[1], np.ones(arm.dof)),
                )
            jac = positional_jacobian(arm)
            pose = forward_kinematics(arm)
            if kind == "ee_x":
                return pose[0], self._embed(parts[1], jac[0])
            return pose[1], self._embed(parts[1], jac[1])
        if kind in ("joint", "joint_margin") and len(parts) == 3:
            arm = self.arms.get(parts[1])
            if arm is None:
                raise SimError(f"unknown arm in variable {key!r}")
            i = int(parts[2])
            if not 0 <= i < arm.dof:
                raise SimError(f"joint index out of range in {key!r}")
            row = np.zeros(arm.dof)
            if kind == "joint":
                row[i] = 1.0
                return float(arm.joints[i]), self._embed(parts[1], row)
            lo, hi = arm.joint_limits[i]
            low_side = arm.joints[i] - lo
            high_side = hi - arm.joints[i]
            if low_side <= high_side:
                row[i] = 1.0
                return float(low_side), self._embed(parts[1], row)
            row[i] = -1.0
            return float(high_side), self._embed(parts[1], row)
        if kind == "clearance" and len(parts) == 3:
            arm = self.arms.get(parts[1])
            if arm is None:
                raise SimError(f"unknown arm in variable {key!r}")
            idx = int(parts[2])
            if not 0 <= idx < len(self.obstacles):
                raise SimError(f"obstacle index out of range in {key!r}")
            value, grad = _clearance_with_gradient(arm, self.obstacles[idx])
            return value, self._embed(parts[1], grad)
        raise SimError(f"unknown variable {key!r}")

    def variable_keys(self) -> list[str]:
        keys = []
        for name, chain in self.arms.items():
            keys += [f"joint:{name}:{i}" for i in range(chain.dof)]
            keys += [f"joint_margin:{name}:{i}" for i in range(chain.dof)]
            keys += [f"ee_x:{name}", f"ee_y:{name}", f"ee_theta:{name}",
                     f"manipulability:{name}"]
            keys += [f"clearance:{name}:{k}" for k in range(len(self.obstacles))]
        return keys


def step(world: PlanarWorld, velocities: np.ndarray, dt: float) -> PlanarWorld:
    """Euler-integrate joint angles in place; grasped objects track their arm."""
    if dt <= 0:
        raise SimError(f"time step must be positive, got {dt}")
    velocities = np.asarray(velocities, dtype=float)
    if velocities.shape != (world.dof,):
        raise SimError(
            f"velocity vector has shape {velocities.shape}, expected ({world.dof},)"
        )
    for name, chain in world.arms.items():
        chain.joints = chain.joints + velocities[world.arm_slice(name)] * dt
    for obj in world.objects.values():
        if obj.attached_to:
            pose = forward_kinematics(world.arms[obj.attached_to])
            obj.position = (pose[0], pose[1])
    world.time += dt
    return world


def load_world(doc: dict) -> PlanarWorld:
    """Build a world from the scenario document's ``world`` section."""
    arms = {}
    for item in doc.get("arms", []):
        limits = item.get("joint_limits")
        n = len(item["links"])
        if limits is None:
            limits = [(-2.5, 2.5)] * n
        arms[item["name"]] = KinematicChain(
            name=item["name"],
            base=tuple(item["base"]),
            links=list(item["links"]),
            joints=np.asarray(item.get("joints", [0.0] * n), dtype=float),
            joint_limits=[tuple(l) for l in limits],
            speed_cap=float(item.get("speed_cap", 1.5)),
        )
    if not arms:
        raise SimError("world document declares no arms")
    obstacles = [
        Obstacle(center=tuple(o["center"]), radius=float(o["radius"]))
        for o in doc.get("obstacles", [])
    ]
    objects = {
        o["name"]: WorldObject(name=o["name"], position=tuple(o["position"]))
        for o in doc.get("objects", [])
    }
    return PlanarWorld(arms=arms, obstacles=obstacles, objects=objects)
