"""Task-priority velocity solver.

Each priority level contributes a regularized least-squares correction inside
the nullspace of everything above it:

    y_0 = 0,  P_0 = I
    Jhat_k = A_k J_k P_{k-1}
    y_k = y_{k-1} + P_{k-1} pinv(Jhat_k) A_k (xdot_k - J_k y_{k-1})
    P_k = P_{k-1} (I - pinv(Jhat_k) Jhat_k)

with A_k the diagonal of combined activations.  The pseudoinverse damps small
singular values so activations fading in and out cannot blow up the solution;
rows whose activation is exactly zero are dropped, which makes a deactivated
objective behave identically to an absent one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .objectives import RobotAction, TaskLevel, activation, reference_rate, transition_activation


class SolverError(Exception):
    """Dimension mismatch or non-finite solver input."""


@dataclass
class DampingConfig:
    sigma_min: float = 1e-2
    mu_max: float = 1e-1


@dataclass
class SolverOutput:
    y_dot: np.ndarray
    residuals: list[float]                      # per level, against final y_dot
    activations: dict[str, float] = field(default_factory=dict)


def damped_pinv(matrix: np.ndarray, config: DampingConfig | None = None) -> np.ndarray:
    """SVD pseudoinverse with bell-shaped damping of small singular values.

    Values at or above sigma_min invert exactly; below it the inverse becomes
    s / (s^2 + mu^2) with mu^2 = mu_max^2 (1 - (s / sigma_min)^2), which meets
    the exact inverse continuously at sigma_min and stays bounded at s = 0.
    """
    cfg = config or DampingConfig()
    if matrix.size == 0:
        return matrix.T.copy()
    u, s, vt = np.linalg.svd(matrix, full_matrices=False)
    inv = np.empty_like(s)
    for i, sv in enumerate(s):
        if sv >= cfg.sigma_min:
            inv[i] = 1.0 / sv
        else:
            mu2 = cfg.mu_max**2 * (1.0 - (sv / cfg.sigma_min) ** 2)
            inv[i] = sv / (sv * sv + mu2) if (sv * sv + mu2) > 0 else 0.0
    return vt.T @ np.diag(inv) @ u.T


def solve(
    levels: list[TaskLevel],
    world,
    prev_action: RobotAction | None = None,
    next_action: RobotAction | None = None,
    t_since_start: float = 0.0,
    damping: DampingConfig | None = None,
    speed_caps: np.ndarray | None = None,
) -> SolverOutput:
    """Run the priority recursion over the given levels on the current world."""
    cfg = damping or DampingConfig()
    n = world.dof
    y = np.zeros(n)
    projector = np.eye(n)
    stacked: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []
    activations: dict[str, float] = {}

    transitioning = prev_action is not None or next_action is not None
    ordered = sorted(levels, key=lambda l: l.level)
    for level in ordered:
        rows, refs, alphas = [], [], []
        for obj in level.objectives:
            value, row = world.variable(obj.variable)
            if row.shape != (n,):
                raise SolverError(
                    f"objective {obj.id!r}: Jacobian row has shape {row.shape}"
                )
            if not np.all(np.isfinite(row)) or not np.isfinite(value):
                raise SolverError(f"objective {obj.id!r}: non-finite Jacobian or value")
            alpha = activation(obj, value)
            if transitioning:
                alpha *= transition_activation(prev_action, next_action, obj, t_since_start)
            activations[obj.id] = alpha
            if alpha == 0.0:
                continue  # exactly neutral: as if the objective were absent
            rows.append(row)
            refs.append(reference_rate(obj, value))
            alphas.append(alpha)
        if not rows:
            stacked.append((np.zeros((0, n)), np.zeros(0), np.zeros(0)))
            continue
        jac = np.vstack(rows)
        ref = np.asarray(refs)
        weight = np.asarray(alphas)
        stacked.append((jac, ref, weight))
        jhat = weight[:, None] * (jac @ projector)
        pinv = damped_pinv(jhat, cfg)
        y = y + projector @ pinv @ (weight * (ref - jac @ y))
        projector = projector @ (np.eye(n) - pinv @ jhat)

    if speed_caps is not None:
        y = np.clip(y, -np.asarray(speed_caps), np.asarray(speed_caps))

    residuals = [
        float(np.linalg.norm(weight * (ref - jac @ y))) if jac.size else 0.0
        for jac, ref, weight in stacked
    ]
    return SolverOutput(y_dot=y, residuals=residuals, activations=activations)
