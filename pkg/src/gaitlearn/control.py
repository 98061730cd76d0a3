"""PD torque law with symmetric saturation.

Torques are computed from tracking errors only; there is no gravity
compensation or feed-forward term, matching the deterministic
position-control setup the trajectories are designed for.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GainConfig:
    """Scalar PD gains shared across all joints (the robot is symmetric)."""

    kp: float = 10.0
    kd: float = 0.5

    def __post_init__(self):
        if self.kp < 0 or self.kd < 0:
            raise ValueError(f"gains must be nonnegative, got kp={self.kp}, kd={self.kd}")
        if self.kp == 0 and self.kd == 0:
            raise ValueError("kp and kd cannot both be zero")


@dataclass
class JointState:
    """Observed joint positions (rad) and velocities (rad/s)."""

    q: np.ndarray
    qdot: np.ndarray

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float)
        self.qdot = np.asarray(self.qdot, dtype=float)
        if self.q.shape != self.qdot.shape:
            raise ValueError(f"q and qdot shapes differ: {self.q.shape} vs {self.qdot.shape}")
        if not (np.all(np.isfinite(self.q)) and np.all(np.isfinite(self.qdot))):
            raise ValueError("joint state entries must be finite")


def compute_torque(
    q_des: np.ndarray,
    qdot_des: np.ndarray,
    state: JointState,
    gains: GainConfig = GainConfig(),
    u_max: float = 1.0,
) -> np.ndarray:
    """u = clamp(kp*(q_des - q) + kd*(qdot_des - qdot), +-u_max), elementwise.

    Raises ValueError on mismatched array lengths or non-positive u_max.
    """
    q_des = np.asarray(q_des, dtype=float)
    qdot_des = np.asarray(qdot_des, dtype=float)
    if q_des.shape != state.q.shape or qdot_des.shape != state.q.shape:
        raise ValueError(
            f"desired arrays must match state shape {state.q.shape}, "
            f"got {q_des.shape} and {qdot_des.shape}"
        )
    if not u_max > 0:
        raise ValueError(f"u_max must be positive, got {u_max}")
    u = gains.kp * (q_des - state.q) + gains.kd * (qdot_des - state.qdot)
    return np.clip(u, -u_max, u_max)
