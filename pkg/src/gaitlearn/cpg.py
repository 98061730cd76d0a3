"""Open-loop cyclic joint trajectories from von Mises basis functions.

A policy is a linear read-out of periodic basis activations,
``q_des = weights @ b(z)``, with the phase ``z`` advancing linearly in
time.  Four equidistant centers make a quarter-cycle delay an exact
cyclic permutation of the four weights per joint, which is the algebraic
fact the gait covariance templates are built on (see
:mod:`gaitlearn.distribution`).

Joint ordering convention, shared by every module in the package:
joints are leg-major, ``(hip, knee)`` per leg, legs numbered
front-right, hind-left, front-left, hind-right.  A parameter vector is
the row-major flattening of the ``(8, 4)`` weight matrix followed by the
temporal scale, 33 entries total.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

NUM_LEGS = 4
NUM_JOINTS = 8  # 4 legs x (hip, knee)
BASIS_COUNT = 4
PARAM_DIM = NUM_JOINTS * BASIS_COUNT + 1  # 32 weights + temporal scale

LEG_NAMES = ("front-right", "hind-left", "front-left", "hind-right")


@dataclass(frozen=True)
class BasisConfig:
    """Cyclic von Mises basis: `count` bumps exp(cos(2*pi*(z - c_i))/width).

    Centers are fixed at c_i = i/count for i = 0..count-1; equidistant
    spacing is what makes quarter-cycle shifts exact weight permutations,
    so the centers are derived rather than stored.
    """

    count: int = BASIS_COUNT
    width: float = 1.0

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"basis count must be a positive integer, got {self.count}")
        if not self.width > 0:
            raise ValueError(f"basis width must be positive, got {self.width}")

    @property
    def centers(self) -> np.ndarray:
        """Equidistant centers in [0, 1), spacing exactly 1/count."""
        return np.arange(self.count) / self.count


@dataclass(frozen=True)
class PolicyParams:
    """Basis weights per joint plus the temporal scale (cycles per second).

    ``weights[j]`` holds the basis weights of joint j; ``temporal_scale``
    is the number of trajectory cycles executed per second.
    """

    weights: np.ndarray
    temporal_scale: float = 1.0

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != NUM_JOINTS:
            raise ValueError(f"weights must have shape ({NUM_JOINTS}, count), got {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        if not self.temporal_scale > 0:
            raise ValueError(f"temporal_scale must be positive, got {self.temporal_scale}")
        object.__setattr__(self, "weights", w)

    def to_vector(self) -> np.ndarray:
        """Flatten to [w(leg1 hip), w(leg1 knee), ..., w(leg4 knee), temporal_scale]."""
        return np.concatenate([self.weights.ravel(), [self.temporal_scale]])

    @classmethod
    def from_vector(cls, vec: np.ndarray, count: int = BASIS_COUNT) -> "PolicyParams":
        vec = np.asarray(vec, dtype=float)
        expected = NUM_JOINTS * count + 1
        if vec.shape != (expected,):
            raise ValueError(f"parameter vector must have shape ({expected},), got {vec.shape}")
        return cls(weights=vec[:-1].reshape(NUM_JOINTS, count), temporal_scale=float(vec[-1]))


@dataclass(frozen=True)
class JointTrajectoryPoint:
    """Desired joint positions and velocities at one instant."""

    q_des: np.ndarray
    qdot_des: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q_des, dtype=float)
        qd = np.asarray(self.qdot_des, dtype=float)
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(qd))):
            raise ValueError("trajectory point entries must be finite")
        object.__setattr__(self, "q_des", q)
        object.__setattr__(self, "qdot_des", qd)


def phase(t: float, delta_z: float) -> float:
    """Phase z = delta_z * t, unwrapped (periodicity lives in the cosine).

    Args:
        t: time in seconds, t >= 0.
        delta_z: temporal scale in cycles per second, must be positive.
    """
    if not delta_z > 0:
        raise ValueError(f"delta_z must be positive, got {delta_z}")
    return delta_z * t


def evaluate_basis(z, cfg: BasisConfig = BasisConfig()) -> np.ndarray:
    """Evaluate all basis functions at phase z.

    Entry i is exp(cos(2*pi*(z - c_i)) / width), so every value lies in
    [exp(-1/width), exp(+1/width)].  ``z`` may be a scalar or an array;
    the basis axis is appended last.
    """
    z = np.asarray(z, dtype=float)
    return np.exp(np.cos(2.0 * np.pi * (z[..., None] - cfg.centers)) / cfg.width)


def evaluate_trajectory(params: PolicyParams, cfg: BasisConfig, t) -> np.ndarray:
    """Desired joint positions at time t: q_des[j] = weights[j] . b(z(t)).

    ``t`` may be a scalar (returns shape (8,)) or an array (joint axis last).
    """
    b = evaluate_basis(phase(t, params.temporal_scale), cfg)
    return b @ params.weights.T


def desired_velocities(params: PolicyParams, cfg: BasisConfig, t, dt: float) -> np.ndarray:
    """Forward-difference joint velocities, (q_des(t+dt) - q_des(t)) / dt.

    The step should match the consumer's control period; the simulator
    uses its own dt here.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    return (evaluate_trajectory(params, cfg, t + dt) - evaluate_trajectory(params, cfg, t)) / dt


def trajectory_point(params: PolicyParams, cfg: BasisConfig, t: float, dt: float) -> JointTrajectoryPoint:
    """Bundle q_des and forward-difference qdot_des at time t."""
    return JointTrajectoryPoint(
        q_des=evaluate_trajectory(params, cfg, t),
        qdot_des=desired_velocities(params, cfg, t, dt),
    )


def mean_basis_sum(cfg: BasisConfig) -> float:
    """Cycle average of sum_i b_i(z), equal to count * I0(1/width).

    The sum of equidistant von Mises bumps is constant only up to a small
    ripple (the surviving count-th Fourier harmonic, relative size
    2*I_count/I_0 of the argument 1/width), so "constant" trajectories
    built from equal weights wobble by that fraction around their target.
    This average is the right normalizer for encoding a posture as equal
    weights.
    """
    return cfg.count * float(np.i0(1.0 / cfg.width))
