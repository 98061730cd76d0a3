"""Gaussian search distribution over policy parameters and gait templates.

The exploration covariance is structured by a 0/1 template built from
cyclic-shift permutation blocks: legs whose footfalls are separated by k
quarter-cycles get their per-joint weight vectors coupled through the
permutation S^k, where (S w)_i = w_{i-1 mod 4}.  Applying S to a joint's
weights delays its trajectory by exactly one quarter cycle (see
:mod:`gaitlearn.cpg`), so sampling with maximal coupling confines
exploration to parameter vectors whose legs execute a common trajectory
with the gait's phase gaps.

Knees are never coupled to hips: every 8x8 leg-pair block carries the
same 4x4 permutation once in its hip-hip and once in its knee-knee
sub-block, and nothing elsewhere.  The temporal-scale row and column
stay diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cpg import BASIS_COUNT, NUM_JOINTS, NUM_LEGS, PARAM_DIM

WEIGHT_DIM = NUM_JOINTS * BASIS_COUNT  # 32

#: Named footfall patterns as quarter-cycle offsets per leg, leg order
#: front-right, hind-left, front-left, hind-right.  Walk lifts legs one
#: quarter apart in that order; trot couples the diagonal pairs with a
#: half-cycle gap; pace couples the lateral pairs; bound the front/hind
#: pairs.
GAIT_PRESETS: dict[str, tuple[int, int, int, int]] = {
    "walk": (0, 1, 2, 3),
    "trot": (0, 0, 2, 2),
    "pace": (0, 2, 2, 0),
    "bound": (0, 2, 0, 2),
}


class SingularCovarianceError(ValueError):
    """Raised when an operation needs a strictly positive definite covariance."""


@dataclass(frozen=True)
class GaitSpec:
    """Per-leg quarter-cycle phase offsets defining a gait's symmetry."""

    quarter_offsets: tuple[int, int, int, int]

    def __post_init__(self):
        offs = tuple(int(o) for o in self.quarter_offsets)
        if len(offs) != NUM_LEGS:
            raise ValueError(f"need one offset per leg ({NUM_LEGS}), got {len(offs)}")
        if any(o not in (0, 1, 2, 3) for o in offs):
            raise ValueError(f"offsets must lie in {{0,1,2,3}}, got {offs}")
        object.__setattr__(self, "quarter_offsets", offs)

    @classmethod
    def named(cls, name: str) -> "GaitSpec":
        try:
            return cls(GAIT_PRESETS[name])
        except KeyError:
            raise ValueError(
                f"unknown gait {name!r}; known gaits: {sorted(GAIT_PRESETS)}"
            ) from None


@dataclass(frozen=True)
class CovarianceTemplate:
    """0/1 symmetric coupling pattern over the 33 policy parameters."""

    matrix: np.ndarray
    gait: GaitSpec | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (PARAM_DIM, PARAM_DIM):
            raise ValueError(f"template must be {PARAM_DIM}x{PARAM_DIM}, got {m.shape}")
        if not np.array_equal(m, m.T):
            raise ValueError("template must be symmetric")
        if not np.all((m == 0.0) | (m == 1.0)):
            raise ValueError("template entries must be 0 or 1")
        if not np.all(np.diag(m) == 1.0):
            raise ValueError("template diagonal must be all ones")
        object.__setattr__(self, "matrix", m)

    @property
    def coupling(self) -> np.ndarray:
        """The off-diagonal part O with template = I + O."""
        return self.matrix - np.eye(PARAM_DIM)


def cyclic_shift_matrix(k: int) -> np.ndarray:
    """Permutation S^k with (S^k w)_i = w_{i-k mod 4}; S^k w == np.roll(w, k)."""
    return np.roll(np.eye(BASIS_COUNT), k % BASIS_COUNT, axis=0)


def identity_template() -> CovarianceTemplate:
    """Template of an uncoupled (diagonal) initialization."""
    return CovarianceTemplate(matrix=np.eye(PARAM_DIM), gait=None)


def build_template(gait: GaitSpec) -> CovarianceTemplate:
    """Assemble the coupling template I + O for a gait's quarter offsets.

    For legs i, j with offsets o_i, o_j, the hip-hip and knee-knee 4x4
    sub-blocks of the (i, j) leg block are S^((o_i - o_j) mod 4); the
    hip-knee sub-blocks are zero and the temporal-scale entry is diagonal.
    """
    m = np.zeros((PARAM_DIM, PARAM_DIM))
    offs = gait.quarter_offsets
    for i in range(NUM_LEGS):
        for j in range(NUM_LEGS):
            p = cyclic_shift_matrix(offs[i] - offs[j])
            ri, rj = 8 * i, 8 * j
            m[ri : ri + 4, rj : rj + 4] = p  # hip-hip
            m[ri + 4 : ri + 8, rj + 4 : rj + 8] = p  # knee-knee
    m[WEIGHT_DIM, WEIGHT_DIM] = 1.0
    return CovarianceTemplate(matrix=m, gait=gait)


def scale_template(template: CovarianceTemplate, sigma2: float, gamma: float) -> np.ndarray:
    """Covariance sigma2 * (I + gamma * O) from a template I + O.

    gamma interpolates between isotropic exploration (0) and exploration
    confined to the gait-coupled subspace (1, where the matrix becomes
    singular).  The result is positive semidefinite for gamma in [0, 1]
    because I + O is a Gram matrix of stacked permutations, so O >= -I.
    """
    if not sigma2 > 0:
        raise ValueError(f"sigma2 must be positive, got {sigma2}")
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    return sigma2 * (np.eye(PARAM_DIM) + gamma * template.coupling)


@dataclass(frozen=True)
class SearchDistribution:
    """Gaussian over 33-dim policy parameter vectors (mean, full covariance)."""

    mean: np.ndarray
    cov: np.ndarray

    #: tolerances of the validity checks
    _SYM_TOL = 1e-12
    _EIG_TOL = -1e-10

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float)
        cov = np.asarray(self.cov, dtype=float)
        if mean.ndim != 1:
            raise ValueError(f"mean must be a vector, got shape {mean.shape}")
        d = mean.shape[0]
        if cov.shape != (d, d):
            raise ValueError(f"cov must be {d}x{d}, got {cov.shape}")
        if not np.all(np.isfinite(mean)) or not np.all(np.isfinite(cov)):
            raise ValueError("distribution entries must be finite")
        scale = max(1.0, float(np.abs(cov).max()))
        if np.abs(cov - cov.T).max() > self._SYM_TOL * scale:
            raise ValueError("covariance must be symmetric")
        if np.linalg.eigvalsh(cov).min() < self._EIG_TOL * scale:
            raise ValueError("covariance must be positive semidefinite")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


def sample(dist: SearchDistribution, n: int, seed) -> np.ndarray:
    """Draw n parameter vectors, deterministically for a given seed.

    Uses the symmetric eigenfactorization of the covariance with
    negative eigenvalues clamped to zero, so singular covariances
    (maximal coupling) are supported: samples then lie exactly in the
    affine subspace mean + range(cov).

    ``seed`` is anything ``np.random.default_rng`` accepts (int,
    SeedSequence, Generator).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    evals, evecs = np.linalg.eigh(dist.cov)
    scale = max(1.0, float(np.abs(dist.cov).max()))
    if evals.min() < -1e-8 * scale:
        raise ValueError(f"covariance has eigenvalue {evals.min():.3e}, not PSD")
    root = evecs * np.sqrt(np.clip(evals, 0.0, None))
    rng = np.random.default_rng(seed)
    normals = rng.standard_normal((n, dist.dim))
    return dist.mean + normals @ root.T


def log_density(dist: SearchDistribution, theta: np.ndarray) -> float:
    """Multivariate Gaussian log-density log N(theta | mean, cov).

    Raises SingularCovarianceError when the covariance is not strictly
    positive definite; callers sampling on a coupled subspace must use
    subspace-aware quantities instead.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape != dist.mean.shape:
        raise ValueError(f"theta must have shape {dist.mean.shape}, got {theta.shape}")
    try:
        chol = np.linalg.cholesky(dist.cov)
    except np.linalg.LinAlgError as exc:
        raise SingularCovarianceError(
            "covariance is singular; log-density is undefined"
        ) from exc
    diff = theta - dist.mean
    alpha = np.linalg.solve(chol, diff)
    logdet = 2.0 * np.sum(np.log(np.diag(chol)))
    return float(-0.5 * (dist.dim * np.log(2.0 * np.pi) + logdet + alpha @ alpha))


def sample_estimate_template(gait: GaitSpec, n: int, seed, chunk: int = 1 << 16) -> np.ndarray:
    """Monte Carlo estimate of the 32x32 weight-block template.

    Draws leg-1 weight vectors i.i.d. standard normal, replicates them to
    the other legs through the gait's quarter-shift permutations, and
    averages the outer products.  For large n the entrywise rounding of
    the estimate reproduces the exact template, which makes this the
    independent oracle for :func:`build_template`.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    offs = gait.quarter_offsets
    rng = np.random.default_rng(seed)
    gram = np.zeros((WEIGHT_DIM, WEIGHT_DIM))
    remaining = n
    while remaining > 0:
        m = min(chunk, remaining)
        w1 = rng.standard_normal((m, NUM_JOINTS))
        w_all = np.empty((m, WEIGHT_DIM))
        for leg in range(NUM_LEGS):
            w_all[:, 8 * leg : 8 * leg + 4] = np.roll(w1[:, 0:4], offs[leg], axis=1)
            w_all[:, 8 * leg + 4 : 8 * leg + 8] = np.roll(w1[:, 4:8], offs[leg], axis=1)
        gram += w_all.T @ w_all
        remaining -= m
    return gram / n


def initial_covariance(
    gait: GaitSpec | None,
    sigma2: float = 1.0,
    gamma: float = 0.9,
    delta_z_variance_scale: float = 0.01,
) -> np.ndarray:
    """Exploration covariance for a gait (None means diagonal/uncoupled).

    The weight block is sigma2 * (I + gamma * O); the temporal-scale
    variance is sigma2 * delta_z_variance_scale because cycles-per-second
    lives on a different scale than basis weights.
    """
    template = build_template(gait) if gait is not None else identity_template()
    gamma_eff = gamma if gait is not None else 0.0
    cov = scale_template(template, sigma2, gamma_eff)
    cov[WEIGHT_DIM, WEIGHT_DIM] = sigma2 * delta_z_variance_scale
    return cov
