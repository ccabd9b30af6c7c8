"""
FrozenTime - Matrix Schedules

Time-indexed matrix families t -> A_t used by the linear loop-function kinds,
and the seeded generators that produce them.
"""

import logging
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import expm

from ..exceptions import InputError

logger = logging.getLogger(__name__)


class MatrixSchedule:
    """
    Matrices A_{start_time}, ..., A_{start_time + T - 1}.

    The schedule is total: times before the first stored matrix use the first
    matrix and times after the last use the last one.
    """

    __slots__ = ("start_time", "_matrices")

    def __init__(self, matrices, start_time: int = 0):
        arr = np.array(matrices, dtype=float)
        if arr.ndim == 2:
            arr = arr[np.newaxis]
        if arr.ndim != 3 or arr.shape[0] == 0 or 0 in arr.shape[1:]:
            raise InputError(f"Matrix schedule must have shape (T, rows, cols), got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InputError("Matrix schedule entries must be finite")
        arr.setflags(write=False)
        self.start_time = int(start_time)
        self._matrices = arr

    @classmethod
    def constant(cls, matrix) -> "MatrixSchedule":
        return cls(np.asarray(matrix, dtype=float)[np.newaxis])

    @property
    def matrices(self) -> np.ndarray:
        return self._matrices

    @property
    def length(self) -> int:
        return self._matrices.shape[0]

    @property
    def shape(self):
        return self._matrices.shape[1:]

    @property
    def end_time(self) -> int:
        return self.start_time + self.length - 1

    @property
    def is_constant(self) -> bool:
        return self.length == 1 or bool(np.all(self._matrices == self._matrices[0]))

    def at(self, t: int) -> np.ndarray:
        k = min(max(t - self.start_time, 0), self.length - 1)
        return self._matrices[k]

    def __repr__(self) -> str:
        return f"MatrixSchedule(start_time={self.start_time}, length={self.length}, shape={self.shape})"


def random_orthogonal(rng: np.random.Generator, dimension: int) -> np.ndarray:
    """Haar-distributed orthogonal matrix (QR of a Gaussian matrix with sign fix)."""
    q, r = np.linalg.qr(rng.standard_normal((dimension, dimension)))
    return q * np.sign(np.diag(r))


def _unit_skew(rng: np.random.Generator, dimension: int) -> np.ndarray:
    if dimension == 2:
        return np.array([[0.0, -1.0], [1.0, 0.0]])
    k = rng.standard_normal((dimension, dimension))
    k = k - k.T
    return k / np.linalg.norm(k, 2)


def similarity_schedule(
    eigenvalues: np.ndarray,
    rotation_steps: Sequence[float],
    rng: np.random.Generator,
    start_time: int = 0
) -> MatrixSchedule:
    """
    Schedule H_t = Q_t diag(lambda_t) Q_t' with prescribed real eigenvalues.

    Q_0 is a random orthogonal matrix and Q_t = Q_{t-1} expm(delta_t K_t), so
    the rotation steps delta_t set the size of the per-step variation while
    the eigenvalues set the stability margin.

    Args:
        eigenvalues: (T, m) eigenvalues per time
        rotation_steps: (T,) rotation angles; the first entry is ignored
        rng: Random generator
        start_time: First time index

    Returns:
        MatrixSchedule of symmetric matrices
    """
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    horizon, dimension = eigenvalues.shape
    steps = np.asarray(rotation_steps, dtype=float)
    if steps.shape != (horizon,):
        raise InputError("rotation_steps must have one entry per time")

    q = random_orthogonal(rng, dimension)
    out = np.empty((horizon, dimension, dimension))
    for k in range(horizon):
        if k > 0:
            q = q @ expm(steps[k] * _unit_skew(rng, dimension))
        out[k] = (q * eigenvalues[k]) @ q.T
    return MatrixSchedule(out, start_time=start_time)


def stochastic_schedule(
    perron_roots: Sequence[float],
    dimension: int,
    rng: np.random.Generator,
    jitter: float = 0.01,
    floor: float = 0.05,
    start_time: int = 0
) -> MatrixSchedule:
    """
    Nonnegative schedule A_t = r_t P_t with P_t row-stochastic.

    Row-stochastic P_t has Perron root 1, so A_t has spectral radius exactly
    r_t and infinity-norm r_t. P_t drifts by a random walk of size jitter.
    """
    roots = np.asarray(perron_roots, dtype=float)
    p = rng.uniform(0.2, 1.0, (dimension, dimension))
    p = p / p.sum(axis=1, keepdims=True)
    out = np.empty((len(roots), dimension, dimension))
    for k, r in enumerate(roots):
        if k > 0 and jitter > 0:
            p = np.maximum(p + jitter * rng.uniform(-1.0, 1.0, p.shape), floor)
            p = p / p.sum(axis=1, keepdims=True)
        out[k] = r * p
    return MatrixSchedule(out, start_time=start_time)


def radius_profile(
    horizon: int,
    base: float,
    episodes: Sequence[Sequence[int]] = (),
    episode_value: Optional[float] = None
) -> np.ndarray:
    """Constant radius `base` with `episode_value` on each (start, length) episode."""
    out = np.full(horizon, float(base))
    for start, length in episodes:
        out[max(start, 0):max(start + length, 0)] = episode_value
    return out
