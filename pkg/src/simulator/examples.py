"""
FrozenTime - Example Scenarios

Seeded generators for the two reference experiments and for small random
all-stabilizing scenarios.

Example 1: G = Phi(H), (Hx)(t) = A_t x(t) + B_t x(t-1), with nonnegative
A_t = r_t P_t and B_t = b Q_t (P_t, Q_t row-stochastic). The frozen loop
has spectral radius (r_t + sqrt(r_t^2 + 4b)) / 2, so short episodes with a
large r_t are destabilizing and everything else is stabilizing.

Example 2: G = H_t = R_t diag(lambda_1(t), lambda_2(t)) R_t' with a rotation
R_t that turns by a random angle each step and a single-step eigenvalue
peak every `peak_every` steps. Every frozen loop is stabilizing but the
variation never stops.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..operators import (
    DeadZoneComposite,
    MatrixSchedule,
    MemorylessMatrix,
    OneStepLinear,
    radius_profile,
    similarity_schedule,
    stochastic_schedule,
)
from .scenario import InputSpec, Scenario

logger = logging.getLogger(__name__)

Episode = Tuple[int, int]


def episode_schedule(
    rng: np.random.Generator,
    horizon: int,
    gap: Tuple[int, int] = (40, 60),
    length: Tuple[int, int] = (3, 5),
    calm_tail: int = 40
) -> List[Episode]:
    """(start, length) episodes separated by random gaps, none in the last `calm_tail` steps."""
    episodes: List[Episode] = []
    t = int(rng.integers(gap[0], gap[1] + 1))
    while True:
        n = int(rng.integers(length[0], length[1] + 1))
        if t + n > horizon - calm_tail:
            break
        episodes.append((t, n))
        t += n + int(rng.integers(gap[0], gap[1] + 1))
    return episodes


def episode_indicator(horizon: int, episodes: Sequence[Episode]) -> np.ndarray:
    flags = np.zeros(horizon, dtype=bool)
    for start, n in episodes:
        flags[start:start + n] = True
    return flags


def build_example1(
    seed: int = 0,
    horizon: int = 996,
    episodes: Optional[Sequence[Episode]] = None,
    base_radius: float = 0.3,
    episode_radius: float = 1.1,
    delay_gain: float = 0.05,
    jitter: float = 0.01,
    sigma: float = 1.2,
    sigma0: float = 1.4,
    rho: float = 0.94
) -> Scenario:
    """
    Dead-zone over a switched one-step linear system with destabilizing episodes.

    Args:
        seed: Seed for the episodes and the matrix drift
        horizon: Number of simulated steps (t = 0 .. horizon - 1)
        episodes: (start, length) destabilizing episodes; drawn from the seed when None
        base_radius: Row sum r_t of A_t outside episodes
        episode_radius: Row sum r_t of A_t inside episodes
        delay_gain: Row sum b of B_t
        jitter: Per-step drift of the row-stochastic factors
        sigma, sigma0, rho: Certificate parameters

    Returns:
        Scenario whose indicator flags the destabilizing episodes
    """
    rng = np.random.default_rng(seed)
    if episodes is None:
        episodes = episode_schedule(rng, horizon)
    episodes = [(int(a), int(n)) for a, n in episodes]

    roots = radius_profile(horizon, base_radius, episodes, episode_radius)
    a = stochastic_schedule(roots, 2, rng, jitter=jitter)
    b = stochastic_schedule(np.full(horizon, delay_gain), 2, rng, jitter=jitter)
    G = DeadZoneComposite(OneStepLinear(a, b))
    F = MemorylessMatrix(MatrixSchedule.constant(np.eye(2)))
    logger.debug(f"Example 1 (seed {seed}): {len(episodes)} destabilizing episodes")

    return Scenario(
        name=f"example1_seed{seed}",
        F=F,
        G=G,
        input=InputSpec(kind="exp_cos", dimension=2, amplitude=2.0, growth=20.0, period=2.0),
        horizon=range(horizon),
        sigma=sigma,
        sigma0=sigma0,
        rho=rho,
        seed=seed,
        indicator=episode_indicator(horizon, episodes),
        source={"example": "example1", "seed": seed, "horizon": horizon, "episodes": [list(e) for e in episodes]},
    )


def example2_eigenvalues(
    horizon: int,
    base: Tuple[float, float] = (0.30, -0.20),
    wobble: float = 0.04,
    peak: float = 0.62,
    peak_every: int = 100
) -> np.ndarray:
    """(horizon, 2) eigenvalues: slow wobbles plus a single-step peak of lambda_1."""
    t = np.arange(horizon, dtype=float)
    eig = np.column_stack([
        base[0] + wobble * np.sin(t / 7.0),
        base[1] + wobble * np.cos(t / 9.0),
    ])
    if peak_every > 0:
        eig[peak_every // 2::peak_every, 0] = peak
    return eig


def build_example2(
    seed: int = 0,
    horizon: int = 983,
    rotation: Tuple[float, float] = (0.12, 0.22),
    peak: float = 0.62,
    peak_every: int = 100,
    sigma: float = 1.2,
    sigma0: float = 1.44,
    rho: float = 0.9,
    max_gap: int = 300
) -> Scenario:
    """
    Persistently rotating 2x2 memoryless G with every frozen loop stabilizing.

    Args:
        seed: Seed for the initial orientation and rotation angles
        horizon: Number of simulated steps
        rotation: Range of the per-step rotation angle
        peak: Value of lambda_1 at the peaks (|peak| < 1/sigma0 keeps every loop stabilizing)
        peak_every: Spacing of the peaks (0 disables them)
        sigma, sigma0, rho: Certificate parameters
        max_gap: Longest window for proposed time sequences

    Returns:
        Scenario
    """
    rng = np.random.default_rng(seed)
    steps = rng.uniform(rotation[0], rotation[1], horizon)
    schedule = similarity_schedule(example2_eigenvalues(horizon, peak=peak, peak_every=peak_every), steps, rng)
    return Scenario(
        name=f"example2_seed{seed}",
        F=MemorylessMatrix(MatrixSchedule.constant(np.eye(2))),
        G=MemorylessMatrix(schedule),
        input=InputSpec(kind="exp_cos", dimension=2, amplitude=1.0, period=2.0),
        horizon=range(horizon),
        sigma=sigma,
        sigma0=sigma0,
        rho=rho,
        seed=seed,
        max_gap=max_gap,
        source={"example": "example2", "seed": seed, "horizon": horizon},
    )


def random_stable_scenario(
    seed: int,
    dimension: int = 2,
    horizon: int = 80,
    radius: float = 0.4,
    max_rotation: float = 0.1,
    sigma: float = 1.2,
    sigma0: float = 1.44,
    rho: float = 0.9
) -> Scenario:
    """
    Small scenario with memoryless G, eigenvalues in [-radius, radius] and a random input.

    Args:
        seed: Seed for every random choice
        dimension: State dimension m
        horizon: Number of steps
        radius: Bound on the eigenvalue moduli of G_t
        max_rotation: Largest per-step rotation angle
        sigma, sigma0, rho: Certificate parameters
    """
    rng = np.random.default_rng(seed)
    base = rng.uniform(-radius, radius, dimension)
    eig = np.clip(base + rng.uniform(-0.05, 0.05, (horizon, dimension)), -radius, radius)
    schedule = similarity_schedule(eig, rng.uniform(0.0, max_rotation, horizon), rng)
    F = MemorylessMatrix(MatrixSchedule.constant(rng.uniform(-1.0, 1.0, (dimension, dimension))))
    return Scenario(
        name=f"random_seed{seed}",
        F=F,
        G=MemorylessMatrix(schedule),
        input=InputSpec(kind="random", dimension=dimension, seed=int(rng.integers(2**31))),
        horizon=range(horizon),
        sigma=sigma,
        sigma0=sigma0,
        rho=rho,
        seed=seed,
        source={"example": "random", "seed": seed, "horizon": horizon, "dimension": dimension},
    )
