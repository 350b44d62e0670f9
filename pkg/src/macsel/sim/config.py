"""Simulation configuration, deployment and result records.

Distances default to wrap-around (torus) metric so that the finite square
area has no border bias and matches the infinite-plane neighbourhood the
analytical formulas assume; set ``wrap_edges=False`` for plain Euclidean
geometry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..context import NetworkContext, validate
from ..errors import ConfigError
from ..radio import RadioProfile, validate_profile

RNG_ALGORITHM = "numpy-pcg64"


@dataclass(frozen=True)
class SimConfig:
    context: NetworkContext
    profile: RadioProfile
    area: tuple[float, float] = (100.0, 100.0)
    seed: int = 1
    sim_duration: float = 20.0
    confidence: float = 0.95
    rel_error: float = 0.05
    max_reps: int = 12
    wrap_edges: bool = True

    def check(self) -> list[str]:
        v = validate(self.context) + validate_profile(self.profile)
        if not (self.area[0] > 0 and self.area[1] > 0):
            v.append("area: both sides must be > 0")
        if not self.sim_duration > 0:
            v.append("sim_duration: must be > 0")
        if not 0 < self.confidence < 1:
            v.append("confidence: must be in (0, 1)")
        if not self.rel_error > 0:
            v.append("rel_error: must be > 0")
        if self.max_reps < 3:
            v.append("max_reps: must be >= 3")
        return v

    def require_valid(self) -> None:
        violations = self.check()
        if violations:
            raise ConfigError(violations)


@dataclass
class RepResult:
    """Tallies of one replication.  Energy values are joules over the
    horizon; rates are derived by the aggregator."""

    duration: float
    collision_j: float = 0.0
    overhearing_j: float = 0.0
    idle_j: float = 0.0
    overhead_j: float = 0.0
    delay_sum: float = 0.0
    delay_count: int = 0
    generated: int = 0
    delivered: int = 0
    dropped: int = 0
    in_flight: int = 0
    collision_events: int = 0

    @property
    def total_j(self) -> float:
        return self.collision_j + self.overhearing_j + self.idle_j + self.overhead_j

    @property
    def energy_rate(self) -> float:
        return self.total_j / self.duration

    @property
    def mean_delay(self) -> float:
        return self.delay_sum / self.delay_count if self.delay_count else math.nan


@dataclass(frozen=True)
class SimStats:
    """Aggregated output of a batch of replications.

    Means carry Student-t confidence half-widths at the configured level.
    ``energy_per_second`` is by construction the exact sum of the per-cause
    rates.  ``converged`` is False when max_reps was reached before every
    tracked metric met the relative-error target.
    """

    collision: float
    overhearing: float
    idle_listening: float
    overhead: float
    energy_hw: float
    delay: float
    delay_hw: float
    replications: int
    packets_generated: int
    packets_delivered: int
    packets_dropped: int
    packets_in_flight: int
    collision_events: int
    converged: bool
    rng: str = RNG_ALGORITHM
    seed: int = 0

    @property
    def energy_per_second(self) -> float:
        return self.collision + self.overhearing + self.idle_listening + self.overhead


def rep_rng(seed: int, rep: int) -> np.random.Generator:
    """Replication RNG: PCG64 seeded by the (seed, rep) sequence."""
    return np.random.default_rng(np.random.SeedSequence([seed, rep]))


_DEPLOY_TAG = 771107


def deploy(cfg: SimConfig, rng: np.random.Generator | None = None) -> np.ndarray:
    """Uniform node positions over the area, deterministic given the seed."""
    cfg.require_valid()
    if rng is None:
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, _DEPLOY_TAG]))
    n = cfg.context.n_nodes
    w, h = cfg.area
    return rng.uniform((0.0, 0.0), (w, h), size=(n, 2))


def pair_distance(
    positions: np.ndarray, area: tuple[float, float], wrap: bool
) -> np.ndarray:
    """All-pairs distance matrix, torus metric when ``wrap`` is set."""
    delta = np.abs(positions[:, None, :] - positions[None, :, :])
    if wrap:
        dims = np.asarray(area)
        delta = np.minimum(delta, dims - delta)
    return np.hypot(delta[..., 0], delta[..., 1])


def neighbor_lists(
    positions: np.ndarray, tx_range: float, area: tuple[float, float], wrap: bool
) -> list[list[int]]:
    """In-range neighbour indices per node (excluding self)."""
    dist = pair_distance(positions, area, wrap)
    n = len(positions)
    out = []
    for i in range(n):
        out.append([j for j in range(n) if j != i and dist[i, j] <= tx_range])
    return out


def is_connected(neighbors: list[list[int]]) -> bool:
    n = len(neighbors)
    if n == 0:
        return False
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in neighbors[i]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == n
