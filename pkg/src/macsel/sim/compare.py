"""Model-versus-simulation divergence reports.

The analytical models live on a uniform disk of radius R while the simulator
deploys over a rectangle, so the comparison context is density-matched: the
model radius is chosen so that the neighbour count N' = N*d^2/R^2 equals the
deployment's expected in-range population.  The naive density product
N*pi*d^2/area overstates sparse-network neighbourhoods; the finite-N value
is 1 + (N-1)*pi*d^2/area for the population roles (CAP, PSP) and the mean
node degree for the per-link role (ScP), capped at the complete graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from ..context import NetworkContext
from ..cpf import CATEGORIES
from ..delay import cap_delay, psp_delay, scheduled_delay
from ..energy import cap_energy, psp_energy, scheduled_energy
from .config import SimConfig, deploy, neighbor_lists
from .psa import run_psa
from .schedule import Schedule, build_tsmp_schedule
from .smac import run_smac
from .tsmp import run_tsmp

DEFAULT_SWEEP = (1.0, 5.0, 10.0, 15.0, 20.0)


@dataclass(frozen=True)
class DivergencePoint:
    axis_value: float
    model_energy: float
    sim_energy: float
    sim_energy_hw: float
    energy_divergence: float
    model_delay: float
    sim_delay: float
    sim_delay_hw: float
    delay_divergence: float
    converged: bool


@dataclass(frozen=True)
class DivergenceReport:
    category: str
    points: tuple[DivergencePoint, ...]

    @property
    def max_energy_divergence(self) -> float:
        return max(p.energy_divergence for p in self.points)

    @property
    def max_delay_divergence(self) -> float:
        return max(p.delay_divergence for p in self.points)

    def rows(self) -> list[dict]:
        return [
            {
                "category": self.category,
                "axis_value": p.axis_value,
                "model_energy": p.model_energy,
                "sim_energy": p.sim_energy,
                "sim_energy_hw": p.sim_energy_hw,
                "energy_divergence": p.energy_divergence,
                "model_delay": p.model_delay,
                "sim_delay": p.sim_delay,
                "sim_delay_hw": p.sim_delay_hw,
                "delay_divergence": p.delay_divergence,
                "converged": p.converged,
            }
            for p in self.points
        ]


def effective_neighbors(cfg: SimConfig, links_role: bool) -> float:
    """Expected neighbour count of the deployment under the wrap metric."""
    n = cfg.context.n_nodes
    area = cfg.area[0] * cfg.area[1]
    coverage = min(1.0, math.pi * cfg.context.tx_range ** 2 / area)
    degree = min(float(n - 1), (n - 1) * coverage)
    return degree if links_role else 1.0 + degree


def model_context(cfg: SimConfig, category: str, pkt_rate: float) -> NetworkContext:
    """Density-matched analytical context for a simulation configuration."""
    nprime = effective_neighbors(cfg, links_role=(category == "ScP"))
    ctx = cfg.context
    radius = ctx.tx_range * math.sqrt(ctx.n_nodes / nprime)
    return replace(ctx, network_radius=radius, pkt_rate=pkt_rate)


_MODEL = {
    "ScP": (scheduled_energy, scheduled_delay),
    "CAP": (cap_energy, cap_delay),
    "PSP": (psp_energy, psp_delay),
}

_RUNNER = {"CAP": run_smac, "PSP": run_psa}


def _divergence(model: float, sim: float) -> float:
    if sim == 0.0:
        return 0.0 if model == 0.0 else math.inf
    return abs(model - sim) / sim


def compare_model_sim(
    cfg: SimConfig,
    category: str,
    pkt_rates: tuple[float, ...] = DEFAULT_SWEEP,
    schedule: Schedule | None = None,
    rows: int = 3,
    cols: int = 30,
) -> DivergenceReport:
    """Run the simulator across the packet-rate sweep and report per-point
    model value, simulation mean with confidence half-width, and relative
    divergence |model - sim| / sim.

    ScP needs a schedule; one is built from the deployment when not given.
    """
    if category not in CATEGORIES:
        raise ValueError(f"unknown category {category!r}")
    energy_fn, delay_fn = _MODEL[category]
    points = []
    for rate in pkt_rates:
        run_cfg = SimConfig(
            context=replace(cfg.context, pkt_rate=rate),
            profile=cfg.profile,
            area=cfg.area,
            seed=cfg.seed,
            sim_duration=cfg.sim_duration,
            confidence=cfg.confidence,
            rel_error=cfg.rel_error,
            max_reps=cfg.max_reps,
            wrap_edges=cfg.wrap_edges,
        )
        if category == "ScP":
            sched = schedule
            if sched is None:
                positions = deploy(run_cfg)
                sched = build_tsmp_schedule(
                    positions, run_cfg.context.tx_range, rows, cols,
                    seed=run_cfg.seed, area=run_cfg.area, wrap=run_cfg.wrap_edges,
                )
            stats = run_tsmp(run_cfg, sched)
            # per-link role: match N' to the scheduled topology's mean degree
            positions = deploy(run_cfg)
            degree_sum = sum(
                len(nb) for nb in neighbor_lists(
                    positions, run_cfg.context.tx_range, run_cfg.area,
                    run_cfg.wrap_edges)
            )
            nprime = degree_sum / run_cfg.context.n_nodes
            radius = run_cfg.context.tx_range * math.sqrt(
                run_cfg.context.n_nodes / nprime)
            ctx_m = replace(run_cfg.context, network_radius=radius)
        else:
            stats = _RUNNER[category](run_cfg)
            ctx_m = model_context(cfg, category, rate)
        model_e = energy_fn(ctx_m, cfg.profile).total
        model_d = delay_fn(ctx_m).seconds
        points.append(
            DivergencePoint(
                axis_value=rate,
                model_energy=model_e,
                sim_energy=stats.energy_per_second,
                sim_energy_hw=stats.energy_hw,
                energy_divergence=_divergence(model_e, stats.energy_per_second),
                model_delay=model_d,
                sim_delay=stats.delay,
                sim_delay_hw=stats.delay_hw,
                delay_divergence=_divergence(model_d, stats.delay),
                converged=stats.converged,
            )
        )
    return DivergenceReport(category=category, points=tuple(points))
