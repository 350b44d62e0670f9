"""Sequential stopping: replicate until the Student-t confidence half-width
is within the requested relative error for every tracked metric."""

from __future__ import annotations

import math

import numpy as np
from scipy.stats import t as student_t

from .config import RepResult, SimConfig, SimStats, rep_rng

MIN_REPS = 3


def _half_width(values: list[float], confidence: float) -> float:
    n = len(values)
    if n < 2:
        return math.inf
    s = float(np.std(values, ddof=1))
    if s == 0.0:
        return 0.0
    q = student_t.ppf(0.5 + confidence / 2.0, n - 1)
    return q * s / math.sqrt(n)


def _within(values: list[float], confidence: float, rel_error: float) -> bool:
    mean = float(np.mean(values))
    hw = _half_width(values, confidence)
    if mean == 0.0:
        return hw == 0.0
    return hw <= rel_error * abs(mean)


def replicate_until_confident(runner, cfg: SimConfig) -> SimStats:
    """Run ``runner(cfg, rng) -> RepResult`` replications with derived seeds
    until the energy rate (and mean delay, when packets flow) meet the
    relative-error target, or ``max_reps`` is reached (then flagged
    unconverged).  At least three replications always run.
    """
    cfg.require_valid()
    reps: list[RepResult] = []
    converged = False
    while len(reps) < cfg.max_reps:
        rng = rep_rng(cfg.seed, len(reps))
        reps.append(runner(cfg, rng))
        if len(reps) < MIN_REPS:
            continue
        energies = [r.energy_rate for r in reps]
        ok = _within(energies, cfg.confidence, cfg.rel_error)
        if all(r.delay_count > 0 for r in reps):
            delays = [r.mean_delay for r in reps]
            ok = ok and _within(delays, cfg.confidence, cfg.rel_error)
        if ok:
            converged = True
            break

    n = len(reps)
    energies = [r.energy_rate for r in reps]
    have_delay = all(r.delay_count > 0 for r in reps)
    delays = [r.mean_delay for r in reps] if have_delay else []
    return SimStats(
        collision=float(np.mean([r.collision_j / r.duration for r in reps])),
        overhearing=float(np.mean([r.overhearing_j / r.duration for r in reps])),
        idle_listening=float(np.mean([r.idle_j / r.duration for r in reps])),
        overhead=float(np.mean([r.overhead_j / r.duration for r in reps])),
        energy_hw=_half_width(energies, cfg.confidence) if n > 1 else math.inf,
        delay=float(np.mean(delays)) if delays else math.nan,
        delay_hw=_half_width(delays, cfg.confidence) if delays else math.nan,
        replications=n,
        packets_generated=sum(r.generated for r in reps),
        packets_delivered=sum(r.delivered for r in reps),
        packets_dropped=sum(r.dropped for r in reps),
        packets_in_flight=sum(r.in_flight for r in reps),
        collision_events=sum(r.collision_events for r in reps),
        converged=converged,
        seed=cfg.seed,
    )
