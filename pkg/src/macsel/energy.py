"""Analytical energy models for the three MAC categories.

Each category's network-wide energy rate [J/s] decomposes into four loss
components: collision, overhearing, idle listening and protocol overhead.
Useful payload transmission is deliberately outside the model; only wasted
energy is scored.

Category conventions:
  scheduled  - superframe slots preassigned per link (no collisions, no
               overhearing by construction)
  cap        - common active period with CSMA/CA + RTS/CTS/ACK
  psp        - preamble sampling (unslotted, no carrier sense)
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .context import NetworkContext, derive_geometry
from .errors import SaturatedError
from .radio import RadioProfile, rx_energy_per_bit, tx_energy_per_bit

SOLVER_TOL = 1e-12
_MAX_ITER = 10_000
_DENOM_GUARD = 1e-12


@dataclass(frozen=True)
class EnergyBreakdown:
    """Network-wide energy rates [W] per loss cause."""

    collision: float
    overhearing: float
    idle_listening: float
    overhead: float

    @property
    def total(self) -> float:
        return self.collision + self.overhearing + self.idle_listening + self.overhead


@dataclass(frozen=True)
class CollisionSolution:
    """Fixed point of the CSMA/CA collision probability equation.

    p           collision probability in [0, 1)
    residual    p - RHS(p) at the returned point
    iterations  solver iterations spent
    """

    p: float
    residual: float
    iterations: int


def _neighbors_minus_one(neighbors: float) -> float:
    """(N' - 1), clamped at zero for sparse contexts.

    A fractional neighbour count below one would make overhearing energy
    negative, which is unphysical; clamp and warn.
    """
    if neighbors < 1.0:
        warnings.warn(
            "expected neighbour count below 1; overhearing terms clamped to 0",
            stacklevel=3,
        )
        return 0.0
    return neighbors - 1.0


def _utilisation(ctx: NetworkContext) -> float:
    """lambda/mu for the collision fixed point.

    lambda = pkt_rate * duty_cycle.  mu is the raw bandwidth value in the
    literal reading ("bandwidth" mode) or B/(msg+rts+cts+ack) packets/second
    ("packets" mode).
    """
    lam = ctx.pkt_rate * ctx.cap.duty_cycle
    if ctx.cap.service_rate_mode == "packets":
        per_pkt = ctx.msg_len + ctx.cap.rts_len + ctx.cap.cts_len + ctx.cap.ack_len
        mu = ctx.bandwidth / per_pkt
    else:
        mu = ctx.bandwidth
    return lam / mu


def _collision_rhs(p: float, util: float, cw_min: int, stages: int, n: int) -> float:
    """RHS of p = 1 - (1 - util * w(p) * 2/CW_min)^(N-1).

    w(p) = (1-2p)/(1-p-p(2p)^m) is the saturated-window factor; for m = 0 it
    is identically 1 (the denominator cancels the numerator).  Returns +inf
    when the window denominator degenerates and 1.0 when the per-node attempt
    probability would exceed 1 (saturation).
    """
    if stages == 0:
        window = 1.0
    else:
        denom = 1.0 - p - p * (2.0 * p) ** stages
        if abs(denom) < _DENOM_GUARD:
            return math.inf
        window = (1.0 - 2.0 * p) / denom
    x = util * window * (2.0 / cw_min)
    if x >= 1.0:
        return 1.0
    if x < 0.0:
        # Window factor went negative past the singular band; the physical
        # branch of the fixed point lies below it.
        return math.inf
    return 1.0 - (1.0 - x) ** (n - 1)


def csma_collision_probability(
    ctx: NetworkContext, method: str = "auto"
) -> CollisionSolution:
    """Solve the CSMA/CA collision probability fixed point.

    p = 1 - (1 - (lambda/mu) * (1-2p)/(1-p-p(2p)^m) * 2/CW_min)^(N-1)

    ``method`` selects the solver: "iteration" (damped fixed-point iteration,
    gamma = 0.5, from p0 = 0), "bisection" (on the residual f(p) = p - RHS(p)
    over the first sign change in [0, 0.999999]), or "auto" (iteration with
    bisection fallback).  N = 1 or lambda = 0 yield p = 0 exactly.

    Raises :class:`SaturatedError` when no root exists below 1.
    """
    n = ctx.n_nodes
    util = _utilisation(ctx)
    if n <= 1 or util == 0.0:
        return CollisionSolution(p=0.0, residual=0.0, iterations=0)
    cw_min = ctx.cap.cw_min
    stages = ctx.cap.backoff_stages

    def rhs(p: float) -> float:
        return _collision_rhs(p, util, cw_min, stages, n)

    if method not in ("auto", "iteration", "bisection"):
        raise ValueError(f"unknown solver method {method!r}")

    if method in ("auto", "iteration"):
        p = 0.0
        for it in range(1, _MAX_ITER + 1):
            r = rhs(p)
            if not math.isfinite(r) or r >= 1.0:
                break
            p_next = 0.5 * p + 0.5 * r
            if abs(p_next - r) <= SOLVER_TOL and abs(p_next - p) <= SOLVER_TOL:
                return CollisionSolution(p=p_next, residual=p_next - rhs(p_next),
                                         iterations=it)
            p = p_next
        if method == "iteration":
            raise SaturatedError(
                "saturated: damped iteration found no fixed point below 1"
            )

    # Bisection on the first sign change of f(p) = p - RHS(p).
    hi = 0.999999

    def f(p: float) -> float:
        r = rhs(p)
        if not math.isfinite(r):
            return -math.inf  # infeasible p: treat as below the root
        return p - r

    lo = 0.0
    f_lo = f(lo)
    bracket = None
    steps = 1000
    prev_p, prev_f = lo, f_lo
    for i in range(1, steps + 1):
        p = hi * i / steps
        fp = f(p)
        if prev_f <= 0.0 < fp:
            bracket = (prev_p, p)
            break
        prev_p, prev_f = p, fp
    if bracket is None:
        raise SaturatedError("saturated: no root in [0, 1) for the collision fixed point")
    a, b = bracket
    iterations = 0
    while b - a > SOLVER_TOL:
        iterations += 1
        mid = 0.5 * (a + b)
        if f(mid) <= 0.0:
            a = mid
        else:
            b = mid
        if iterations > 200:
            break
    p = 0.5 * (a + b)
    return CollisionSolution(p=p, residual=f(p), iterations=iterations)


def expected_attempts_csma(p: float) -> float:
    """Expected transmissions per packet under collision probability p: 1/(1-p).

    Expected collisions per packet is this value minus one, p/(1-p).
    """
    if not 0.0 <= p < 1.0:
        raise ValueError("p must be in [0, 1)")
    return 1.0 / (1.0 - p)


def psa_offered_load(ctx: NetworkContext) -> float:
    """Offered load G' around a node during one transmission time.

    G' = (G * d^2/R^2) * (preamble+msg)/B : expected packet generations in
    range while one message is on the air.
    """
    in_range_rate = ctx.pkt_rate * (ctx.tx_range ** 2) / (ctx.network_radius ** 2)
    airtime = (ctx.psp.preamble_len + ctx.msg_len) / ctx.bandwidth
    return in_range_rate * airtime


def expected_attempts_psa(g_prime: float) -> float:
    """Expected transmission attempts per message: e^(2G').

    Expected collisions per message is e^(2G') - 1.
    """
    if g_prime < 0:
        raise ValueError("g_prime must be >= 0")
    return math.exp(2.0 * g_prime)


def scheduled_energy(ctx: NetworkContext, prof: RadioProfile) -> EnergyBreakdown:
    """Energy breakdown for the scheduled category [W].

    Collision and overhearing are zero by construction (cells are exclusive
    and wake times are known).  Idle listening covers the 2*guard probe of
    empty cells; overhead sums timing error, sync, ACK and duty-cycling
    transition costs.
    """
    geo = derive_geometry(ctx)
    n, nn = ctx.n_nodes, geo.neighbors
    s = ctx.sched
    e_rcv = rx_energy_per_bit(prof)
    e_send = tx_energy_per_bit(ctx.tx_range, prof)

    cells = n * nn  # one cell per directed link per superframe
    occupancy = min(1.0, ctx.pkt_rate * s.frame_len / cells) if cells > 0 else 1.0
    idle = prof.p_idle * cells * (1.0 - occupancy) * 2.0 * s.guard / s.frame_len

    timing = prof.p_idle * ctx.pkt_rate * 1.5 * s.guard
    sync = (2.0 * cells / s.sync_interval) * (e_rcv + e_send) * s.sync_len
    ack = ctx.pkt_rate * s.ack_len * (e_rcv + e_send)
    transitions = 2.0 * cells * (prof.e_on + prof.e_off)

    return EnergyBreakdown(
        collision=0.0,
        overhearing=0.0,
        idle_listening=idle,
        overhead=timing + sync + ack + transitions,
    )


def cap_energy(ctx: NetworkContext, prof: RadioProfile) -> EnergyBreakdown:
    """Energy breakdown for the common-active-period category [W].

    Collision charges RTS retransmissions (p/(1-p) per packet, active-period
    fraction dc); overhearing charges full messages to the in-range
    population; idle listening is the active fraction minus in-range traffic
    airtime, clamped at zero; overhead covers RTS/CTS/ACK, sync broadcasts
    and once-per-second duty transitions.

    Propagates :class:`SaturatedError` from the collision solver.
    """
    geo = derive_geometry(ctx)
    n, nn = ctx.n_nodes, geo.neighbors
    c = ctx.cap
    e_rcv = rx_energy_per_bit(prof)
    e_send = tx_energy_per_bit(ctx.tx_range, prof)
    g = ctx.pkt_rate
    nm1 = _neighbors_minus_one(nn)
    listeners = nm1 * e_rcv + e_send

    p = csma_collision_probability(ctx).p
    collision = g * c.rts_len * listeners * (p / (1.0 - p)) * c.duty_cycle

    overhearing = ctx.msg_len * e_rcv * nm1 * g

    per_msg_time = (ctx.msg_len + c.rts_len + c.cts_len + c.ack_len) / ctx.bandwidth
    in_range_rate = g * (ctx.tx_range ** 2) / (ctx.network_radius ** 2)
    idle = n * prof.p_idle * max(0.0, c.duty_cycle - per_msg_time * in_range_rate)

    control = g * (c.rts_len + c.cts_len + c.ack_len) * listeners
    sync = n * (c.sync_len / c.sync_interval) * listeners
    transitions = n * (prof.e_on + prof.e_off)  # duty cycle once per second

    return EnergyBreakdown(
        collision=collision,
        overhearing=overhearing,
        idle_listening=idle,
        overhead=control + sync + transitions,
    )


def psp_energy(ctx: NetworkContext, prof: RadioProfile) -> EnergyBreakdown:
    """Energy breakdown for the preamble-sampling category [W].

    Collision charges the expected retransmissions of preamble+message;
    overhearing charges one check worth of bits to non-destination
    neighbours; idle listening covers checks that find the channel free;
    overhead is the preamble cost plus per-check wake transitions.
    """
    geo = derive_geometry(ctx)
    n, nn = ctx.n_nodes, geo.neighbors
    p = ctx.psp
    e_rcv = rx_energy_per_bit(prof)
    e_send = tx_energy_per_bit(ctx.tx_range, prof)
    g = ctx.pkt_rate
    nm1 = _neighbors_minus_one(nn)

    g_prime = psa_offered_load(ctx)
    retries = expected_attempts_psa(g_prime) - 1.0
    collision = retries * (
        e_rcv * (p.preamble_len / 2.0 + ctx.msg_len)
        + e_send * (p.preamble_len + ctx.msg_len)
    )

    overhearing = p.check_dur * ctx.bandwidth * e_rcv * nm1 * g

    in_range_rate = g * (ctx.tx_range ** 2) / (ctx.network_radius ** 2)
    idle = n * prof.p_idle * p.check_dur * max(
        0.0, 1.0 / p.check_interval - in_range_rate
    )

    preamble = g * (e_rcv * p.preamble_len / 2.0 + e_send * p.preamble_len)
    transitions = n * (1.0 / p.check_interval) * (prof.e_on + prof.e_off)

    return EnergyBreakdown(
        collision=collision,
        overhearing=overhearing,
        idle_listening=idle,
        overhead=preamble + transitions,
    )
