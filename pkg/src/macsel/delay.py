"""One-hop approximate delay models for the three categories.

Delay is measured from the instant a packet is handed to the MAC layer until
it is delivered one hop away; upper-layer queueing and multi-hop paths are
out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .context import NetworkContext
from .energy import csma_collision_probability, psa_offered_load

# The common-active-period sleep/wake period is fixed at one second (nodes
# duty cycle once a second), so the sleep-wait term carries time units of
# one period.
_CAP_PERIOD = 1.0


@dataclass(frozen=True)
class DelayEstimate:
    seconds: float
    category: str


def scheduled_delay(ctx: NetworkContext) -> DelayEstimate:
    """Mean one-hop delay of the scheduled category: frame_len/2 + slot_len.

    Half a superframe of channel-access wait plus one slot of transmission;
    independent of traffic, population and radius.
    """
    s = ctx.sched
    return DelayEstimate(seconds=s.frame_len / 2.0 + s.slot_len, category="ScP")


def cap_delay(ctx: NetworkContext) -> DelayEstimate:
    """Mean one-hop delay of the common-active-period category.

    (1-dc) * (1-dc)/2 sleep wait (per one-second period) plus
    (rts/(1-p) + msg)/B transmission time with RTS retries.  Back-off time is
    not counted.  Propagates SaturatedError from the collision solver.
    """
    c = ctx.cap
    p = csma_collision_probability(ctx).p
    sleep_wait = (1.0 - c.duty_cycle) * ((1.0 - c.duty_cycle) / 2.0) * _CAP_PERIOD
    tx = (c.rts_len / (1.0 - p) + ctx.msg_len) / ctx.bandwidth
    return DelayEstimate(seconds=sleep_wait + tx, category="CAP")


def psp_delay(ctx: NetworkContext) -> DelayEstimate:
    """Mean one-hop delay of the preamble-sampling category.

    e^(2G') attempts, each costing one preamble+message airtime.
    """
    g_prime = psa_offered_load(ctx)
    airtime = (ctx.psp.preamble_len + ctx.msg_len) / ctx.bandwidth
    return DelayEstimate(seconds=math.exp(2.0 * g_prime) * airtime, category="PSP")
