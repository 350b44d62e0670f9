"""Event-driven simulation of the preamble-sampling representative protocol.

Senders transmit preamble+message immediately on handoff, with no carrier
sense.  Receivers sleep and probe the channel every check interval for one
check duration; a probe that hits a preamble addressed to the prober locks
it onto the transmission.  A reception fails when any other in-range
transmission overlaps it; a zero-cost feedback tells the sender, which
retransmits after a short random hold-off.

Energy accounting mirrors the analytical loss causes: failed attempts and
garbled listening charge the collision tally; foreign probe hits charge
overhearing; probes of a free channel charge idle listening; preamble bits
of successful attempts and per-probe wake transitions charge overhead.
Payload bits of successful attempts are useful energy and are not tallied.
"""

from __future__ import annotations

import heapq

import numpy as np

from ..radio import rx_energy_per_bit, tx_energy_per_bit
from .config import RepResult, SimConfig, SimStats, pair_distance
from .stats import replicate_until_confident

MAX_ATTEMPTS = 8

_CHECK, _ARRIVE, _TX_END, _RETRY = 0, 1, 2, 3


class _Tx:
    __slots__ = ("sender", "dest", "start", "preamble_end", "end",
                 "locked_at", "interfered")

    def __init__(self, sender, dest, start, preamble_end, end):
        self.sender = sender
        self.dest = dest
        self.start = start
        self.preamble_end = preamble_end
        self.end = end
        self.locked_at = None
        self.interfered = False


class _Pkt:
    __slots__ = ("src", "dest", "handoff", "attempts")

    def __init__(self, src, dest, handoff):
        self.src = src
        self.dest = dest
        self.handoff = handoff
        self.attempts = 0


def run_psa_once(cfg: SimConfig, rng: np.random.Generator) -> RepResult:
    ctx = cfg.context
    prof = cfg.profile
    psp = ctx.psp
    n = ctx.n_nodes
    horizon = cfg.sim_duration
    bw = ctx.bandwidth
    e_send = tx_energy_per_bit(ctx.tx_range, prof)
    e_rcv = rx_energy_per_bit(prof)
    trans = prof.e_on + prof.e_off
    preamble_t = psp.preamble_len / bw
    msg_t = ctx.msg_len / bw

    def retry_window(attempts: int) -> float:
        # Doubling hold-off decorrelates the retries of a collided pair;
        # without it they re-collide with high probability and the offered
        # load snowballs.
        return min(2 ** (attempts - 1), 16) * 4.0 * psp.check_interval

    positions = rng.uniform((0, 0), cfg.area, size=(n, 2))
    dist = pair_distance(positions, cfg.area, cfg.wrap_edges)
    neighbors = [
        [j for j in range(n) if j != i and dist[i, j] <= ctx.tx_range]
        for i in range(n)
    ]

    res = RepResult(duration=horizon)
    # state[i]: None = duty-cycled sampling; ("tx", tx) or ("rx", tx)
    state: list[tuple | None] = [None] * n
    mac: list[_Pkt | None] = [None] * n
    upper: list[list[int]] = [[] for _ in range(n)]
    active: list[_Tx] = []

    events: list = []
    seq = 0

    def push(t, kind, payload):
        nonlocal seq
        heapq.heappush(events, (t, seq, kind, payload))
        seq += 1

    for node in range(n):
        push(rng.uniform(0.0, psp.check_interval), _CHECK, node)

    per_node = ctx.pkt_rate / n
    for node in range(n):
        if per_node <= 0:
            continue
        t = rng.exponential(1.0 / per_node)
        while t < horizon:
            push(t, _ARRIVE, node)
            t += rng.exponential(1.0 / per_node)

    def start_tx(now, pkt):
        pkt.attempts += 1
        tx = _Tx(pkt.src, pkt.dest, now, now + preamble_t, now + preamble_t + msg_t)
        state[pkt.src] = ("tx", tx)
        res.overhead_j += trans  # sender wakes for the attempt
        # Garble every in-progress reception whose receiver hears this sender.
        for i in range(n):
            st = state[i]
            if st is not None and st[0] == "rx" and dist[pkt.src, i] <= ctx.tx_range:
                st[1].interfered = True
        active.append(tx)
        push(tx.end, _TX_END, (tx, pkt))

    def release_mac(now, node):
        mac[node] = None
        if upper[node]:
            dest = upper[node].pop(0)
            pkt = _Pkt(node, dest, now)
            mac[node] = pkt
            if state[node] is None:
                start_tx(now, pkt)
            # else: locked on a reception; started when the lock resolves

    while events:
        now, _, kind, payload = heapq.heappop(events)
        if now >= horizon:
            break

        if kind == _CHECK:
            node = payload
            push(now + psp.check_interval, _CHECK, node)
            if state[node] is not None:
                continue  # radio already busy: probe skipped
            res.overhead_j += trans
            hits = [
                tx for tx in active
                if dist[tx.sender, node] <= ctx.tx_range and tx.end > now
            ]
            mine = [
                tx for tx in hits
                if tx.dest == node and tx.start <= now < tx.preamble_end
            ]
            if mine:
                tx = min(mine, key=lambda x: x.start)
                tx.locked_at = now
                state[node] = ("rx", tx)
                if any(o is not tx for o in hits):
                    tx.interfered = True
            elif hits:
                busy_until = max(tx.end for tx in hits)
                listened = min(psp.check_dur, busy_until - now)
                res.overhearing_j += e_rcv * bw * listened
                res.idle_j += prof.p_idle * max(0.0, psp.check_dur - listened)
            else:
                res.idle_j += prof.p_idle * psp.check_dur

        elif kind == _ARRIVE:
            node = payload
            res.generated += 1
            if not neighbors[node]:
                res.dropped += 1
                continue
            dest = neighbors[node][rng.integers(len(neighbors[node]))]
            if mac[node] is not None:
                upper[node].append(dest)
                continue
            pkt = _Pkt(node, dest, now)
            mac[node] = pkt
            if state[node] is None:
                start_tx(now, pkt)

        elif kind == _RETRY:
            pkt = payload
            if state[pkt.src] is None:
                start_tx(now, pkt)
            else:  # radio mid-reception: hold off again
                push(now + rng.uniform(0.0, retry_window(pkt.attempts)), _RETRY, pkt)

        elif kind == _TX_END:
            tx, pkt = payload
            active.remove(tx)
            state[tx.sender] = None
            success = tx.locked_at is not None and not tx.interfered
            if tx.locked_at is not None:
                state[tx.dest] = None
                preamble_bits = (tx.preamble_end - tx.locked_at) * bw
                if success:
                    res.overhead_j += e_rcv * preamble_bits
                    # message bits are useful energy: not tallied
                else:
                    res.collision_j += e_rcv * (preamble_bits + ctx.msg_len)
                dpkt = mac[tx.dest]
                if dpkt is not None and dpkt.attempts == 0:
                    start_tx(now, dpkt)
            if success:
                res.overhead_j += e_send * psp.preamble_len
                res.delivered += 1
                res.delay_sum += now - pkt.handoff
                res.delay_count += 1
                release_mac(now, tx.sender)
            else:
                res.collision_j += e_send * (psp.preamble_len + ctx.msg_len)
                res.collision_events += 1
                if pkt.attempts >= MAX_ATTEMPTS:
                    res.dropped += 1
                    release_mac(now, tx.sender)
                else:
                    push(now + rng.uniform(0.0, retry_window(pkt.attempts)), _RETRY, pkt)

    res.in_flight = res.generated - res.delivered - res.dropped
    return res


def run_psa(cfg: SimConfig) -> SimStats:
    """Replicated preamble-sampling run; each replication redeploys."""
    cfg.require_valid()
    return replicate_until_confident(run_psa_once, cfg)
