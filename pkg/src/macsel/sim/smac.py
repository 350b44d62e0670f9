"""Event-driven simulation of the common-active-period representative
protocol in steady state: one synchronised cluster, a one-second period with
an active fraction equal to the duty cycle, CSMA/CA contention with a
doubling window, and an RTS/CTS/DATA/ACK exchange.

Contention starts only inside the active window; an exchange that won the
channel runs to completion past the window edge, while bystanders go to
sleep on schedule.  Carrier detection is granular: a backoff expiring within
one contention slot of a transmission start does not sense it and fires into
it, which is how collisions happen.

Energy buckets mirror the analytical loss causes: garbled RTS/DATA attempts
charge collision, cleanly overheard foreign payloads charge overhearing,
control traffic (RTS/CTS/ACK/sync) and duty transitions charge overhead, and
awake time not spent on the radio charges idle listening.  Successful
payload bits between the exchange partners are useful energy and are not
tallied.
"""

from __future__ import annotations

import heapq

import numpy as np

from ..radio import rx_energy_per_bit, tx_energy_per_bit
from .config import RepResult, SimConfig, SimStats, pair_distance
from .stats import replicate_until_confident

PERIOD = 1.0  # nodes duty cycle once a second
MAX_ATTEMPTS = 8

_WINDOW, _WINDOW_END, _ARRIVE, _FIRE, _TX_END, _SYNC, _RETRY, _RESUME = range(8)


class _Pkt:
    __slots__ = ("src", "dest", "handoff", "attempts", "stage")

    def __init__(self, src, dest, handoff):
        self.src = src
        self.dest = dest
        self.handoff = handoff
        self.attempts = 0
        self.stage = 0


class _Tx:
    __slots__ = ("sender", "listener", "kind", "start", "end", "garbled", "pkt")

    def __init__(self, sender, listener, kind, start, end, pkt=None):
        self.sender = sender
        self.listener = listener  # node that must decode it; None = broadcast
        self.kind = kind          # "rts" | "cts" | "data" | "ack" | "sync"
        self.start = start
        self.end = end
        self.garbled = False
        self.pkt = pkt


def run_smac_once(cfg: SimConfig, rng: np.random.Generator) -> RepResult:
    ctx = cfg.context
    prof = cfg.profile
    cap = ctx.cap
    n = ctx.n_nodes
    bw = ctx.bandwidth
    horizon = cfg.sim_duration
    dc = cap.duty_cycle
    e_send = tx_energy_per_bit(ctx.tx_range, prof)
    e_rcv = rx_energy_per_bit(prof)
    rts_t = cap.rts_len / bw
    cts_t = cap.cts_len / bw
    data_t = ctx.msg_len / bw
    ack_t = cap.ack_len / bw
    sync_t = cap.sync_len / bw
    slot_t = rts_t / cap.cw_min  # contention slot

    positions = rng.uniform((0, 0), cfg.area, size=(n, 2))
    dist = pair_distance(positions, cfg.area, cfg.wrap_edges)
    neighbors = [
        [j for j in range(n) if j != i and dist[i, j] <= ctx.tx_range]
        for i in range(n)
    ]

    res = RepResult(duration=horizon)

    awake = [False] * n
    wake_at = [0.0] * n
    awake_total = [0.0] * n
    busy_total = [0.0] * n          # radio-occupied seconds while awake
    transmitting = [False] * n
    engaged: list[_Pkt | None] = [None] * n
    mac: list[_Pkt | None] = [None] * n
    upper: list[list[int]] = [[] for _ in range(n)]
    busy_count = [0] * n            # in-range transmissions currently on air
    active: list[_Tx] = []

    remaining: list[float | None] = [None] * n  # backoff seconds left
    fire_token = [0] * n
    fire_time = [0.0] * n
    counting = [False] * n
    nav_until = [0.0] * n  # virtual carrier sense from overheard RTS/CTS

    events: list = []
    seq = 0

    def push(t, kind, payload):
        nonlocal seq
        heapq.heappush(events, (t, seq, kind, payload))
        seq += 1

    def wake(node, now):
        if not awake[node]:
            awake[node] = True
            wake_at[node] = now
            res.overhead_j += prof.e_on

    def sleep(node, now):
        if awake[node]:
            awake[node] = False
            awake_total[node] += now - wake_at[node]
            res.overhead_j += prof.e_off

    def window_of(now):
        k = int(now / PERIOD)
        return k * PERIOD, k * PERIOD + dc * PERIOD

    def in_window(now):
        start, end = window_of(now)
        return start <= now < end

    def schedule_fire(node, now):
        fire_token[node] += 1
        fire_time[node] = now + remaining[node]
        counting[node] = True
        push(fire_time[node], _FIRE, (node, fire_token[node]))

    def freeze(node, now, hard=False):
        if counting[node]:
            if not hard and fire_time[node] - now < slot_t:
                return  # committed: carrier not sensed yet
            remaining[node] = max(fire_time[node] - now, slot_t)
            counting[node] = False
            fire_token[node] += 1

    def try_resume(node, now):
        if (
            remaining[node] is not None
            and not counting[node]
            and awake[node]
            and not transmitting[node]
            and engaged[node] is None
            and busy_count[node] == 0
            and now >= nav_until[node]
            and in_window(now)
        ):
            schedule_fire(node, now)

    def set_nav(node, now, until):
        # Overheard handshake: defer contention for the announced exchange.
        if until > nav_until[node]:
            nav_until[node] = until
            if remaining[node] is not None:
                freeze(node, now, hard=True)
                push(until, _RESUME, node)

    def start_contention(node, now):
        pkt = mac[node]
        cw = cap.cw_min * 2 ** min(pkt.stage, cap.backoff_stages)
        remaining[node] = float(rng.integers(1, cw + 1)) * slot_t
        counting[node] = False
        try_resume(node, now)

    def begin_tx(now, sender, listener, kind, duration, pkt=None):
        tx = _Tx(sender, listener, kind, now, now + duration, pkt)
        transmitting[sender] = True
        for other in active:
            if other.listener is not None and dist[sender, other.listener] <= ctx.tx_range:
                other.garbled = True
            if tx.listener is not None and dist[other.sender, tx.listener] <= ctx.tx_range:
                tx.garbled = True
        if tx.listener is not None and (
            not awake[tx.listener]
            or transmitting[tx.listener]
            or (engaged[tx.listener] is not None and engaged[tx.listener] is not pkt)
        ):
            tx.garbled = True  # listener cannot decode at all
        active.append(tx)
        for j in neighbors[sender]:
            if busy_count[j] == 0:
                freeze(j, now)
            busy_count[j] += 1
        push(tx.end, _TX_END, tx)
        return tx

    def finish_tx(now, tx):
        active.remove(tx)
        transmitting[tx.sender] = False
        busy_total[tx.sender] += tx.end - tx.start
        for j in neighbors[tx.sender]:
            busy_count[j] -= 1
            if busy_count[j] == 0:
                try_resume(j, now)

    def add_cause(bucket, joules):
        if bucket == "overhead":
            res.overhead_j += joules
        elif bucket == "overhearing":
            res.overhearing_j += joules
        elif bucket == "collision":
            res.collision_j += joules
        # "useful" energy is not tallied

    def listener_decodes(tx):
        # The listener spent radio time on the packet if it could listen at
        # all (it may still have decoded garbage).
        lst = tx.listener
        return (
            lst is not None
            and awake[lst]
            and not transmitting[lst]
            and (engaged[lst] is None or engaged[lst] is tx.pkt)
        )

    def charge_packet(tx, sender_bucket, listener_bucket, bystander_bucket,
                      nav_len=None):
        bits = (tx.end - tx.start) * bw
        add_cause(sender_bucket, e_send * bits)
        if listener_decodes(tx):
            busy_total[tx.listener] += tx.end - tx.start
            add_cause(listener_bucket, e_rcv * bits)
        for j in neighbors[tx.sender]:
            if j == tx.listener or not awake[j] or transmitting[j]:
                continue
            busy_total[j] += tx.end - tx.start
            add_cause(bystander_bucket, e_rcv * bits)
            if nav_len is not None:
                set_nav(j, tx.end, tx.end + nav_len)

    def after_exchange(now, node):
        # Past the window edge the participant goes back to sleep; with a
        # queued packet and the window still open it contends again.
        if now >= window_of(now)[1]:
            sleep(node, now)
        elif mac[node] is not None and engaged[node] is None:
            start_contention(node, now)

    def release_sender(now, node):
        engaged[node] = None
        mac[node] = None
        if upper[node]:
            dest = upper[node].pop(0)
            mac[node] = _Pkt(node, dest, now)
        after_exchange(now, node)

    def fail_attempt(now, pkt):
        pkt.attempts += 1
        pkt.stage += 1
        engaged[pkt.src] = None
        res.collision_events += 1
        if pkt.attempts >= MAX_ATTEMPTS:
            res.dropped += 1
            release_sender(now, pkt.src)
        else:
            after_exchange(now, pkt.src)

    # ------------------------------------------------------------------
    k = 0
    while k * PERIOD < horizon:
        push(k * PERIOD, _WINDOW, k)
        push(k * PERIOD + dc * PERIOD, _WINDOW_END, k)
        k += 1

    per_node = ctx.pkt_rate / n
    for node in range(n):
        if per_node <= 0:
            continue
        t = rng.exponential(1.0 / per_node)
        while t < horizon:
            push(t, _ARRIVE, node)
            t += rng.exponential(1.0 / per_node)

    for node in range(n):
        push(rng.uniform(0.0, cap.sync_interval), _SYNC, node)

    while events:
        now, _, kind, payload = heapq.heappop(events)
        if now >= horizon:
            break

        if kind == _WINDOW:
            for node in range(n):
                wake(node, now)
                if mac[node] is not None and engaged[node] is None and not transmitting[node]:
                    if remaining[node] is None:
                        start_contention(node, now)
                    else:
                        try_resume(node, now)

        elif kind == _WINDOW_END:
            for node in range(n):
                freeze(node, now, hard=True)
                if engaged[node] is None and not transmitting[node]:
                    sleep(node, now)

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
            mac[node] = _Pkt(node, dest, now)
            if (
                awake[node]
                and engaged[node] is None
                and not transmitting[node]
                and in_window(now)
            ):
                start_contention(node, now)

        elif kind == _FIRE:
            node, token = payload
            if token != fire_token[node] or not counting[node]:
                continue
            counting[node] = False
            pkt = mac[node]
            if (
                pkt is None
                or not awake[node]
                or transmitting[node]
                or engaged[node] is not None
                or now < nav_until[node]
                or not in_window(now)
            ):
                remaining[node] = slot_t  # re-arm; resumed when eligible
                continue
            remaining[node] = None
            engaged[node] = pkt
            begin_tx(now, node, pkt.dest, "rts", rts_t, pkt)

        elif kind == _SYNC:
            node = payload
            if not awake[node]:
                # catch up shortly after the next window opens
                nxt = window_of(now)[0] + PERIOD
                push(nxt + float(rng.uniform(0.0, dc * PERIOD / 4)), _SYNC, node)
                continue
            if (transmitting[node] or engaged[node] is not None
                    or busy_count[node] > 0 or now < nav_until[node]):
                push(now + float(rng.uniform(0.0, 10 * slot_t)), _SYNC, node)
                continue
            begin_tx(now, node, None, "sync", sync_t)
            push(now + cap.sync_interval, _SYNC, node)

        elif kind == _RETRY:
            fail_attempt(now, payload)

        elif kind == _RESUME:
            try_resume(payload, now)

        elif kind == _TX_END:
            tx = payload
            finish_tx(now, tx)
            pkt = tx.pkt
            if tx.kind == "rts":
                # The destination may have slipped into sleep at the window
                # edge while the RTS was in the air.
                if tx.garbled or not awake[pkt.dest]:
                    charge_packet(tx, "collision", "collision", "collision")
                    push(now + cts_t, _RETRY, pkt)  # CTS timeout
                else:
                    charge_packet(tx, "overhead", "overhead", "overhead",
                                  nav_len=cts_t + data_t + ack_t)
                    engaged[pkt.dest] = pkt
                    begin_tx(now, pkt.dest, pkt.src, "cts", cts_t, pkt)
            elif tx.kind == "cts":
                if tx.garbled:
                    charge_packet(tx, "collision", "collision", "collision")
                    engaged[pkt.dest] = None
                    after_exchange(now, pkt.dest)
                    fail_attempt(now, pkt)  # sender timeout at CTS end
                else:
                    charge_packet(tx, "overhead", "overhead", "overhead",
                                  nav_len=data_t + ack_t)
                    begin_tx(now, pkt.src, pkt.dest, "data", data_t, pkt)
            elif tx.kind == "data":
                if tx.garbled:
                    charge_packet(tx, "collision", "collision", "collision")
                    engaged[pkt.dest] = None
                    after_exchange(now, pkt.dest)
                    push(now + ack_t, _RETRY, pkt)  # ACK timeout
                else:
                    charge_packet(tx, "useful", "useful", "overhearing")
                    res.delivered += 1
                    res.delay_sum += now - pkt.handoff
                    res.delay_count += 1
                    begin_tx(now, pkt.dest, pkt.src, "ack", ack_t, pkt)
            elif tx.kind == "ack":
                # Ack loss is not modelled as a failure; the exchange ends.
                charge_packet(tx, "overhead", "overhead", "overhead")
                engaged[pkt.dest] = None
                after_exchange(now, pkt.dest)
                release_sender(now, pkt.src)
            else:  # sync broadcast
                charge_packet(tx, "overhead", "overhead", "overhead")
                after_exchange(now, tx.sender)

    for node in range(n):
        if awake[node]:
            awake_total[node] += horizon - wake_at[node]
    res.idle_j = prof.p_idle * sum(
        max(0.0, awake_total[i] - busy_total[i]) for i in range(n)
    )
    res.in_flight = res.generated - res.delivered - res.dropped
    return res


def run_smac(cfg: SimConfig) -> SimStats:
    """Replicated common-active-period run; each replication redeploys."""
    cfg.require_valid()
    return replicate_until_confident(run_smac_once, cfg)
