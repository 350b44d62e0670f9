from dataclasses import replace

from macsel.context import CapParams, NetworkContext
from macsel.energy import cap_energy
from macsel.radio import RadioProfile
from macsel.sim import SimConfig, run_smac
from macsel.sim.compare import model_context

PROF = RadioProfile()


def make_cfg(pkt_rate, n_nodes=30, cap=None, **kw):
    ctx = replace(NetworkContext(), n_nodes=n_nodes, pkt_rate=pkt_rate)
    if cap is not None:
        ctx = replace(ctx, cap=cap)
    defaults = dict(context=ctx, profile=PROF, area=(100.0, 100.0), seed=7,
                    sim_duration=20.0, max_reps=8)
    defaults.update(kw)
    return SimConfig(**defaults)


def test_zero_traffic_idle_matches_duty_cycle():
    cfg = make_cfg(0.0, sim_duration=20.0, max_reps=3)
    stats = run_smac(cfg)
    target = 30 * PROF.p_idle * cfg.context.cap.duty_cycle
    assert abs(stats.idle_listening - target) / target <= 0.02
    assert stats.collision == 0.0
    assert stats.overhearing == 0.0


def test_paper_rate_energy_within_ten_percent():
    cfg = make_cfg(20.0, sim_duration=30.0, max_reps=10)
    stats = run_smac(cfg)
    model = cap_energy(model_context(cfg, "CAP", 20.0), PROF).total
    assert abs(model - stats.energy_per_second) / stats.energy_per_second <= 0.10


def test_full_duty_cycle_light_load_delay():
    # dc = 1 removes the sleep wait.  The simulated exchange also spends one
    # CTS and the initial backoff before the payload lands, which the
    # analytic delay model deliberately ignores, so the expected simulated
    # delay is backoff + (rts + cts + msg)/B.
    cap = CapParams(duty_cycle=1.0)
    cfg = make_cfg(0.2, n_nodes=10, cap=cap, sim_duration=60.0, max_reps=10,
                   rel_error=0.03)
    stats = run_smac(cfg)
    bw = cfg.context.bandwidth
    slot = (cap.rts_len / bw) / cap.cw_min
    mean_backoff = slot * (1 + cap.cw_min) / 2
    expected = mean_backoff + (cap.rts_len + cap.cts_len + cfg.context.msg_len) / bw
    assert abs(stats.delay - expected) <= max(3 * stats.delay_hw, 0.05 * expected)


def test_sleep_wait_dominates_low_duty_cycle_delay():
    cfg = make_cfg(1.0, sim_duration=30.0, max_reps=6)
    stats = run_smac(cfg)
    dc = cfg.context.cap.duty_cycle
    sleep_term = (1 - dc) * (1 - dc) / 2
    # one-sided sanity corridor around the model's sleep-wait approximation
    assert sleep_term * 0.7 <= stats.delay <= sleep_term * 1.5


def test_bit_identical_given_seed():
    cfg = make_cfg(5.0, sim_duration=6.0, max_reps=3)
    assert run_smac(cfg) == run_smac(cfg)


def test_energy_conservation_and_packet_accounting():
    cfg = make_cfg(10.0, sim_duration=10.0, max_reps=3)
    stats = run_smac(cfg)
    total = (stats.collision + stats.overhearing + stats.idle_listening
             + stats.overhead)
    assert stats.energy_per_second == total
    assert stats.packets_generated == (
        stats.packets_delivered + stats.packets_dropped + stats.packets_in_flight
    )
