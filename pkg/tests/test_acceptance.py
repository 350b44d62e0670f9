"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines; the simulation-backed criterion (A4) takes a couple of minutes of
CPU, everything else is seconds.
"""

import math
import random
import time
import warnings
from contextlib import contextmanager
from dataclasses import replace

import numpy as np
import pytest

from macsel.context import CapParams, NetworkContext, ScheduledParams
from macsel.cpf import Weights, evaluate_all, rank_evaluations, sweep
from macsel.energy import (
    csma_collision_probability,
    expected_attempts_csma,
    expected_attempts_psa,
)
from macsel.errors import RegistryError
from macsel.radio import RadioProfile
from macsel.registry import load_registry, save_registry, seed_registry
from macsel.selector import satisfying_categories, select
from macsel.sim import (
    SimConfig,
    build_tsmp_schedule,
    compare_model_sim,
    deploy,
    run_psa,
    run_tsmp,
)
from macsel.sim.config import is_connected, neighbor_lists
from macsel.sim.schedule import directed_links, verify_schedule

PROF = RadioProfile()
BASE = NetworkContext()
W = Weights()  # alpha = 10/11, beta = 1/11


@contextmanager
def criterion(label: str):
    start = time.time()
    try:
        yield
    except BaseException:
        print(f"[{label}] FAIL ({time.time() - start:.1f}s)")
        raise
    print(f"[{label}] PASS ({time.time() - start:.1f}s)")


def test_a1_collision_fixed_point_grid():
    with criterion("A1 collision fixed point: solver agreement + monotonicity"):
        start = time.time()
        cap = CapParams(duty_cycle=0.1, cw_min=16, backoff_stages=1,
                        service_rate_mode="packets")
        g_values = [5.0, 20.0, 50.0, 100.0, 200.0]
        n_values = [2, 3, 5, 8, 12]
        m_values = [0, 1, 5]
        solved = {}
        for g in g_values:
            for n in n_values:
                for m in m_values:
                    ctx = replace(BASE, n_nodes=n, pkt_rate=g,
                                  cap=replace(cap, backoff_stages=m))
                    a = csma_collision_probability(ctx, method="iteration")
                    b = csma_collision_probability(ctx, method="bisection")
                    assert abs(a.p - b.p) <= 1e-8, (g, n, m)
                    solved[(g, n, m)] = a.p
        # p = 0 exactly at G = 0
        assert csma_collision_probability(replace(BASE, pkt_rate=0.0)).p == 0.0
        # nondecreasing in G and N on the grid
        for m in m_values:
            for n in n_values:
                ps = [solved[(g, n, m)] for g in g_values]
                assert all(b >= a for a, b in zip(ps, ps[1:]))
            for g in g_values:
                ps = [solved[(g, n, m)] for n in n_values]
                assert all(b >= a for a, b in zip(ps, ps[1:]))
        assert time.time() - start < 1.0, "A1 must run in under a second"


def test_a2_closed_form_collapse():
    with criterion("A2 closed-form collapse at m=0"):
        ctx = replace(
            BASE,
            n_nodes=2,
            pkt_rate=0.5 * BASE.bandwidth,  # lambda/mu = 0.5 with dc = 1
            cap=CapParams(duty_cycle=1.0, cw_min=4, backoff_stages=0),
        )
        sol = csma_collision_probability(ctx)
        assert abs(sol.p - 0.25) <= 1e-12


def test_a3_monte_carlo_oracles():
    with criterion("A3 Monte-Carlo retry oracles"):
        start = time.time()
        rng = np.random.default_rng(31337)
        for p in (0.1, 0.25, 0.5):
            samples = rng.geometric(1.0 - p, size=1_000_000)
            se = samples.std(ddof=1) / math.sqrt(samples.size)
            assert abs(expected_attempts_csma(p) - samples.mean()) < 3 * se
        for g_prime in (0.01, 0.1, 0.5):
            success = math.exp(-2 * g_prime)
            samples = rng.geometric(success, size=1_000_000)
            se = samples.std(ddof=1) / math.sqrt(samples.size)
            assert abs(expected_attempts_psa(g_prime) - samples.mean()) < 3 * se
        assert time.time() - start < 30.0


def test_a4_model_versus_simulation():
    with criterion("A4 model-vs-simulation divergence"):
        rates = (1.0, 5.0, 10.0, 15.0, 20.0)

        psa_cfg = SimConfig(
            context=replace(BASE, n_nodes=100),
            profile=PROF, area=(100.0, 100.0), seed=7,
            sim_duration=20.0, rel_error=0.05, max_reps=12,
        )
        psa = compare_model_sim(psa_cfg, "PSP", pkt_rates=rates)
        print(f"    PSA energy divergence: "
              f"{', '.join(f'{p.energy_divergence:.3f}' for p in psa.points)}")
        assert psa.max_energy_divergence <= 0.10

        smac_cfg = SimConfig(
            context=replace(BASE, n_nodes=30),
            profile=PROF, area=(100.0, 100.0), seed=7,
            sim_duration=30.0, rel_error=0.05, max_reps=12,
        )
        smac = compare_model_sim(smac_cfg, "CAP", pkt_rates=rates)
        print(f"    SMAC energy divergence: "
              f"{', '.join(f'{p.energy_divergence:.3f}' for p in smac.points)}")
        assert smac.max_energy_divergence <= 0.10

        # TSMP: 10 nodes, 3x30 superframe of 0.58875 s; the delay model has
        # no MAC-busy deferral, so the point runs at light load
        sched_params = ScheduledParams(frame_len=0.58875, slot_len=0.58875 / 30,
                                       guard=0.001)
        tsmp_cfg = SimConfig(
            context=NetworkContext(n_nodes=10, pkt_rate=2.0, sched=sched_params),
            profile=PROF, area=(14.0, 14.0), seed=11,
            sim_duration=96.0, rel_error=0.02, max_reps=20,
        )
        sched = build_tsmp_schedule(deploy(tsmp_cfg), 20.0, 3, 30, seed=11,
                                    area=(14.0, 14.0), wrap=True)
        stats = run_tsmp(tsmp_cfg, sched)
        target = 0.58875 / 2 + 0.58875 / 30
        divergence = abs(stats.delay - target) / target
        print(f"    TSMP delay {stats.delay:.6f} vs {target:.6f} "
              f"({divergence:.3%})")
        assert divergence <= 0.05


def test_a5_rule_of_thumb_orderings():
    with criterion("A5 rule-of-thumb orderings"):
        start = time.time()
        grid = [1.0, 5.0, 20.0, 50.0, 100.0, 200.0, 350.0, 400.0]
        winners = {}
        for g in grid:
            evals = evaluate_all(replace(BASE, pkt_rate=g), PROF, W)
            ranked, _ = rank_evaluations(evals)
            winners[g] = ranked[0].category
        psp_points = [g for g, cat in winners.items() if cat == "PSP"]
        cap_points = [g for g, cat in winners.items() if cat == "CAP"]
        assert psp_points, f"no PSP-best point in {winners}"
        assert cap_points, f"no CAP-best point in {winners}"
        assert min(psp_points) < min(cap_points)
        print(f"    PSP best at G={sorted(psp_points)}, "
              f"CAP best at G={sorted(cap_points)}")

        # scheduled CPF strictly decreasing in N beyond superframe saturation
        # (N * N' > G * T_f holds for every point below)
        n_grid = [30.0, 60.0, 120.0, 240.0, 480.0]
        rows = sweep(BASE, PROF, W, "n_nodes", n_grid)
        scp = [r.cpf for r in rows if r.category == "ScP"]
        assert all(b < a for a, b in zip(scp, scp[1:]))
        assert time.time() - start < 10.0


def test_a6_example_end_to_end():
    with criterion("A6 end-to-end selection scenarios"):
        reg = seed_registry()
        req = {"overhearing-avoidance", "distributed"}
        assert satisfying_categories(reg, req) == {"ScP", "PSP"}

        s1 = replace(BASE, n_nodes=90, network_radius=100.0, pkt_rate=100.0)
        r1 = select(reg, s1, PROF, req, W)
        assert r1.best_category == "ScP"
        assert set(r1.protocols) == {"SMACS", "AS-MAC"}

        s2 = replace(BASE, n_nodes=110, network_radius=70.0, pkt_rate=100.0)
        r2 = select(reg, s2, PROF, req, W)
        assert r2.best_category == "PSP"
        assert set(r2.protocols) == {"STEM"}


def test_a7_argmax_invariance():
    with criterion("A7 weight-scaling argmax invariance"):
        rng = random.Random(4242)
        for _ in range(100):
            ctx = replace(
                BASE,
                n_nodes=rng.randint(5, 300),
                network_radius=rng.uniform(30.0, 300.0),
                tx_range=rng.uniform(10.0, 30.0),
                pkt_rate=rng.uniform(0.0, 300.0),
            )
            c = rng.uniform(1e-6, 100.0)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                base_evals = evaluate_all(ctx, PROF, W)
                scaled = evaluate_all(ctx, PROF, Weights(W.alpha * c, W.beta * c))
            base_rank, _ = rank_evaluations(base_evals)
            scaled_rank, _ = rank_evaluations(scaled)
            assert [e.category for e in base_rank] == [
                e.category for e in scaled_rank
            ]
            for a, b in zip(base_evals, scaled):
                assert abs(b.cpf - a.cpf / c) <= 1e-9 * abs(a.cpf / c)


def test_a8_determinism_and_conservation():
    with criterion("A8 determinism, conservation, schedule correctness"):
        cfg = SimConfig(
            context=replace(BASE, n_nodes=40, pkt_rate=5.0),
            profile=PROF, area=(100.0, 100.0), seed=99,
            sim_duration=5.0, max_reps=3,
        )
        first = run_psa(cfg)
        second = run_psa(cfg)
        assert first == second  # bit-identical SimStats

        total = (first.collision + first.overhearing + first.idle_listening
                 + first.overhead)
        assert first.energy_per_second == total

        sched_params = ScheduledParams(frame_len=0.58875, slot_len=0.58875 / 30,
                                       guard=0.001)
        tsmp_cfg = SimConfig(
            context=NetworkContext(n_nodes=10, pkt_rate=20.0, sched=sched_params),
            profile=PROF, area=(14.0, 14.0), seed=5,
            sim_duration=24.0, rel_error=0.10, max_reps=4,
        )
        sched = build_tsmp_schedule(deploy(tsmp_cfg), 20.0, 3, 30, seed=5,
                                    area=(14.0, 14.0), wrap=True)
        stats = run_tsmp(tsmp_cfg, sched)
        assert stats.collision == 0.0
        assert stats.overhearing == 0.0

        # 50 random connected topologies verified conflict-free
        rng = np.random.default_rng(808)
        verified = 0
        while verified < 50:
            n = int(rng.integers(4, 11))
            pos = rng.uniform(0, 35, size=(n, 2))
            nbrs = neighbor_lists(pos, 20.0, (35.0, 35.0), wrap=False)
            if not is_connected(nbrs):
                continue
            links = directed_links(nbrs)
            built = build_tsmp_schedule(pos, 20.0, rows=3, cols=len(links),
                                        seed=verified, area=(35.0, 35.0))
            assert verify_schedule(built, nbrs) == []
            verified += 1


def _random_registry(rng: random.Random):
    from macsel.registry import Category, ProtocolRecord, Registry, Requirement

    cats = tuple(Category(f"cat{i}", f"rep{i}", "")
                 for i in range(rng.randint(1, 4)))
    reqs = tuple(Requirement(f"req{i}") for i in range(rng.randint(0, 5)))
    req_ids = [r.id for r in reqs]
    protocols = []
    for i in range(rng.randint(0, 8)):
        reviewed = frozenset(rng.sample(req_ids, rng.randint(0, len(req_ids))))
        satisfies = frozenset(r for r in reviewed if rng.random() < 0.6)
        protocols.append(
            ProtocolRecord(f"proto{i}", rng.choice(cats).id, satisfies, reviewed)
        )
    return Registry(cats, reqs, tuple(protocols))


def test_a9_persistence_round_trip():
    with criterion("A9 registry persistence round trip"):
        random_registry = _random_registry
        rng = random.Random(1123)
        for _ in range(100):
            reg = random_registry(rng)
            assert load_registry(save_registry(reg)) == reg

        doc = save_registry(seed_registry())
        doc["protocols"][0]["category"] = "ghost"
        with pytest.raises(RegistryError) as exc:
            load_registry(doc)
        assert "category" in str(exc.value)

        doc = save_registry(seed_registry())
        doc["requirements"][0].pop("id")
        with pytest.raises(RegistryError) as exc:
            load_registry(doc)
        assert "requirements[0].id" in str(exc.value)
