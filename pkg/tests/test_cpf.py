from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from macsel.context import NetworkContext
from macsel.cpf import (
    CriterionValue,
    Weights,
    cpf_energy_delay,
    cpf_general,
    evaluate_all,
    rank_evaluations,
    sweep,
)
from macsel.errors import DegenerateCPFError
from macsel.radio import RadioProfile

BASE = NetworkContext()
PROF = RadioProfile()
W = Weights()  # 10/11, 1/11


def test_general_two_criteria():
    criteria = [
        CriterionValue("throughput", 1.0, direction="direct"),
        CriterionValue("latency", 2.0, direction="inverse"),
    ]
    assert cpf_general(criteria) == pytest.approx(0.5, rel=1e-12)


def test_general_homogeneous_in_weights():
    criteria = [
        CriterionValue("a", 3.0, importance=2.0, cost=0.5, direction="direct"),
        CriterionValue("b", 7.0, importance=1.0, cost=4.0, direction="inverse"),
    ]
    scaled = [
        CriterionValue(c.id, c.value, c.importance * 13, c.cost, c.direction)
        for c in criteria
    ]
    assert cpf_general(scaled) == pytest.approx(cpf_general(criteria), rel=1e-12)


def test_general_matches_energy_delay_with_unit_numerator():
    e, t = 0.37, 0.021
    criteria = [
        CriterionValue("one", 1.0, direction="direct"),
        CriterionValue("energy", e, importance=W.alpha, direction="inverse"),
        CriterionValue("delay", t, importance=W.beta, direction="inverse"),
    ]
    assert cpf_general(criteria) == cpf_energy_delay(e, t, W)


def test_general_degenerate():
    with pytest.raises(DegenerateCPFError):
        cpf_general([CriterionValue("a", 1.0, direction="direct")])


def test_energy_delay_examples():
    assert cpf_energy_delay(1.0, 1.0, Weights(0.5, 0.5)) == pytest.approx(1.0)
    assert cpf_energy_delay(0.1, 0.1, W) == pytest.approx(10.0, rel=1e-12)
    with pytest.raises(DegenerateCPFError):
        cpf_energy_delay(0.0, 0.0, W)


def test_weights_validation():
    with pytest.raises(ValueError):
        Weights(0.0, 0.0)
    with pytest.raises(ValueError):
        Weights(-1.0, 2.0)


def test_default_context_cpfs_frozen():
    evals = {ev.category: ev for ev in evaluate_all(BASE, PROF, W)}
    # spreadsheet oracle: 1/(alpha*E + beta*T) over the frozen breakdowns
    assert evals["ScP"].cpf == pytest.approx(
        1 / (W.alpha * 0.16207621333333333 + W.beta * 0.135), rel=1e-9)
    assert evals["CAP"].cpf == pytest.approx(
        1 / (W.alpha * 0.4789276812622425 + W.beta * 0.4100000120848887), rel=1e-9)
    assert evals["PSP"].cpf == pytest.approx(
        1 / (W.alpha * 0.12109286350024967 + W.beta * 0.05887308625375947), rel=1e-9)


def test_low_traffic_favours_preamble_sampling():
    evals = evaluate_all(replace(BASE, pkt_rate=2.0), PROF, W)
    ranked, _ = rank_evaluations(evals)
    assert ranked[0].category == "PSP"


def test_low_population_favours_scheduled():
    evals = evaluate_all(replace(BASE, n_nodes=10), PROF, W)
    ranked, _ = rank_evaluations(evals)
    assert ranked[0].category == "ScP"


def test_mid_traffic_favours_common_active_period():
    evals = evaluate_all(replace(BASE, pkt_rate=350.0), PROF, W)
    ranked, _ = rank_evaluations(evals)
    assert ranked[0].category == "CAP"


def test_rank_reports_exact_ties():
    evals = evaluate_all(BASE, PROF, W)
    tied = [replace(ev, cpf=1.0) for ev in evals]
    ranked, ties = rank_evaluations(tied)
    assert [e.category for e in ranked] == ["ScP", "CAP", "PSP"]
    assert ties == [("ScP", "CAP"), ("CAP", "PSP")]


def test_sweep_single_value_matches_evaluate():
    rows = sweep(BASE, PROF, W, "pkt_rate", [BASE.pkt_rate])
    evals = {ev.category: ev for ev in evaluate_all(BASE, PROF, W)}
    assert len(rows) == 3
    for row in rows:
        assert row.cpf == evals[row.category].cpf
        assert row.energy.total == evals[row.category].energy.total


def test_sweep_row_count_and_order():
    values = [1.0, 5.0, 9.0, 13.0]
    rows = sweep(BASE, PROF, W, "pkt_rate", values)
    assert len(rows) == len(values) * 3
    assert [r.axis_value for r in rows[::3]] == values


def test_sweep_scheduled_cpf_decreasing_in_population():
    # beyond superframe saturation (N*N' > G*T_f) the scheduled CPF falls
    values = [30.0, 60.0, 120.0, 240.0, 480.0]
    rows = sweep(BASE, PROF, W, "n_nodes", values)
    scp = [r.cpf for r in rows if r.category == "ScP"]
    assert all(b < a for a, b in zip(scp, scp[1:]))


def test_sweep_invalid_value_marks_rows():
    rows = sweep(BASE, PROF, W, "network_radius", [-5.0, 50.0])
    bad = [r for r in rows if r.axis_value == -5.0]
    assert len(bad) == 3
    assert all(r.error is not None and "network_radius" in r.error for r in bad)
    good = [r for r in rows if r.axis_value == 50.0]
    assert all(r.error is None for r in good)


def test_sweep_rejects_unknown_axis():
    with pytest.raises(ValueError):
        sweep(BASE, PROF, W, "bandwidth", [1.0])
    with pytest.raises(ValueError):
        sweep(BASE, PROF, W, "pkt_rate", [])


@settings(max_examples=30, deadline=None)
@given(
    g=st.floats(0.5, 300.0),
    n=st.integers(5, 200),
    c=st.floats(0.001, 100.0),
)
def test_argmax_invariance_under_weight_scaling(g, n, c):
    import warnings as _w

    ctx = replace(BASE, pkt_rate=g, n_nodes=n)
    with _w.catch_warnings():
        _w.simplefilter("ignore")
        base_evals = evaluate_all(ctx, PROF, W)
        scaled_evals = evaluate_all(ctx, PROF, Weights(W.alpha * c, W.beta * c))
    base_rank, _ = rank_evaluations(base_evals)
    scaled_rank, _ = rank_evaluations(scaled_evals)
    assert [e.category for e in base_rank] == [e.category for e in scaled_rank]
    for a, b in zip(base_evals, scaled_evals):
        assert b.cpf == pytest.approx(a.cpf / c, rel=1e-9)


def test_cpf_decreasing_in_energy_and_delay():
    assert cpf_energy_delay(2.0, 1.0, W) < cpf_energy_delay(1.0, 1.0, W)
    assert cpf_energy_delay(1.0, 2.0, W) < cpf_energy_delay(1.0, 1.0, W)


def test_errored_category_excluded_from_ranking():
    # saturate the CSMA solver: the CAP column carries an error marker and
    # the ranking covers the remaining categories only
    from macsel.context import CapParams
    import warnings as _w

    ctx = replace(
        BASE,
        n_nodes=50,
        tx_range=1.0,   # keeps the preamble-sampling load finite
        pkt_rate=5e5,
        cap=CapParams(duty_cycle=1.0, cw_min=2, backoff_stages=0,
                      service_rate_mode="packets"),
    )
    with _w.catch_warnings():
        _w.simplefilter("ignore")
        evals = evaluate_all(ctx, PROF, W)
    by_cat = {ev.category: ev for ev in evals}
    assert by_cat["CAP"].error is not None
    assert "saturated" in by_cat["CAP"].error
    assert by_cat["CAP"].cpf is None
    ranked, _ = rank_evaluations(evals)
    assert "CAP" not in [e.category for e in ranked]
    assert len(ranked) == 2
