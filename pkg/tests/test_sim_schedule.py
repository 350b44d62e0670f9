import numpy as np
import pytest

from macsel.errors import ScheduleError
from macsel.sim.config import is_connected, neighbor_lists
from macsel.sim.schedule import (
    build_tsmp_schedule,
    directed_links,
    verify_schedule,
)


def test_line_topology_separates_shared_node_links():
    # links (0,1) and (1,2) share node 1 and must land in different columns
    pos = np.array([[0.0, 0.0], [10.0, 0.0], [20.0, 0.0]])
    sched = build_tsmp_schedule(pos, 12.0, rows=1, cols=10, seed=2,
                                area=(30.0, 10.0))
    assert sched.column_of((0, 1)) != sched.column_of((1, 2))
    nbrs = neighbor_lists(pos, 12.0, (30.0, 10.0), wrap=False)
    assert verify_schedule(sched, nbrs) == []


def test_isolated_pairs_share_a_cell():
    # two far-apart pairs have no two-hop conflict: spatial reuse in one slot
    pos = np.array([[0.0, 0.0], [5.0, 0.0], [100.0, 0.0], [105.0, 0.0]])
    sched = build_tsmp_schedule(pos, 8.0, rows=1, cols=4, seed=3,
                                area=(120.0, 10.0), require_connected=False)
    nbrs = neighbor_lists(pos, 8.0, (120.0, 10.0), wrap=False)
    assert verify_schedule(sched, nbrs) == []
    # 4 directed links fit in two columns: each cell carries a reused pair
    used = {col for (_, col) in sched.cells}
    assert len(used) == 2
    assert all(len(links) == 2 for links in sched.cells.values())


def test_complete_ten_node_graph_fills_three_by_thirty_exactly():
    # 10 nodes in 14x14 m with 20 m range form a complete graph: 90 directed
    # links need all 90 cells of the 3x30 table
    rng = np.random.default_rng(7)
    pos = rng.uniform(0, 14, size=(10, 2))
    sched = build_tsmp_schedule(pos, 20.0, rows=3, cols=30, seed=1,
                                area=(14.0, 14.0))
    nbrs = neighbor_lists(pos, 20.0, (14.0, 14.0), wrap=False)
    links = directed_links(nbrs)
    assert len(links) == 90
    assert sched.links() == set(links)
    assert len(sched.cells) == 90  # one link per cell, no reuse possible
    assert verify_schedule(sched, nbrs) == []


def test_insufficient_cells_error_reports_minimum():
    rng = np.random.default_rng(7)
    pos = rng.uniform(0, 14, size=(10, 2))
    with pytest.raises(ScheduleError, match="insufficient cells"):
        build_tsmp_schedule(pos, 20.0, rows=3, cols=10, seed=1,
                            area=(14.0, 14.0))


def test_disconnected_topology_rejected():
    pos = np.array([[0.0, 0.0], [100.0, 0.0]])
    with pytest.raises(ScheduleError, match="not connected"):
        build_tsmp_schedule(pos, 5.0, rows=1, cols=4, seed=1,
                            area=(120.0, 10.0))


def test_deterministic_given_seed():
    pos = np.random.default_rng(1).uniform(0, 40, size=(8, 2))
    nbrs = neighbor_lists(pos, 20.0, (40.0, 40.0), wrap=False)
    assert is_connected(nbrs)
    a = build_tsmp_schedule(pos, 20.0, rows=2, cols=60, seed=5, area=(40.0, 40.0))
    b = build_tsmp_schedule(pos, 20.0, rows=2, cols=60, seed=5, area=(40.0, 40.0))
    assert a == b


def test_random_connected_topologies_verify_clean():
    rng = np.random.default_rng(2024)
    built = 0
    while built < 12:
        n = int(rng.integers(4, 11))
        pos = rng.uniform(0, 35, size=(n, 2))
        nbrs = neighbor_lists(pos, 20.0, (35.0, 35.0), wrap=False)
        if not is_connected(nbrs):
            continue
        links = directed_links(nbrs)
        sched = build_tsmp_schedule(pos, 20.0, rows=3, cols=len(links),
                                    seed=built, area=(35.0, 35.0))
        assert verify_schedule(sched, nbrs) == []
        built += 1
