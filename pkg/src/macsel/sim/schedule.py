"""Contention-free superframe schedules for the scheduled category.

A schedule is a rows x cols table of slot-frequency cells; every directed
link of the connectivity graph gets at least one cell.  Legality rules:

  * a node appears in at most one cell per column (one radio: it cannot be
    on two frequencies, or both sides of two links, in one time slot);
  * links sharing the same cell (same slot AND same frequency) must be
    pairwise outside two-hop conflict: no shared endpoint and no edge
    between their endpoints (spatial reuse);
  * cells on different frequencies in the same column do not interfere with
    each other beyond the node rule above.

Building is a two-hop colouring problem; a greedy first-fit with seeded
restarts handles general topologies, and a round-robin construction packs
complete even-order graphs exactly (e.g. 10 nodes into 3x30).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ScheduleError
from .config import is_connected, neighbor_lists

Link = tuple[int, int]


@dataclass(frozen=True)
class Schedule:
    rows: int
    cols: int
    cells: dict[tuple[int, int], tuple[Link, ...]]

    def links(self) -> set[Link]:
        out: set[Link] = set()
        for links in self.cells.values():
            out.update(links)
        return out

    def column_of(self, link: Link) -> int:
        for (row, col), links in self.cells.items():
            if link in links:
                return col
        raise KeyError(link)


def _two_hop_conflict(a: Link, b: Link, adjacency: list[set[int]]) -> bool:
    """Two links conflict when they share an endpoint or any pair of their
    endpoints is connected (interference within two hops)."""
    sa, ra = a
    sb, rb = b
    if {sa, ra} & {sb, rb}:
        return True
    for u in (sa, ra):
        for v in (sb, rb):
            if v in adjacency[u]:
                return True
    return False


def directed_links(neighbors: list[list[int]]) -> list[Link]:
    return [(i, j) for i, nbrs in enumerate(neighbors) for j in nbrs]


def verify_schedule(
    sched: Schedule, neighbors: list[list[int]], require_all_links: bool = True
) -> list[str]:
    """Brute-force legality check; returns violation descriptions.

    Checks node uniqueness per column, pairwise two-hop conflicts inside
    shared cells, and (optionally) coverage of every directed link.
    """
    adjacency = [set(n) for n in neighbors]
    problems: list[str] = []
    by_col: dict[int, list[tuple[int, Link]]] = {}
    for (row, col), links in sched.cells.items():
        if not 0 <= row < sched.rows or not 0 <= col < sched.cols:
            problems.append(f"cell ({row},{col}): outside the {sched.rows}x{sched.cols} table")
        for link in links:
            by_col.setdefault(col, []).append((row, link))
        for i in range(len(links)):
            for j in range(i + 1, len(links)):
                if _two_hop_conflict(links[i], links[j], adjacency):
                    problems.append(
                        f"cell ({row},{col}): links {links[i]} and {links[j]} "
                        "are within two-hop conflict"
                    )
    for col, entries in by_col.items():
        seen: dict[int, Link] = {}
        for _, link in entries:
            for node in link:
                if node in seen and seen[node] != link:
                    problems.append(
                        f"column {col}: node {node} appears in links "
                        f"{seen[node]} and {link}"
                    )
                seen.setdefault(node, link)
    if require_all_links:
        missing = set(directed_links(neighbors)) - sched.links()
        for link in sorted(missing):
            problems.append(f"link {link}: no cell assigned")
    return problems


def _greedy_build(
    links: list[Link], adjacency: list[set[int]], rows: int, cols: int,
    rng: np.random.Generator, spatial_reuse: bool = True,
) -> Schedule | None:
    order = list(links)
    rng.shuffle(order)
    # Hard links first: endpoints with many incident links are the packing
    # bottleneck.
    degree = {}
    for s, r in links:
        degree[s] = degree.get(s, 0) + 1
        degree[r] = degree.get(r, 0) + 1
    order.sort(key=lambda l: -(degree[l[0]] + degree[l[1]]))

    cells: dict[tuple[int, int], list[Link]] = {}
    col_nodes: list[set[int]] = [set() for _ in range(cols)]
    for link in order:
        s, r = link
        placed = False
        for col in range(cols):
            if s in col_nodes[col] or r in col_nodes[col]:
                continue
            for row in range(rows):
                cell = cells.get((row, col))
                if cell is None:
                    cells[(row, col)] = [link]
                    placed = True
                elif spatial_reuse and all(
                    not _two_hop_conflict(link, other, adjacency) for other in cell
                ):
                    cell.append(link)
                    placed = True
                if placed:
                    break
            if placed:
                col_nodes[col].update(link)
                break
        if not placed:
            return None
    return Schedule(rows, cols, {k: tuple(v) for k, v in cells.items()})


def _round_robin_matchings(n: int) -> list[list[tuple[int, int]]]:
    """Circle-method 1-factorization of the complete graph on even n."""
    rounds = []
    for r in range(n - 1):
        pairs = [(n - 1, r)]
        for i in range(1, n // 2):
            pairs.append(((r + i) % (n - 1), (r - i) % (n - 1)))
        rounds.append(pairs)
    return rounds


def _complete_graph_build(n: int, rows: int, cols: int) -> Schedule | None:
    """Exact packing of all n(n-1) directed links of a complete graph.

    Works for even n with (n-1) divisible by 3 and rows >= 3 (the 10-node,
    3x30 validation layout); one leftover arc per round is regrouped across
    rounds r, r+3, r+6 where the leftover endpoints are provably disjoint.
    """
    if n % 2 or n < 6 or (n - 1) % 3 or rows < 3:
        return None
    matchings = _round_robin_matchings(n)
    k = n // 2
    columns: list[list[Link]] = []
    leftovers: dict[int, Link] = {}
    for r, edges in enumerate(matchings):
        arcs = [(a, b) for a, b in edges] + [(b, a) for a, b in edges]
        # Keep one backward arc aside; pack the remaining 2k-1 in triples.
        leftovers[r] = arcs.pop()
        for i in range(0, len(arcs), 3):
            columns.append(arcs[i:i + 3])
    for offset in range(3):
        group = [leftovers[r] for r in sorted(leftovers) if r % 3 == offset]
        columns.append(group)
    if len(columns) > cols:
        return None
    cells: dict[tuple[int, int], tuple[Link, ...]] = {}
    for col, links in enumerate(columns):
        for row, link in enumerate(links):
            cells[(row, col)] = (link,)
    return Schedule(rows, cols, cells)


def build_tsmp_schedule(
    positions: np.ndarray,
    tx_range: float,
    rows: int,
    cols: int,
    seed: int = 0,
    area: tuple[float, float] | None = None,
    wrap: bool = False,
    require_connected: bool = True,
) -> Schedule:
    """Greedy two-hop colouring of all directed links, deterministic per seed.

    A connected communication graph is required for normal operation
    (``require_connected=False`` schedules the components independently,
    useful for isolated-cluster what-if cases).  Raises
    :class:`ScheduleError` with the minimum table size when the links cannot
    be packed.
    """
    if area is None:
        area = (float(positions[:, 0].max()) + 1.0, float(positions[:, 1].max()) + 1.0)
        wrap = False
    neighbors = neighbor_lists(positions, tx_range, area, wrap)
    if require_connected and not is_connected(neighbors):
        raise ScheduleError("communication graph is not connected")
    adjacency = [set(nb) for nb in neighbors]
    links = directed_links(neighbors)
    n = len(positions)

    complete = all(len(nb) == n - 1 for nb in neighbors)
    if complete and len(links) > rows * cols:
        raise ScheduleError(
            f"insufficient cells: {len(links)} directed links need at least "
            f"{math.ceil(len(links) / rows)} columns at {rows} rows"
        )
    if complete:
        exact = _complete_graph_build(n, rows, cols)
        if exact is not None:
            return exact

    rng = np.random.default_rng(np.random.SeedSequence([seed, 59]))
    for _ in range(200):
        sched = _greedy_build(links, adjacency, rows, cols, rng)
        if sched is not None:
            return sched
    max_degree = max(len(nb) for nb in neighbors) * 2
    raise ScheduleError(
        "insufficient cells: could not pack "
        f"{len(links)} directed links into {rows}x{cols}; at least "
        f"max(ceil(links/rows), max node degree) = "
        f"max({math.ceil(len(links) / rows)}, {max_degree}) columns are needed"
    )
