"""Exact uncapacitated transport between per-city surpluses and deficits.

The problem is bipartite: `supply[i]` units leave source i, `demand[j]`
units enter sink j, arc (i, j) costs `cost[i][j]` per unit with no capacity.
Solved by successive shortest paths under node potentials; costs are
nonnegative so plain Dijkstra works from the first iteration, and each
augmentation pushes the full bottleneck, so multiplicities in the trillions
cost no extra iterations.

The returned potentials certify optimality: every finite arc has
``cost[i][j] - pi_source[i] + pi_sink[j] >= 0`` with equality wherever flow
is positive.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .core import (
    INF,
    MAX_VALUE,
    Cost,
    DirectedMultigraph,
    check_cost,
)


class TransportInfeasible(Exception):
    """Some remaining supply cannot reach any remaining demand over finite
    arcs; the surrounding tree/instance combination admits no tour."""


@dataclass(frozen=True)
class TransportProblem:
    """Balanced bipartite transport data over n sources and n sinks."""

    supply: tuple[int, ...]
    demand: tuple[int, ...]
    cost: tuple[tuple[Cost, ...], ...]
    n: int = field(init=False)

    def __post_init__(self) -> None:
        supply = tuple(self.supply)
        demand = tuple(self.demand)
        n = len(supply)
        if n < 1:
            raise ValueError("transport needs at least one node per side")
        if len(demand) != n:
            raise ValueError("supply and demand vectors differ in length")
        for name, vec in (("supply", supply), ("demand", demand)):
            for i, value in enumerate(vec):
                if not isinstance(value, int) or isinstance(value, bool):
                    raise ValueError(f"{name}[{i}] must be an integer")
                if not 0 <= value <= MAX_VALUE:
                    raise ValueError(f"{name}[{i}] outside [0, {MAX_VALUE}]")
        if sum(supply) != sum(demand):
            raise ValueError("total supply and demand differ")
        rows = tuple(tuple(row) for row in self.cost)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError(f"cost matrix must be {n}x{n}")
        for i, row in enumerate(rows):
            for j, value in enumerate(row):
                check_cost(value, f"cost[{i}][{j}]")
        object.__setattr__(self, "supply", supply)
        object.__setattr__(self, "demand", demand)
        object.__setattr__(self, "cost", rows)
        object.__setattr__(self, "n", n)


@dataclass(frozen=True)
class TransportSolution:
    """An optimal routing plus the dual certificate.

    `flow` records positive arc flows as a multigraph over the n cities
    (source index -> sink index).  The potentials satisfy
    cost[i][j] - pi_source[i] + pi_sink[j] >= 0 on finite arcs, with
    equality on every arc carrying flow, which certifies optimality.
    """

    flow: DirectedMultigraph
    cost: int
    pi_source: tuple[int, ...]
    pi_sink: tuple[int, ...]


def solve_transport(problem: TransportProblem) -> TransportSolution:
    """Minimum-cost routing of all supply to all demand.

    Raises TransportInfeasible when the finite arcs cannot carry everything.
    """
    n = problem.n
    d = problem.cost
    a = list(problem.supply)
    b = list(problem.demand)
    flow: dict[tuple[int, int], int] = {}
    # Johnson potentials per node: sources are 0..n-1, sinks n..2n-1.
    pot = [0] * (2 * n)
    remaining = sum(a)

    while remaining > 0:
        dist: list[Cost] = [INF] * (2 * n)
        reached = [False] * (2 * n)
        via: list[int] = [-1] * (2 * n)
        heap: list[tuple[Cost, int]] = []
        for i in range(n):
            if a[i] > 0:
                dist[i] = 0
                heapq.heappush(heap, (0, i))
        goal = -1
        goal_dist: Cost = INF
        while heap:
            du, u = heapq.heappop(heap)
            if reached[u]:
                continue
            reached[u] = True
            if u >= n and b[u - n] > 0:
                goal = u
                goal_dist = du
                break
            if u < n:
                base = du + pot[u]
                for j in range(n):
                    if d[u][j] == INF:
                        continue
                    nd = base + d[u][j] - pot[n + j]
                    if nd < dist[n + j]:
                        dist[n + j] = nd
                        via[n + j] = u
                        heapq.heappush(heap, (nd, n + j))
            else:
                j = u - n
                base = du + pot[u]
                for i in range(n):
                    if flow.get((i, j), 0) > 0:
                        nd = base - d[i][j] - pot[i]
                        if nd < dist[i]:
                            dist[i] = nd
                            via[i] = u
                            heapq.heappush(heap, (nd, i))
        if goal < 0:
            raise TransportInfeasible(
                "remaining supply cannot reach remaining demand on finite arcs"
            )
        for v in range(2 * n):
            pot[v] += min(dist[v], goal_dist)
        # Trace the augmenting path back to a source and find the bottleneck.
        path: list[int] = [goal]
        while via[path[-1]] >= 0:
            path.append(via[path[-1]])
        path.reverse()
        bottleneck = min(a[path[0]], b[goal - n])
        for t in range(1, len(path) - 1):
            u, v = path[t], path[t + 1]
            if v < n:  # backward use of arc (v, u - n)
                bottleneck = min(bottleneck, flow[(v, u - n)])
        for t in range(len(path) - 1):
            u, v = path[t], path[t + 1]
            if u < n:
                flow[(u, v - n)] = flow.get((u, v - n), 0) + bottleneck
            else:
                flow[(v, u - n)] -= bottleneck
        a[path[0]] -= bottleneck
        b[goal - n] -= bottleneck
        remaining -= bottleneck

    total = 0
    positive = {}
    for (i, j), f in flow.items():
        if f > 0:
            positive[(i, j)] = f
            total += f * d[i][j]
    if total > MAX_VALUE:
        raise OverflowError(f"transport cost {total} exceeds {MAX_VALUE}")
    graph = DirectedMultigraph(n, positive)
    pi_source = tuple(-pot[i] for i in range(n))
    pi_sink = tuple(-pot[n + j] for j in range(n))
    return TransportSolution(graph, total, pi_source, pi_sink)
