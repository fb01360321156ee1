"""Turning balanced edge multisets into walks, and compact cycle summaries.

A valid tour edge set always admits a closed walk using every edge exactly
as often as its multiplicity.  `eulerian_expand` materializes that walk
(refusing beyond a size limit, since walks are as long as the total visit
count), while `cycle_certificate` gives a compact proof of the same
structure: a list of simple cycles with counts whose weighted union is the
edge multiset, never longer than the number of distinct edges.
"""

from __future__ import annotations

from .core import DirectedMultigraph, undirected_connected


class ExpansionLimitExceeded(Exception):
    """The requested walk would exceed the expansion limit."""

    def __init__(self, total: int, limit: int) -> None:
        super().__init__(f"walk of length {total} exceeds the limit {limit}")
        self.total = total
        self.limit = limit


def _check_balanced(g: DirectedMultigraph) -> None:
    for v in range(g.n):
        if g.out_degree(v) != g.in_degree(v):
            raise ValueError(f"vertex {v} has unequal in- and out-degree")


def eulerian_expand(
    g: DirectedMultigraph, start: int, limit: int = 10**6
) -> tuple[int, ...]:
    """Expand a valid tour edge set into a closed walk from `start`.

    The walk visits every vertex its degree's worth of times and uses each
    edge exactly its multiplicity; its length equals the total multiplicity
    (the final return to `start` is implied, not repeated).  Splicing is
    iterative, so deep detours cannot overflow the stack.
    """
    if not 0 <= start < g.n:
        raise ValueError(f"start {start} outside 0..{g.n - 1}")
    _check_balanced(g)
    for v in range(g.n):
        if g.out_degree(v) < 1:
            raise ValueError(f"vertex {v} has no edges; not a tour edge set")
    if not undirected_connected(g.n, g.mult.keys()):
        raise ValueError("edge set is disconnected; not a tour edge set")
    total = g.total_multiplicity()
    if total > limit:
        raise ExpansionLimitExceeded(total, limit)

    succ: list[list[list[int]]] = [[] for _ in range(g.n)]
    for (u, v), m in g.mult.items():
        succ[u].append([v, m])
    for lst in succ:
        lst.sort()
    cursor = [0] * g.n

    trail: list[int] = []
    stack = [start]
    while stack:
        v = stack[-1]
        lst = succ[v]
        i = cursor[v]
        while i < len(lst) and lst[i][1] == 0:
            i += 1
        cursor[v] = i
        if i == len(lst):
            trail.append(stack.pop())
        else:
            lst[i][1] -= 1
            stack.append(lst[i][0])
    trail.reverse()
    if len(trail) != total + 1 or trail[0] != start or trail[-1] != start:
        raise AssertionError("splicing failed on a validated edge set")
    return tuple(trail[:-1])


def cycle_certificate(
    g: DirectedMultigraph,
) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Decompose a balanced multigraph into simple cycles with counts.

    Returns ((cycle_vertices, count), ...) where each cycle is listed once
    with the number of times it is peeled; the weighted union of all cycles
    equals the edge multiset exactly.  Greedy peeling removes at least one
    distinct edge per cycle, so the list is never longer than the number of
    distinct edges.  Connectivity is not required.
    """
    _check_balanced(g)
    succ: list[list[list[int]]] = [[] for _ in range(g.n)]
    for (u, v), m in g.mult.items():
        succ[u].append([v, m])
    for lst in succ:
        lst.sort()
    cursor = [0] * g.n
    out_left = [g.out_degree(v) for v in range(g.n)]

    def next_target(v: int) -> int:
        lst = succ[v]
        i = cursor[v]
        while lst[i][1] == 0:
            i += 1
        cursor[v] = i
        return lst[i][0]

    cycles: list[tuple[tuple[int, ...], int]] = []
    todo = sum(out_left)
    v0 = 0
    while todo > 0:
        while out_left[v0] == 0:
            v0 += 1
        path = [v0]
        seen = {v0: 0}
        while True:
            nxt = next_target(path[-1])
            if nxt in seen:
                cycle = path[seen[nxt] :]
                break
            seen[nxt] = len(path)
            path.append(nxt)
        pairs = [
            (cycle[t], cycle[(t + 1) % len(cycle)]) for t in range(len(cycle))
        ]
        count = min(
            next(m for tgt, m in succ[u] if tgt == v) for u, v in pairs
        )
        for u, v in pairs:
            for entry in succ[u]:
                if entry[0] == v:
                    entry[1] -= count
                    break
            out_left[u] -= count
        todo -= count * len(pairs)
        low = cycle.index(min(cycle))
        cycles.append((tuple(cycle[low:] + cycle[:low]), count))
    return tuple(cycles)
