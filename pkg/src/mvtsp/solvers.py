"""End-to-end exact many-visits tour solvers.

Every solver rests on the same decomposition: an optimal tour splits into a
spanning tree directed away from the root plus a transport routing of the
remaining visit counts, and both parts can be optimized per degree profile.
The drivers sweep all feasible outdegree profiles, pair the cheapest tree
for each profile (by enumeration, dynamic programming, or divide and
conquer) with an optimal transport completion, and keep the best pair.

Two self-contained brute-force oracles are included for cross-checking:
a visit-state dynamic program and plain multiset permutation scanning.
"""

from __future__ import annotations

import logging
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import islice
from math import prod

from .core import (
    INF,
    Cost,
    DirectedMultigraph,
    Instance,
    TourSolution,
    multigraph_sum,
)
from .degseq import DegreeSequence, enumerate_feasible
from .euler import eulerian_expand
from .opttree import DpTreeSolver, min_tree_dc, min_tree_dc2
from .transport import TransportInfeasible, TransportProblem, solve_transport
from .trees import DirectedTree, enumerate_trees

log = logging.getLogger(__name__)

ALGORITHMS = (
    "enum",
    "enum_grouped",
    "dp",
    "dc",
    "dc2",
    "brute_psaraftis",
    "brute_permutation",
)


class Infeasible(Exception):
    """The instance admits no tour of finite cost.

    `best_bound` is the cheapest finite spanning-tree cost seen while
    searching (None when even the trees were all infinite); any tour, if one
    existed, would cost at least that much.
    """

    def __init__(self, message: str, best_bound: int | None = None) -> None:
        super().__init__(message)
        self.best_bound = best_bound


@dataclass(frozen=True)
class SolverConfig:
    """Knobs shared by all solvers.

    `expansion_threshold` caps the total visit count up to which the
    explicit closed walk is materialized.  `parallelism` shards the degree
    profile sweep over threads (a hint; results are deterministic either
    way).  `cache` enables the bounded subproblem cache of the
    divide-and-conquer backends.
    """

    algorithm: str = "dp"
    root: int = 0
    expansion_threshold: int = 10**6
    parallelism: int = 1
    cache: bool = False

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(
                f"unknown algorithm {self.algorithm!r}; pick from {ALGORITHMS}"
            )
        if self.root < 0:
            raise ValueError("root must be nonnegative")
        if self.parallelism < 1:
            raise ValueError("parallelism must be at least 1")
        if self.expansion_threshold < 0:
            raise ValueError("expansion threshold must be nonnegative")


def _completion_problem(inst: Instance, ds: DegreeSequence) -> TransportProblem:
    """Residual visit counts once a tree with profile `ds` is committed."""
    supply = tuple(inst.k[v] - ds.dout[v] for v in range(inst.n))
    demand = tuple(
        inst.k[v] - (0 if v == ds.root else 1) for v in range(inst.n)
    )
    return TransportProblem(supply, demand, inst.cost)


def _assemble(
    inst: Instance, cfg: SolverConfig, total: Cost, tree: DirectedTree, tsol
) -> TourSolution:
    edges = multigraph_sum(tree.as_multigraph(inst.n), tsol.flow)
    expansion = None
    if inst.total_visits <= cfg.expansion_threshold:
        expansion = eulerian_expand(edges, cfg.root, cfg.expansion_threshold)
    return TourSolution(
        cost=total, edges=edges, expansion=expansion, certificate=tsol
    )


def _sweep(inst: Instance, cfg: SolverConfig, tree_for):
    """Run one (skip, tree, transport, fold) pass over all degree profiles.

    `tree_for(ds)` returns the backend's (tree, cost).  Returns the winning
    (total, tree, transport solution) triple or raises Infeasible.
    """
    k = inst.k

    def consider(ds: DegreeSequence):
        # A tree outdegree above the visit quota can never complete.
        if any(ds.dout[v] > k[v] for v in range(inst.n)):
            return None, None
        tree, tree_cost = tree_for(ds)
        if tree_cost == INF:
            return None, None
        try:
            tsol = solve_transport(_completion_problem(inst, ds))
        except TransportInfeasible:
            return tree_cost, None
        return tree_cost, (tree_cost + tsol.cost, tree, tsol)

    best = None
    best_idx = -1
    best_tree_cost: int | None = None
    profiles = enumerate_feasible(inst.n, cfg.root)
    if cfg.parallelism == 1:
        candidates = enumerate(map(consider, profiles))
    else:
        def batches():
            while chunk := list(islice(profiles, 64)):
                yield chunk

        def run(chunk):
            return [consider(ds) for ds in chunk]

        def stream():
            idx = 0
            with ThreadPoolExecutor(cfg.parallelism) as pool:
                for results in pool.map(run, batches()):
                    for cand in results:
                        yield idx, cand
                        idx += 1

        candidates = stream()
    count = 0
    for idx, (tree_cost, cand) in candidates:
        count += 1
        if tree_cost is not None and (
            best_tree_cost is None or tree_cost < best_tree_cost
        ):
            best_tree_cost = tree_cost
        if cand is None:
            continue
        total, tree, tsol = cand
        if best is None or total < best[0]:
            best = (total, tree, tsol)
            best_idx = idx
    log.debug(
        "swept %d degree profiles; best index %d", count, best_idx
    )
    if best is None:
        raise Infeasible(
            "no degree profile admits a finite tour", best_tree_cost
        )
    return best


def solve(inst: Instance, config: SolverConfig | None = None) -> TourSolution:
    """Solve an instance exactly with the configured algorithm.

    Raises Infeasible when no finite-cost tour exists.
    """
    cfg = config or SolverConfig()
    if not cfg.root < inst.n:
        raise ValueError(f"root {cfg.root} outside 0..{inst.n - 1}")
    if cfg.algorithm in ("enum", "enum_grouped"):
        return solve_enum(inst, cfg.algorithm == "enum_grouped", cfg)
    if cfg.algorithm == "brute_psaraftis":
        cost, walk = _psaraftis_walk(inst, cfg.root)
        return _wrap_walk(inst, cfg, cost, walk)
    if cfg.algorithm == "brute_permutation":
        cost, walk = _permutation_walk(inst, cfg.root)
        return _wrap_walk(inst, cfg, cost, walk)

    if cfg.algorithm == "dp":
        solver = DpTreeSolver(inst, cfg.root)
        tree_for = solver.solve
    else:
        backend = min_tree_dc if cfg.algorithm == "dc" else min_tree_dc2
        cache = OrderedDict() if cfg.cache else None

        def tree_for(ds):
            return backend(ds, inst, cache=cache)

    total, tree, tsol = _sweep(inst, cfg, tree_for)
    return _assemble(inst, cfg, total, tree, tsol)


def solve_enum(
    inst: Instance, grouped: bool = False, config: SolverConfig | None = None
) -> TourSolution:
    """Exhaustive reference solver.

    Ungrouped, every tree of every profile is completed by its own
    transport solve; grouped, each profile's transport is solved once and
    only the cheapest tree is kept.  Identical results, different cost.
    """
    cfg = config or SolverConfig()
    if not cfg.root < inst.n:
        raise ValueError(f"root {cfg.root} outside 0..{inst.n - 1}")
    k = inst.k
    best = None
    best_tree_cost: int | None = None
    for ds in enumerate_feasible(inst.n, cfg.root):
        if any(ds.dout[v] > k[v] for v in range(inst.n)):
            continue
        if grouped:
            try:
                tsol = solve_transport(_completion_problem(inst, ds))
            except TransportInfeasible:
                tsol = None
            for tree, tree_cost in enumerate_trees(ds, inst):
                if tree_cost == INF:
                    continue
                if best_tree_cost is None or tree_cost < best_tree_cost:
                    best_tree_cost = tree_cost
                if tsol is None:
                    continue
                total = tree_cost + tsol.cost
                if best is None or total < best[0]:
                    best = (total, tree, tsol)
        else:
            for tree, tree_cost in enumerate_trees(ds, inst):
                if tree_cost == INF:
                    continue
                if best_tree_cost is None or tree_cost < best_tree_cost:
                    best_tree_cost = tree_cost
                try:
                    tsol = solve_transport(_completion_problem(inst, ds))
                except TransportInfeasible:
                    continue
                total = tree_cost + tsol.cost
                if best is None or total < best[0]:
                    best = (total, tree, tsol)
    if best is None:
        raise Infeasible(
            "no degree profile admits a finite tour", best_tree_cost
        )
    total, tree, tsol = best
    return _assemble(inst, cfg, total, tree, tsol)


# ---------------------------------------------------------------------------
# brute-force oracles


def brute_psaraftis(inst: Instance) -> Cost:
    """Optimal tour cost by dynamic programming over visit states.

    States are (remaining visit vector, current city); applicable while
    prod(k_i + 1) stays small (guarded at 10**7).  Returns inf when no
    finite tour exists.
    """
    return _psaraftis_walk(inst, 0)[0]


def _psaraftis_walk(
    inst: Instance, start: int
) -> tuple[Cost, tuple[int, ...] | None]:
    n, d, k = inst.n, inst.cost, inst.k
    states = prod(q + 1 for q in k)
    if states > 10**7:
        raise ValueError(
            f"visit-state space {states} exceeds 10**7; use another solver"
        )
    if n == 1:
        cost = d[0][0] * k[0] if d[0][0] != INF else INF
        return cost, ((0,) * k[0] if cost != INF else None)

    # value[(rem, j)] = cheapest way to stand at j with `rem` visits left
    # and eventually return to `start`; filled in order of increasing
    # remaining total, so plain loops replace recursion.
    first = tuple(q - 1 if v == start else q for v, q in enumerate(k))
    layers: dict[int, list[tuple[int, ...]]] = {}
    for rem in _boxed_vectors(first):
        layers.setdefault(sum(rem), []).append(rem)
    value: dict[tuple[tuple[int, ...], int], Cost] = {}
    choice: dict[tuple[tuple[int, ...], int], int] = {}
    for rem in layers.get(0, []):
        for j in range(n):
            value[(rem, j)] = d[j][start]
    for total in range(1, sum(first) + 1):
        for rem in layers.get(total, []):
            nxt = [
                (v, rem[:v] + (rem[v] - 1,) + rem[v + 1 :])
                for v in range(n)
                if rem[v] > 0
            ]
            for j in range(n):
                best: Cost = INF
                best_v = -1
                for v, rem2 in nxt:
                    w = d[j][v]
                    if w == INF:
                        continue
                    cand = w + value[(rem2, v)]
                    if cand < best:
                        best = cand
                        best_v = v
                value[(rem, j)] = best
                choice[(rem, j)] = best_v
    cost = value[(first, start)]
    if cost == INF:
        return INF, None
    walk = [start]
    rem, here = first, start
    while sum(rem) > 0:
        v = choice[(rem, here)]
        walk.append(v)
        rem = rem[:v] + (rem[v] - 1,) + rem[v + 1 :]
        here = v
    return cost, tuple(walk)


def _boxed_vectors(bounds: tuple[int, ...]):
    """All integer vectors 0 <= x <= bounds, pointwise."""
    if not bounds:
        yield ()
        return
    for head in range(bounds[0] + 1):
        for tail in _boxed_vectors(bounds[1:]):
            yield (head,) + tail


def brute_permutation(inst: Instance) -> Cost:
    """Optimal tour cost by scanning all distinct visit orders.

    Guarded at a total of 10 visits.  Returns inf when no finite tour
    exists.
    """
    return _permutation_walk(inst, 0)[0]


def _permutation_walk(
    inst: Instance, start: int
) -> tuple[Cost, tuple[int, ...] | None]:
    n, d, k = inst.n, inst.cost, inst.k
    total = inst.total_visits
    if total > 10:
        raise ValueError(f"total visit count {total} exceeds 10; use another solver")
    counts = [q - 1 if v == start else q for v, q in enumerate(k)]
    best: Cost = INF
    best_walk: tuple[int, ...] | None = None
    prefix = [start]

    def scan(left: int, cost_so_far: Cost) -> None:
        nonlocal best, best_walk
        if cost_so_far >= best:
            return
        here = prefix[-1]
        if left == 0:
            w = d[here][start]
            if w != INF and cost_so_far + w < best:
                best = cost_so_far + w
                best_walk = tuple(prefix)
            return
        for v in range(n):
            if counts[v] == 0 or d[here][v] == INF:
                continue
            counts[v] -= 1
            prefix.append(v)
            scan(left - 1, cost_so_far + d[here][v])
            prefix.pop()
            counts[v] += 1

    scan(total - 1, 0)
    return best, best_walk


def _wrap_walk(
    inst: Instance, cfg: SolverConfig, cost: Cost, walk: tuple[int, ...] | None
) -> TourSolution:
    if cost == INF or walk is None:
        raise Infeasible("no finite closed walk covers the visit quotas")
    counts: dict[tuple[int, int], int] = {}
    for t in range(len(walk)):
        arc = (walk[t], walk[(t + 1) % len(walk)])
        counts[arc] = counts.get(arc, 0) + 1
    edges = DirectedMultigraph(inst.n, counts)
    expansion = walk if len(walk) <= cfg.expansion_threshold else None
    return TourSolution(cost=cost, edges=edges, expansion=expansion)
