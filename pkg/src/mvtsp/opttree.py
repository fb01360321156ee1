"""Cheapest directed spanning tree for a fixed degree profile.

Given target outdegrees on the active vertices (indegrees are implied: zero
at the root, one elsewhere), find a minimum-cost tree realizing them.  Three
exact strategies with different space/time trade-offs:

- `min_tree_dp`: dynamic programming over (active vertex set, remaining
  outdegrees).  States recur across degree profiles, so `DpTreeSolver`
  keeps one shared memo for a whole sweep of profiles at a fixed root.
- `min_tree_dc`: divide and conquer over vertex splits with both sides at
  most ceil(2m/3).  One boundary vertex carries every crossing edge; the far
  side sees it as an alias with the crossing degrees.
- `min_tree_dc2`: divide and conquer over splits with both sides at most
  ceil(m/2) and up to ceil(log2 m) boundary vertices.  The far side sees one
  alias per boundary vertex, glued into a single tree problem by a zero-cost
  virtual hub whose edges are dropped when the halves are merged.

The divide-and-conquer strategies keep no memo (their point is small
memory); an optional bounded cache can be supplied by the caller.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from .core import INF, Cost, Instance
from .degseq import DegreeSequence, distribute, is_feasible
from .trees import DirectedTree, _realizations, realize_tree

#: Memo key of the dynamic program: (active-vertex bitmask, outdegree tuple).
DpKey = tuple[int, tuple[int, ...]]

#: Label of the virtual hub gluing far-side aliases; never a real vertex.
GLUE = -1

#: Largest subproblem solved by direct enumeration in the boundary-set
#: scheme.  Splits of six or more vertices always admit a balanced witness
#: whose far side (real remainder + hub + aliases) is strictly smaller, so
#: above this size the recursion both shrinks and stays complete.
_DC2_BASE = 5

_MISSING = object()

#: A solved subproblem: (edge tuple in original labels, total cost), or None
#: when no finite-cost tree realizes the profile.
Result = tuple[tuple[tuple[int, int], ...], Cost] | None


@dataclass(frozen=True)
class SubProblem:
    """A tree subproblem over local slots with materialized distances.

    `labels[s]` is the original vertex behind slot s (GLUE for virtual
    hubs); `dist` is the full local distance matrix, so a subproblem is
    self-contained and value-comparable.
    """

    labels: tuple[int, ...]
    dout: tuple[int, ...]
    din: tuple[int, ...]
    dist: tuple[tuple[Cost, ...], ...]

    def key(self) -> tuple:
        return (self.labels, self.dout, self.din, self.dist)


def _submatrix(dist, idxs) -> tuple[tuple[Cost, ...], ...]:
    return tuple(tuple(dist[a][b] for b in idxs) for a in idxs)


def _valid_profile(dout, din) -> bool:
    """Realizability of a slot profile: outdegrees sum to m - 1 and are
    nonnegative, indegrees are a single 0 (the root, which needs positive
    outdegree unless alone) and 1 elsewhere."""
    m = len(dout)
    total = 0
    for d in dout:
        if d < 0:
            return False
        total += d
    if total != m - 1:
        return False
    root = -1
    for s, d in enumerate(din):
        if d == 0:
            if root >= 0:
                return False
            root = s
        elif d != 1:
            return False
    if root < 0:
        return False
    return m == 1 or dout[root] >= 1


def _base_best(sub: SubProblem) -> Result:
    """Direct enumeration for tiny subproblems (and the recursion anchor)."""
    m = len(sub.labels)
    if m == 1:
        return (), 0
    best_edges = None
    best_cost: Cost = INF
    dout = list(sub.dout)
    din = list(sub.din)
    for slot_edges in _realizations(dout, din):
        cost: Cost = 0
        for p, c in slot_edges:
            w = sub.dist[p][c]
            if w == INF:
                cost = INF
                break
            cost += w
        if cost < best_cost:
            best_cost = cost
            best_edges = tuple(
                (sub.labels[p], sub.labels[c]) for p, c in slot_edges
            )
    if best_edges is None:
        return None
    return best_edges, best_cost


def _top_sub(ds: DegreeSequence, inst: Instance) -> SubProblem:
    labels = ds.active
    din = tuple(0 if v == ds.root else 1 for v in labels)
    return SubProblem(labels, tuple(ds.dout), din, _submatrix(inst.cost, labels))


def _check_ds(ds: DegreeSequence, inst: Instance) -> None:
    if not is_feasible(ds):
        raise ValueError("degree sequence is not realizable by any tree")
    if any(not 0 <= v < inst.n for v in ds.active):
        raise ValueError("active vertices outside the instance")


def _finish(ds: DegreeSequence, best: Result) -> tuple[DirectedTree, Cost]:
    """Wrap a recursion result; fall back to a structural realization at
    infinite cost so the return type stays total."""
    if best is None:
        return realize_tree(ds), INF
    edges, cost = best
    if len(edges) != ds.n - 1:
        raise AssertionError("merged edge count does not match the profile")
    parent = {c: p for p, c in edges}
    if len(parent) != len(edges):
        raise AssertionError("merged edges assign a vertex two parents")
    tree = DirectedTree(ds.root, parent)
    for i, v in enumerate(ds.active):
        if tree.out_degree(v) != ds.dout[i]:
            raise AssertionError("merged tree does not realize the profile")
    return tree, cost


# ---------------------------------------------------------------------------
# dynamic programming


class DpTreeSolver:
    """Shared-memo optimal-tree solver for many degree profiles at one root.

    The memo is keyed by (active bitmask, outdegree tuple); profiles sweep
    overlapping state spaces, so reusing one solver across a whole
    enumeration computes every state at most once.
    """

    def __init__(self, inst: Instance, root: int) -> None:
        if not 0 <= root < inst.n:
            raise ValueError(f"root {root} outside 0..{inst.n - 1}")
        self.n = inst.n
        self.root = root
        self.d = inst.cost
        self.memo: dict[DpKey, tuple[Cost, int]] = {}

    def solve(self, ds: DegreeSequence) -> tuple[DirectedTree, Cost]:
        if ds.root != self.root:
            raise ValueError("profile is rooted elsewhere")
        if any(not 0 <= v < self.n for v in ds.active):
            raise ValueError("profile has vertices outside this instance")
        if not is_feasible(ds):
            raise ValueError("degree sequence is not realizable by any tree")
        if ds.n == 1:
            return DirectedTree(self.root, {}), 0
        start = 0
        full_dout = [0] * self.n
        for v, d in zip(ds.active, ds.dout):
            start |= 1 << v
            full_dout[v] = d
        cost = self._value(start, tuple(full_dout))
        if cost == INF:
            return realize_tree(ds), INF
        parent: dict[int, int] = {}
        mask, dout = start, tuple(full_dout)
        while mask.bit_count() > 2:
            leaf = self._leaf(mask, dout)
            par = self.memo[(mask, dout)][1]
            parent[leaf] = par
            dout = dout[:par] + (dout[par] - 1,) + dout[par + 1 :]
            mask ^= 1 << leaf
        last = next(
            v for v in range(self.n) if (mask >> v) & 1 and v != self.root
        )
        parent[last] = self.root
        return DirectedTree(self.root, parent), cost

    def _leaf(self, mask: int, dout: tuple[int, ...]) -> int:
        return next(
            v
            for v in range(self.n)
            if (mask >> v) & 1 and v != self.root and dout[v] == 0
        )

    def _value(self, mask: int, dout: tuple[int, ...]) -> Cost:
        key = (mask, dout)
        hit = self.memo.get(key)
        if hit is not None:
            return hit[0]
        if mask.bit_count() == 2:
            other = next(
                v for v in range(self.n) if (mask >> v) & 1 and v != self.root
            )
            cost = self.d[self.root][other]
            self.memo[key] = (cost, self.root)
            return cost
        leaf = self._leaf(mask, dout)
        best: Cost = INF
        best_par = -1
        child_mask = mask ^ (1 << leaf)
        for par in range(self.n):
            if not (mask >> par) & 1 or par == leaf or dout[par] == 0:
                continue
            if par == self.root and dout[par] < 2:
                continue
            w = self.d[par][leaf]
            if w == INF:
                continue
            child = self._value(
                child_mask, dout[:par] + (dout[par] - 1,) + dout[par + 1 :]
            )
            total = w + child
            if total < best:
                best = total
                best_par = par
        self.memo[key] = (best, best_par)
        return best


def min_tree_dp(ds: DegreeSequence, inst: Instance) -> tuple[DirectedTree, Cost]:
    """One-shot dynamic-programming solve; see DpTreeSolver for sweeps."""
    _check_ds(ds, inst)
    return DpTreeSolver(inst, ds.root).solve(ds)


# ---------------------------------------------------------------------------
# divide and conquer, single boundary vertex

# Both recursions prune by cost: a call carries an exclusive upper bound and
# returns the cheapest tree strictly below it, or None.  A non-None return is
# therefore the exact optimum; a None return only certifies "nothing below
# the bound", so cached misses remember the bound they were computed under.


def _lower_bound(sub: SubProblem) -> Cost:
    """Admissible bound: each out-edge costs at least its row's cheapest
    off-diagonal arc, each in-edge its column's; take the larger total."""
    m = len(sub.labels)
    dist, dout, din = sub.dist, sub.dout, sub.din
    out_total: Cost = 0
    in_total: Cost = 0
    for s in range(m):
        if dout[s]:
            lo = min((dist[s][t] for t in range(m) if t != s), default=INF)
            if lo == INF:
                return INF
            out_total += lo * dout[s]
        if din[s]:
            lo = min((dist[t][s] for t in range(m) if t != s), default=INF)
            if lo == INF:
                return INF
            in_total += lo
    return max(out_total, in_total)


def _cache_get(cache, key, ub: Cost) -> tuple[bool, Result]:
    """(hit, result) under bound semantics: stored solutions are exact and
    valid at any bound; a stored miss only covers bounds up to its own."""
    entry = cache.get(key, _MISSING)
    if entry is _MISSING:
        return False, None
    ub0, res = entry
    if res is not None:
        cache.move_to_end(key)
        return True, (res if res[1] < ub else None)
    if ub <= ub0:
        cache.move_to_end(key)
        return True, None
    return False, None


def _cache_put(cache, cap, key, ub: Cost, result: Result) -> None:
    prev = cache.get(key, _MISSING)
    if prev is not _MISSING:
        if prev[1] is not None:
            return
        if result is None and ub <= prev[0]:
            return
    cache[key] = (ub, result)
    cache.move_to_end(key)
    while len(cache) > cap:
        cache.popitem(last=False)


def _solve_dc(sub: SubProblem, cache, cap, ub: Cost) -> Result:
    m = len(sub.labels)
    if m <= 3:
        r = _base_best(sub)
        return r if r is not None and r[1] < ub else None
    if _lower_bound(sub) >= ub:
        return None
    key = None
    if cache is not None:
        key = sub.key()
        found, res = _cache_get(cache, key, ub)
        if found:
            return res
    labels, dout, din, dist = sub.labels, sub.dout, sub.din, sub.dist
    max_side = -(-2 * m // 3)
    best: Result = None
    bound = ub
    for mask in range(1, 1 << m):
        s1 = mask.bit_count()
        s2 = m - s1
        if s2 == 0 or s1 > max_side or s2 > max_side:
            continue
        near = [s for s in range(m) if (mask >> s) & 1]
        far = [s for s in range(m) if not (mask >> s) & 1]
        eo = sum(dout[s] for s in near) - s1 + 1
        ei = sum(din[s] for s in near) - s1 + 1
        if eo < 0 or ei < 0 or ei > 1 or eo + ei < 1:
            continue
        for v in near:
            dv_out = dout[v] - eo
            dv_in = din[v] - ei
            if dv_out < 0 or dv_in < 0 or dv_out + dv_in < 1:
                continue
            dout1 = [dv_out if s == v else dout[s] for s in near]
            din1 = [dv_in if s == v else din[s] for s in near]
            if not _valid_profile(dout1, din1):
                continue
            dout2 = [dout[s] for s in far] + [eo]
            din2 = [din[s] for s in far] + [ei]
            if not _valid_profile(dout2, din2):
                continue
            r1 = _solve_dc(
                SubProblem(
                    tuple(labels[s] for s in near),
                    tuple(dout1),
                    tuple(din1),
                    _submatrix(dist, near),
                ),
                cache,
                cap,
                bound,
            )
            if r1 is None:
                continue
            r2 = _solve_dc(
                SubProblem(
                    tuple(labels[s] for s in far) + (labels[v],),
                    tuple(dout2),
                    tuple(din2),
                    _submatrix(dist, far + [v]),
                ),
                cache,
                cap,
                bound - r1[1],
            )
            if r2 is None:
                continue
            best = (r1[0] + r2[0], r1[1] + r2[1])
            bound = best[1]
    if cache is not None:
        _cache_put(cache, cap, key, ub, best)
    return best


def _greedy_ub(ds: DegreeSequence, inst: Instance) -> Cost:
    """Cost of an arbitrary realization plus one: an exclusive bound that
    every optimum beats, so seeding it never hides the answer."""
    total: Cost = 0
    for p, c in realize_tree(ds).edges():
        w = inst.cost[p][c]
        if w == INF:
            return INF
        total += w
    return total + 1


def min_tree_dc(
    ds: DegreeSequence,
    inst: Instance,
    cache: "OrderedDict | None" = None,
    cache_cap: int | None = None,
) -> tuple[DirectedTree, Cost]:
    """Divide-and-conquer solve with one boundary vertex per split.

    Pass a shared OrderedDict as `cache` to reuse subproblem results across
    calls; it is bounded by `cache_cap` (default n**3) entries.
    """
    _check_ds(ds, inst)
    if ds.n == 1:
        return DirectedTree(ds.root, {}), 0
    cap = cache_cap if cache_cap is not None else inst.n**3
    best = _solve_dc(_top_sub(ds, inst), cache, cap, _greedy_ub(ds, inst))
    return _finish(ds, best)


# ---------------------------------------------------------------------------
# divide and conquer, boundary sets and virtual hub


def _hub_side(
    sub: SubProblem, far: list[int], bnd: tuple[int, ...], carrier: int | None
) -> tuple[tuple[int, ...], tuple[tuple[Cost, ...], ...]]:
    """Labels and distances of the far side: real vertices, then the hub,
    then one alias per boundary vertex.

    The hub pins the intended wiring: every alias except the indegree
    carrier must take its sole in-edge from the hub (real in-arcs are
    infinite), the carrier alone feeds the hub, and hub/real as well as
    alias/alias arcs are all infinite.  Any finite-cost tree on this matrix
    therefore uses the hub edges exactly as the merge assumes, at zero cost.
    """
    labels, dist = sub.labels, sub.dist
    r = len(far)
    k = len(bnd)
    m2 = r + 1 + k
    labels2 = (
        tuple(labels[s] for s in far) + (GLUE,) + tuple(labels[s] for s in bnd)
    )
    rows = []
    for a in range(m2):
        row = [INF] * m2
        if a < r:  # real vertex
            for b in range(r):
                row[b] = dist[far[a]][far[b]]
            for t in range(k):
                if bnd[t] == carrier:
                    row[r + 1 + t] = dist[far[a]][bnd[t]]
        elif a == r:  # hub
            for t in range(k):
                if bnd[t] != carrier:
                    row[r + 1 + t] = 0
        else:  # alias of bnd[a - r - 1]
            t = a - r - 1
            for b in range(r):
                row[b] = dist[bnd[t]][far[b]]
            if bnd[t] == carrier:
                row[r] = 0
        rows.append(tuple(row))
    return labels2, tuple(rows)


def _solve_dc2(sub: SubProblem, cache, cap, ub: Cost) -> Result:
    """Boundary-set recursion on balanced halves.

    Every split is required to shrink both children: the near side has at
    most ceil(m/2) slots, and the far side (s2 real slots + hub + k aliases)
    stays below m because k is capped at s1 - 2.  A balanced partition with
    that small a boundary always exists once m >= 6, and splits of at most
    five slots are enumerated directly, so the cap loses no optimum.
    """
    m = len(sub.labels)
    if m <= _DC2_BASE:
        r = _base_best(sub)
        return r if r is not None and r[1] < ub else None
    if _lower_bound(sub) >= ub:
        return None
    key = None
    if cache is not None:
        key = sub.key()
        found, res = _cache_get(cache, key, ub)
        if found:
            return res
    best: Result = None
    bound = ub
    labels, dout, din, dist = sub.labels, sub.dout, sub.din, sub.dist
    half = (m + 1) // 2
    kcap_all = (m - 1).bit_length()
    for mask in range(1, 1 << m):
        s1 = mask.bit_count()
        s2 = m - s1
        if s2 == 0 or s1 > half or s2 > half:
            continue
        near = [s for s in range(m) if (mask >> s) & 1]
        far = [s for s in range(m) if not (mask >> s) & 1]
        eo = sum(dout[s] for s in near) - s1 + 1
        ei = sum(din[s] for s in near) - s1 + 1
        if eo < 0 or ei < 0 or ei > 1:
            continue
        kcap = min(kcap_all, s1 - 2, eo + ei)
        for k in range(1, kcap + 1):
            for bnd in combinations(near, k):
                carriers = list(bnd) if ei == 1 else [None]
                for carrier in carriers:
                    floor_total = k - (0 if carrier is None else 1)
                    spare = eo - floor_total
                    if spare < 0:
                        continue
                    labels2, dist2 = _hub_side(sub, far, bnd, carrier)
                    din1 = [
                        din[s] - (1 if s == carrier else 0) for s in near
                    ]
                    din2 = (
                        [din[s] for s in far]
                        + [0 if carrier is None else 1]
                        + [1] * k
                    )
                    for extra in distribute(spare, k):
                        take = {
                            b: extra[t] + (0 if b == carrier else 1)
                            for t, b in enumerate(bnd)
                        }
                        dout1 = [dout[s] - take.get(s, 0) for s in near]
                        if not _valid_profile(dout1, din1):
                            continue
                        dout2 = (
                            [dout[s] for s in far]
                            + [k if carrier is None else k - 1]
                            + [
                                take[b] + (1 if b == carrier else 0)
                                for b in bnd
                            ]
                        )
                        if not _valid_profile(dout2, din2):
                            continue
                        r1 = _solve_dc2(
                            SubProblem(
                                tuple(labels[s] for s in near),
                                tuple(dout1),
                                tuple(din1),
                                _submatrix(dist, near),
                            ),
                            cache,
                            cap,
                            bound,
                        )
                        if r1 is None:
                            continue
                        r2 = _solve_dc2(
                            SubProblem(
                                labels2, tuple(dout2), tuple(din2), dist2
                            ),
                            cache,
                            cap,
                            bound - r1[1],
                        )
                        if r2 is None:
                            continue
                        edges = r1[0] + tuple(
                            e
                            for e in r2[0]
                            if e[0] != GLUE and e[1] != GLUE
                        )
                        best = (edges, r1[1] + r2[1])
                        bound = best[1]
    if cache is not None:
        _cache_put(cache, cap, key, ub, best)
    return best


def min_tree_dc2(
    ds: DegreeSequence,
    inst: Instance,
    cache: "OrderedDict | None" = None,
    cache_cap: int | None = None,
) -> tuple[DirectedTree, Cost]:
    """Divide-and-conquer solve on balanced halves with boundary sets.

    Both children of every split are strictly smaller than their parent, so
    the recursion terminates with depth at most n and polynomial memory.
    Pass a shared OrderedDict as `cache` (bounded by `cache_cap`, default
    n**3) to reuse results across degree sequences.
    """
    _check_ds(ds, inst)
    if ds.n == 1:
        return DirectedTree(ds.root, {}), 0
    cap = cache_cap if cache_cap is not None else inst.n**3
    best = _solve_dc2(_top_sub(ds, inst), cache, cap, _greedy_ub(ds, inst))
    return _finish(ds, best)
