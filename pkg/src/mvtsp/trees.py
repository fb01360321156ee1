"""Directed spanning trees: enumeration, extraction, balanced partitions.

Trees are always directed away from their root.  The enumeration works on a
degree profile (explicit outdegrees, implied indegrees) and repeatedly
attaches the lowest-index unattached leaf to every admissible parent; a
parent is admissible while it has outdegree left and, once attached itself,
at least one further degree remaining.  That last clause only ever restricts
the root, and it is what makes every emitted edge set a tree.

The two partition routines split an undirected tree into balanced sides
whose crossing edges all touch a small boundary; they serve as test oracles
for the divide-and-conquer solvers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil
from types import MappingProxyType
from typing import Iterator, Mapping

from .core import INF, Cost, DirectedMultigraph, Instance, undirected_connected
from .degseq import DegreeSequence, is_feasible


@dataclass(frozen=True)
class DirectedTree:
    """A tree directed away from `root`, stored as a child-to-parent map.

    The root has no entry in `parent`.  Vertices are whatever labels the
    parent map mentions; for whole-instance trees that is 0..n-1.
    """

    root: int
    parent: Mapping[int, int]

    def __post_init__(self) -> None:
        parent = dict(self.parent)
        if self.root in parent:
            raise ValueError("root cannot have a parent")
        vertices = set(parent) | {self.root}
        for child, par in parent.items():
            if par not in vertices:
                raise ValueError(f"parent {par} of {child} is not a tree vertex")
        # Every chain must reach the root without revisiting a vertex.
        ok: set[int] = {self.root}
        for child in parent:
            chain = []
            v = child
            while v not in ok:
                chain.append(v)
                if v not in parent or len(chain) > len(parent):
                    raise ValueError(f"vertex {child} is not connected to the root")
                v = parent[v]
            ok.update(chain)
        object.__setattr__(self, "parent", MappingProxyType(parent))

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.parent) | {self.root}))

    def edges(self) -> tuple[tuple[int, int], ...]:
        """All (parent, child) pairs, sorted by child."""
        return tuple((self.parent[c], c) for c in sorted(self.parent))

    def out_degree(self, v: int) -> int:
        return sum(1 for p in self.parent.values() if p == v)

    def as_multigraph(self, n: int) -> DirectedMultigraph:
        counts: dict[tuple[int, int], int] = {}
        for p, c in self.edges():
            counts[(p, c)] = counts.get((p, c), 0) + 1
        return DirectedMultigraph(n, counts)


@dataclass(frozen=True)
class BalancedPartition:
    """A two-sided split of a tree's vertices with its boundary vertices.

    Every tree edge with one endpoint per side touches a boundary vertex,
    and all boundary vertices lie in `v1`.
    """

    v1: frozenset[int]
    v2: frozenset[int]
    boundary: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.v1 & self.v2:
            raise ValueError("sides overlap")
        if not self.v1 or not self.v2:
            raise ValueError("both sides must be nonempty")
        if not set(self.boundary) <= self.v1:
            raise ValueError("boundary vertices must lie in v1")


def _realizations(dout: list[int], din: list[int]) -> Iterator[list[tuple[int, int]]]:
    """Yield the edge lists of all trees over slots 0..m-1 matching the
    degree profile exactly; the profile must be realizable (one zero
    indegree at the root, ones elsewhere, outdegrees summing to m - 1).

    Mutates its arguments during iteration; callers pass scratch lists.
    """
    m = len(dout)
    root = din.index(0)
    edges: list[tuple[int, int]] = []

    def attach(remaining: int) -> Iterator[list[tuple[int, int]]]:
        if remaining == 1:
            last = din.index(1)
            edges.append((root, last))
            yield edges
            edges.pop()
            return
        leaf = next(s for s in range(m) if din[s] == 1 and dout[s] == 0)
        for par in range(m):
            if par == leaf or dout[par] == 0:
                continue
            if din[par] + dout[par] < 2:
                continue
            edges.append((par, leaf))
            dout[par] -= 1
            din[leaf] -= 1
            yield from attach(remaining - 1)
            edges.pop()
            dout[par] += 1
            din[leaf] += 1

    yield from attach(sum(din))


def _profile_of(ds: DegreeSequence) -> tuple[list[int], list[int]]:
    dout = list(ds.dout)
    din = [0 if v == ds.root else 1 for v in ds.active]
    return dout, din


def enumerate_trees(
    ds: DegreeSequence, inst: Instance
) -> Iterator[tuple[DirectedTree, Cost]]:
    """Yield every directed tree realizing `ds` with its cost, in the
    deterministic order of the leaf-attachment recursion."""
    if not is_feasible(ds):
        raise ValueError("degree sequence is not realizable by any tree")
    if ds.n == 1:
        yield DirectedTree(ds.root, {}), 0
        return
    dout, din = _profile_of(ds)
    labels = ds.active
    for slot_edges in _realizations(dout, din):
        parent = {labels[c]: labels[p] for p, c in slot_edges}
        cost: Cost = 0
        for p, c in slot_edges:
            d = inst.cost[labels[p]][labels[c]]
            if d == INF:
                cost = INF
                break
            cost += d
        yield DirectedTree(ds.root, parent), cost


def realize_tree(ds: DegreeSequence) -> DirectedTree:
    """Build one tree realizing `ds`: the first tree `enumerate_trees` would
    yield.  The attachment recursion never dead-ends, so taking the first
    admissible parent at every step always completes."""
    if not is_feasible(ds):
        raise ValueError("degree sequence is not realizable by any tree")
    if ds.n == 1:
        return DirectedTree(ds.root, {})
    dout, din = _profile_of(ds)
    m = ds.n
    root = din.index(0)
    labels = ds.active
    parent: dict[int, int] = {}
    remaining = sum(din)
    while remaining > 1:
        leaf = next(s for s in range(m) if din[s] == 1 and dout[s] == 0)
        par = next(
            s
            for s in range(m)
            if s != leaf and dout[s] >= 1 and din[s] + dout[s] >= 2
        )
        parent[labels[leaf]] = labels[par]
        dout[par] -= 1
        din[leaf] -= 1
        remaining -= 1
    last = din.index(1)
    parent[labels[last]] = labels[root]
    return DirectedTree(ds.root, parent)


def extract_spanning_tree(g: DirectedMultigraph, root: int) -> DirectedTree:
    """Extract a spanning tree directed away from `root` from a valid tour
    edge set, by breadth-first search with smallest-index parents.

    Rejects inputs that are not balanced and connected with every vertex
    covered (such multigraphs support no tour for any quota vector).
    """
    n = g.n
    if not 0 <= root < n:
        raise ValueError(f"root {root} outside 0..{n - 1}")
    for v in range(n):
        if g.out_degree(v) != g.in_degree(v):
            raise ValueError(f"vertex {v} is unbalanced: not a tour edge set")
        if g.out_degree(v) < 1:
            raise ValueError(f"vertex {v} is uncovered: not a tour edge set")
    if not undirected_connected(n, g.mult.keys()):
        raise ValueError("edge set is disconnected: not a tour edge set")
    targets: list[list[int]] = [[] for _ in range(n)]
    for (u, v) in g.mult:
        if u != v:
            targets[u].append(v)
    for lst in targets:
        lst.sort()
    parent: dict[int, int] = {}
    visited = {root}
    layer = [root]
    while layer:
        next_layer: list[int] = []
        for u in sorted(layer):
            for v in targets[u]:
                if v not in visited:
                    visited.add(v)
                    parent[v] = u
                    next_layer.append(v)
        layer = next_layer
    if len(visited) != n:
        # Balanced + connected implies strong connectivity, so this branch
        # would mean the validation above is wrong.
        raise AssertionError("directed search failed to span a valid edge set")
    return DirectedTree(root, parent)


# ---------------------------------------------------------------------------
# balanced partitions of undirected trees


def _undirected_adjacency(tree: DirectedTree) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {v: [] for v in tree.vertices}
    for p, c in tree.edges():
        adj[p].append(c)
        adj[c].append(p)
    for lst in adj.values():
        lst.sort()
    return adj


def _centroid(adj: Mapping[int, list[int]], verts: set[int]) -> int:
    """Centroid of the induced subtree on `verts`: the vertex minimizing the
    largest component left after its removal (ties to the smallest index)."""
    start = min(verts)
    order = [start]
    parent = {start: None}
    for v in order:
        for w in adj[v]:
            if w in verts and w not in parent:
                parent[w] = v
                order.append(w)
    size = {v: 1 for v in order}
    for v in reversed(order[1:]):
        size[parent[v]] += size[v]
    total = len(order)
    best = None
    for v in order:
        heaviest = total - size[v]
        for w in adj[v]:
            if w in verts and parent.get(w) == v:
                heaviest = max(heaviest, size[w])
        key = (heaviest, v)
        if best is None or key < best:
            best = key
    return best[1]


def _component(
    adj: Mapping[int, list[int]], verts: set[int], start: int, banned: set[int]
) -> set[int]:
    comp = {start}
    frontier = [start]
    while frontier:
        v = frontier.pop()
        for w in adj[v]:
            if w in verts and w not in banned and w not in comp:
                comp.add(w)
                frontier.append(w)
    return comp


def _components_around(
    adj: Mapping[int, list[int]], verts: set[int], center: int
) -> list[set[int]]:
    """Components of the induced subtree after removing `center`, sorted by
    decreasing size with ties to the smallest contained vertex."""
    comps = []
    claimed: set[int] = set()
    for nb in adj[center]:
        if nb in verts and nb not in claimed:
            comp = _component(adj, verts, nb, {center})
            comps.append(comp)
            claimed |= comp
    comps.sort(key=lambda c: (-len(c), min(c)))
    return comps


def _tree_path(
    adj: Mapping[int, list[int]], verts: set[int], a: int, b: int
) -> list[int]:
    parent = {a: None}
    frontier = [a]
    while frontier:
        nxt: list[int] = []
        for v in frontier:
            for w in adj[v]:
                if w in verts and w not in parent:
                    parent[w] = v
                    nxt.append(w)
        frontier = nxt
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def centroid_partition(tree: DirectedTree) -> BalancedPartition:
    """Split a tree at its centroid into sides of size at most ceil(2n/3).

    The far side collects whole components of the removed centroid (largest
    first) until it reaches ceil(n/3); the centroid is the only vertex with
    crossing edges.
    """
    verts = set(tree.vertices)
    n = len(verts)
    if n < 2:
        raise ValueError("partition needs at least two vertices")
    adj = _undirected_adjacency(tree)
    c = _centroid(adj, verts)
    far: set[int] = set()
    threshold = ceil(n / 3)
    for comp in _components_around(adj, verts, c):
        far |= comp
        if len(far) >= threshold:
            break
    return BalancedPartition(frozenset(verts - far), frozenset(far), (c,))


def perfectly_balanced_partition(tree: DirectedTree) -> BalancedPartition:
    """Split a tree into sides of size at most ceil(n/2), with all crossing
    edges covered by at most ceil(log2 n) boundary vertices in `v1`.

    Starting from the whole centroid split, the search walks into the last
    moved subtree whenever the far side overshoots, peeling path vertices
    and their hanging subtrees back to the near side; a single-vertex move
    can never overshoot, so the first time the sides fit the bound the
    current walk vertex closes the boundary.
    """
    verts = set(tree.vertices)
    n = len(verts)
    if n < 2:
        raise ValueError("partition needs at least two vertices")
    adj = _undirected_adjacency(tree)
    target = ceil(n / 2)
    far: set[int] = set()
    boundary: list[int] = []

    def balanced() -> bool:
        return max(len(far), n - len(far)) <= target

    def result() -> BalancedPartition:
        return BalancedPartition(
            frozenset(verts - far), frozenset(far), tuple(boundary)
        )

    c = _centroid(adj, verts)
    boundary.append(c)
    sub: set[int] | None = None
    for comp in _components_around(adj, verts, c):
        far |= comp
        if balanced():
            return result()
        if len(far) >= n - len(far):
            sub = set(comp)
            break
    if sub is None:
        raise AssertionError("centroid pass left the far side in minority")

    for _ in range(n):
        anchor = boundary[-1]
        vstar = _centroid(adj, sub)
        walk = _tree_path(adj, sub | {anchor}, anchor, vstar)[1:]
        descended = False
        for q in walk:
            far.discard(q)
            sub.discard(q)
            if balanced():
                boundary.append(q)
                return result()
            hanging = []
            main: set[int] | None = None
            for comp in _components_around(adj, sub | {q}, q):
                if vstar in comp:
                    main = comp
                else:
                    hanging.append(comp)
            for branch in hanging:
                far -= branch
                sub -= branch
                if balanced():
                    boundary.append(q)
                    return result()
                if n - len(far) >= len(far):
                    # Overshot: the near side took the majority without
                    # hitting balance.  Put the branch back and recurse on it.
                    far |= branch
                    sub |= branch
                    boundary.append(q)
                    sub = set(branch)
                    descended = True
                    break
            if descended:
                break
            if main is None and q != vstar:
                raise AssertionError("walk lost the centroid branch")
        if not descended:
            raise AssertionError("balance walk exhausted a subtree")
    raise AssertionError("balance descent failed to terminate")
