"""Command line front end: solve, gen, verify, bench.

Instance files are plain text: a line with the city count, a line with the
visit quotas, then the cost matrix row by row; `inf` marks a forbidden arc
and `#` starts a comment.  Solutions are emitted as a cost line, one line
per distinct edge, a cycle-certificate section, and the expanded tour when
it is small enough; `verify` checks such a pair independently.

Exit codes: 0 success, 2 infeasible instance, 1 bad input or failed checks.
Set MVTSP_LOG=debug|info for diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
import tracemalloc
from random import Random

from .core import (
    INF,
    Cost,
    DirectedMultigraph,
    Instance,
    TourSolution,
    multigraph_cost,
    undirected_connected,
)
from .euler import cycle_certificate
from .solvers import ALGORITHMS, Infeasible, SolverConfig, solve

log = logging.getLogger(__name__)


class FormatError(ValueError):
    """A file does not follow the documented layout."""


# ---------------------------------------------------------------------------
# instance and solution formats


def _data_lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def _parse_int(token: str, where: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"{where}: expected an integer, got {token!r}") from None


def _parse_cost(token: str, where: str) -> Cost:
    if token == "inf":
        return INF
    return _parse_int(token, where)


def parse_instance(text: str) -> Instance:
    lines = list(_data_lines(text))
    if not lines:
        raise FormatError("empty instance: no data lines")
    pos = 0

    def take(what: str) -> tuple[int, str]:
        nonlocal pos
        if pos >= len(lines):
            raise FormatError(f"unexpected end of file, expected {what}")
        item = lines[pos]
        pos += 1
        return item

    number, line = take("the city count")
    fields = line.split()
    if len(fields) != 1:
        raise FormatError(f"line {number}: expected just the city count")
    n = _parse_int(fields[0], f"line {number}")
    if n < 1:
        raise FormatError(f"line {number}: city count must be positive")
    number, line = take("the visit quotas")
    fields = line.split()
    if len(fields) != n:
        raise FormatError(
            f"line {number}: expected {n} visit quotas, got {len(fields)}"
        )
    quotas = tuple(
        _parse_int(tok, f"line {number}, field {i + 1}")
        for i, tok in enumerate(fields)
    )
    rows = []
    for r in range(n):
        number, line = take(f"cost row {r}")
        fields = line.split()
        if len(fields) != n:
            raise FormatError(
                f"line {number}: expected {n} costs, got {len(fields)}"
            )
        rows.append(
            tuple(
                _parse_cost(tok, f"line {number}, field {i + 1}")
                for i, tok in enumerate(fields)
            )
        )
    if pos != len(lines):
        number, _ = lines[pos]
        raise FormatError(f"line {number}: trailing data after the cost matrix")
    try:
        return Instance(tuple(rows), quotas)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_instance(inst: Instance) -> str:
    out = [str(inst.n), " ".join(str(q) for q in inst.k)]
    for row in inst.cost:
        out.append(" ".join("inf" if c == INF else str(c) for c in row))
    return "\n".join(out) + "\n"


def format_solution(
    sol: TourSolution,
    cycles: tuple[tuple[tuple[int, ...], int], ...] | None = None,
) -> str:
    out = [f"cost {sol.cost}"]
    for u, v, m in sol.edges.edges():
        out.append(f"edge {u} {v} {m}")
    if cycles is not None:
        for verts, count in cycles:
            out.append("cycle " + " ".join(str(x) for x in (count, *verts)))
    if sol.expansion is not None:
        out.append("tour " + " ".join(str(v) for v in sol.expansion))
    return "\n".join(out) + "\n"


def parse_solution(text: str) -> dict:
    """Read a solution file into {cost, edges, cycles, tour} (the last two
    may be None)."""
    cost = None
    edges: dict[tuple[int, int], int] = {}
    cycles: list[tuple[tuple[int, ...], int]] = []
    tour: tuple[int, ...] | None = None
    for number, line in _data_lines(text):
        kind, *fields = line.split()
        where = f"line {number}"
        if kind == "cost":
            if cost is not None:
                raise FormatError(f"{where}: duplicate cost line")
            if len(fields) != 1:
                raise FormatError(f"{where}: cost takes one value")
            cost = _parse_cost(fields[0], where)
        elif kind == "edge":
            if len(fields) != 3:
                raise FormatError(f"{where}: edge takes from, to, multiplicity")
            u, v, m = (_parse_int(t, where) for t in fields)
            if (u, v) in edges:
                raise FormatError(f"{where}: duplicate edge {u} {v}")
            edges[(u, v)] = m
        elif kind == "cycle":
            if len(fields) < 2:
                raise FormatError(f"{where}: cycle takes a count and vertices")
            count = _parse_int(fields[0], where)
            verts = tuple(_parse_int(t, where) for t in fields[1:])
            cycles.append((verts, count))
        elif kind == "tour":
            if tour is not None:
                raise FormatError(f"{where}: duplicate tour line")
            tour = tuple(_parse_int(t, where) for t in fields)
        else:
            raise FormatError(f"{where}: unknown record {kind!r}")
    if cost is None:
        raise FormatError("solution has no cost line")
    return {
        "cost": cost,
        "edges": edges,
        "cycles": tuple(cycles) if cycles else None,
        "tour": tour,
    }


# ---------------------------------------------------------------------------
# instance generation


def generate_instance(
    n: int,
    k_max: int,
    cost_max: int = 20,
    inf_prob: float = 0.0,
    seed: int = 0,
    k_fixed: int | None = None,
) -> Instance:
    """Deterministic random instance that always admits a finite tour.

    Costs are uniform integers with an optional chance of inf per arc.  A
    hidden random city cycle is forced finite, plus a self-loop wherever a
    quota exceeds the smallest one: riding the cycle min(k) times and
    looping for the leftover visits is then a finite tour, so feasibility
    is guaranteed for every quota vector.
    """
    if n < 1 or k_max < 1 or cost_max < 0 or not 0.0 <= inf_prob <= 1.0:
        raise ValueError("bad generator parameters")
    rng = Random(seed)
    if k_fixed is not None:
        quotas = tuple([k_fixed] * n)
    else:
        quotas = tuple(rng.randint(1, k_max) for _ in range(n))
    cost = [
        [
            INF if rng.random() < inf_prob else rng.randint(0, cost_max)
            for _ in range(n)
        ]
        for _ in range(n)
    ]
    if n == 1:
        ring = [0, 0]
    else:
        order = list(range(1, n))
        rng.shuffle(order)
        ring = [0] + order + [0]
    low = min(quotas)
    for t in range(len(ring) - 1):
        u, v = ring[t], ring[t + 1]
        if cost[u][v] == INF:
            cost[u][v] = rng.randint(0, cost_max)
    for v in range(n):
        if quotas[v] > low and cost[v][v] == INF:
            cost[v][v] = rng.randint(0, cost_max)
    return Instance(tuple(tuple(row) for row in cost), quotas)


# ---------------------------------------------------------------------------
# subcommands


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _config_from(args, n: int) -> SolverConfig:
    algorithm = args.algorithm
    if algorithm is None:
        algorithm = "dp" if n <= 12 else "dc2"
        log.info("no algorithm given, using %s for n=%d", algorithm, n)
    return SolverConfig(
        algorithm=algorithm,
        root=args.root,
        expansion_threshold=args.expand_threshold,
        parallelism=args.threads,
        cache=args.cache == "on",
    )


def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.input))
    cfg = _config_from(args, inst.n)
    started = time.perf_counter()
    try:
        sol = solve(inst, cfg)
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    log.info("solved in %.3fs, cost %s", time.perf_counter() - started, sol.cost)
    _write(args.output, format_solution(sol, cycle_certificate(sol.edges)))
    return 0


def cmd_gen(args) -> int:
    inst = generate_instance(
        args.n, args.k_max, args.cost_max, args.inf_prob, args.seed, args.k_fixed
    )
    _write(args.output, format_instance(inst))
    return 0


def cmd_verify(args) -> int:
    inst = parse_instance(_read(args.instance))
    sol = parse_solution(_read(args.solution))
    failures = 0

    def report(name: str, ok: bool, detail: str = "") -> None:
        nonlocal failures
        if ok:
            print(f"ok: {name}")
        else:
            failures += 1
            print(f"FAIL: {name}" + (f" ({detail})" if detail else ""))

    try:
        graph = DirectedMultigraph(inst.n, sol["edges"])
    except (ValueError, OverflowError) as exc:
        report("edges are well formed", False, str(exc))
        return 1
    report("edges are well formed", True)

    bad = [
        v
        for v in range(inst.n)
        if graph.out_degree(v) != inst.k[v] or graph.in_degree(v) != inst.k[v]
    ]
    report(
        "degrees match the visit quotas",
        not bad,
        f"vertices {bad}" if bad else "",
    )
    report(
        "edge set is connected",
        undirected_connected(inst.n, graph.mult.keys()),
    )
    recomputed = multigraph_cost(graph, inst)
    report(
        "stated cost matches the edges",
        recomputed == sol["cost"],
        f"stated {sol['cost']}, edges cost {recomputed}",
    )
    if sol["cycles"] is not None:
        union: dict[tuple[int, int], int] = {}
        for verts, count in sol["cycles"]:
            for t in range(len(verts)):
                arc = (verts[t], verts[(t + 1) % len(verts)])
                union[arc] = union.get(arc, 0) + count
        report(
            "cycles rebuild the edge multiset",
            union == dict(graph.mult),
        )
    if sol["tour"] is not None:
        walk = sol["tour"]
        used: dict[tuple[int, int], int] = {}
        for t in range(len(walk)):
            arc = (walk[t], walk[(t + 1) % len(walk)])
            used[arc] = used.get(arc, 0) + 1
        report(
            "tour has one step per visit",
            len(walk) == inst.total_visits,
            f"length {len(walk)}, visits {inst.total_visits}",
        )
        report("tour uses the edge multiset exactly", used == dict(graph.mult))
    return 1 if failures else 0


def cmd_bench(args) -> int:
    rows = ["algorithm,n,k_max,seed,wall_s,peak_kb,cost"]
    for algorithm in args.algorithms.split(","):
        algorithm = algorithm.strip()
        for n in args.n:
            for seed in args.seeds:
                inst = generate_instance(
                    n, args.k_max, args.cost_max, args.inf_prob, seed, args.k_fixed
                )
                cfg = SolverConfig(
                    algorithm=algorithm,
                    root=args.root,
                    expansion_threshold=args.expand_threshold,
                    parallelism=args.threads,
                    cache=args.cache == "on",
                )
                tracemalloc.start()
                started = time.perf_counter()
                sol = solve(inst, cfg)
                wall = time.perf_counter() - started
                _, peak = tracemalloc.get_traced_memory()
                tracemalloc.stop()
                rows.append(
                    f"{algorithm},{n},{args.k_max},{seed},"
                    f"{wall:.6f},{peak // 1024},{sol.cost}"
                )
                log.info("bench %s n=%d seed=%d: %.3fs", algorithm, n, seed, wall)
    _write(args.output, "\n".join(rows) + "\n")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_solver_flags(sub) -> None:
    sub.add_argument("--algorithm", choices=ALGORITHMS, default=None)
    sub.add_argument("--root", type=int, default=0)
    sub.add_argument("--expand-threshold", type=int, default=10**6)
    sub.add_argument("--threads", type=int, default=1)
    sub.add_argument("--cache", choices=("on", "off"), default="off")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mvtsp",
        description="Exact solvers for many-visits tour problems.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("solve", help="solve an instance file")
    sub.add_argument("--input", required=True, help="instance path, - for stdin")
    sub.add_argument("--output", default=None, help="solution path, default stdout")
    _add_solver_flags(sub)
    sub.set_defaults(handler=cmd_solve)

    sub = commands.add_parser("gen", help="generate a feasible random instance")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--k-max", type=int, default=4)
    sub.add_argument("--k-fixed", type=int, default=None)
    sub.add_argument("--cost-max", type=int, default=20)
    sub.add_argument("--inf-prob", type=float, default=0.0)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--output", default=None)
    sub.set_defaults(handler=cmd_gen)

    sub = commands.add_parser("verify", help="check a solution against an instance")
    sub.add_argument("--instance", required=True)
    sub.add_argument("--solution", required=True)
    sub.set_defaults(handler=cmd_verify)

    sub = commands.add_parser("bench", help="time algorithms on generated instances")
    sub.add_argument("--algorithms", required=True, help="comma-separated names")
    sub.add_argument("--n", type=int, nargs="+", required=True)
    sub.add_argument("--k-max", type=int, default=4)
    sub.add_argument("--k-fixed", type=int, default=None)
    sub.add_argument("--cost-max", type=int, default=20)
    sub.add_argument("--inf-prob", type=float, default=0.0)
    sub.add_argument("--seeds", type=int, nargs="+", default=[0])
    sub.add_argument("--output", default=None)
    _add_solver_flags(sub)
    sub.set_defaults(handler=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("MVTSP_LOG", "warning").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (FormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
