"""Best-first search over paths in a graph of convex sets.

gcs_star keeps, per vertex, every path that survives a NotDominated check
and orders the queue by the optimistic estimate f = cost-to-come + heuristic
evaluated by the convex restriction.  astar_vertex_baseline is the naive
adaptation that keeps a single cheapest path per vertex; it demonstrably
loses completeness on coupled edge constraints.
"""

from __future__ import annotations

import enum
import heapq
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .domination import CheckContext, PathCacheEntry, VertexFrontier, checker_from_key
from .gcs_core import GcsProblem, Path, Trajectory
from .heuristics import ZeroHeuristic
from .restriction import solve_restriction


class SearchStatus(enum.Enum):
    SOLVED = "solved"
    FAIL = "fail"
    TIMEOUT = "timeout"
    EXPANSION_LIMIT = "expansion_limit"


@dataclass
class SearchStats:
    expansions: int = 0
    queue_pushes: int = 0
    domination_calls: int = 0
    solver_calls: int = 0
    frontier_entries: int = 0
    wall_time_s: float = 0.0
    popped_estimates: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "expansions": self.expansions,
            "queue_pushes": self.queue_pushes,
            "domination_calls": self.domination_calls,
            "solver_calls": self.solver_calls,
            "wall_time_ms": round(self.wall_time_s * 1000.0, 3),
        }


@dataclass
class SearchOptions:
    max_path_len: int | None = None
    max_expansions: int | None = None
    timeout_s: float | None = None
    seed: int = 0
    samples: int = 1
    workers: int = 0  # >0 fans successor restriction solves out to a thread pool
    record_pops: bool = False
    trace_domination: bool = False
    method: str | None = None


@dataclass
class Solution:
    status: SearchStatus
    path: Path | None
    trajectory: Trajectory | None
    cost: float | None
    stats: SearchStats
    labels: dict = field(default_factory=dict)

    @property
    def solved(self) -> bool:
        return self.status == SearchStatus.SOLVED

    def to_json(self, include_trajectory: bool = True) -> dict:
        out = {
            "status": self.status.value,
            "cost": self.cost,
            "path": list(self.path) if self.path is not None else None,
        }
        out.update(self.stats.to_json())
        out.update(self.labels)
        if include_trajectory and self.trajectory is not None:
            out["trajectory"] = [p.tolist() for p in self.trajectory.points]
        return out


def _resolve_max_len(g: GcsProblem, options: SearchOptions) -> int:
    if options.max_path_len is not None:
        return options.max_path_len
    default = g.default_max_path_len()
    if default is None:
        raise ValueError("implicit graphs require an explicit max_path_len")
    return default


def _finish(status, path, traj, stats, ctx, start, labels=None) -> Solution:
    stats.solver_calls = ctx.counter.count
    stats.wall_time_s = time.perf_counter() - start
    cost = traj.cost if traj is not None else None
    return Solution(status, path, traj, cost, stats, labels or {})


def gcs_star(
    g: GcsProblem,
    heuristic,
    checker,
    options: SearchOptions | None = None,
) -> Solution:
    """Best-first search keeping all not-dominated paths per vertex.

    Pops the lowest-estimate node (FIFO among ties), returns as soon as a
    node ending at the target is popped, and queues a successor path only
    when the restriction is feasible and the domination check keeps it.
    Paths longer than max_path_len are neither queued nor stored.
    """
    opts = options or SearchOptions()
    if isinstance(checker, str):
        checker = checker_from_key(checker, opts.samples)
    ctx = CheckContext(
        problem=g,
        seed=opts.seed,
        method=opts.method,
        trace=[] if opts.trace_domination else None,
    )
    stats = SearchStats()
    start = time.perf_counter()
    max_len = _resolve_max_len(g, opts)

    root_sol = solve_restriction(g, (g.source,), heuristic, opts.method, ctx.counter)
    if not root_sol.is_optimal:
        return _finish(SearchStatus.FAIL, None, None, stats, ctx, start)
    root = PathCacheEntry((g.source,), root_sol)
    frontier = VertexFrontier()
    frontier.add(root)
    heap: list = [(root_sol.total_estimate, 0, root)]
    seq = 1
    stats.queue_pushes = 1
    pool = ThreadPoolExecutor(max_workers=opts.workers) if opts.workers > 0 else None

    try:
        while heap:
            stats.frontier_entries = frontier.total_entries()
            if opts.timeout_s is not None and time.perf_counter() - start > opts.timeout_s:
                return _finish(SearchStatus.TIMEOUT, None, None, stats, ctx, start)
            if opts.max_expansions is not None and stats.expansions >= opts.max_expansions:
                return _finish(SearchStatus.EXPANSION_LIMIT, None, None, stats, ctx, start)
            f_value, _, entry = heapq.heappop(heap)
            stats.expansions += 1
            if opts.record_pops:
                stats.popped_estimates.append(f_value)
            if entry.terminal_vertex == g.target:
                stats.frontier_entries = frontier.total_entries()
                return _finish(
                    SearchStatus.SOLVED,
                    entry.path,
                    entry.terminal_solution.trajectory,
                    stats,
                    ctx,
                    start,
                )
            candidates = [
                entry.path + (vert.id,)
                for _, vert in g.successors(entry.terminal_vertex)
                if len(entry.path) + 1 <= max_len
            ]

            def _solve(path: Path):
                return solve_restriction(g, path, heuristic, opts.method, ctx.counter)

            solutions = list(pool.map(_solve, candidates)) if pool else [_solve(p) for p in candidates]
            # frontier/queue mutations happen here only, in sorted-successor order
            for path, sol in zip(candidates, solutions):
                if not sol.is_optimal:
                    continue
                cand = PathCacheEntry(path, sol)
                stats.domination_calls += 1
                if checker.not_dominated(ctx, cand, frontier.entries(path[-1])):
                    frontier.add(cand)
                    heapq.heappush(heap, (sol.total_estimate, seq, cand))
                    seq += 1
                    stats.queue_pushes += 1
        stats.frontier_entries = frontier.total_entries()
        return _finish(SearchStatus.FAIL, None, None, stats, ctx, start)
    finally:
        if pool:
            pool.shutdown(wait=False)


def astar_vertex_baseline(
    g: GcsProblem,
    heuristic=None,
    options: SearchOptions | None = None,
) -> Solution:
    """Discrete-A* adaptation keeping one cheapest path per vertex.

    Comparisons use the pure optimal cost-to-come of each path (no
    heuristic); queue order still uses the heuristic estimate.  On graphs of
    convex sets this pruning is unsound and the search may fail even when a
    feasible path exists.
    """
    opts = options or SearchOptions()
    ctx = CheckContext(problem=g, seed=opts.seed, method=opts.method)
    stats = SearchStats()
    start = time.perf_counter()
    max_len = _resolve_max_len(g, opts)

    root_sol = solve_restriction(g, (g.source,), heuristic, opts.method, ctx.counter)
    if not root_sol.is_optimal:
        return _finish(SearchStatus.FAIL, None, None, stats, ctx, start)
    best_cost: dict = {g.source: 0.0}
    heap: list = [(root_sol.total_estimate, 0, (g.source,), root_sol)]
    seq = 1
    stats.queue_pushes = 1
    while heap:
        if opts.timeout_s is not None and time.perf_counter() - start > opts.timeout_s:
            return _finish(SearchStatus.TIMEOUT, None, None, stats, ctx, start)
        if opts.max_expansions is not None and stats.expansions >= opts.max_expansions:
            return _finish(SearchStatus.EXPANSION_LIMIT, None, None, stats, ctx, start)
        f_value, _, path, sol = heapq.heappop(heap)
        stats.expansions += 1
        if opts.record_pops:
            stats.popped_estimates.append(f_value)
        if path[-1] == g.target:
            return _finish(SearchStatus.SOLVED, path, sol.trajectory, stats, ctx, start)
        for _, vert in g.successors(path[-1]):
            if len(path) + 1 > max_len:
                continue
            new_path = path + (vert.id,)
            f_sol = solve_restriction(g, new_path, heuristic, opts.method, ctx.counter)
            if not f_sol.is_optimal:
                continue
            g_sol = solve_restriction(g, new_path, ZeroHeuristic(), opts.method, ctx.counter)
            g_val = g_sol.cost_to_come
            stats.domination_calls += 1
            if vert.id not in best_cost or g_val < best_cost[vert.id]:
                best_cost[vert.id] = g_val
                heapq.heappush(heap, (f_sol.total_estimate, seq, new_path, f_sol))
                seq += 1
                stats.queue_pushes += 1
    return _finish(SearchStatus.FAIL, None, None, stats, ctx, start)
