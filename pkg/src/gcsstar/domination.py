"""Domination checks deciding whether a candidate path is worth keeping.

A candidate is kept when it reaches some terminal-set point strictly cheaper
than every stored path (ReachesCheaper) or reaches a point no stored path
can reach at all (ReachesNew).  Both come in a sampling form (a witness
point certifies True), a containment form (a certified single-path set
inclusion certifies False, conservatively), and a hybrid that tries one
sample before paying for containment.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .gcs_core import GcsProblem, Path, VertexId
from .geometry import AHPolytope, HitAndRunSampler, SampleSpace, prepare_sample_space
from .lp import SolveCounter, SolverFailure
from .restriction import (
    RestrictionSolution,
    cost_to_come_at_point,
    cost_epigraph,
    point_reachable,
    project_to_reachable,
    reachable_set,
)

STRICT_SLACK = 1e-9  # slack applied to strict cost comparisons on LP values

CHECKER_KEYS = (
    "rc-sampling",
    "rn-sampling",
    "rc-containment",
    "rn-containment",
    "rc-hybrid",
    "rn-hybrid",
)

_UNSET = object()


def stable_path_hash(path: Path) -> int:
    digest = hashlib.sha256(repr(tuple(path)).encode()).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass
class CheckContext:
    """Shared immutable problem state plus per-run caches and counters.

    Verdicts depend only on (problem, candidate, frontier snapshot, seed):
    each candidate gets its own RNG stream derived from the global seed and
    the candidate path, so evaluation order and thread count do not matter.
    """

    problem: GcsProblem
    seed: int = 0
    method: str | None = None
    counter: SolveCounter = field(default_factory=SolveCounter)
    trace: list | None = None
    _spaces: dict = field(default_factory=dict)
    _selectors: dict = field(default_factory=dict)

    def selector(self, vid: VertexId) -> np.ndarray | None:
        if vid not in self._selectors:
            self._selectors[vid] = self.problem.domination_selector(vid)
        return self._selectors[vid]

    def sample_space(self, vid: VertexId) -> SampleSpace:
        if vid not in self._spaces:
            self._spaces[vid] = prepare_sample_space(
                self.problem.vertex(vid).set, self.method, self.counter
            )
        return self._spaces[vid]

    def rng_for(self, path: Path) -> np.random.Generator:
        return np.random.default_rng([self.seed & 0xFFFFFFFF, stable_path_hash(path)])

    def record(self, **kwargs) -> None:
        if self.trace is not None:
            self.trace.append(dict(kwargs))


@dataclass
class PathCacheEntry:
    """Un-pruned path with its terminal solution and lazily built sets.

    The reachable set and cost epigraph are constructed in the domination
    coordinates (narrowed by the problem's selector when one exists) on first
    use and cached; reconstruction is pure, so caching is sound.
    """

    path: Path
    terminal_solution: RestrictionSolution
    _reachable: object = _UNSET
    _epigraph: object = _UNSET

    @property
    def terminal_vertex(self) -> VertexId:
        return self.path[-1]

    def reachable(self, ctx: CheckContext) -> AHPolytope | None:
        if self._reachable is _UNSET:
            self._reachable = reachable_set(
                ctx.problem,
                self.path,
                selector=ctx.selector(self.terminal_vertex),
                method=ctx.method,
                counter=ctx.counter,
            )
        return self._reachable

    def epigraph(self, ctx: CheckContext) -> AHPolytope | None:
        if self._epigraph is _UNSET:
            self._epigraph = cost_epigraph(
                ctx.problem,
                self.path,
                selector=ctx.selector(self.terminal_vertex),
                method=ctx.method,
                counter=ctx.counter,
            )
        return self._epigraph


class VertexFrontier:
    """The map from each vertex to its stored (un-pruned) paths."""

    def __init__(self) -> None:
        self._entries: dict = {}

    def entries(self, vid: VertexId) -> tuple:
        return tuple(self._entries.get(vid, ()))

    def add(self, entry: PathCacheEntry) -> None:
        self._entries.setdefault(entry.terminal_vertex, []).append(entry)

    def total_entries(self) -> int:
        return sum(len(v) for v in self._entries.values())

    def vertices(self) -> list:
        return sorted(self._entries)


def _sample_points(ctx: CheckContext, candidate: PathCacheEntry, k: int):
    """k approximately uniform points of the candidate's terminal set."""
    vid = candidate.terminal_vertex
    sampler = HitAndRunSampler(ctx.sample_space(vid), ctx.rng_for(candidate.path))
    sel = ctx.selector(vid)
    for _ in range(k):
        z = sampler.sample()
        yield z if sel is None else sel @ z


def _sampled_check(
    ctx: CheckContext,
    candidate: PathCacheEntry,
    frontier,
    k: int,
    kind: str,
) -> bool:
    g = ctx.problem
    sel = ctx.selector(candidate.terminal_vertex)
    for y0 in _sample_points(ctx, candidate, k):
        y = project_to_reachable(g, candidate.path, y0, sel, ctx.method, ctx.counter)
        if y is None:
            ctx.record(kind=kind, impl="sampling", verdict=False, witness=None, reason="empty")
            return False
        if kind == "rc":
            g_cand = cost_to_come_at_point(g, candidate.path, y, sel, ctx.method, ctx.counter)
            if g_cand == math.inf:
                continue
            if all(
                cost_to_come_at_point(g, alt.path, y, sel, ctx.method, ctx.counter)
                > g_cand + STRICT_SLACK
                for alt in frontier
            ):
                ctx.record(kind=kind, impl="sampling", verdict=True, witness=y, g_cand=g_cand)
                return True
        else:
            if not point_reachable(g, candidate.path, y, sel, ctx.method, ctx.counter):
                continue
            if all(
                not point_reachable(g, alt.path, y, sel, ctx.method, ctx.counter)
                for alt in frontier
            ):
                ctx.record(kind=kind, impl="sampling", verdict=True, witness=y)
                return True
    ctx.record(kind=kind, impl="sampling", verdict=False, witness=None)
    return False


def _containment_check(
    ctx: CheckContext,
    candidate: PathCacheEntry,
    frontier,
    kind: str,
    stats: dict | None = None,
) -> bool:
    from .geometry import ah_containment_certified

    if not frontier:
        return True
    cand_set = candidate.epigraph(ctx) if kind == "rc" else candidate.reachable(ctx)
    if cand_set is None:
        return False
    for alt in frontier:
        alt_set = alt.epigraph(ctx) if kind == "rc" else alt.reachable(ctx)
        if alt_set is None:
            continue
        if stats is not None:
            stats["containment_lps"] = stats.get("containment_lps", 0) + 1
        try:
            if ah_containment_certified(cand_set, alt_set, ctx.method, ctx.counter):
                ctx.record(kind=kind, impl="containment", verdict=False, dominated_by=alt.path)
                return False
        except SolverFailure:
            # a failed certificate never prunes; fall through to the next entry
            continue
    ctx.record(kind=kind, impl="containment", verdict=True)
    return True


class DominationChecker:
    """Base interface: True means the candidate is NOT dominated (keep it)."""

    kind: str
    impl: str

    def not_dominated(self, ctx: CheckContext, candidate: PathCacheEntry, frontier) -> bool:
        raise NotImplementedError


class SamplingChecker(DominationChecker):
    impl = "sampling"

    def __init__(self, kind: str, k: int = 1):
        if kind not in ("rc", "rn"):
            raise ValueError("kind must be 'rc' or 'rn'")
        if k < 1:
            raise ValueError("need at least one sample per check")
        self.kind = kind
        self.k = k
        self.stats = {"kept": 0, "pruned": 0}

    def not_dominated(self, ctx, candidate, frontier) -> bool:
        verdict = _sampled_check(ctx, candidate, frontier, self.k, self.kind)
        self.stats["kept" if verdict else "pruned"] += 1
        return verdict


class ContainmentChecker(DominationChecker):
    impl = "containment"

    def __init__(self, kind: str):
        if kind not in ("rc", "rn"):
            raise ValueError("kind must be 'rc' or 'rn'")
        self.kind = kind
        self.stats: dict = {}

    def not_dominated(self, ctx, candidate, frontier) -> bool:
        return _containment_check(ctx, candidate, frontier, self.kind, self.stats)


class HybridChecker(DominationChecker):
    """One cheap sample first; containment only when the sample finds nothing."""

    impl = "hybrid"

    def __init__(self, kind: str):
        if kind not in ("rc", "rn"):
            raise ValueError("kind must be 'rc' or 'rn'")
        self.kind = kind
        self.stats = {"sample_hits": 0, "containment_calls": 0}

    def not_dominated(self, ctx, candidate, frontier) -> bool:
        if _sampled_check(ctx, candidate, frontier, 1, self.kind):
            self.stats["sample_hits"] += 1
            return True
        self.stats["containment_calls"] += 1
        return _containment_check(ctx, candidate, frontier, self.kind, self.stats)


def checker_from_key(key: str, k: int = 1) -> DominationChecker:
    if key not in CHECKER_KEYS:
        raise ValueError(f"unknown checker key {key!r}; expected one of {CHECKER_KEYS}")
    kind, impl = key.split("-")
    if impl == "sampling":
        return SamplingChecker(kind, k)
    if impl == "containment":
        return ContainmentChecker(kind)
    return HybridChecker(kind)


def reaches_cheaper_sampled(g, candidate_path, frontier_paths, k=1, seed=0, rng=None):
    """Functional form over bare paths (solutions solved on the fly)."""
    return _functional_check(g, candidate_path, frontier_paths, "rc", "sampling", k, seed)


def reaches_new_sampled(g, candidate_path, frontier_paths, k=1, seed=0, rng=None):
    return _functional_check(g, candidate_path, frontier_paths, "rn", "sampling", k, seed)


def reaches_cheaper_contained(g, candidate_path, frontier_paths, seed=0):
    return _functional_check(g, candidate_path, frontier_paths, "rc", "containment", 1, seed)


def reaches_new_contained(g, candidate_path, frontier_paths, seed=0):
    return _functional_check(g, candidate_path, frontier_paths, "rn", "containment", 1, seed)


def hybrid_not_dominated(g, candidate_path, frontier_paths, kind, seed=0):
    return _functional_check(g, candidate_path, frontier_paths, kind, "hybrid", 1, seed)


def _functional_check(g, candidate_path, frontier_paths, kind, impl, k, seed):
    from .restriction import solve_restriction

    ctx = CheckContext(problem=g, seed=seed)
    cand = PathCacheEntry(tuple(candidate_path), solve_restriction(g, candidate_path))
    frontier = [PathCacheEntry(tuple(p), solve_restriction(g, p)) for p in frontier_paths]
    checker = checker_from_key(f"{kind}-{impl}", k)
    return checker.not_dominated(ctx, cand, frontier)
