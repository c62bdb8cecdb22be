"""Shortest-path search on (possibly implicit) graphs of convex sets.

Vertices carry compact convex sets, edges carry coupling constraints and
L1-plus-constant costs; the search keeps every path that survives a
ReachesCheaper or ReachesNew domination check and orders expansion by the
convex-restriction estimate of cost-to-come plus heuristic cost-to-go.
"""

from .domination import (
    CheckContext,
    ContainmentChecker,
    HybridChecker,
    PathCacheEntry,
    SamplingChecker,
    VertexFrontier,
    checker_from_key,
)
from .gcs_core import (
    EdgeCostL1,
    EdgeData,
    ExplicitGcs,
    GcsProblem,
    GcsVertex,
    Trajectory,
    validate_problem,
)
from .geometry import (
    AHPolytope,
    HPolyhedron,
    ah_containment_certified,
    chebyshev_center,
    contains_point,
    nullspace_reduce,
    sample_interior,
)
from .heuristics import InflatedHeuristic, ShortcutHeuristic, ZeroHeuristic, evaluate_heuristic
from .restriction import (
    RestrictionSolution,
    cost_epigraph,
    cost_to_come_at_point,
    project_to_reachable,
    reachable_set,
    solve_restriction,
    trajectory_polytope,
)
from .search import SearchOptions, SearchStatus, Solution, astar_vertex_baseline, gcs_star

__all__ = [
    "AHPolytope",
    "CheckContext",
    "ContainmentChecker",
    "EdgeCostL1",
    "EdgeData",
    "ExplicitGcs",
    "GcsProblem",
    "GcsVertex",
    "HPolyhedron",
    "HybridChecker",
    "InflatedHeuristic",
    "PathCacheEntry",
    "RestrictionSolution",
    "SamplingChecker",
    "SearchOptions",
    "SearchStatus",
    "ShortcutHeuristic",
    "Solution",
    "Trajectory",
    "VertexFrontier",
    "ZeroHeuristic",
    "ah_containment_certified",
    "astar_vertex_baseline",
    "checker_from_key",
    "chebyshev_center",
    "contains_point",
    "cost_epigraph",
    "cost_to_come_at_point",
    "evaluate_heuristic",
    "gcs_star",
    "nullspace_reduce",
    "project_to_reachable",
    "reachable_set",
    "sample_interior",
    "solve_restriction",
    "trajectory_polytope",
    "validate_problem",
]
