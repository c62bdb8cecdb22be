"""Independent oracles shared by the unit and acceptance tests.

Everything here deliberately avoids the code paths it checks: optima come
from exhaustive path enumeration, domination truth values from dense grids
of pinned LP evaluations (or closed-form branch profiles), containment from
vertex enumeration plus membership LPs.
"""

from __future__ import annotations

import math

import numpy as np

from gcsstar.gcs_core import GcsProblem
from gcsstar.geometry import bounding_box, contains_point
from gcsstar.heuristics import ZeroHeuristic
from gcsstar.lp import LinearProgram, LpStatus
from gcsstar.restriction import PathProgram, cost_to_come_at_point, point_reachable, solve_restriction


def exhaustive_optimum(g: GcsProblem, max_len: int = 8):
    """Brute-force optimum over all paths up to max_len, each solved by the
    convex restriction; returns (cost, path, trajectory) or (inf, None, None).

    Prunes branches whose prefix is infeasible or whose prefix optimum
    already exceeds the incumbent (edge costs are nonnegative, so any
    extension can only cost more than the prefix minimum).
    """
    best = (math.inf, None, None)
    stack = [(g.source,)]
    while stack:
        path = stack.pop()
        sol = solve_restriction(g, path, ZeroHeuristic())
        if not sol.is_optimal:
            continue
        if sol.cost_to_come >= best[0] - 1e-12:
            continue
        if path[-1] == g.target:
            best = (sol.cost_to_come, path, sol.trajectory)
            continue
        if len(path) >= max_len:
            continue
        for _, vert in reversed(g.successors(path[-1])):
            stack.append(path + (vert.id,))
    return best


def min_cost_to_reach(g: GcsProblem, vertex, x, max_len: int = 8) -> float:
    """Brute-force optimal cost-to-come to point x of a vertex (grid oracle building block)."""
    best = math.inf
    stack = [(g.source,)]
    while stack:
        path = stack.pop()
        sol = solve_restriction(g, path, ZeroHeuristic())
        if not sol.is_optimal or sol.cost_to_come >= best - 1e-12:
            continue
        if path[-1] == vertex:
            best = min(best, cost_to_come_at_point(g, path, x))
        if len(path) < max_len:
            for _, vert in reversed(g.successors(path[-1])):
                stack.append(path + (vert.id,))
    return best


def cost_to_go_oracle(g: GcsProblem, vertex, x, max_len: int = 5) -> float:
    """Brute-force optimal cost-to-go from point x in a vertex to the target.

    Enumerates forward paths and solves each restriction with the first
    point pinned to x; independent of any heuristic.
    """
    best = math.inf
    stack = [(vertex,)]
    x = np.asarray(x, dtype=float)
    while stack:
        path = stack.pop()
        pp = PathProgram(g, path)
        prog = LinearProgram()
        cols = pp.install(prog)
        pp.add_cost_objective(prog, cols)
        first = cols[: pp.dims[0]]
        prog.add_matrix_eq(np.eye(len(x)), first, x)
        res = prog.solve()
        if res.status != LpStatus.OPTIMAL:
            continue
        value = pp.edge_cost_total(pp.extract_points(res.x))
        if value >= best - 1e-12:
            continue
        if path[-1] == g.target:
            best = min(best, value)
            continue
        if len(path) < max_len:
            for _, vert in reversed(g.successors(path[-1])):
                stack.append(path + (vert.id,))
    return best


def grid_over_box(lo, hi, n_per_axis: int) -> np.ndarray:
    axes = [np.linspace(float(a), float(b), n_per_axis) for a, b in zip(np.atleast_1d(lo), np.atleast_1d(hi))]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def terminal_grid(g: GcsProblem, vertex, n_points: int = 200) -> np.ndarray:
    """Roughly n_points grid points over the vertex set's bounding box."""
    P = g.vertex(vertex).set
    lo, hi = bounding_box(P)
    dim = P.dim
    n_axis = max(2, int(round(n_points ** (1.0 / dim))))
    pts = grid_over_box(lo, hi, n_axis)
    keep = [contains_point(P, p, 1e-9) for p in pts]
    return pts[np.array(keep, dtype=bool)]


def grid_domination_oracle(g: GcsProblem, candidate, frontier, grid=None, slack: float = 0.0):
    """(reaches_cheaper, reaches_new) ground truth on a dense grid of pinned LPs."""
    if grid is None:
        grid = terminal_grid(g, candidate[-1])
    rc = rn = False
    for x in grid:
        g_cand = cost_to_come_at_point(g, candidate, x)
        if g_cand == math.inf:
            continue
        alts = [cost_to_come_at_point(g, p, x) for p in frontier]
        if all(a > g_cand + slack for a in alts):
            rc = True
        if all(a == math.inf for a in alts):
            rn = True
        if rc and rn:
            break
    return rc, rn


def profile_domination_oracle(profiles, candidate, frontier, grid):
    """Grid oracle over closed-form branch profiles (no LPs)."""
    cand = profiles[candidate]
    alts = [profiles[p] for p in frontier]
    rc = rn = False
    for x in grid:
        g_cand = cand.cost(x)
        if g_cand == math.inf:
            continue
        vals = [a.cost(x) for a in alts]
        if all(v > g_cand for v in vals):
            rc = True
        if all(v == math.inf for v in vals):
            rn = True
        if rc and rn:
            break
    return rc, rn


def verify_rc_witness(g, candidate, frontier, x, selector=None, tol: float = 1e-7) -> bool:
    """Direct LP re-verification of a reaches-cheaper witness point."""
    g_cand = cost_to_come_at_point(g, candidate, x, selector)
    if g_cand == math.inf:
        return False
    return all(
        cost_to_come_at_point(g, p, x, selector) - g_cand >= -tol for p in frontier
    )


def verify_rn_witness(g, candidate, frontier, x, selector=None) -> bool:
    if not point_reachable(g, candidate, x, selector):
        return False
    return all(not point_reachable(g, p, x, selector) for p in frontier)
