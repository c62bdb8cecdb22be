"""Convex restriction of the shortest-path program for a fixed vertex path.

Fixing the discrete path turns the problem into an LP over the stacked
per-vertex points: minimize the summed edge costs (plus the heuristic at the
terminal point) subject to every vertex set and edge constraint along the
path.  This module also builds the derived polyhedral objects used by
domination checks: the stacked trajectory polytope, the reachable set of
terminal points, and the epigraph of the optimal cost-to-come, the latter
two represented exactly as affine images of polyhedra with equality
constraints eliminated first.
"""

from __future__ import annotations

import enum
import math
import weakref
from dataclasses import dataclass

import numpy as np

from .gcs_core import GcsProblem, Path, Trajectory
from .geometry import (
    AHPolytope,
    HPolyhedron,
    chebyshev_center,
    detect_equality_pairs,
    nullspace_reduce,
)
from .heuristics import ShortcutHeuristic, ZeroHeuristic, _ShortcutRealization, _unwrap, heuristic_realizations
from .lp import LinearProgram, LpStatus, SolveCounter, SolverFailure


class RestrictionStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


@dataclass
class RestrictionSolution:
    status: RestrictionStatus
    trajectory: Trajectory | None = None
    cost_to_come: float | None = None
    total_estimate: float | None = None

    @property
    def is_optimal(self) -> bool:
        return self.status == RestrictionStatus.OPTIMAL


_SPLIT_CACHE: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def _split(P: HPolyhedron):
    """Cached (A_ub, b_ub, C, d) split of paired +/- equality rows."""
    hit = _SPLIT_CACHE.get(P)
    if hit is None:
        hit = detect_equality_pairs(P.A, P.b)
        _SPLIT_CACHE[P] = hit
    return hit


class PathProgram:
    """Stacked constraint system for one path, equality rows separated."""

    def __init__(self, g: GcsProblem, path: Path):
        path = tuple(path)
        if not path:
            raise ValueError("path must contain at least one vertex")
        self.path = path
        self.vertices = [g.vertex(v) for v in path]
        self.dims = [v.dim for v in self.vertices]
        self.offsets = np.concatenate([[0], np.cumsum(self.dims)])[:-1]
        self.total_dim = int(sum(self.dims))
        self.edges = []
        for i in range(len(path) - 1):
            try:
                edge = g.edge(path[i], path[i + 1])
            except KeyError:
                raise ValueError(f"consecutive vertices {path[i]!r} -> {path[i+1]!r} are not an edge")
            self.edges.append(edge)

        ub_rows, ub_rhs, eq_rows, eq_rhs = [], [], [], []

        def place(rows, cols):
            out = np.zeros((rows.shape[0], self.total_dim))
            out[:, cols] = rows
            return out

        for vert, off, d in zip(self.vertices, self.offsets, self.dims):
            A_ub, b_ub, C, d_eq = _split(vert.set)
            cols = np.arange(off, off + d)
            if A_ub.shape[0]:
                ub_rows.append(place(A_ub, cols))
                ub_rhs.append(b_ub)
            if C.shape[0]:
                eq_rows.append(place(C, cols))
                eq_rhs.append(d_eq)
        for i, edge in enumerate(self.edges):
            du, dv = self.dims[i], self.dims[i + 1]
            cols = np.concatenate(
                [
                    np.arange(self.offsets[i], self.offsets[i] + du),
                    np.arange(self.offsets[i + 1], self.offsets[i + 1] + dv),
                ]
            )
            A_ub, b_ub, C, d_eq = _split(edge.constraint)
            if A_ub.shape[0]:
                ub_rows.append(place(A_ub, cols))
                ub_rhs.append(b_ub)
            if C.shape[0]:
                eq_rows.append(place(C, cols))
                eq_rhs.append(d_eq)

        self.A_ub = np.vstack(ub_rows) if ub_rows else np.zeros((0, self.total_dim))
        self.b_ub = np.concatenate(ub_rhs) if ub_rhs else np.zeros(0)
        self.C = np.vstack(eq_rows) if eq_rows else np.zeros((0, self.total_dim))
        self.d = np.concatenate(eq_rhs) if eq_rhs else np.zeros(0)

    @property
    def terminal_dim(self) -> int:
        return self.dims[-1]

    def terminal_cols(self, x_cols: np.ndarray) -> np.ndarray:
        off = self.offsets[-1]
        return x_cols[off : off + self.dims[-1]]

    def install(self, prog: LinearProgram) -> np.ndarray:
        x = prog.new_block(self.total_dim)
        if self.A_ub.shape[0]:
            prog.add_matrix_ineq(self.A_ub, x, self.b_ub)
        if self.C.shape[0]:
            prog.add_matrix_eq(self.C, x, self.d)
        return x

    def add_cost_objective(self, prog: LinearProgram, x: np.ndarray) -> None:
        for i, edge in enumerate(self.edges):
            cols = np.concatenate(
                [
                    x[self.offsets[i] : self.offsets[i] + self.dims[i]],
                    x[self.offsets[i + 1] : self.offsets[i + 1] + self.dims[i + 1]],
                ]
            )
            cost = edge.cost
            prog.obj_const += cost.c0
            for k in range(cost.num_terms):
                if cost.weights[k] == 0.0:
                    continue
                prog.add_abs_term(cols, cost.rows[k], cost.offsets[k], cost.weights[k])

    def extract_points(self, sol: np.ndarray) -> list[np.ndarray]:
        return [sol[off : off + d].copy() for off, d in zip(self.offsets, self.dims)]

    def edge_cost_total(self, points) -> float:
        return float(
            sum(edge.cost.evaluate(points[i], points[i + 1]) for i, edge in enumerate(self.edges))
        )

    def selector_matrix(self, selector: np.ndarray | None) -> np.ndarray:
        if selector is None:
            return np.eye(self.terminal_dim)
        selector = np.asarray(selector, dtype=float)
        if selector.shape[1] != self.terminal_dim:
            raise ValueError("selector has the wrong terminal dimension")
        return selector


def solve_restriction(
    g: GcsProblem,
    path: Path,
    heuristic=None,
    method: str | None = None,
    counter: SolveCounter | None = None,
) -> RestrictionSolution:
    """Optimal trajectory through the path, minimizing edge costs + heuristic.

    The heuristic enters the LP objective at the terminal point; the value of
    each realization is evaluated and the cheapest kept (earlier realizations
    win ties).  Infeasibility of the path is reported as a status; solver
    failures raise and are never mapped to infeasibility.
    """
    pp = PathProgram(g, path)
    realizations = heuristic_realizations(g, heuristic, path[-1])
    best = None
    for realization in realizations:
        prog = LinearProgram()
        x = pp.install(prog)
        pp.add_cost_objective(prog, x)
        h_eval = realization.install(prog, pp.terminal_cols(x))
        res = prog.solve(method, counter)
        if res.status == LpStatus.INFEASIBLE:
            continue
        if res.status != LpStatus.OPTIMAL:
            raise SolverFailure(f"restriction LP ended with status {res.status}")
        points = pp.extract_points(res.x)
        g_val = pp.edge_cost_total(points)
        total = g_val + h_eval(res.x)
        if best is None or total < best[0]:
            best = (total, g_val, points)
    if best is None:
        # A constrained heuristic realization can be infeasible while the bare
        # path is not; decide feasibility without the heuristic before
        # declaring the path infeasible.
        prog = LinearProgram()
        x = pp.install(prog)
        pp.add_cost_objective(prog, x)
        res = prog.solve(method, counter)
        if res.status == LpStatus.INFEASIBLE:
            return RestrictionSolution(RestrictionStatus.INFEASIBLE)
        if res.status != LpStatus.OPTIMAL:
            raise SolverFailure(f"restriction LP ended with status {res.status}")
        points = pp.extract_points(res.x)
        g_val = pp.edge_cost_total(points)
        return RestrictionSolution(
            RestrictionStatus.OPTIMAL, Trajectory(points, g_val), g_val, math.inf
        )
    total, g_val, points = best
    return RestrictionSolution(RestrictionStatus.OPTIMAL, Trajectory(points, g_val), g_val, total)


def cost_to_come_at_point(
    g: GcsProblem,
    path: Path,
    x,
    selector: np.ndarray | None = None,
    method: str | None = None,
    counter: SolveCounter | None = None,
) -> float:
    """Optimal restricted cost with the terminal point pinned to x; inf if unreachable.

    With a selector, x lives in the selected coordinates and only those are
    pinned.  Solver failures raise; they are distinct from the +inf result.
    """
    pp = PathProgram(g, path)
    M = pp.selector_matrix(selector)
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] != M.shape[0]:
        raise ValueError(f"pinned point has dimension {x.shape[0]}, expected {M.shape[0]}")
    prog = LinearProgram()
    cols = pp.install(prog)
    pp.add_cost_objective(prog, cols)
    prog.add_matrix_eq(M, pp.terminal_cols(cols), x)
    res = prog.solve(method, counter)
    if res.status == LpStatus.INFEASIBLE:
        return math.inf
    if res.status != LpStatus.OPTIMAL:
        raise SolverFailure(f"pinned restriction LP ended with status {res.status}")
    return pp.edge_cost_total(pp.extract_points(res.x))


def point_reachable(
    g: GcsProblem,
    path: Path,
    x,
    selector: np.ndarray | None = None,
    method: str | None = None,
    counter: SolveCounter | None = None,
) -> bool:
    """Feasibility-only variant: can the path end at (the selection of) x?"""
    pp = PathProgram(g, path)
    M = pp.selector_matrix(selector)
    x = np.asarray(x, dtype=float).ravel()
    prog = LinearProgram()
    cols = pp.install(prog)
    prog.add_matrix_eq(M, pp.terminal_cols(cols), x)
    res = prog.solve(method, counter)
    if res.status == LpStatus.OPTIMAL:
        return True
    if res.status == LpStatus.INFEASIBLE:
        return False
    raise SolverFailure(f"reachability LP ended with status {res.status}")


def project_to_reachable(
    g: GcsProblem,
    path: Path,
    sample,
    selector: np.ndarray | None = None,
    method: str | None = None,
    counter: SolveCounter | None = None,
) -> np.ndarray | None:
    """L1-closest reachable terminal point to the sample; None when none exists."""
    pp = PathProgram(g, path)
    M = pp.selector_matrix(selector)
    sample = np.asarray(sample, dtype=float).ravel()
    if sample.shape[0] != M.shape[0]:
        raise ValueError("sample dimension does not match the selector")
    prog = LinearProgram()
    cols = pp.install(prog)
    term = pp.terminal_cols(cols)
    for j in range(M.shape[0]):
        prog.add_abs_term(term, M[j], -sample[j], 1.0)
    res = prog.solve(method, counter)
    if res.status == LpStatus.INFEASIBLE:
        return None
    if res.status != LpStatus.OPTIMAL:
        raise SolverFailure(f"projection LP ended with status {res.status}")
    x_end = res.x[term]
    return M @ x_end


def trajectory_polytope(g: GcsProblem, path: Path) -> HPolyhedron:
    """All constraints along the path, stacked over the concatenated points."""
    pp = PathProgram(g, path)
    rows, rhs = [], []

    def place(A, cols):
        out = np.zeros((A.shape[0], pp.total_dim))
        out[:, cols] = A
        return out

    for vert, off, d in zip(pp.vertices, pp.offsets, pp.dims):
        cols = np.arange(off, off + d)
        rows.append(place(vert.set.A, cols))
        rhs.append(vert.set.b)
    for i, edge in enumerate(pp.edges):
        cols = np.concatenate(
            [
                np.arange(pp.offsets[i], pp.offsets[i] + pp.dims[i]),
                np.arange(pp.offsets[i + 1], pp.offsets[i + 1] + pp.dims[i + 1]),
            ]
        )
        if edge.constraint.num_rows:
            rows.append(place(edge.constraint.A, cols))
            rhs.append(edge.constraint.b)
    A = np.vstack(rows) if rows else np.zeros((0, pp.total_dim))
    b = np.concatenate(rhs) if rhs else np.zeros(0)
    return HPolyhedron(A, b)


def _terminal_map(pp: PathProgram, selector: np.ndarray | None, extra: int = 0) -> np.ndarray:
    """Rows selecting (selected terminal coords, trailing extras) of the lifted vector."""
    M = pp.selector_matrix(selector)
    p = M.shape[0]
    out = np.zeros((p + extra, pp.total_dim + extra))
    off = pp.offsets[-1]
    out[:p, off : off + pp.terminal_dim] = M
    for j in range(extra):
        out[p + j, pp.total_dim + j] = 1.0
    return out


def reachable_set(
    g: GcsProblem,
    path: Path,
    selector: np.ndarray | None = None,
    method: str | None = None,
    counter: SolveCounter | None = None,
) -> AHPolytope | None:
    """Terminal points attainable through the path, as an affine image.

    Equality constraints are eliminated by nullspace parameterization before
    projecting onto the (selected) terminal coordinates.  Returns None when
    the path carries no feasible trajectory at all.
    """
    pp = PathProgram(g, path)
    reduced = nullspace_reduce(pp.A_ub, pp.b_ub, pp.C, pp.d)
    if reduced is None:
        return None
    if chebyshev_center(reduced.base, method, counter) is None:
        return None
    M = _terminal_map(pp, selector)[:, : pp.total_dim]
    return AHPolytope(reduced.base, M @ reduced.T, M @ reduced.t)


def cost_epigraph(
    g: GcsProblem,
    path: Path,
    heuristic=None,
    selector: np.ndarray | None = None,
    method: str | None = None,
    counter: SolveCounter | None = None,
) -> AHPolytope | None:
    """Pairs (terminal point, bound) with the bound at least the path cost.

    The stacked system is lifted with one epigraph variable per L1 cost term
    plus the bound itself, then projected onto (selected terminal coords,
    bound).  With a heuristic, its shortcut relaxation is added to the bound;
    direct target-edge refinements do not appear in this polyhedral view.
    Returns None when the path is infeasible.
    """
    pp = PathProgram(g, path)

    shortcut = None
    if heuristic is not None:
        base, scale = _unwrap(heuristic)
        if not isinstance(base, ZeroHeuristic) and path[-1] != g.target:
            if not isinstance(base, ShortcutHeuristic):
                raise TypeError(f"cannot lift heuristic {base!r} into an epigraph")
            shortcut = _ShortcutRealization(g, path[-1], base, scale)

    term_entries = []  # (edge_index, k) with positive weight
    for i, edge in enumerate(pp.edges):
        for k in range(edge.cost.num_terms):
            if edge.cost.weights[k] > 0.0:
                term_entries.append((i, k))
    K = len(term_entries)
    H = 0
    h_weights = np.zeros(0)
    if shortcut is not None:
        h_weights = shortcut._weights()
        H = shortcut.target_set.dim + int(np.count_nonzero(h_weights))

    D = pp.total_dim
    W = D + K + 1 + H
    rows, rhs = [], []

    def pad(A, cols):
        out = np.zeros((A.shape[0], W))
        out[:, cols] = A
        return out

    if pp.A_ub.shape[0]:
        rows.append(pad(pp.A_ub, np.arange(D)))
        rhs.append(pp.b_ub)

    l_col = D + K
    epi_cols = [l_col]
    epi_coefs = [-1.0]
    const_total = sum(e.cost.c0 for e in pp.edges)

    for idx, (i, k) in enumerate(term_entries):
        edge = pp.edges[i]
        cols = np.concatenate(
            [
                np.arange(pp.offsets[i], pp.offsets[i] + pp.dims[i]),
                np.arange(pp.offsets[i + 1], pp.offsets[i + 1] + pp.dims[i + 1]),
            ]
        )
        y_col = D + idx
        a, b0 = edge.cost.rows[k], edge.cost.offsets[k]
        row = np.zeros(W)
        row[cols] = a
        row[y_col] = -1.0
        rows.append(row[None, :])
        rhs.append(np.array([-b0]))
        row = np.zeros(W)
        row[cols] = -a
        row[y_col] = -1.0
        rows.append(row[None, :])
        rhs.append(np.array([b0]))
        epi_cols.append(y_col)
        epi_coefs.append(edge.cost.weights[k])

    if shortcut is not None:
        xt_cols = np.arange(D + K + 1, D + K + 1 + shortcut.target_set.dim)
        ts = shortcut.target_set
        if ts.num_rows:
            rows.append(pad(ts.A, xt_cols))
            rhs.append(ts.b)
        term_off = pp.offsets[-1]
        y_idx = D + K + 1 + shortcut.target_set.dim
        const_total += shortcut.scale * shortcut.spec.mode_switch_constant
        for j in range(shortcut.P_v.shape[0]):
            if h_weights[j] == 0.0:
                continue
            row = np.zeros(W)
            row[term_off : term_off + pp.terminal_dim] = shortcut.P_v[j]
            row[xt_cols] = -shortcut.P_t[j]
            row[y_idx] = -1.0
            rows.append(row[None, :])
            rhs.append(np.array([0.0]))
            row = -row
            row[y_idx] = -1.0
            rows.append(row[None, :])
            rhs.append(np.array([0.0]))
            epi_cols.append(y_idx)
            epi_coefs.append(h_weights[j])
            y_idx += 1

    epi_row = np.zeros(W)
    epi_row[np.array(epi_cols)] = np.array(epi_coefs)
    rows.append(epi_row[None, :])
    rhs.append(np.array([-const_total]))

    A_lift = np.vstack(rows)
    b_lift = np.concatenate(rhs)
    C_lift = np.hstack([pp.C, np.zeros((pp.C.shape[0], W - D))])

    reduced = nullspace_reduce(A_lift, b_lift, C_lift, pp.d)
    if reduced is None:
        return None
    if chebyshev_center(reduced.base, method, counter) is None:
        return None
    Msel = pp.selector_matrix(selector)
    p = Msel.shape[0]
    M = np.zeros((p + 1, W))
    off = pp.offsets[-1]
    M[:p, off : off + pp.terminal_dim] = Msel
    M[p, l_col] = 1.0
    return AHPolytope(reduced.base, M @ reduced.T, M @ reduced.t)


def trajectory_cost(g: GcsProblem, path: Path, points) -> float:
    """Summed edge costs of the given points along the path (independent re-evaluation)."""
    pts = [np.asarray(p, dtype=float) for p in points]
    total = 0.0
    for i in range(len(path) - 1):
        total += g.edge(path[i], path[i + 1]).cost.evaluate(pts[i], pts[i + 1])
    return total


def trajectory_residual(g: GcsProblem, path: Path, points) -> float:
    """Worst constraint violation of the points along the path (<= 0 is clean)."""
    worst = -math.inf
    pts = [np.asarray(p, dtype=float) for p in points]
    for vid, x in zip(path, pts):
        P = g.vertex(vid).set
        if P.num_rows:
            worst = max(worst, float(np.max(P.A @ x - P.b)))
    for i in range(len(path) - 1):
        edge = g.edge(path[i], path[i + 1])
        if edge.constraint.num_rows:
            z = np.concatenate([pts[i], pts[i + 1]])
            worst = max(worst, float(np.max(edge.constraint.A @ z - edge.constraint.b)))
    return worst if worst > -math.inf else 0.0
