"""Cost-to-go heuristics: zero, shortcut-edge, and epsilon-inflated variants.

A heuristic is evaluated pointwise (evaluate_heuristic) and also contributes
terms to restriction LPs.  Both views go through "realizations": each
realization is one convex piece of the heuristic, and the heuristic value is
the minimum over realizations.  The shortcut heuristic has one realization
for the relaxed shortcut edge and, when the graph has a direct edge to the
target, a second one carrying that edge's true cost and constraints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gcs_core import GcsProblem, VertexId
from .lp import LinearProgram, LpStatus, SolveCounter, SolverFailure


@dataclass(frozen=True)
class ZeroHeuristic:
    pass


@dataclass(frozen=True)
class ShortcutHeuristic:
    """Cost of a relaxed edge from the current point to the best target point.

    Position coordinates flagged as a robot's are weighted by robot_weight;
    all others by 1.  When target_point_free is False the target point must
    additionally satisfy the direct target edge's constraint set (where such
    an edge exists), pinning it instead of leaving it free.
    """

    target_point_free: bool = True
    robot_weight: float = 0.2
    mode_switch_constant: float = 1.0


@dataclass(frozen=True)
class InflatedHeuristic:
    inner: object
    epsilon: float

    def __post_init__(self):
        if self.epsilon < 1.0:
            raise ValueError("inflation factor must be >= 1")


HEURISTIC_KEYS = ("zero", "shortcut", "shortcut-inflated")


def heuristic_from_key(key: str, epsilon: float = 10.0, robot_weight: float = 0.2):
    if key == "zero":
        return ZeroHeuristic()
    if key == "shortcut":
        return ShortcutHeuristic(robot_weight=robot_weight)
    if key == "shortcut-inflated":
        return InflatedHeuristic(ShortcutHeuristic(robot_weight=robot_weight), epsilon)
    raise ValueError(f"unknown heuristic key {key!r}")


def _unwrap(spec) -> tuple[object, float]:
    scale = 1.0
    while isinstance(spec, InflatedHeuristic):
        scale *= spec.epsilon
        spec = spec.inner
    return spec, scale


class _ZeroRealization:
    def install(self, prog: LinearProgram, x_end_cols: np.ndarray):
        return lambda sol: 0.0


class _ShortcutRealization:
    def __init__(self, g: GcsProblem, v_end: VertexId, spec: ShortcutHeuristic, scale: float):
        self.g = g
        self.spec = spec
        self.scale = scale
        self.P_v, self.robot_mask = g.position_map(v_end)
        self.P_t, _ = g.position_map(g.target)
        if self.P_v.shape[0] != self.P_t.shape[0]:
            raise ValueError(
                "shortcut heuristic needs matching position spaces at the vertex and target"
            )
        self.target_set = g.vertex(g.target).set
        self.edge = None
        if not spec.target_point_free and g.has_edge(v_end, g.target):
            self.edge = g.edge(v_end, g.target)

    def _weights(self) -> np.ndarray:
        w = np.where(self.robot_mask, self.spec.robot_weight, 1.0)
        return w * self.scale

    def install(self, prog: LinearProgram, x_end_cols: np.ndarray):
        xt = prog.new_block(self.target_set.dim)
        prog.add_matrix_ineq(self.target_set.A, xt, self.target_set.b)
        if self.edge is not None:
            cols = np.concatenate([x_end_cols, xt])
            prog.add_matrix_ineq(self.edge.constraint.A, cols, self.edge.constraint.b)
        weights = self._weights()
        for j in range(self.P_v.shape[0]):
            if weights[j] == 0.0:
                continue
            cols = np.concatenate([x_end_cols, xt])
            coefs = np.concatenate([self.P_v[j], -self.P_t[j]])
            prog.add_abs_term(cols, coefs, 0.0, weights[j])
        prog.obj_const += self.scale * self.spec.mode_switch_constant

        def evaluate(sol: np.ndarray) -> float:
            x = sol[x_end_cols]
            xt_val = sol[xt]
            diff = self.P_v @ x - self.P_t @ xt_val
            return float(self.scale * self.spec.mode_switch_constant + weights @ np.abs(diff))

        return evaluate


class _DirectEdgeRealization:
    """True cost of the existing edge from the vertex into the target."""

    def __init__(self, g: GcsProblem, v_end: VertexId, scale: float):
        self.edge = g.edge(v_end, g.target)
        self.target_set = g.vertex(g.target).set
        self.scale = scale

    def install(self, prog: LinearProgram, x_end_cols: np.ndarray):
        xt = prog.new_block(self.target_set.dim)
        prog.add_matrix_ineq(self.target_set.A, xt, self.target_set.b)
        cols = np.concatenate([x_end_cols, xt])
        prog.add_matrix_ineq(self.edge.constraint.A, cols, self.edge.constraint.b)
        cost = self.edge.cost
        for k in range(cost.num_terms):
            w = cost.weights[k] * self.scale
            if w == 0.0:
                continue
            prog.add_abs_term(cols, cost.rows[k], cost.offsets[k], w)
        prog.obj_const += self.scale * cost.c0

        def evaluate(sol: np.ndarray) -> float:
            return float(self.scale * cost.evaluate(sol[x_end_cols], sol[xt]))

        return evaluate


def heuristic_realizations(g: GcsProblem, spec, v_end: VertexId) -> list:
    """Convex pieces whose pointwise minimum is the heuristic at v_end.

    The zero heuristic (and any heuristic evaluated on the target vertex,
    where admissibility forces 0) yields the single zero realization.  The
    order is deterministic: the relaxed shortcut piece first, then the direct
    target edge piece when that edge exists.
    """
    spec = ZeroHeuristic() if spec is None else spec
    base, scale = _unwrap(spec)
    if isinstance(base, ZeroHeuristic) or v_end == g.target:
        return [_ZeroRealization()]
    if isinstance(base, ShortcutHeuristic):
        out = [_ShortcutRealization(g, v_end, base, scale)]
        if base.target_point_free and g.has_edge(v_end, g.target):
            out.append(_DirectEdgeRealization(g, v_end, scale))
        return out
    raise TypeError(f"unknown heuristic spec {base!r}")


def evaluate_heuristic(
    g: GcsProblem,
    spec,
    vertex: VertexId,
    x,
    method: str | None = None,
    counter: SolveCounter | None = None,
) -> float:
    """Pointwise heuristic value at x in the vertex's set."""
    x = np.asarray(x, dtype=float).ravel()
    best = math.inf
    for realization in heuristic_realizations(g, spec, vertex):
        if isinstance(realization, _ZeroRealization):
            return 0.0
        prog = LinearProgram()
        xcols = prog.new_block(len(x))
        prog.add_matrix_eq(np.eye(len(x)), xcols, x)
        evaluate = realization.install(prog, xcols)
        res = prog.solve(method, counter)
        if res.status == LpStatus.OPTIMAL:
            best = min(best, evaluate(res.x))
        elif res.status != LpStatus.INFEASIBLE:
            raise SolverFailure("heuristic evaluation LP failed")
    return best
