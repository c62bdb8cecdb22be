"""Explicit benchmark problems and randomized fixture generators.

Includes the stepping-stone hopping problems, the axis-aligned-hop
counterexample on which single-best-path pruning loses completeness, the
1-D domination scenario suite, and seeded random generators used by the
property and acceptance tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..gcs_core import EdgeCostL1, ExplicitGcs, equality_rows_constraint
from ..geometry import HPolyhedron


def polygon_to_hpolyhedron(vertices) -> HPolyhedron:
    """H-representation of a convex polygon given as CCW 2-D vertices."""
    pts = np.asarray(vertices, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
        raise ValueError("polygon needs at least three 2-D vertices")
    rows, rhs = [], []
    k = pts.shape[0]
    for i in range(k):
        p, q = pts[i], pts[(i + 1) % k]
        d = q - p
        n = np.array([d[1], -d[0]])
        norm = np.linalg.norm(n)
        if norm < 1e-12:
            raise ValueError("degenerate polygon edge")
        n /= norm
        rows.append(n)
        rhs.append(float(n @ p))
    A = np.array(rows)
    b = np.array(rhs)
    centroid = pts.mean(axis=0)
    if np.any(A @ centroid > b + 1e-9):
        raise ValueError("polygon vertices must be convex and counterclockwise")
    return HPolyhedron(A, b)


def _equal_coordinate_constraint(coord: int, dim: int) -> HPolyhedron:
    """Edge constraint x_u[coord] = x_v[coord] over the product space."""
    row = np.zeros((1, 2 * dim))
    row[0, coord] = 1.0
    row[0, dim + coord] = -1.0
    return equality_rows_constraint(row, np.zeros(1))


def make_fig3_counterexample() -> ExplicitGcs:
    """Five-region hopper where keeping one best path per vertex fails.

    Hops across (s,A), (s,B), (C,t) keep the x-coordinate fixed, hops across
    (A,C), (B,C) keep y fixed.  The through-A route is cheaper into C but
    lands on the part of the diagonal strip C from which t cannot be reached,
    so [s,A,C,t] is infeasible while the costlier [s,B,C,t] is feasible.
    """
    g = ExplicitGcs("s", "t")
    g.add_vertex("s", HPolyhedron.from_box([0.0, 0.0], [1.0, 1.0]))
    g.add_vertex("A", HPolyhedron.from_box([0.0, 2.0], [1.0, 3.0]))
    g.add_vertex("B", HPolyhedron.from_box([0.0, 4.0], [1.0, 5.0]))
    # diagonal strip: 2 <= y <= 5, |x - y| <= 0.25
    g.add_vertex(
        "C",
        HPolyhedron(
            np.array([[0.0, 1.0], [0.0, -1.0], [1.0, -1.0], [-1.0, 1.0]]),
            np.array([5.0, -2.0, 0.25, 0.25]),
        ),
    )
    g.add_vertex("t", HPolyhedron.from_box([4.0, 0.0], [5.0, 1.0]))
    cost = lambda: EdgeCostL1.l1_distance(2, c0=1.0)
    vertical = _equal_coordinate_constraint(0, 2)
    horizontal = _equal_coordinate_constraint(1, 2)
    g.add_edge("s", "A", cost(), vertical)
    g.add_edge("s", "B", cost(), vertical)
    g.add_edge("A", "C", cost(), horizontal)
    g.add_edge("B", "C", cost(), horizontal)
    g.add_edge("C", "t", cost(), vertical)
    return g


def make_stepping_stones(stones, adjacency, source_pt, target_pt, c0: float = 1.0) -> ExplicitGcs:
    """Hopping problem: one vertex per stone polygon, L1 hop costs, no coupling.

    adjacency lists directed id pairs over {"s", "t", "p0", "p1", ...}.
    """
    g = ExplicitGcs("s", "t")
    source_pt = np.asarray(source_pt, dtype=float)
    target_pt = np.asarray(target_pt, dtype=float)
    g.add_vertex("s", HPolyhedron.from_point(source_pt))
    g.add_vertex("t", HPolyhedron.from_point(target_pt))
    for i, stone in enumerate(stones):
        poly = stone if isinstance(stone, HPolyhedron) else polygon_to_hpolyhedron(stone)
        if poly.dim != source_pt.shape[0]:
            raise ValueError("stone dimension does not match the endpoints")
        g.add_vertex(f"p{i}", poly)
    dim = source_pt.shape[0]
    for u, v in adjacency:
        g.add_edge(u, v, EdgeCostL1.l1_distance(dim, c0=c0))
    return g


def make_stones4() -> ExplicitGcs:
    """Four overlapping rectangular stones with an upper and a lower route."""
    stones = [
        HPolyhedron.from_box([0.5, -1.0], [3.5, 1.0]),
        HPolyhedron.from_box([3.0, 0.5], [6.0, 2.0]),
        HPolyhedron.from_box([3.0, -2.0], [6.0, -0.5]),
        HPolyhedron.from_box([5.5, -1.0], [8.5, 1.0]),
    ]
    adjacency = [
        ("s", "p0"),
        ("p0", "p1"),
        ("p0", "p2"),
        ("p1", "p2"),
        ("p2", "p1"),
        ("p1", "p3"),
        ("p2", "p3"),
        ("p3", "t"),
    ]
    return make_stepping_stones(stones, adjacency, [0.0, 0.0], [9.0, 0.0])


@dataclass
class DominationScenario:
    """A candidate/frontier pair over a shared 1-D terminal vertex."""

    name: str
    problem: ExplicitGcs
    candidate: tuple
    frontier: list
    expected_rc: bool
    expected_rn: bool


def _branch_problem(branches) -> ExplicitGcs:
    """Point source, one interval vertex per branch, shared terminal interval.

    Each branch (lo, hi, k, w) reaches [lo, hi] of the terminal set with
    cost-to-come k + w * |x|.
    """
    g = ExplicitGcs("s", "E")
    g.add_vertex("s", HPolyhedron.from_point([0.0]))
    g.add_vertex("E", HPolyhedron.from_box([-4.0], [4.0]))
    hop = np.array([[-1.0, 1.0]])
    for name, (lo, hi, k, w) in branches.items():
        g.add_vertex(name, HPolyhedron.from_box([lo], [hi]))
        g.add_edge("s", name, EdgeCostL1(k / 2.0, np.array([w]), hop, np.zeros(1)))
        g.add_edge(
            name,
            "E",
            EdgeCostL1.constant(2, k / 2.0),
            equality_rows_constraint(np.array([[1.0, -1.0]]), np.zeros(1)),
        )
    return g


def make_domination_fixtures() -> list[DominationScenario]:
    """The five 1-D scenario classes with ground-truth (RC, RN) values.

    (a) single path dominates cost and reach everywhere -> (False, False)
    (b) candidate reaches an untouched interval          -> (True, True)
    (c) single path covers the reach, candidate cheaper  -> (True, False)
    (d) reach covered only collectively, cheaper spot    -> (True, False)
    (e) collectively covered and never cheaper           -> (False, False)
    """
    scenarios = []

    g = _branch_problem({"mc": (0.0, 1.0, 2.0, 1.0), "m1": (-2.0, 2.0, 1.0, 0.5)})
    scenarios.append(
        DominationScenario("a", g, ("s", "mc", "E"), [("s", "m1", "E")], False, False)
    )

    g = _branch_problem({"mc": (2.5, 3.5, 2.0, 1.0), "m1": (-2.0, 2.0, 1.0, 0.5)})
    scenarios.append(
        DominationScenario("b", g, ("s", "mc", "E"), [("s", "m1", "E")], True, True)
    )

    g = _branch_problem({"mc": (0.0, 1.0, 0.8, 0.5), "m1": (-2.0, 2.0, 1.0, 0.5)})
    scenarios.append(
        DominationScenario("c", g, ("s", "mc", "E"), [("s", "m1", "E")], True, False)
    )

    g = _branch_problem(
        {
            "mc": (-1.0, 1.0, 1.05, 0.1),
            "m1": (-2.0, 0.4, 1.0, 0.5),
            "m2": (0.3, 2.0, 1.0, 0.5),
        }
    )
    scenarios.append(
        DominationScenario(
            "d", g, ("s", "mc", "E"), [("s", "m1", "E"), ("s", "m2", "E")], True, False
        )
    )

    g = _branch_problem(
        {
            "mc": (-1.0, 1.0, 1.2, 0.1),
            "m1": (-2.0, 0.4, 0.5, 0.05),
            "m2": (0.3, 2.0, 0.5, 0.05),
        }
    )
    scenarios.append(
        DominationScenario(
            "e", g, ("s", "mc", "E"), [("s", "m1", "E"), ("s", "m2", "E")], False, False
        )
    )
    return scenarios


def random_explicit_problem(seed: int):
    """Small random solvable problem plus an admissible-heuristic recipe.

    A feasible chain is planted through random boxes; extra edges and
    box-coupling constraints are sprinkled on top.  Every edge cost carries
    per-coordinate L1 terms with weights >= 0.2 and a constant >= 0.5, so the
    shortcut heuristic with weight 0.2 on all coordinates and constant equal
    to the smallest edge constant is pointwise admissible.

    Returns (problem, heuristic_params) with heuristic_params a dict holding
    'mode_switch_constant'.
    """
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(1, 4))
    n = int(rng.integers(4, 7))
    anchors = rng.uniform(0.0, 4.0, size=(n, dim))
    radii = rng.uniform(0.4, 1.0, size=n)
    names = ["s"] + [f"v{i}" for i in range(1, n - 1)] + ["t"]
    g = ExplicitGcs("s", "t")
    for name, center, r in zip(names, anchors, radii):
        g.add_vertex(name, HPolyhedron.from_box(center - r, center + r))
        g.set_position_map(name, np.eye(dim), np.ones(dim, dtype=bool))

    min_c0 = np.inf
    edges = set()

    def add_edge(u, v, iu, iv, planted):
        nonlocal min_c0
        if u == v or (u, v) in edges:
            return
        c0 = float(rng.uniform(0.5, 1.5))
        min_c0 = min(min_c0, c0)
        weights = rng.uniform(0.2, 1.0, size=dim)
        rows = np.hstack([-np.eye(dim), np.eye(dim)])
        cost = EdgeCostL1(c0, weights, rows, np.zeros(dim))
        constraint = None
        if rng.random() < 0.4:
            j = int(rng.integers(dim))
            gap = abs(anchors[iu][j] - anchors[iv][j])
            rho = gap + rng.uniform(0.1, 1.0) if planted else float(rng.uniform(0.5, 2.5))
            row = np.zeros((1, 2 * dim))
            row[0, j], row[0, dim + j] = 1.0, -1.0
            constraint = HPolyhedron(np.vstack([row, -row]), np.array([rho, rho]))
        g.add_edge(u, v, cost, constraint)
        edges.add((u, v))

    for i in range(n - 1):
        add_edge(names[i], names[i + 1], i, i + 1, planted=True)
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < 0.25:
                add_edge(names[i], names[j], i, j, planted=False)

    return g, {"mode_switch_constant": float(min_c0)}


@dataclass
class BranchProfile:
    """Closed-form cost-to-come k + w * ||x||_1 over a box slice of the terminal set."""

    lo: np.ndarray
    hi: np.ndarray
    k: float
    w: float

    def cost(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if np.any(x < self.lo - 1e-12) or np.any(x > self.hi + 1e-12):
            return float("inf")
        return self.k + self.w * float(np.abs(x).sum())


def random_domination_instance(seed: int):
    """Random (problem, candidate, frontier paths, profiles) over a shared terminal box.

    Dimension is 1-3; every branch reaches a sub-box of the terminal set with
    the closed-form cost profile it was constructed from, mirroring the 1-D
    scenario construction.  Profiles are keyed by path for oracle use.
    """
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(1, 4))
    half = 4.0 if dim == 1 else (3.0 if dim == 2 else 2.0)
    n_alts = int(rng.integers(1, 4))
    g = ExplicitGcs("s", "E")
    g.add_vertex("s", HPolyhedron.from_point(np.zeros(dim)))
    g.add_vertex("E", HPolyhedron.from_box(-half * np.ones(dim), half * np.ones(dim)))
    names = ["mc"] + [f"m{i}" for i in range(1, n_alts + 1)]
    hop = np.hstack([-np.eye(dim), np.eye(dim)])
    profiles = {}
    cand_geom = None
    for name in names:
        center = rng.uniform(-0.55 * half, 0.55 * half, size=dim)
        r = rng.uniform(0.35 * half, 0.55 * half, size=dim)
        k = float(rng.uniform(0.5, 2.5))
        w = float(rng.uniform(0.05, 1.0))
        if name == "mc":
            cand_geom = (center, r, k, w)
        elif rng.random() < 0.35:
            # plant an alternate that dominates the candidate outright:
            # wider reach, lower constant, no steeper slope
            c0, r0, k0, w0 = cand_geom
            center = c0.copy()
            r = r0 + rng.uniform(0.05, 0.3 * half, size=dim)
            k = k0 * float(rng.uniform(0.3, 0.9))
            w = w0 * float(rng.uniform(0.3, 1.0))
        g.add_vertex(name, HPolyhedron.from_box(center - r, center + r))
        g.add_edge("s", name, EdgeCostL1(k / 2.0, np.full(dim, w), hop, np.zeros(dim)))
        rows = np.hstack([np.eye(dim), -np.eye(dim)])
        g.add_edge(
            name,
            "E",
            EdgeCostL1.constant(2 * dim, k / 2.0),
            equality_rows_constraint(rows, np.zeros(dim)),
        )
        profiles[("s", name, "E")] = BranchProfile(center - r, center + r, k, w)
    candidate = ("s", "mc", "E")
    frontier = [("s", name, "E") for name in names[1:]]
    return g, candidate, frontier, profiles
