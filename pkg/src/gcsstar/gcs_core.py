"""Graph-of-convex-sets data model and the implicit successor interface.

A problem is a directed graph whose vertices carry compact convex sets and
whose edges carry a constraint set over the product space plus an
L1-plus-constant cost.  Graphs are either explicit (stored adjacency) or
generated on demand through the same interface.
"""

from __future__ import annotations

import abc
import json
from dataclasses import dataclass

import numpy as np

from .geometry import (
    HPolyhedron,
    UnboundedSetError,
    bounding_box,
    chebyshev_center,
)

# Vertex ids are hashable and totally ordered within one problem (strings for
# explicit graphs, structured tuples for generated ones).
VertexId = object

Path = tuple  # tuple[VertexId, ...]


class UnknownVertexError(KeyError):
    pass


@dataclass(frozen=True, eq=False)
class GcsVertex:
    id: VertexId
    set: HPolyhedron

    @property
    def dim(self) -> int:
        return self.set.dim


@dataclass(frozen=True, eq=False)
class EdgeCostL1:
    """c(x_u, x_v) = c0 + sum_k w_k * |a_k . (x_u, x_v) + b_k| with w_k >= 0."""

    c0: float
    weights: np.ndarray  # (K,)
    rows: np.ndarray  # (K, du + dv)
    offsets: np.ndarray  # (K,)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        rows = np.asarray(self.rows, dtype=float)
        if rows.size == 0:
            rows = rows.reshape(0, rows.shape[1] if rows.ndim == 2 else 0)
        offs = np.asarray(self.offsets, dtype=float).reshape(-1)
        if not (len(w) == rows.shape[0] == len(offs)):
            raise ValueError("cost term arrays disagree on the number of terms")
        if np.any(w < 0):
            raise ValueError("cost term weights must be nonnegative")
        if self.c0 < 0:
            raise ValueError("constant cost term must be nonnegative")
        for arr in (w, rows, offs):
            arr.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "offsets", offs)

    @property
    def num_terms(self) -> int:
        return len(self.weights)

    def evaluate(self, x_u: np.ndarray, x_v: np.ndarray) -> float:
        z = np.concatenate([np.asarray(x_u, float).ravel(), np.asarray(x_v, float).ravel()])
        val = self.c0
        for k in range(self.num_terms):
            val += self.weights[k] * abs(float(self.rows[k] @ z) + self.offsets[k])
        return val

    @staticmethod
    def l1_distance(dim: int, c0: float = 1.0, weight: float = 1.0) -> "EdgeCostL1":
        """c0 + weight * ||x_v - x_u||_1 for same-dimension endpoints."""
        rows = np.hstack([-np.eye(dim), np.eye(dim)])
        return EdgeCostL1(c0, np.full(dim, weight), rows, np.zeros(dim))

    @staticmethod
    def constant(total_dim: int, c0: float) -> "EdgeCostL1":
        return EdgeCostL1(c0, np.zeros(0), np.zeros((0, total_dim)), np.zeros(0))

    def to_json(self) -> dict:
        return {
            "c0": self.c0,
            "terms": [
                {"w": float(self.weights[k]), "a": self.rows[k].tolist(), "b": float(self.offsets[k])}
                for k in range(self.num_terms)
            ],
        }

    @staticmethod
    def from_json(data: dict, total_dim: int) -> "EdgeCostL1":
        terms = data.get("terms", [])
        if terms:
            w = np.array([t["w"] for t in terms], dtype=float)
            rows = np.array([t["a"] for t in terms], dtype=float)
            offs = np.array([t.get("b", 0.0) for t in terms], dtype=float)
        else:
            w, rows, offs = np.zeros(0), np.zeros((0, total_dim)), np.zeros(0)
        return EdgeCostL1(float(data["c0"]), w, rows, offs)


@dataclass(frozen=True, eq=False)
class EdgeData:
    """Constraint set over (x_u, x_v) plus the edge cost.

    Equality constraints are encoded as paired +/- inequality rows so the
    constraint stays a plain H-polyhedron.
    """

    constraint: HPolyhedron
    cost: EdgeCostL1

    @property
    def total_dim(self) -> int:
        return self.constraint.dim


@dataclass
class Trajectory:
    """One point per path vertex, plus the summed edge cost."""

    points: tuple
    cost: float

    def __post_init__(self):
        self.points = tuple(np.asarray(p, dtype=float) for p in self.points)


def no_constraint(du: int, dv: int) -> HPolyhedron:
    return HPolyhedron(np.zeros((0, du + dv)), np.zeros(0))


def equality_rows_constraint(rows: np.ndarray, rhs: np.ndarray) -> HPolyhedron:
    """Encode rows . z = rhs as paired inequalities."""
    rows = np.asarray(rows, dtype=float)
    rhs = np.asarray(rhs, dtype=float).reshape(-1)
    return HPolyhedron(np.vstack([rows, -rows]), np.concatenate([rhs, -rhs]))


class GcsProblem(abc.ABC):
    """Successor-generated (possibly implicit) graph of convex sets."""

    @property
    @abc.abstractmethod
    def source(self) -> VertexId: ...

    @property
    @abc.abstractmethod
    def target(self) -> VertexId: ...

    @abc.abstractmethod
    def vertex(self, vid: VertexId) -> GcsVertex:
        """Vertex with its set; raises UnknownVertexError."""

    @abc.abstractmethod
    def successors(self, u: VertexId) -> list:
        """All (EdgeData, GcsVertex) pairs leaving u, sorted by successor id."""

    @abc.abstractmethod
    def edge(self, u: VertexId, v: VertexId) -> EdgeData:
        """Edge data for (u, v); raises KeyError when the edge does not exist."""

    def has_edge(self, u: VertexId, v: VertexId) -> bool:
        try:
            self.edge(u, v)
            return True
        except KeyError:
            return False

    def all_vertex_ids(self) -> list | None:
        """Every vertex id for explicit graphs; None when the graph is implicit."""
        return None

    def position_map(self, vid: VertexId):
        """(P, robot_mask) mapping a vertex point to shared position coordinates.

        Used by shortcut heuristics; the default identifies the point with its
        position and flags no coordinate as a robot's.
        """
        d = self.vertex(vid).dim
        return np.eye(d), np.zeros(d, dtype=bool)

    def domination_selector(self, vid: VertexId) -> np.ndarray | None:
        """Optional matrix narrowing domination checks to selected coordinates."""
        return None

    def default_max_path_len(self) -> int | None:
        return None


class ExplicitGcs(GcsProblem):
    """Graph with stored vertices and adjacency."""

    def __init__(self, source: VertexId, target: VertexId):
        self._vertices: dict = {}
        self._edges: dict = {}
        self._adjacency: dict = {}
        self._source = source
        self._target = target
        self._position_maps: dict = {}

    @property
    def source(self) -> VertexId:
        return self._source

    @property
    def target(self) -> VertexId:
        return self._target

    def add_vertex(self, vid: VertexId, polyhedron: HPolyhedron) -> None:
        if vid in self._vertices:
            raise ValueError(f"duplicate vertex {vid!r}")
        self._vertices[vid] = GcsVertex(vid, polyhedron)

    def add_edge(self, u: VertexId, v: VertexId, cost: EdgeCostL1, constraint: HPolyhedron | None = None) -> None:
        du, dv = self.vertex(u).dim, self.vertex(v).dim
        if constraint is None:
            constraint = no_constraint(du, dv)
        self._edges[(u, v)] = EdgeData(constraint, cost)
        self._adjacency.setdefault(u, []).append(v)

    def set_position_map(self, vid: VertexId, P: np.ndarray, robot_mask: np.ndarray) -> None:
        self._position_maps[vid] = (np.asarray(P, float), np.asarray(robot_mask, bool))

    def position_map(self, vid: VertexId):
        if vid in self._position_maps:
            return self._position_maps[vid]
        return super().position_map(vid)

    def vertex(self, vid: VertexId) -> GcsVertex:
        try:
            return self._vertices[vid]
        except KeyError:
            raise UnknownVertexError(vid) from None

    def successors(self, u: VertexId) -> list:
        if u not in self._vertices:
            raise UnknownVertexError(u)
        out = []
        for v in sorted(self._adjacency.get(u, [])):
            out.append((self._edges[(u, v)], self._vertices[v]))
        return out

    def edge(self, u: VertexId, v: VertexId) -> EdgeData:
        return self._edges[(u, v)]

    def all_vertex_ids(self) -> list:
        return sorted(self._vertices)

    def all_edges(self) -> list:
        return sorted(self._edges)

    def default_max_path_len(self) -> int | None:
        return 3 * len(self._vertices)

    def to_json(self) -> dict:
        return {
            "vertices": [
                {"id": vid, "A": v.set.A.tolist(), "b": v.set.b.tolist()}
                for vid, v in sorted(self._vertices.items())
            ],
            "edges": [
                {
                    "u": u,
                    "v": v,
                    "A_e": e.constraint.A.tolist(),
                    "b_e": e.constraint.b.tolist(),
                    "cost": e.cost.to_json(),
                }
                for (u, v), e in sorted(self._edges.items())
            ],
            "source": self._source,
            "target": self._target,
        }

    @staticmethod
    def from_json(data: dict) -> "ExplicitGcs":
        g = ExplicitGcs(data["source"], data["target"])
        for v in data["vertices"]:
            g.add_vertex(v["id"], HPolyhedron(np.array(v["A"], float), np.array(v["b"], float)))
        for e in data["edges"]:
            du = g.vertex(e["u"]).dim
            dv = g.vertex(e["v"]).dim
            A_e = np.array(e["A_e"], float).reshape(-1, du + dv) if e["A_e"] else np.zeros((0, du + dv))
            constraint = HPolyhedron(A_e, np.array(e["b_e"], float))
            cost = EdgeCostL1.from_json(e["cost"], du + dv)
            g.add_edge(e["u"], e["v"], cost, constraint)
        return g

    def save(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)

    @staticmethod
    def load(path: str) -> "ExplicitGcs":
        with open(path) as fh:
            return ExplicitGcs.from_json(json.load(fh))


def successors(g: GcsProblem, u: VertexId) -> list:
    """All (EdgeData, GcsVertex) pairs leaving u, in deterministic sorted order."""
    return g.successors(u)


def validate_problem(g: GcsProblem) -> list[str]:
    """Well-formedness report; an empty list means the problem is valid.

    Explicit graphs are swept completely; implicit graphs are checked at the
    source and target plus the source's outgoing edges.
    """
    violations: list[str] = []
    ids = g.all_vertex_ids()
    implicit = ids is None
    if implicit:
        ids = [g.source, g.target]
    for vid in (g.source, g.target):
        try:
            g.vertex(vid)
        except UnknownVertexError:
            violations.append(f"vertex {vid!r} (source/target) is not in the graph")
            return violations

    for vid in ids:
        vert = g.vertex(vid)
        cheb = chebyshev_center(vert.set)
        if cheb is None:
            violations.append(f"vertex {vid!r} has an empty set")
            continue
        try:
            bounding_box(vert.set)
        except UnboundedSetError:
            violations.append(f"vertex {vid!r} has an unbounded set")

    if implicit:
        edge_list = [(g.source, v.id, e) for e, v in g.successors(g.source)]
    else:
        edge_list = [(u, v, g.edge(u, v)) for (u, v) in g.all_edges()]
    for u, v, e in edge_list:
        du, dv = g.vertex(u).dim, g.vertex(v).dim
        if e.constraint.dim != du + dv:
            violations.append(
                f"edge ({u!r},{v!r}) constraint has dimension {e.constraint.dim}, expected {du + dv}"
            )
        if e.cost.num_terms and e.cost.rows.shape[1] != du + dv:
            violations.append(f"edge ({u!r},{v!r}) cost terms have the wrong dimension")
        if v != g.target and e.cost.c0 <= 0.0:
            violations.append(f"edge ({u!r},{v!r}) cost is not bounded away from zero")
    return violations
