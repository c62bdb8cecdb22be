"""Translation-only planar pushing as an implicit graph of convex sets.

Bodies are convex polygons that translate without rotating.  A contact mode
assigns, per body pair, either a separating face (no contact) or a touching
feature pair (face-face or face-vertex) with a nonnegative normal force
magnitude.  Motion is quasi-static: between the two knot points of a vertex,
each body's translation is proportional to the net force on it (contact
forces act along face normals; robots add a bounded actuation force).
Vertices and edges are composed on demand, so the graph is never built
explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..gcs_core import EdgeCostL1, EdgeData, GcsProblem, GcsVertex, UnknownVertexError
from ..geometry import HPolyhedron


@dataclass(frozen=True, eq=False)
class Face:
    normal: np.ndarray  # unit outward, body-local == world (no rotation)
    offset: float  # normal . x = offset on the face line, body frame
    tangent: np.ndarray
    t_lo: float  # face segment extent along the tangent, body frame
    t_hi: float


@dataclass(frozen=True, eq=False)
class BodySpec:
    """Convex CCW polygon that may translate (movable) and push (actuated).

    Static bodies (movable=False) must carry their fixed world position.
    """

    name: str
    polygon: np.ndarray
    movable: bool = True
    actuated: bool = False
    position: tuple | None = None

    def __post_init__(self):
        pts = np.asarray(self.polygon, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
            raise ValueError(f"body {self.name!r} needs at least three 2-D vertices")
        pts.flags.writeable = False
        object.__setattr__(self, "polygon", pts)
        faces = []
        k = pts.shape[0]
        for i in range(k):
            p, q = pts[i], pts[(i + 1) % k]
            d = q - p
            n = np.array([d[1], -d[0]])
            norm = np.linalg.norm(n)
            if norm < 1e-12:
                raise ValueError(f"body {self.name!r} has a degenerate edge")
            n /= norm
            tau = d / np.linalg.norm(d)
            lo, hi = sorted((float(tau @ p), float(tau @ q)))
            faces.append(Face(n, float(n @ p), tau, lo, hi))
        centroid = pts.mean(axis=0)
        for f in faces:
            if f.normal @ centroid > f.offset - 1e-12:
                raise ValueError(f"body {self.name!r} must be convex and counterclockwise")
        object.__setattr__(self, "faces", tuple(faces))
        if not self.movable and self.position is None:
            raise ValueError(f"static body {self.name!r} needs a fixed position")

    @property
    def num_faces(self) -> int:
        return self.polygon.shape[0]

    @property
    def num_vertices(self) -> int:
        return self.polygon.shape[0]


# Pair entries: ("sep", owner, face) with owner in {0, 1} indexing the sorted
# pair, ("ff", face_of_first, face_of_second), ("fv", owner, face, vertex).
@dataclass(frozen=True, order=True)
class ContactModeKey:
    entries: tuple

    def is_contacting(self, pair_idx: int) -> bool:
        return self.entries[pair_idx][0] in ("ff", "fv")


def _entry_id(entry) -> str:
    if entry[0] == "sep":
        return f"sep[{entry[1]}]{entry[2]}"
    if entry[0] == "ff":
        return f"ff[{entry[1]},{entry[2]}]"
    return f"fv[{entry[1]}]{entry[2]},{entry[3]}"


def mode_id(key: ContactModeKey) -> str:
    return "|".join(_entry_id(e) for e in key.entries)


def _parse_entry(text: str):
    tag, rest = text.split("[", 1)
    inside, tail = rest.split("]", 1)
    if tag == "sep":
        return ("sep", int(inside), int(tail))
    if tag == "ff":
        a, b = inside.split(",")
        return ("ff", int(a), int(b))
    if tag == "fv":
        f, v = tail.split(",")
        return ("fv", int(inside), int(f), int(v))
    raise ValueError(f"bad mode entry {text!r}")


def parse_mode_id(text: str) -> ContactModeKey:
    return ContactModeKey(tuple(_parse_entry(part) for part in text.split("|")))


@dataclass
class ModeLayout:
    """Variable indexing for one mode's set: positions per knot, actuation,
    one force magnitude per contacting pair."""

    movable: list
    robots: list
    lam_pairs: list
    dim: int = 0

    def __post_init__(self):
        n_m = len(self.movable)
        self.n_m = n_m
        self._act_start = 4 * n_m
        self._lam_start = 4 * n_m + 2 * len(self.robots)
        self.dim = self._lam_start + len(self.lam_pairs)

    def pos(self, body_idx: int, knot: int) -> np.ndarray:
        m = self.movable.index(body_idx)
        start = 2 * m + knot * 2 * self.n_m
        return np.arange(start, start + 2)

    def act(self, body_idx: int) -> np.ndarray:
        r = self.robots.index(body_idx)
        return np.arange(self._act_start + 2 * r, self._act_start + 2 * r + 2)

    def lam(self, pair_idx: int) -> int:
        return self._lam_start + self.lam_pairs.index(pair_idx)

    def last_position_selector(self) -> np.ndarray:
        P = np.zeros((2 * self.n_m, self.dim))
        P[:, 2 * self.n_m : 4 * self.n_m] = np.eye(2 * self.n_m)
        return P


class PushingModel:
    """Geometry, mode lattice, set and edge construction shared by problems."""

    def __init__(
        self,
        bodies,
        workspace: HPolyhedron,
        mu: float = 1.0,
        force_max: float = 20.0,
        actuation_max: float = 20.0,
    ):
        self.bodies = list(bodies)
        if workspace.dim != 2:
            raise ValueError("workspace must be a 2-D polyhedron")
        self.workspace = workspace
        self.mu = mu
        self.force_max = force_max
        self.actuation_max = actuation_max
        self.movable = [i for i, b in enumerate(self.bodies) if b.movable]
        self.robots = [i for i in self.movable if self.bodies[i].actuated]
        self.objects = [i for i in self.movable if not self.bodies[i].actuated]
        if not self.movable:
            raise ValueError("need at least one movable body")
        self.pairs = [
            (i, j)
            for i in range(len(self.bodies))
            for j in range(i + 1, len(self.bodies))
            if self.bodies[i].movable or self.bodies[j].movable
        ]
        self._set_cache: dict = {}

    # ---- mode lattice ----

    def pair_options(self, pair_idx: int) -> list:
        i, j = self.pairs[pair_idx]
        bi, bj = self.bodies[i], self.bodies[j]
        options = []
        for f in range(bi.num_faces):
            options.append(("sep", 0, f))
        for f in range(bj.num_faces):
            options.append(("sep", 1, f))
        for fa in range(bi.num_faces):
            for fb in range(bj.num_faces):
                options.append(("ff", fa, fb))
        for f in range(bi.num_faces):
            for v in range(bj.num_vertices):
                options.append(("fv", 0, f, v))
        for f in range(bj.num_faces):
            for v in range(bi.num_vertices):
                options.append(("fv", 1, f, v))
        return options

    def successor_keys(self, key: ContactModeKey) -> list:
        out = []
        for p_idx in range(len(self.pairs)):
            current = key.entries[p_idx]
            for option in self.pair_options(p_idx):
                if option == current:
                    continue
                entries = list(key.entries)
                entries[p_idx] = option
                out.append(ContactModeKey(tuple(entries)))
        return out

    def layout(self, key: ContactModeKey) -> ModeLayout:
        lam_pairs = [p for p in range(len(self.pairs)) if key.is_contacting(p)]
        return ModeLayout(list(self.movable), list(self.robots), lam_pairs)

    # ---- set construction ----

    def _accum(self, coef, const, lay, body_idx, knot, vec):
        """Add vec . p_body(knot) to a row; static positions fold into the constant."""
        body = self.bodies[body_idx]
        if body.movable:
            coef[lay.pos(body_idx, knot)] += vec
            return const
        return const + float(np.asarray(vec) @ np.asarray(body.position, dtype=float))

    def vertex_set(self, key: ContactModeKey) -> HPolyhedron:
        if key in self._set_cache:
            return self._set_cache[key]
        lay = self.layout(key)
        A_rows, b_vals = [], []
        eq_rows, eq_vals = [], []

        def add_ineq(coef, ub):
            A_rows.append(coef)
            b_vals.append(float(ub))

        def add_eq(coef, rhs):
            eq_rows.append(coef)
            eq_vals.append(float(rhs))

        W = self.workspace
        for b_idx in self.movable:
            for knot in (0, 1):
                cols = lay.pos(b_idx, knot)
                for r in range(W.num_rows):
                    coef = np.zeros(lay.dim)
                    coef[cols] = W.A[r]
                    add_ineq(coef, W.b[r])
        for r_idx in self.robots:
            cols = lay.act(r_idx)
            for c in cols:
                coef = np.zeros(lay.dim)
                coef[c] = 1.0
                add_ineq(coef, self.actuation_max)
                coef = np.zeros(lay.dim)
                coef[c] = -1.0
                add_ineq(coef, self.actuation_max)
        for p_idx in lay.lam_pairs:
            c = lay.lam(p_idx)
            coef = np.zeros(lay.dim)
            coef[c] = -1.0
            add_ineq(coef, 0.0)
            coef = np.zeros(lay.dim)
            coef[c] = 1.0
            add_ineq(coef, self.force_max)

        for p_idx, entry in enumerate(key.entries):
            i, j = self.pairs[p_idx]
            if entry[0] == "sep":
                owner = i if entry[1] == 0 else j
                other = j if owner == i else i
                face = self.bodies[owner].faces[entry[2]]
                n, d = face.normal, face.offset
                for knot in (0, 1):
                    for w in self.bodies[other].polygon:
                        # n.(p_other + w) >= n.p_owner + d
                        coef = np.zeros(lay.dim)
                        const = self._accum(coef, 0.0, lay, owner, knot, n)
                        const = self._accum(coef, const, lay, other, knot, -n)
                        add_ineq(coef, float(n @ w) - d - const)
            elif entry[0] == "ff":
                face = self.bodies[i].faces[entry[1]]
                n, d, tau = face.normal, face.offset, face.tangent
                other_face = entry[2]
                poly_j = self.bodies[j].polygon
                w1 = poly_j[other_face]
                w2 = poly_j[(other_face + 1) % len(poly_j)]
                b_lo, b_hi = sorted((float(tau @ w1), float(tau @ w2)))
                for knot in (0, 1):
                    for w in (w1, w2):
                        # face of j lies on the face line of i
                        coef = np.zeros(lay.dim)
                        const = self._accum(coef, 0.0, lay, j, knot, n)
                        const = self._accum(coef, const, lay, i, knot, -n)
                        add_eq(coef, d - float(n @ w) - const)
                    # the rest of j stays outside the face line (empties the
                    # mode when the chosen faces cannot be antiparallel)
                    for v_idx, w in enumerate(poly_j):
                        if v_idx in (other_face, (other_face + 1) % len(poly_j)):
                            continue
                        coef = np.zeros(lay.dim)
                        const = self._accum(coef, 0.0, lay, i, knot, n)
                        const = self._accum(coef, const, lay, j, knot, -n)
                        add_ineq(coef, float(n @ w) - d - const)
                    # tangential overlap of the two segments
                    coef = np.zeros(lay.dim)
                    const = self._accum(coef, 0.0, lay, i, knot, tau)
                    const = self._accum(coef, const, lay, j, knot, -tau)
                    add_ineq(coef, b_hi - face.t_lo - const)
                    coef = np.zeros(lay.dim)
                    const = self._accum(coef, 0.0, lay, j, knot, tau)
                    const = self._accum(coef, const, lay, i, knot, -tau)
                    add_ineq(coef, face.t_hi - b_lo - const)
            else:  # fv
                owner = i if entry[1] == 0 else j
                other = j if owner == i else i
                face = self.bodies[owner].faces[entry[2]]
                n, d, tau = face.normal, face.offset, face.tangent
                verts = self.bodies[other].polygon
                w = verts[entry[3]]
                for knot in (0, 1):
                    coef = np.zeros(lay.dim)
                    const = self._accum(coef, 0.0, lay, other, knot, n)
                    const = self._accum(coef, const, lay, owner, knot, -n)
                    add_eq(coef, d - float(n @ w) - const)
                    # vertex stays within the face segment
                    coef = np.zeros(lay.dim)
                    const = self._accum(coef, 0.0, lay, other, knot, tau)
                    const = self._accum(coef, const, lay, owner, knot, -tau)
                    add_ineq(coef, face.t_hi - float(tau @ w) - const)
                    coef = np.zeros(lay.dim)
                    const = self._accum(coef, 0.0, lay, owner, knot, tau)
                    const = self._accum(coef, const, lay, other, knot, -tau)
                    add_ineq(coef, float(tau @ w) - face.t_lo - const)
                    # remaining vertices stay outside the face line
                    for v_idx, w_other in enumerate(verts):
                        if v_idx == entry[3]:
                            continue
                        coef = np.zeros(lay.dim)
                        const = self._accum(coef, 0.0, lay, owner, knot, n)
                        const = self._accum(coef, const, lay, other, knot, -n)
                        add_ineq(coef, float(n @ w_other) - d - const)

        # quasi-static translation: p1 - p0 = mu * (net force)
        for b_idx in self.movable:
            for axis in range(2):
                coef = np.zeros(lay.dim)
                coef[lay.pos(b_idx, 1)[axis]] += 1.0
                coef[lay.pos(b_idx, 0)[axis]] -= 1.0
                if b_idx in self.robots:
                    coef[lay.act(b_idx)[axis]] -= self.mu
                for p_idx in lay.lam_pairs:
                    entry = key.entries[p_idx]
                    i, j = self.pairs[p_idx]
                    if b_idx not in (i, j):
                        continue
                    if entry[0] == "ff":
                        owner = i
                    else:
                        owner = i if entry[1] == 0 else j
                    normal = (
                        self.bodies[owner].faces[entry[1] if entry[0] == "ff" else entry[2]].normal
                    )
                    sign = -1.0 if b_idx == owner else 1.0
                    coef[lay.lam(p_idx)] -= self.mu * sign * normal[axis]
                add_eq(coef, 0.0)

        rows = A_rows + eq_rows + [-r for r in eq_rows]
        rhs = b_vals + eq_vals + [-v for v in eq_vals]
        result = HPolyhedron(np.array(rows), np.array(rhs))
        self._set_cache[key] = result
        return result

    def mode_edge(self, key_u: ContactModeKey, key_v: ContactModeKey, move_weights: dict | None = None) -> EdgeData:
        """Continuity constraint plus switch-and-move cost for a mode change."""
        if sum(a != b for a, b in zip(key_u.entries, key_v.entries)) != 1:
            raise KeyError((key_u, key_v))
        lay_u, lay_v = self.layout(key_u), self.layout(key_v)
        du, dv = lay_u.dim, lay_v.dim
        n_m = lay_u.n_m
        rows = np.zeros((2 * n_m, du + dv))
        for b_idx in self.movable:
            m = self.movable.index(b_idx)
            cols_u = lay_u.pos(b_idx, 1)
            cols_v = lay_v.pos(b_idx, 0)
            for axis in range(2):
                r = 2 * m + axis
                rows[r, cols_u[axis]] = 1.0
                rows[r, du + cols_v[axis]] = -1.0
        constraint = HPolyhedron(np.vstack([rows, -rows]), np.zeros(4 * n_m))
        move_weights = move_weights or {}
        weights, cost_rows = [], []
        for b_idx in self.movable:
            w = float(move_weights.get(self.bodies[b_idx].name, 1.0))
            cols0 = lay_v.pos(b_idx, 0)
            cols1 = lay_v.pos(b_idx, 1)
            for axis in range(2):
                row = np.zeros(du + dv)
                row[du + cols1[axis]] = 1.0
                row[du + cols0[axis]] = -1.0
                cost_rows.append(row)
                weights.append(w)
        cost = EdgeCostL1(1.0, np.array(weights), np.array(cost_rows), np.zeros(len(weights)))
        return EdgeData(constraint, cost)

    def start_entry_valid(self, pair_idx: int, entry, positions: dict) -> bool:
        """Purely geometric test of one pair entry at pinned positions."""
        i, j = self.pairs[pair_idx]

        def world(b_idx):
            body = self.bodies[b_idx]
            pos = positions[body.name] if body.movable else body.position
            return np.asarray(pos, dtype=float)

        tol = 1e-9
        if entry[0] == "sep":
            owner = i if entry[1] == 0 else j
            other = j if owner == i else i
            face = self.bodies[owner].faces[entry[2]]
            line = face.normal @ world(owner) + face.offset
            return bool(
                np.all(self.bodies[other].polygon @ face.normal + face.normal @ world(other) >= line - tol)
            )
        if entry[0] == "ff":
            face = self.bodies[i].faces[entry[1]]
            poly_j = self.bodies[j].polygon
            w1 = poly_j[entry[2]]
            w2 = poly_j[(entry[2] + 1) % len(poly_j)]
            line = face.normal @ world(i) + face.offset
            on_line = all(
                abs(face.normal @ (world(j) + w) - line) <= tol for w in (w1, w2)
            ) and all(
                face.normal @ (world(j) + w) >= line - tol for w in poly_j
            )
            b_lo, b_hi = sorted((float(face.tangent @ w1), float(face.tangent @ w2)))
            lo_i = face.tangent @ world(i) + face.t_lo
            hi_i = face.tangent @ world(i) + face.t_hi
            lo_j = face.tangent @ world(j) + b_lo
            hi_j = face.tangent @ world(j) + b_hi
            return on_line and max(lo_i, lo_j) <= min(hi_i, hi_j) + tol
        owner = i if entry[1] == 0 else j
        other = j if owner == i else i
        face = self.bodies[owner].faces[entry[2]]
        w = self.bodies[other].polygon[entry[3]]
        line = face.normal @ world(owner) + face.offset
        value = face.normal @ (world(other) + w)
        if abs(value - line) > tol:
            return False
        beta = face.tangent @ (world(other) + w) - face.tangent @ world(owner)
        if not (face.t_lo - tol <= beta <= face.t_hi + tol):
            return False
        others = [
            face.normal @ (world(other) + wp) >= line - tol
            for v_idx, wp in enumerate(self.bodies[other].polygon)
            if v_idx != entry[3]
        ]
        return all(others)

    def find_start_mode(self, positions: dict) -> ContactModeKey:
        entries = []
        for p_idx in range(len(self.pairs)):
            chosen = None
            for option in self.pair_options(p_idx):
                if self.start_entry_valid(p_idx, option, positions):
                    chosen = option
                    break
            if chosen is None:
                i, j = self.pairs[p_idx]
                raise ValueError(
                    f"no mode contains the start configuration for pair "
                    f"({self.bodies[i].name}, {self.bodies[j].name})"
                )
            entries.append(chosen)
        return ContactModeKey(tuple(entries))


class PushingGcs(GcsProblem):
    """Implicit pushing problem: mode vertices plus 'source' and 'target'."""

    def __init__(
        self,
        model: PushingModel,
        start_positions: dict,
        goal_region: HPolyhedron,
        move_weights: dict | None = None,
    ):
        self.model = model
        self.start_positions = {k: np.asarray(v, dtype=float) for k, v in start_positions.items()}
        for b_idx in model.movable:
            if model.bodies[b_idx].name not in self.start_positions:
                raise ValueError(f"missing start position for {model.bodies[b_idx].name!r}")
        if goal_region.dim != 2 * len(model.objects):
            raise ValueError("goal region dimension must cover all object positions")
        self.goal_region = goal_region
        self.move_weights = move_weights or {}
        self.start_mode = model.find_start_mode(self.start_positions)
        self._vertex_cache: dict = {}

    @property
    def source(self) -> str:
        return "source"

    @property
    def target(self) -> str:
        return "target"

    def _mode_key(self, vid: str) -> ContactModeKey:
        if vid == "source":
            return self.start_mode
        return parse_mode_id(vid)

    def _target_set(self) -> HPolyhedron:
        n_m = len(self.model.movable)
        rows, rhs = [], []
        W = self.model.workspace
        for m in range(n_m):
            block = np.zeros((W.num_rows, 2 * n_m))
            block[:, 2 * m : 2 * m + 2] = W.A
            rows.append(block)
            rhs.append(W.b)
        obj_cols = []
        for b_idx in self.model.objects:
            m = self.model.movable.index(b_idx)
            obj_cols.extend([2 * m, 2 * m + 1])
        G = np.zeros((self.goal_region.num_rows, 2 * n_m))
        G[:, obj_cols] = self.goal_region.A
        rows.append(G)
        rhs.append(self.goal_region.b)
        return HPolyhedron(np.vstack(rows), np.concatenate(rhs))

    def vertex(self, vid: str) -> GcsVertex:
        if vid in self._vertex_cache:
            return self._vertex_cache[vid]
        if vid == "target":
            vert = GcsVertex(vid, self._target_set())
        elif vid == "source":
            base = self.model.vertex_set(self.start_mode)
            lay = self.model.layout(self.start_mode)
            pins, vals = [], []
            for b_idx in self.model.movable:
                cols = lay.pos(b_idx, 0)
                start = self.start_positions[self.model.bodies[b_idx].name]
                for axis in range(2):
                    row = np.zeros(lay.dim)
                    row[cols[axis]] = 1.0
                    pins.append(row)
                    vals.append(start[axis])
            pins = np.array(pins)
            vals = np.array(vals)
            A = np.vstack([base.A, pins, -pins])
            b = np.concatenate([base.b, vals, -vals])
            vert = GcsVertex(vid, HPolyhedron(A, b))
        else:
            try:
                key = parse_mode_id(vid)
            except (ValueError, IndexError):
                raise UnknownVertexError(vid) from None
            vert = GcsVertex(vid, self.model.vertex_set(key))
        self._vertex_cache[vid] = vert
        return vert

    def successors(self, u: str) -> list:
        if u == "target":
            return []
        key = self._mode_key(u)
        ids = [mode_id(k) for k in self.model.successor_keys(key)] + ["target"]
        return [(self.edge(u, vid), self.vertex(vid)) for vid in sorted(ids)]

    def edge(self, u: str, v: str) -> EdgeData:
        if u == "target" or v == "source":
            raise KeyError((u, v))
        key_u = self._mode_key(u)
        if v == "target":
            lay_u = self.model.layout(key_u)
            du = lay_u.dim
            n_m = lay_u.n_m
            dv = 2 * n_m
            rows = np.zeros((dv, du + dv))
            for b_idx in self.model.movable:
                m = self.model.movable.index(b_idx)
                cols_u = lay_u.pos(b_idx, 1)
                for axis in range(2):
                    r = 2 * m + axis
                    rows[r, cols_u[axis]] = 1.0
                    rows[r, du + 2 * m + axis] = -1.0
            constraint = HPolyhedron(np.vstack([rows, -rows]), np.zeros(2 * rows.shape[0]))
            return EdgeData(constraint, EdgeCostL1.constant(du + dv, 0.0))
        return self.model.mode_edge(key_u, self._mode_key(v), self.move_weights)

    def has_edge(self, u: str, v: str) -> bool:
        try:
            self.edge(u, v)
            return True
        except KeyError:
            return False

    def position_map(self, vid: str):
        n_m = len(self.model.movable)
        robot_mask = np.zeros(2 * n_m, dtype=bool)
        for b_idx in self.model.robots:
            m = self.model.movable.index(b_idx)
            robot_mask[2 * m : 2 * m + 2] = True
        if vid == "target":
            return np.eye(2 * n_m), robot_mask
        lay = self.model.layout(self._mode_key(vid))
        return lay.last_position_selector(), robot_mask

    def domination_selector(self, vid: str):
        if vid == "target":
            return None
        return self.model.layout(self._mode_key(vid)).last_position_selector()

    def default_max_path_len(self):
        return None


def make_pushing_problem(
    bodies,
    start_positions: dict,
    goal_region: HPolyhedron,
    workspace: HPolyhedron,
    mu: float = 1.0,
    force_max: float = 20.0,
    actuation_max: float = 20.0,
    move_weights: dict | None = None,
) -> PushingGcs:
    model = PushingModel(bodies, workspace, mu, force_max, actuation_max)
    return PushingGcs(model, start_positions, goal_region, move_weights)


def make_pushing_demo() -> PushingGcs:
    """One 0.6 m square robot pushing a 1 m square object 1.5 m to the right."""
    robot = BodySpec("rob", [[-0.3, -0.3], [0.3, -0.3], [0.3, 0.3], [-0.3, 0.3]], actuated=True)
    obj = BodySpec("obj", [[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]])
    workspace = HPolyhedron.from_box([-3.0, -3.0], [3.0, 3.0])
    goal = HPolyhedron.from_box([1.3, -0.2], [1.7, 0.2])
    return make_pushing_problem(
        [robot, obj],
        {"rob": (-1.5, 0.0), "obj": (0.0, 0.0)},
        goal,
        workspace,
    )


def pushing_to_json(problem: PushingGcs) -> dict:
    model = problem.model
    return {
        "bodies": [
            {
                "name": b.name,
                "polygon": b.polygon.tolist(),
                "movable": b.movable,
                "actuated": b.actuated,
                **({"position": list(b.position)} if b.position is not None else {}),
            }
            for b in model.bodies
        ],
        "workspace": model.workspace.to_json(),
        "start": {k: v.tolist() for k, v in sorted(problem.start_positions.items())},
        "goal": problem.goal_region.to_json(),
        "weights": dict(problem.move_weights),
        "mu": model.mu,
        "force_max": model.force_max,
        "actuation_max": model.actuation_max,
    }


def pushing_from_json(data: dict) -> PushingGcs:
    bodies = [
        BodySpec(
            b["name"],
            np.array(b["polygon"], dtype=float),
            movable=b.get("movable", True),
            actuated=b.get("actuated", False),
            position=tuple(b["position"]) if "position" in b else None,
        )
        for b in data["bodies"]
    ]
    return make_pushing_problem(
        bodies,
        {k: np.array(v, dtype=float) for k, v in data["start"].items()},
        HPolyhedron.from_json(data["goal"]),
        HPolyhedron.from_json(data["workspace"]),
        mu=data.get("mu", 1.0),
        force_max=data.get("force_max", 20.0),
        actuation_max=data.get("actuation_max", 20.0),
        move_weights=data.get("weights") or None,
    )


def pushing_vertex_set(bodies, mode: ContactModeKey, workspace: HPolyhedron, **params) -> HPolyhedron:
    return PushingModel(bodies, workspace, **params).vertex_set(mode)


def pushing_successors(bodies, mode: ContactModeKey) -> list:
    """All mode keys differing from mode in exactly one pair's entry."""
    model = PushingModel(bodies, HPolyhedron.from_box([-1.0, -1.0], [1.0, 1.0]))
    return model.successor_keys(mode)


def pushing_edge(bodies, u_mode: ContactModeKey, v_mode: ContactModeKey, workspace: HPolyhedron, **params) -> EdgeData:
    return PushingModel(bodies, workspace, **params).mode_edge(u_mode, v_mode)
