"""Halfspace polyhedra, affine-image polytopes, and the queries built on them.

Everything downstream (restriction programs, reachable sets, domination
checks) reduces to the handful of primitives in this module: membership,
Chebyshev centers, approximate-uniform interior sampling, elimination of
equality constraints, and a certified sufficient containment test for
affine images of polyhedra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .lp import LinearProgram, LpStatus, SolveCounter, SolverFailure

DEFAULT_TOL = 1e-6
RANK_TOL = 1e-9  # singular values below RANK_TOL * sigma_max count as zero


class GeometryError(ValueError):
    pass


class EmptySetError(GeometryError):
    pass


class UnboundedSetError(GeometryError):
    pass


def _as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise GeometryError(f"expected a matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise GeometryError("matrix entries must be finite")
    return A


def _as_vector(b, length: int | None = None) -> np.ndarray:
    b = np.asarray(b, dtype=float).reshape(-1)
    if not np.all(np.isfinite(b)):
        raise GeometryError("vector entries must be finite")
    if length is not None and b.shape[0] != length:
        raise GeometryError(f"expected length {length}, got {b.shape[0]}")
    return b


@dataclass(frozen=True, eq=False)
class HPolyhedron:
    """The set {x : A x <= b}.  Immutable; safe to share across threads.

    checked_nonempty is a one-way validity marker flipped only by a
    successful Chebyshev-center solve.
    """

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        A = _as_matrix(self.A)
        b = _as_vector(self.b, A.shape[0])
        A.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "checked_nonempty", False)

    @property
    def dim(self) -> int:
        return self.A.shape[1]

    @property
    def num_rows(self) -> int:
        return self.A.shape[0]

    @staticmethod
    def from_box(lo, hi) -> "HPolyhedron":
        lo = _as_vector(lo)
        hi = _as_vector(hi, lo.shape[0])
        n = lo.shape[0]
        eye = np.eye(n)
        return HPolyhedron(np.vstack([eye, -eye]), np.concatenate([hi, -lo]))

    @staticmethod
    def from_point(p) -> "HPolyhedron":
        p = _as_vector(p)
        eye = np.eye(p.shape[0])
        return HPolyhedron(np.vstack([eye, -eye]), np.concatenate([p, -p]))

    def intersection(self, other: "HPolyhedron") -> "HPolyhedron":
        if other.dim != self.dim:
            raise GeometryError("dimension mismatch in intersection")
        return HPolyhedron(np.vstack([self.A, other.A]), np.concatenate([self.b, other.b]))

    def cartesian_product(self, other: "HPolyhedron") -> "HPolyhedron":
        A = scipy.linalg.block_diag(self.A, other.A)
        return HPolyhedron(A, np.concatenate([self.b, other.b]))

    def to_json(self) -> dict:
        return {"A": self.A.tolist(), "b": self.b.tolist()}

    @staticmethod
    def from_json(data: dict) -> "HPolyhedron":
        return HPolyhedron(np.array(data["A"], dtype=float), np.array(data["b"], dtype=float))


@dataclass(frozen=True, eq=False)
class AHPolytope:
    """Affine image {t + T xi : xi in base} of an H-polyhedron."""

    base: HPolyhedron
    T: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        T = _as_matrix(self.T)
        t = _as_vector(self.t, T.shape[0])
        if T.shape[1] != self.base.dim:
            raise GeometryError(
                f"map takes {T.shape[1]} coords but base has dimension {self.base.dim}"
            )
        T.flags.writeable = False
        t.flags.writeable = False
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "t", t)

    @property
    def dim(self) -> int:
        """Ambient dimension of the image."""
        return self.T.shape[0]

    @staticmethod
    def from_hpolyhedron(P: HPolyhedron) -> "AHPolytope":
        return AHPolytope(P, np.eye(P.dim), np.zeros(P.dim))

    def transform(self, M: np.ndarray, offset=None) -> "AHPolytope":
        """The image {offset + M y : y in self}."""
        M = _as_matrix(M)
        off = np.zeros(M.shape[0]) if offset is None else _as_vector(offset, M.shape[0])
        return AHPolytope(self.base, M @ self.T, M @ self.t + off)

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "T": self.T.tolist(), "t": self.t.tolist()}

    @staticmethod
    def from_json(data: dict) -> "AHPolytope":
        return AHPolytope(
            HPolyhedron.from_json(data["base"]),
            np.array(data["T"], dtype=float),
            np.array(data["t"], dtype=float),
        )


def contains_point(P: HPolyhedron, x, tol: float = DEFAULT_TOL) -> bool:
    """Componentwise test A x <= b + tol."""
    x = _as_vector(x)
    if x.shape[0] != P.dim:
        raise GeometryError(f"point has dimension {x.shape[0]}, set has {P.dim}")
    if P.num_rows == 0:
        return True
    return bool(np.all(P.A @ x <= P.b + tol))


def chebyshev_center(
    P: HPolyhedron, method: str | None = None, counter: SolveCounter | None = None
) -> tuple[np.ndarray, float] | None:
    """Largest inscribed ball: returns (center, radius), or None if P is empty.

    An unbounded inscribed radius is reported as radius = inf together with
    some feasible center.
    """
    m, n = P.A.shape
    if m == 0:
        object.__setattr__(P, "checked_nonempty", True)
        return np.zeros(n), np.inf
    norms = np.linalg.norm(P.A, axis=1)

    def build(cap: float | None) -> LinearProgram:
        prog = LinearProgram()
        x = prog.new_block(n)
        r = prog.new_block(1, lb=0.0, ub=cap)
        for i in range(m):
            prog.add_ineq(np.append(x, r), np.append(P.A[i], norms[i]), P.b[i])
        prog.add_objective(r, np.array([-1.0]))
        return prog

    res = build(None).solve(method, counter)
    if res.status == LpStatus.INFEASIBLE:
        return None
    if res.status == LpStatus.UNBOUNDED:
        res = build(1e12).solve(method, counter)
        if res.status != LpStatus.OPTIMAL:
            raise SolverFailure("Chebyshev LP failed after capping the radius")
        object.__setattr__(P, "checked_nonempty", True)
        return res.x[:n].copy(), np.inf
    if res.status != LpStatus.OPTIMAL:
        raise SolverFailure("Chebyshev LP returned an unexpected status")
    object.__setattr__(P, "checked_nonempty", True)
    return res.x[:n].copy(), max(float(res.x[n]), 0.0)


def bounding_box(
    P: HPolyhedron, method: str | None = None, counter: SolveCounter | None = None
) -> tuple[np.ndarray, np.ndarray] | None:
    """Coordinate-wise extent of P; None if empty; raises if unbounded."""
    lo = np.empty(P.dim)
    hi = np.empty(P.dim)
    for j in range(P.dim):
        for sign, out in ((1.0, lo), (-1.0, hi)):
            prog = LinearProgram()
            x = prog.new_block(P.dim)
            prog.add_matrix_ineq(P.A, x, P.b)
            prog.add_objective(x[j : j + 1], np.array([sign]))
            res = prog.solve(method, counter)
            if res.status == LpStatus.INFEASIBLE:
                return None
            if res.status == LpStatus.UNBOUNDED:
                raise UnboundedSetError(f"polyhedron unbounded along coordinate {j}")
            if res.status != LpStatus.OPTIMAL:
                raise SolverFailure("bounding-box LP failed")
            out[j] = res.x[j]
    return lo, hi


def is_bounded(P: HPolyhedron, method: str | None = None) -> bool:
    """True for bounded or empty polyhedra."""
    try:
        bounding_box(P, method)
    except UnboundedSetError:
        return False
    return True


def detect_equality_pairs(A: np.ndarray, b: np.ndarray, tol: float = 1e-11):
    """Split rows into (A_ub, b_ub, C, d) by matching +/- inequality pairs.

    Rows i, j with A[j] = -A[i] and b[j] = -b[i] jointly encode A[i] x = b[i].
    """
    m = A.shape[0]
    used = np.zeros(m, dtype=bool)
    ineq_rows, eq_rows = [], []
    scale = np.maximum(np.abs(A).max(axis=1, initial=0.0) + np.abs(b), 1.0)
    for i in range(m):
        if used[i]:
            continue
        if not np.any(A[i]):
            ineq_rows.append(i)
            used[i] = True
            continue
        partner = -1
        for j in range(i + 1, m):
            if used[j]:
                continue
            if (
                np.all(np.abs(A[j] + A[i]) <= tol * scale[i])
                and abs(b[j] + b[i]) <= tol * scale[i]
            ):
                partner = j
                break
        if partner >= 0:
            used[i] = used[partner] = True
            eq_rows.append(i)
        else:
            used[i] = True
            ineq_rows.append(i)
    A_ub = A[ineq_rows] if ineq_rows else np.zeros((0, A.shape[1]))
    b_ub = b[ineq_rows] if ineq_rows else np.zeros(0)
    C = A[eq_rows] if eq_rows else np.zeros((0, A.shape[1]))
    d = b[eq_rows] if eq_rows else np.zeros(0)
    return A_ub, b_ub, C, d


def implicit_equality_rows(
    P: HPolyhedron,
    tol: float = 1e-7,
    method: str | None = None,
    counter: SolveCounter | None = None,
) -> np.ndarray:
    """Indices of rows that hold with equality over all of P.

    Only rows tight at the Chebyshev center are candidates; each is confirmed
    by minimizing its left-hand side over P.
    """
    cheb = chebyshev_center(P, method, counter)
    if cheb is None:
        raise EmptySetError("cannot analyze an empty polyhedron")
    center, _ = cheb
    rows = []
    slack = P.b - P.A @ center
    for i in np.nonzero(slack <= tol * (1.0 + np.abs(P.b)))[0]:
        if not np.any(P.A[i]):
            continue
        prog = LinearProgram()
        x = prog.new_block(P.dim)
        prog.add_matrix_ineq(P.A, x, P.b)
        prog.add_objective(x, P.A[i])
        res = prog.solve(method, counter)
        if res.status == LpStatus.OPTIMAL and res.value >= P.b[i] - tol * (1.0 + abs(P.b[i])):
            rows.append(int(i))
    return np.array(rows, dtype=int)


def nullspace_reduce(A, b, C, d, rank_tol: float = RANK_TOL) -> AHPolytope | None:
    """Eliminate C z = d from {z : A z <= b, C z = d} by nullspace parameterization.

    Returns {z0 + N xi : (A N) xi <= b - A z0} with z0 a particular solution and
    N a basis of null(C), or None when C z = d is inconsistent.
    """
    A = _as_matrix(A)
    b = _as_vector(b, A.shape[0])
    C = _as_matrix(C)
    d = _as_vector(d, C.shape[0])
    n = A.shape[1]
    if C.shape[0] == 0:
        return AHPolytope(HPolyhedron(A, b), np.eye(n), np.zeros(n))
    if C.shape[1] != n:
        raise GeometryError("equality and inequality systems disagree on dimension")
    z0, *_ = np.linalg.lstsq(C, d, rcond=None)
    residual = np.linalg.norm(C @ z0 - d, ord=np.inf)
    if residual > 1e-8 * (1.0 + np.linalg.norm(d, ord=np.inf)):
        return None
    N = scipy.linalg.null_space(C, rcond=rank_tol)
    if N.shape[1] == 0:
        N = np.zeros((n, 0))
    base = HPolyhedron(A @ N, b - A @ z0)
    return AHPolytope(base, N, z0)


@dataclass(frozen=True, eq=False)
class SampleSpace:
    """Full-dimensional interior form of a polyhedron, ready for hit-and-run.

    Points are T xi + t for xi in {A xi <= b}; center is an interior start.
    """

    A: np.ndarray
    b: np.ndarray
    T: np.ndarray
    t: np.ndarray
    center: np.ndarray


def prepare_sample_space(
    P: HPolyhedron, method: str | None = None, counter: SolveCounter | None = None
) -> SampleSpace:
    """Restrict a bounded nonempty polyhedron to its affine hull.

    Implicit equality rows (measure-zero directions) are detected and
    eliminated so the returned system has nonempty interior.  This is the
    deterministic, LP-heavy part of sampling and may be cached per set.
    """
    A, b = P.A, P.b
    T, t = np.eye(P.dim), np.zeros(P.dim)
    center = np.zeros(P.dim)
    for _ in range(P.dim + 1):
        if A.shape[1] == 0:
            if np.any(b < -1e-9):
                raise EmptySetError("cannot sample an empty polyhedron")
            center = np.zeros(0)
            break
        cheb = chebyshev_center(HPolyhedron(A, b), method, counter)
        if cheb is None:
            raise EmptySetError("cannot sample an empty polyhedron")
        center, radius = cheb
        if radius == np.inf:
            raise UnboundedSetError("cannot sample an unbounded polyhedron")
        if radius > 1e-9:
            break
        eq = implicit_equality_rows(HPolyhedron(A, b), method=method, counter=counter)
        if eq.size == 0:
            break
        keep = np.setdiff1d(np.arange(A.shape[0]), eq)
        reduced = nullspace_reduce(A[keep], b[keep], A[eq], b[eq])
        if reduced is None:
            raise EmptySetError("implicit equalities are inconsistent")
        t = T @ reduced.t + t
        T = T @ reduced.T
        A, b = reduced.base.A, reduced.base.b
    if A.shape[1]:
        bounding_box(HPolyhedron(A, b), method, counter)  # raises if unbounded
    return SampleSpace(A, b, T, t, center)


class HitAndRunSampler:
    """Approximately uniform interior sampler for a bounded nonempty polyhedron.

    Measure-zero sets are handled by first restricting to the affine hull
    (implicit equality rows are detected and eliminated).  Sampler state is
    owned by the caller and never shared.
    """

    def __init__(
        self,
        P,
        rng: np.random.Generator,
        burn_in: int = 50,
        thin: int = 10,
        method: str | None = None,
        counter: SolveCounter | None = None,
    ):
        space = P if isinstance(P, SampleSpace) else prepare_sample_space(P, method, counter)
        self.rng = rng
        self.thin = thin
        self._A, self._b = space.A, space.b
        self._T, self._t = space.T, space.t
        self._x = space.center.copy()
        for _ in range(burn_in):
            self._step()

    def _step(self) -> None:
        n = self._A.shape[1]
        if n == 0:
            return
        for _ in range(64):
            u = self.rng.standard_normal(n)
            norm = np.linalg.norm(u)
            if norm < 1e-12:
                continue
            u /= norm
            Au = self._A @ u
            slack = self._b - self._A @ self._x
            slack = np.maximum(slack, 0.0)
            hi = np.inf
            lo = -np.inf
            pos = Au > 1e-14
            neg = Au < -1e-14
            if np.any(pos):
                hi = np.min(slack[pos] / Au[pos])
            if np.any(neg):
                lo = np.max(-slack[neg] / (-Au[neg]))
            if not np.isfinite(hi) or not np.isfinite(lo):
                raise UnboundedSetError("unbounded chord during hit-and-run")
            if hi - lo > 1e-13:
                self._x = self._x + self.rng.uniform(lo, hi) * u
                return
        # no direction admits a chord: the set is (numerically) a point

    def sample(self) -> np.ndarray:
        for _ in range(self.thin):
            self._step()
        return self._T @ self._x + self._t


def sample_interior(
    P: HPolyhedron,
    rng: np.random.Generator,
    n_samples: int = 1,
    burn_in: int = 50,
    thin: int = 10,
) -> np.ndarray:
    """Draw approximately uniform interior points; rows are samples."""
    sampler = HitAndRunSampler(P, rng, burn_in=burn_in, thin=thin)
    return np.array([sampler.sample() for _ in range(n_samples)])


def ah_contains_point(
    Y: AHPolytope,
    y,
    tol: float = DEFAULT_TOL,
    method: str | None = None,
    counter: SolveCounter | None = None,
) -> bool:
    """Membership LP: exists xi with base constraints and |T xi - (y - t)| <= tol."""
    y = _as_vector(y, Y.dim)
    prog = LinearProgram()
    xi = prog.new_block(Y.base.dim)
    prog.add_matrix_ineq(Y.base.A, xi, Y.base.b)
    rhs = y - Y.t
    prog.add_matrix_ineq(Y.T, xi, rhs + tol)
    prog.add_matrix_ineq(-Y.T, xi, -rhs + tol)
    res = prog.solve(method, counter)
    if res.status == LpStatus.OPTIMAL:
        return True
    if res.status == LpStatus.INFEASIBLE:
        return False
    raise SolverFailure("membership LP failed")


def _clean_base(P: HPolyhedron) -> tuple[np.ndarray, np.ndarray]:
    """Drop trivial zero rows and scale the rest to unit max-norm."""
    A, b = P.A, P.b
    norms = np.abs(A).max(axis=1, initial=0.0) if A.shape[0] else np.zeros(0)
    zero = norms <= 1e-14
    if np.any(zero & (b < -1e-9)):
        raise EmptySetError("base polyhedron is trivially empty")
    keep = ~zero
    A, b, norms = A[keep], b[keep], norms[keep]
    if A.shape[0]:
        A = A / norms[:, None]
        b = b / norms
    return A, b


def ah_containment_certified(
    X: AHPolytope,
    Y: AHPolytope,
    method: str | None = None,
    counter: SolveCounter | None = None,
) -> bool:
    """Sufficient LP certificate for X ⊆ Y.

    True only when multipliers (Gamma, beta, Lambda >= 0) exist with
    T_Y Gamma = T_X,  T_Y beta = t_Y - t_X,  Lambda H_X = H_Y Gamma,
    Lambda h_X <= h_Y + H_Y beta; soundness: a certificate implies X ⊆ Y.
    False reports "not certified" (X ⊆ Y may still hold).  Numerical solver
    failures raise SolverFailure and are never reported as a verdict.
    """
    if X.dim != Y.dim:
        raise GeometryError("containment requires equal ambient dimensions")
    HX, hX = _clean_base(X.base)
    HY, hY = _clean_base(Y.base)
    kX, kY, n = X.base.dim, Y.base.dim, X.dim
    mX, mY = HX.shape[0], HY.shape[0]
    if kX == 0:
        # X is the single point t, so containment is a membership query
        return ah_contains_point(Y, X.t, tol=1e-7, method=method, counter=counter)

    prog = LinearProgram()
    gamma = prog.new_block(kY * kX).reshape(kY, kX) if kY else np.zeros((0, kX), dtype=int)
    beta = prog.new_block(kY)
    lam = prog.new_block(mY * mX, lb=0.0).reshape(mY, mX) if mY and mX else np.zeros((mY, mX), dtype=int)

    # T_Y Gamma = T_X
    for i in range(n):
        row_cols = Y.T[i]
        for j in range(kX):
            nz = np.nonzero(row_cols)[0]
            prog.add_eq(gamma[nz, j], row_cols[nz], X.T[i, j])
    # T_Y beta = t_Y - t_X
    rhs = Y.t - X.t
    if kY:
        prog.add_matrix_eq(Y.T, beta, rhs)
    else:
        if np.linalg.norm(rhs, ord=np.inf) > 1e-9:
            return False
    # Lambda H_X = H_Y Gamma
    for r in range(mY):
        for j in range(kX):
            cols, coefs = [], []
            nzx = np.nonzero(HX[:, j])[0]
            cols.extend(lam[r, nzx])
            coefs.extend(HX[nzx, j])
            nzy = np.nonzero(HY[r])[0]
            cols.extend(gamma[nzy, j])
            coefs.extend(-HY[r, nzy])
            if cols:
                prog.add_eq(np.array(cols), np.array(coefs), 0.0)
    # Lambda h_X - H_Y beta <= h_Y
    for r in range(mY):
        cols, coefs = [], []
        if mX:
            nzx = np.nonzero(hX)[0]
            cols.extend(lam[r, nzx])
            coefs.extend(hX[nzx])
        nzy = np.nonzero(HY[r])[0]
        cols.extend(beta[nzy])
        coefs.extend(-HY[r, nzy])
        if cols:
            prog.add_ineq(np.array(cols), np.array(coefs), hY[r])
        elif hY[r] < -1e-12:
            return False

    res = prog.solve(method, counter)
    if res.status == LpStatus.OPTIMAL:
        return True
    if res.status == LpStatus.INFEASIBLE:
        return False
    raise SolverFailure(f"containment certificate LP ended with status {res.status}")


def polytope_vertices(P: HPolyhedron, tol: float = 1e-9) -> np.ndarray:
    """Enumerate vertices of a bounded polyhedron (internal: tests and drawing only).

    Degenerate (lower-dimensional) sets are reduced to their affine hull first.
    """
    from scipy.spatial import HalfspaceIntersection

    cheb = chebyshev_center(P)
    if cheb is None:
        raise EmptySetError("empty polyhedron has no vertices")
    center, radius = cheb
    if radius == np.inf:
        raise UnboundedSetError("cannot enumerate vertices of an unbounded polyhedron")
    if P.dim == 0:
        return np.zeros((1, 0))
    if radius <= 1e-9:
        eq = implicit_equality_rows(P)
        if eq.size:
            keep = np.setdiff1d(np.arange(P.num_rows), eq)
            red = nullspace_reduce(P.A[keep], P.b[keep], P.A[eq], P.b[eq])
            if red is None:
                raise EmptySetError("inconsistent implicit equalities")
            if red.base.dim == 0:
                return red.t[None, :]
            sub = polytope_vertices(red.base, tol)
            return sub @ red.T.T + red.t
        return center[None, :]
    A, b = _clean_base(P)
    if P.dim == 1:
        lo, hi = bounding_box(P)
        return np.array([[lo[0]], [hi[0]]]) if hi[0] - lo[0] > tol else np.array([[lo[0]]])
    hs = HalfspaceIntersection(np.hstack([A, -b[:, None]]), center)
    pts = np.asarray(hs.intersections)
    pts = pts[np.all(np.isfinite(pts), axis=1)]
    # dedupe
    out: list[np.ndarray] = []
    for p in pts:
        if not any(np.linalg.norm(p - q, ord=np.inf) <= 1e-7 for q in out):
            out.append(p)
    return np.array(out)
