"""Thin linear-programming layer used by every other module.

Programs are assembled incrementally (variable blocks, sparse rows, a linear
objective) and handed to scipy's HiGHS backend.  The backend is selected by
the ``GCSSTAR_SOLVER`` environment variable or an explicit method key.
"""

from __future__ import annotations

import enum
import os
import threading
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

_SOLVER_METHODS = ("highs", "highs-ds", "highs-ipm")
_DEFAULT_METHOD = "highs"


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ERROR = "error"


class SolverFailure(RuntimeError):
    """Raised when the LP backend fails for numerical (not feasibility) reasons."""


@dataclass
class LpResult:
    status: LpStatus
    x: np.ndarray | None
    value: float | None


class SolveCounter:
    """Thread-safe counter of LP solves, shared across fanned-out workers."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._count = 0

    def bump(self) -> None:
        with self._lock:
            self._count += 1

    @property
    def count(self) -> int:
        return self._count


def solver_method(override: str | None = None) -> str:
    key = override or os.environ.get("GCSSTAR_SOLVER", _DEFAULT_METHOD)
    if key not in _SOLVER_METHODS:
        raise ValueError(f"unknown solver key {key!r}; expected one of {_SOLVER_METHODS}")
    return key


@dataclass
class LinearProgram:
    """Incrementally built LP: min c'x + c0  s.t.  A_ub x <= b_ub, A_eq x = b_eq."""

    num_vars: int = 0
    _obj: dict[int, float] = field(default_factory=dict)
    obj_const: float = 0.0
    _ub_rows: list[tuple[np.ndarray, np.ndarray, float]] = field(default_factory=list)
    _eq_rows: list[tuple[np.ndarray, np.ndarray, float]] = field(default_factory=list)
    _bounds: list[tuple[float | None, float | None]] = field(default_factory=list)

    def new_block(self, n: int, lb: float | None = None, ub: float | None = None) -> np.ndarray:
        """Allocate n fresh variables; returns their column indices."""
        idx = np.arange(self.num_vars, self.num_vars + n)
        self.num_vars += n
        self._bounds.extend([(lb, ub)] * n)
        return idx

    def set_bounds(self, cols: np.ndarray, lb: float | None, ub: float | None) -> None:
        for c in np.atleast_1d(cols):
            self._bounds[int(c)] = (lb, ub)

    def add_objective(self, cols: np.ndarray, coefs: np.ndarray) -> None:
        for c, v in zip(np.atleast_1d(cols), np.atleast_1d(coefs)):
            if v != 0.0:
                self._obj[int(c)] = self._obj.get(int(c), 0.0) + float(v)

    def add_ineq(self, cols: np.ndarray, coefs: np.ndarray, rhs: float) -> None:
        """Single row: coefs . x[cols] <= rhs."""
        self._ub_rows.append((np.asarray(cols, dtype=int), np.asarray(coefs, dtype=float), float(rhs)))

    def add_eq(self, cols: np.ndarray, coefs: np.ndarray, rhs: float) -> None:
        self._eq_rows.append((np.asarray(cols, dtype=int), np.asarray(coefs, dtype=float), float(rhs)))

    def add_matrix_ineq(self, A: np.ndarray, cols: np.ndarray, b: np.ndarray) -> None:
        """Rows A x[cols] <= b (A dense, small)."""
        A = np.asarray(A, dtype=float)
        for i in range(A.shape[0]):
            nz = np.nonzero(A[i])[0]
            self._ub_rows.append((cols[nz], A[i, nz], float(b[i])))

    def add_matrix_eq(self, A: np.ndarray, cols: np.ndarray, b: np.ndarray) -> None:
        A = np.asarray(A, dtype=float)
        for i in range(A.shape[0]):
            nz = np.nonzero(A[i])[0]
            self._eq_rows.append((cols[nz], A[i, nz], float(b[i])))

    def add_abs_term(self, cols: np.ndarray, coefs: np.ndarray, offset: float, weight: float) -> np.ndarray:
        """Add weight * |coefs . x[cols] + offset| to the objective via an epigraph variable."""
        y = self.new_block(1, lb=0.0)
        # y >= +(a x + o)  and  y >= -(a x + o)
        self.add_ineq(np.append(cols, y), np.append(coefs, -1.0), -offset)
        self.add_ineq(np.append(cols, y), np.append(-coefs, -1.0), offset)
        self.add_objective(y, np.array([weight]))
        return y

    def _assemble(self, rows):
        m = len(rows)
        data, ri, ci, rhs = [], [], [], np.empty(m)
        for i, (cols, coefs, r) in enumerate(rows):
            data.append(coefs)
            ci.append(cols)
            ri.append(np.full(len(cols), i))
            rhs[i] = r
        if m == 0:
            return None, None
        mat = sp.csr_matrix(
            (np.concatenate(data), (np.concatenate(ri), np.concatenate(ci))),
            shape=(m, self.num_vars),
        )
        return mat, rhs

    def solve(self, method: str | None = None, counter: SolveCounter | None = None) -> LpResult:
        if counter is not None:
            counter.bump()
        c = np.zeros(self.num_vars)
        for col, v in self._obj.items():
            c[col] = v
        A_ub, b_ub = self._assemble(self._ub_rows)
        A_eq, b_eq = self._assemble(self._eq_rows)
        chosen = solver_method(method)
        try:
            res = linprog(
                c,
                A_ub=A_ub,
                b_ub=b_ub,
                A_eq=A_eq,
                b_eq=b_eq,
                bounds=self._bounds if self._bounds else [(None, None)] * self.num_vars,
                method=chosen,
            )
        except ValueError as exc:  # malformed input surfaces as solver failure
            raise SolverFailure(str(exc)) from exc
        if res.status == 0:
            return LpResult(LpStatus.OPTIMAL, np.asarray(res.x), float(res.fun) + self.obj_const)
        if res.status == 2:
            return LpResult(LpStatus.INFEASIBLE, None, None)
        if res.status == 3:
            return LpResult(LpStatus.UNBOUNDED, None, None)
        return LpResult(LpStatus.ERROR, None, None)
