import numpy as np
import pytest
from scipy.optimize import linprog

from gcsstar.geometry import (
    AHPolytope,
    EmptySetError,
    GeometryError,
    HPolyhedron,
    UnboundedSetError,
    ah_containment_certified,
    ah_contains_point,
    bounding_box,
    chebyshev_center,
    contains_point,
    detect_equality_pairs,
    nullspace_reduce,
    polytope_vertices,
    sample_interior,
)

UNIT_BOX = HPolyhedron.from_box([0.0, 0.0], [1.0, 1.0])


def test_contains_point_examples():
    assert contains_point(UNIT_BOX, [0.5, 0.5], tol=1e-9)
    assert not contains_point(UNIT_BOX, [1.5, 0.0])
    assert contains_point(UNIT_BOX, [1.0, 0.0], tol=1e-9)


def test_contains_point_dimension_mismatch():
    with pytest.raises(GeometryError):
        contains_point(UNIT_BOX, [0.5])


def test_chebyshev_center_unit_box():
    center, radius = chebyshev_center(UNIT_BOX)
    assert np.allclose(center, [0.5, 0.5])
    assert radius == pytest.approx(0.5)


def test_chebyshev_center_segment_has_zero_radius():
    seg = HPolyhedron(np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]), np.array([0.0, 0.0, 1.0, 0.0]))
    center, radius = chebyshev_center(seg)
    assert radius == pytest.approx(0.0, abs=1e-9)
    assert contains_point(seg, center, tol=1e-8)


def test_chebyshev_center_empty():
    empty = HPolyhedron(np.array([[1.0], [-1.0]]), np.array([0.0, -1.0]))
    assert chebyshev_center(empty) is None


def test_chebyshev_center_unbounded_flag():
    halfplane = HPolyhedron(np.array([[1.0, 0.0]]), np.array([0.0]))
    center, radius = chebyshev_center(halfplane)
    assert radius == np.inf
    assert contains_point(halfplane, center, tol=1e-6)


def test_chebyshev_center_triangle_matches_direct_lp():
    # x >= 0, y >= 0, x + y <= 1 solved directly with a second solver setup
    tri = HPolyhedron(np.array([[-1.0, 0.0], [0.0, -1.0], [1.0, 1.0]]), np.array([0.0, 0.0, 1.0]))
    center, radius = chebyshev_center(tri)
    norms = np.linalg.norm(tri.A, axis=1)
    res = linprog(
        c=[0.0, 0.0, -1.0],
        A_ub=np.hstack([tri.A, norms[:, None]]),
        b_ub=tri.b,
        bounds=[(None, None), (None, None), (0, None)],
        method="highs-ipm",
    )
    assert res.status == 0
    assert radius == pytest.approx(-res.fun, abs=1e-7)
    assert np.all(tri.A @ center <= tri.b + 1e-9)


def test_sample_interior_stays_inside():
    rng = np.random.default_rng(3)
    for p in sample_interior(UNIT_BOX, rng, n_samples=50):
        assert contains_point(UNIT_BOX, p, tol=1e-9)


def test_sample_interior_mean_near_center():
    rng = np.random.default_rng(0)
    samples = sample_interior(UNIT_BOX, rng, n_samples=10_000, burn_in=50, thin=2)
    assert np.all(np.abs(samples.mean(axis=0) - 0.5) < 0.05)


def test_sample_interior_mean_on_triangle():
    # non-axis-aligned set: the empirical mean approaches the centroid
    tri = HPolyhedron(np.array([[-1.0, 0.0], [0.0, -1.0], [1.0, 1.0]]), np.array([0.0, 0.0, 3.0]))
    samples = sample_interior(tri, np.random.default_rng(8), n_samples=4000, thin=2)
    assert np.all(np.abs(samples.mean(axis=0) - 1.0) < 0.06)  # centroid (1, 1)


def test_sample_interior_deterministic():
    a = sample_interior(UNIT_BOX, np.random.default_rng(42), n_samples=5)
    b = sample_interior(UNIT_BOX, np.random.default_rng(42), n_samples=5)
    assert np.array_equal(a, b)


def test_sample_interior_degenerate_and_singleton():
    seg = HPolyhedron(np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]), np.array([0.25, -0.25, 1.0, 0.0]))
    pts = sample_interior(seg, np.random.default_rng(1), n_samples=10)
    assert np.allclose(pts[:, 0], 0.25, atol=1e-9)
    assert np.all((pts[:, 1] >= -1e-9) & (pts[:, 1] <= 1 + 1e-9))
    point = HPolyhedron.from_point([3.0, -2.0])
    pts = sample_interior(point, np.random.default_rng(2), n_samples=3)
    assert np.allclose(pts, [3.0, -2.0])


def test_sample_interior_rejects_bad_sets():
    with pytest.raises(EmptySetError):
        sample_interior(HPolyhedron(np.array([[1.0], [-1.0]]), np.array([0.0, -1.0])), np.random.default_rng(0))
    with pytest.raises(UnboundedSetError):
        sample_interior(HPolyhedron(np.array([[1.0, 0.0]]), np.array([1.0])), np.random.default_rng(0))


def test_nullspace_reduce_square_diagonal():
    red = nullspace_reduce(UNIT_BOX.A, UNIT_BOX.b, np.array([[1.0, 1.0]]), np.array([1.0]))
    assert red.base.dim == 1
    for xi in np.linspace(-0.05, 0.05, 7):
        z = red.t + red.T @ np.array([xi])
        assert z.sum() == pytest.approx(1.0, abs=1e-12)


def test_nullspace_reduce_full_rank_is_point():
    C = np.array([[2.0, 0.0], [0.0, 3.0]])
    d = np.array([1.0, 6.0])
    red = nullspace_reduce(UNIT_BOX.A, UNIT_BOX.b, C, d)
    assert red.base.dim == 0
    assert np.allclose(red.t, [0.5, 2.0])


def test_nullspace_reduce_inconsistent_returns_none():
    C = np.array([[1.0, 0.0], [1.0, 0.0]])
    d = np.array([0.0, 1.0])
    assert nullspace_reduce(UNIT_BOX.A, UNIT_BOX.b, C, d) is None


def test_nullspace_reduce_random_images_feasible():
    rng = np.random.default_rng(7)
    for _ in range(20):
        n = int(rng.integers(2, 6))
        m_eq = int(rng.integers(1, n))
        A = np.vstack([np.eye(n), -np.eye(n)])
        b = np.concatenate([rng.uniform(1, 3, n), rng.uniform(1, 3, n)])
        C = rng.standard_normal((m_eq, n))
        z_feas = rng.uniform(-0.5, 0.5, n)
        d = C @ z_feas
        red = nullspace_reduce(A, b, C, d)
        assert red is not None
        for _ in range(5):
            xi = rng.uniform(-0.2, 0.2, red.base.dim)
            z = red.t + red.T @ xi
            assert np.max(np.abs(C @ z - d)) <= 1e-8


def test_detect_equality_pairs():
    rows = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0], [1.0, 1.0]])
    rhs = np.array([2.0, 1.0, -2.0, 3.0, 5.0])
    A_ub, b_ub, C, d = detect_equality_pairs(rows, rhs)
    # rows 0 and 2 pair into x = 2; the rest stay inequalities
    assert C.shape == (1, 2) and d[0] == pytest.approx(2.0)
    assert A_ub.shape[0] == 3


def test_containment_boxes():
    X = AHPolytope.from_hpolyhedron(UNIT_BOX)
    Y = AHPolytope.from_hpolyhedron(HPolyhedron.from_box([-1, -1], [2, 2]))
    assert ah_containment_certified(X, Y)
    assert not ah_containment_certified(Y, X)


def test_containment_rotated_square_with_vertex_oracle():
    c, s = np.cos(np.pi / 4), np.sin(np.pi / 4)
    R = np.array([[c, -s], [s, c]])
    X = AHPolytope(HPolyhedron.from_box([-0.5, -0.5], [0.5, 0.5]), R, np.zeros(2))
    Y = AHPolytope.from_hpolyhedron(HPolyhedron.from_box([-1, -1], [1, 1]))
    assert ah_containment_certified(X, Y)
    for v in polytope_vertices(X.base):
        assert ah_contains_point(Y, X.t + X.T @ v, tol=1e-7)


def test_containment_soundness_randomized():
    rng = np.random.default_rng(11)
    certified = 0
    for trial in range(60):
        n = int(rng.integers(1, 5))
        kx = int(rng.integers(1, 5))
        ky = int(rng.integers(1, 5))
        X = AHPolytope(
            HPolyhedron.from_box(-rng.uniform(0.2, 1, kx), rng.uniform(0.2, 1, kx)),
            rng.standard_normal((n, kx)) * 0.5,
            rng.uniform(-0.5, 0.5, n),
        )
        if trial % 2 == 0:
            # nested by construction: Y is a scaled-up copy of X
            Y = AHPolytope(X.base, X.T * rng.uniform(1.0, 2.0), X.t)
        else:
            Y = AHPolytope(
                HPolyhedron.from_box(-rng.uniform(0.5, 2, ky), rng.uniform(0.5, 2, ky)),
                rng.standard_normal((n, ky)),
                rng.uniform(-0.5, 0.5, n),
            )
        if ah_containment_certified(X, Y):
            certified += 1
            for v in polytope_vertices(X.base):
                assert ah_contains_point(Y, X.t + X.T @ v, tol=1e-7)
    assert certified >= 10  # the suite must actually exercise certificates


def test_containment_dimension_mismatch():
    X = AHPolytope.from_hpolyhedron(UNIT_BOX)
    Y = AHPolytope.from_hpolyhedron(HPolyhedron.from_box([0.0], [1.0]))
    with pytest.raises(GeometryError):
        ah_containment_certified(X, Y)


def test_chebyshev_center_invariants_random():
    rng = np.random.default_rng(5)
    for _ in range(25):
        n = int(rng.integers(1, 5))
        lo = rng.uniform(-2, 0, n)
        hi = rng.uniform(0.1, 2, n)
        P = HPolyhedron.from_box(lo, hi)
        center, radius = chebyshev_center(P)
        assert radius >= 0
        assert contains_point(P, center, tol=1e-8)


def test_bounding_box():
    lo, hi = bounding_box(UNIT_BOX)
    assert np.allclose(lo, [0, 0]) and np.allclose(hi, [1, 1])
    with pytest.raises(UnboundedSetError):
        bounding_box(HPolyhedron(np.array([[1.0, 0.0]]), np.array([1.0])))


def test_solver_backend_selected_by_env_key(monkeypatch):
    monkeypatch.setenv("GCSSTAR_SOLVER", "highs-ds")
    center, radius = chebyshev_center(UNIT_BOX)
    assert radius == pytest.approx(0.5)
    monkeypatch.setenv("GCSSTAR_SOLVER", "bogus")
    with pytest.raises(ValueError):
        chebyshev_center(UNIT_BOX)


def test_json_round_trip():
    P = HPolyhedron.from_box([-1, 0], [2, 3])
    Q = HPolyhedron.from_json(P.to_json())
    assert np.array_equal(P.A, Q.A) and np.array_equal(P.b, Q.b)
    X = AHPolytope(P, np.array([[1.0, 0.0], [0.0, 2.0], [1.0, 1.0]]), np.array([0.0, 1.0, 2.0]))
    Y = AHPolytope.from_json(X.to_json())
    assert np.array_equal(X.T, Y.T) and np.array_equal(X.t, Y.t)
    assert np.array_equal(X.base.A, Y.base.A)
