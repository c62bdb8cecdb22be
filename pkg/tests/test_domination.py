import numpy as np
import pytest

from gcsstar.domination import (
    CheckContext,
    ContainmentChecker,
    HybridChecker,
    PathCacheEntry,
    SamplingChecker,
    VertexFrontier,
    checker_from_key,
    stable_path_hash,
)
from gcsstar.environments import make_domination_fixtures, random_domination_instance
from gcsstar.gcs_core import EdgeCostL1, ExplicitGcs, equality_rows_constraint
from gcsstar.geometry import HPolyhedron, polytope_vertices, ah_contains_point
from gcsstar.restriction import reachable_set, solve_restriction

from helpers import (
    grid_domination_oracle,
    grid_over_box,
    profile_domination_oracle,
    verify_rc_witness,
    verify_rn_witness,
)


def entry_for(g, path):
    return PathCacheEntry(tuple(path), solve_restriction(g, path))


def nested_box_problem():
    """Two branches into a shared 2-D terminal box; one reach nested in the other."""
    g = ExplicitGcs("s", "E")
    g.add_vertex("s", HPolyhedron.from_point([0.0, 0.0]))
    g.add_vertex("inner", HPolyhedron.from_box([-0.5, -0.5], [0.5, 0.5]))
    g.add_vertex("outer", HPolyhedron.from_box([-2.0, -2.0], [2.0, 2.0]))
    g.add_vertex("far", HPolyhedron.from_box([2.5, 2.5], [3.5, 3.5]))
    g.add_vertex("E", HPolyhedron.from_box([-4.0, -4.0], [4.0, 4.0]))
    hop = np.hstack([-np.eye(2), np.eye(2)])
    pin = equality_rows_constraint(np.hstack([np.eye(2), -np.eye(2)]), np.zeros(2))
    for name in ("inner", "outer", "far"):
        g.add_edge("s", name, EdgeCostL1(0.5, np.ones(2), hop, np.zeros(2)))
        g.add_edge(name, "E", EdgeCostL1.constant(4, 0.5), pin)
    return g


def test_frontier_empty_vacuously_true():
    scenarios = make_domination_fixtures()
    sc = scenarios[0]
    ctx = CheckContext(problem=sc.problem, seed=1)
    cand = entry_for(sc.problem, sc.candidate)
    for key in ("rc-sampling", "rn-sampling", "rc-containment", "rn-containment"):
        assert checker_from_key(key).not_dominated(ctx, cand, ())


def test_duplicate_candidate_is_dominated():
    sc = make_domination_fixtures()[0]
    ctx = CheckContext(problem=sc.problem, seed=2)
    cand = entry_for(sc.problem, sc.candidate)
    twin = entry_for(sc.problem, sc.candidate)
    assert not SamplingChecker("rc").not_dominated(ctx, cand, (twin,))
    assert not ContainmentChecker("rc").not_dominated(ctx, cand, (twin,))
    assert not ContainmentChecker("rn").not_dominated(ctx, cand, (twin,))


def test_scenario_truth_vs_grid_oracle():
    for sc in make_domination_fixtures():
        rc, rn = grid_domination_oracle(sc.problem, sc.candidate, sc.frontier)
        assert (rc, rn) == (sc.expected_rc, sc.expected_rn), sc.name


def test_rn_implies_rc_on_scenarios():
    for sc in make_domination_fixtures():
        if sc.expected_rn:
            assert sc.expected_rc, f"scenario {sc.name} violates the implication"


def test_sampling_matches_truth_on_scenarios():
    # with a generous sample budget the witness regions here are easy to hit
    for sc in make_domination_fixtures():
        ctx = CheckContext(problem=sc.problem, seed=5)
        cand = entry_for(sc.problem, sc.candidate)
        frontier = [entry_for(sc.problem, p) for p in sc.frontier]
        rc = SamplingChecker("rc", k=8).not_dominated(ctx, cand, frontier)
        rn = SamplingChecker("rn", k=8).not_dominated(ctx, cand, frontier)
        assert rc == sc.expected_rc, sc.name
        assert rn == sc.expected_rn, sc.name


def test_containment_conservative_on_scenarios():
    # containment never keeps less than the truth: False implies truly dominated
    for sc in make_domination_fixtures():
        ctx = CheckContext(problem=sc.problem, seed=6)
        cand = entry_for(sc.problem, sc.candidate)
        frontier = [entry_for(sc.problem, p) for p in sc.frontier]
        if not ContainmentChecker("rc").not_dominated(ctx, cand, frontier):
            assert not sc.expected_rc, sc.name
        if not ContainmentChecker("rn").not_dominated(ctx, cand, frontier):
            assert not sc.expected_rn, sc.name


def test_collective_domination_invisible_to_single_containment():
    by_name = {sc.name: sc for sc in make_domination_fixtures()}
    for name, kind in (("d", "rn"), ("e", "rc"), ("e", "rn")):
        sc = by_name[name]
        ctx = CheckContext(problem=sc.problem, seed=7)
        cand = entry_for(sc.problem, sc.candidate)
        frontier = [entry_for(sc.problem, p) for p in sc.frontier]
        assert ContainmentChecker(kind).not_dominated(ctx, cand, frontier)


def test_rn_containment_nested_boxes():
    g = nested_box_problem()
    ctx = CheckContext(problem=g, seed=8)
    inner = entry_for(g, ("s", "inner", "E"))
    outer = entry_for(g, ("s", "outer", "E"))
    far = entry_for(g, ("s", "far", "E"))
    assert not ContainmentChecker("rn").not_dominated(ctx, inner, [outer])
    # cross-check the nesting with the vertex-membership oracle
    S_inner = reachable_set(g, inner.path)
    S_outer = reachable_set(g, outer.path)
    for v in polytope_vertices(S_inner.base):
        assert ah_contains_point(S_outer, S_inner.t + S_inner.T @ v, tol=1e-7)
    # a disjoint reach can never be certified dominated
    assert ContainmentChecker("rn").not_dominated(ctx, far, [outer])
    assert ContainmentChecker("rc").not_dominated(ctx, far, [outer])


def test_hybrid_short_circuits_on_witness():
    g = nested_box_problem()
    ctx = CheckContext(problem=g, seed=9)
    far = entry_for(g, ("s", "far", "E"))
    outer = entry_for(g, ("s", "outer", "E"))
    hybrid = HybridChecker("rn")
    assert hybrid.not_dominated(ctx, far, [outer])
    assert hybrid.stats["sample_hits"] == 1
    assert hybrid.stats["containment_calls"] == 0


def test_hybrid_falls_through_to_containment():
    g = nested_box_problem()
    ctx = CheckContext(problem=g, seed=10)
    inner = entry_for(g, ("s", "inner", "E"))
    twin = entry_for(g, ("s", "inner", "E"))
    hybrid = HybridChecker("rc")
    assert not hybrid.not_dominated(ctx, inner, [twin])
    assert hybrid.stats["containment_calls"] == 1


def test_hybrid_true_whenever_containment_true():
    # one comparison per kind per fixture: 100 random fixtures in total
    for seed in range(50):
        g, candidate, frontier, _ = random_domination_instance(seed)
        ctx = CheckContext(problem=g, seed=seed)
        cand = entry_for(g, candidate)
        entries = [entry_for(g, p) for p in frontier]
        for kind in ("rc", "rn"):
            cont = ContainmentChecker(kind).not_dominated(ctx, cand, entries)
            hyb = HybridChecker(kind).not_dominated(ctx, cand, entries)
            if cont:
                assert hyb


def test_sampling_witness_soundness():
    for seed in range(25):
        g, candidate, frontier, _ = random_domination_instance(seed)
        trace = []
        ctx = CheckContext(problem=g, seed=seed, trace=trace)
        cand = entry_for(g, candidate)
        entries = [entry_for(g, p) for p in frontier]
        SamplingChecker("rc", k=2).not_dominated(ctx, cand, entries)
        SamplingChecker("rn", k=2).not_dominated(ctx, cand, entries)
        for record in trace:
            if not record["verdict"] or record.get("witness") is None:
                continue
            x = record["witness"]
            if record["kind"] == "rc":
                assert verify_rc_witness(g, candidate, frontier, x)
            else:
                assert verify_rn_witness(g, candidate, frontier, x)


def test_containment_conservative_vs_profile_oracle():
    for seed in range(30):
        g, candidate, frontier, profiles = random_domination_instance(seed)
        dim = g.vertex("E").dim
        half = {1: 4.0, 2: 3.0, 3: 2.0}[dim]
        n_axis = {1: 200, 2: 15, 3: 6}[dim]
        grid = grid_over_box(-half * np.ones(dim), half * np.ones(dim), n_axis)
        rc_true, rn_true = profile_domination_oracle(profiles, candidate, frontier, grid)
        ctx = CheckContext(problem=g, seed=seed)
        cand = entry_for(g, candidate)
        entries = [entry_for(g, p) for p in frontier]
        if not ContainmentChecker("rc").not_dominated(ctx, cand, entries):
            assert not rc_true
        if not ContainmentChecker("rn").not_dominated(ctx, cand, entries):
            assert not rn_true


def test_rn_implies_rc_on_random_instances():
    # ground-truth implication over randomized 1-D to 3-D instances
    for seed in range(30):
        g, candidate, frontier, profiles = random_domination_instance(seed)
        dim = g.vertex("E").dim
        half = {1: 4.0, 2: 3.0, 3: 2.0}[dim]
        n_axis = {1: 120, 2: 13, 3: 6}[dim]
        grid = grid_over_box(-half * np.ones(dim), half * np.ones(dim), n_axis)
        rc, rn = profile_domination_oracle(profiles, candidate, frontier, grid)
        if rn:
            assert rc


def test_profile_oracle_matches_lp_oracle_spot_checks():
    # the closed-form profiles must agree with pinned-LP evaluation
    import math
    from gcsstar.restriction import cost_to_come_at_point

    for seed in (0, 3, 11):
        g, candidate, frontier, profiles = random_domination_instance(seed)
        rng = np.random.default_rng(seed)
        dim = g.vertex("E").dim
        for _ in range(8):
            x = rng.uniform(-3, 3, dim)
            for path, prof in profiles.items():
                lp_val = cost_to_come_at_point(g, path, x)
                closed = prof.cost(x)
                if closed == math.inf:
                    assert lp_val == math.inf
                else:
                    assert lp_val == pytest.approx(closed, abs=1e-6)


def test_deterministic_verdicts():
    g, candidate, frontier, _ = random_domination_instance(4)

    def run():
        ctx = CheckContext(problem=g, seed=123)
        cand = entry_for(g, candidate)
        entries = [entry_for(g, p) for p in frontier]
        out = []
        for key in ("rc-sampling", "rn-sampling", "rc-hybrid", "rn-hybrid"):
            out.append(checker_from_key(key, k=2).not_dominated(ctx, cand, entries))
        return out

    assert run() == run()


def test_rng_stream_independent_of_order():
    g, candidate, frontier, _ = random_domination_instance(6)
    ctx = CheckContext(problem=g, seed=9)
    a = ctx.rng_for(candidate).standard_normal(4)
    ctx.rng_for(tuple(frontier[0])).standard_normal(4)  # interleaved other stream
    b = CheckContext(problem=g, seed=9).rng_for(candidate).standard_normal(4)
    assert np.array_equal(a, b)
    assert stable_path_hash(candidate) == stable_path_hash(tuple(candidate))
    assert stable_path_hash(candidate) != stable_path_hash(tuple(frontier[0]))


def test_cached_sets_equal_fresh_reconstruction():
    g, candidate, frontier, _ = random_domination_instance(2)
    ctx = CheckContext(problem=g, seed=0)
    cand = entry_for(g, candidate)
    S1 = cand.reachable(ctx)
    S2 = cand.reachable(ctx)
    assert S1 is S2  # cached
    fresh = reachable_set(g, candidate)
    assert np.allclose(S1.T, fresh.T) and np.allclose(S1.t, fresh.t)
    assert np.allclose(S1.base.A, fresh.base.A) and np.allclose(S1.base.b, fresh.base.b)


def test_vertex_frontier_bookkeeping():
    g, candidate, frontier, _ = random_domination_instance(1)
    vf = VertexFrontier()
    assert vf.entries("E") == ()
    e1 = entry_for(g, candidate)
    vf.add(e1)
    assert vf.entries("E") == (e1,)
    assert vf.total_entries() == 1
    assert vf.vertices() == ["E"]
