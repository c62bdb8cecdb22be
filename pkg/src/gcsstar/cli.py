"""Command-line front end: solve problems, run benchmark sweeps, render SVGs.

Exit codes: 0 solution found, 2 search failed, 3 timeout or expansion limit,
4 input error.  The LP backend is selected by the GCSSTAR_SOLVER environment
variable.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .domination import CHECKER_KEYS
from .environments import (
    make_fig3_counterexample,
    make_pushing_demo,
    make_stones4,
)
from .environments.pushing import pushing_from_json
from .gcs_core import ExplicitGcs, validate_problem
from .heuristics import InflatedHeuristic, ShortcutHeuristic, ZeroHeuristic
from .restriction import trajectory_cost
from .search import SearchOptions, SearchStatus, Solution, astar_vertex_baseline, gcs_star

EXIT_SOLVED = 0
EXIT_FAIL = 2
EXIT_LIMIT = 3
EXIT_INPUT = 4

FIXTURES = {
    "fig3": (make_fig3_counterexample, {}),
    "stones4": (make_stones4, {}),
    "push1r1o": (make_pushing_demo, {"max_path_len": 6}),
}

HEURISTIC_CHOICES = ("zero", "shortcut")


class InputError(ValueError):
    pass


def _load_problem(args):
    """Problem plus per-fixture option defaults; raises InputError."""
    if getattr(args, "fixture", None):
        if args.fixture not in FIXTURES:
            raise InputError(f"unknown fixture {args.fixture!r}; known: {sorted(FIXTURES)}")
        build, defaults = FIXTURES[args.fixture]
        return build(), dict(defaults)
    if getattr(args, "problem", None):
        try:
            with open(args.problem) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read problem file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed problem JSON: {exc}") from exc
        try:
            if "bodies" in data:
                return pushing_from_json(data), {"max_path_len": 8}
            return ExplicitGcs.from_json(data), {}
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"invalid problem description: {exc}") from exc
    raise InputError("one of --problem or --fixture is required")


def _make_heuristic(key: str, epsilon: float, robot_weight: float):
    if epsilon < 1.0:
        raise InputError("epsilon must be >= 1")
    if key == "zero":
        inner = ZeroHeuristic()
    elif key == "shortcut":
        inner = ShortcutHeuristic(robot_weight=robot_weight)
    else:
        raise InputError(f"unknown heuristic {key!r}; known: {HEURISTIC_CHOICES}")
    return InflatedHeuristic(inner, epsilon) if epsilon > 1.0 else inner


def _search_options(args, defaults) -> SearchOptions:
    if args.samples < 1:
        raise InputError("--samples must be at least 1")
    needs_seed = args.checker != "astar-baseline" and (
        "sampling" in args.checker or "hybrid" in args.checker
    )
    if needs_seed and args.seed is None:
        raise InputError(f"--seed is required for checker {args.checker!r}")
    return SearchOptions(
        max_path_len=args.max_path_len or defaults.get("max_path_len"),
        max_expansions=args.max_expansions,
        timeout_s=args.timeout,
        seed=args.seed if args.seed is not None else 0,
        samples=args.samples,
        workers=args.workers,
    )


def _run(problem, args, defaults) -> Solution:
    heuristic = _make_heuristic(args.heuristic, args.epsilon, args.robot_weight)
    opts = _search_options(args, defaults)
    if args.checker == "astar-baseline":
        sol = astar_vertex_baseline(problem, heuristic, opts)
    elif args.checker in CHECKER_KEYS:
        sol = gcs_star(problem, heuristic, args.checker, opts)
    else:
        raise InputError(
            f"unknown checker {args.checker!r}; known: {sorted(CHECKER_KEYS)} or astar-baseline"
        )
    sol.labels = {
        "seed": opts.seed,
        "checker": args.checker,
        "heuristic": args.heuristic if args.epsilon == 1.0 else f"{args.heuristic}*eps{args.epsilon:g}",
    }
    return sol


def _exit_code(status: SearchStatus) -> int:
    if status == SearchStatus.SOLVED:
        return EXIT_SOLVED
    if status == SearchStatus.FAIL:
        return EXIT_FAIL
    return EXIT_LIMIT


def cmd_solve(args) -> int:
    try:
        problem, defaults = _load_problem(args)
        violations = validate_problem(problem)
        if violations:
            raise InputError("invalid problem: " + "; ".join(violations))
        solution = _run(problem, args, defaults)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    record = solution.to_json()
    text = json.dumps(record, indent=1)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.svg:
        if not solution.solved:
            print("error: no trajectory to render", file=sys.stderr)
            return EXIT_INPUT
        from .viz import VizError, render_solution

        try:
            svg = render_solution(problem, solution.path, solution.trajectory.points)
        except VizError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        with open(args.svg, "w") as fh:
            fh.write(svg)
    return _exit_code(solution.status)


def cmd_bench(args) -> int:
    fixtures = args.fixtures.split(",")
    checkers = args.checkers.split(",")
    heuristics = args.heuristics.split(",")
    for name in fixtures:
        if name not in FIXTURES:
            print(f"error: unknown fixture {name!r}", file=sys.stderr)
            return EXIT_INPUT
    rows = []
    for fixture in fixtures:
        for checker in checkers:
            for heuristic in heuristics:
                build, defaults = FIXTURES[fixture]
                ns = argparse.Namespace(
                    checker=checker,
                    heuristic=heuristic,
                    epsilon=args.epsilon,
                    robot_weight=args.robot_weight,
                    samples=args.samples,
                    seed=args.seed if args.seed is not None else 0,
                    max_path_len=args.max_path_len,
                    max_expansions=args.max_expansions,
                    timeout=args.timeout,
                    workers=args.workers,
                )
                if checker == "astar-baseline":
                    alg, kind, impl = "astar", "-", "-"
                else:
                    alg = "gcsstar"
                    kind, impl = checker.split("-")
                try:
                    solution = _run(build(), ns, defaults)
                    rows.append(
                        [
                            alg,
                            kind,
                            impl,
                            heuristic,
                            fixture,
                            f"{solution.stats.wall_time_s:.3f}",
                            "" if solution.cost is None else f"{solution.cost:.6f}",
                            solution.stats.expansions,
                            solution.status.value,
                        ]
                    )
                except InputError as exc:
                    print(f"error: {exc}", file=sys.stderr)
                    return EXIT_INPUT
                except Exception as exc:  # a failed row must not kill the sweep
                    rows.append([alg, kind, impl, heuristic, fixture, "", "", "", f"error: {exc}"])
    header = ["alg", "checker", "impl", "heuristic", "fixture", "time", "cost", "expansions", "status"]
    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(header)
        writer.writerows(rows)
    return EXIT_SOLVED


def cmd_viz(args) -> int:
    from .viz import VizError, render_solution

    try:
        problem, _ = _load_problem(args)
        try:
            with open(args.solution) as fh:
                record = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read solution file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed solution JSON: {exc}") from exc
        path = record.get("path")
        trajectory = record.get("trajectory")
        if not path or not trajectory:
            raise InputError("solution has no trajectory to render")
        path = tuple(path)
        stored = record.get("cost")
        if stored is not None:
            recomputed = trajectory_cost(problem, path, trajectory)
            if abs(recomputed - stored) > 1e-6 * max(1.0, abs(stored)):
                raise InputError(
                    f"stored cost {stored} disagrees with re-evaluated cost {recomputed}"
                )
        svg = render_solution(problem, path, trajectory)
    except (InputError, VizError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    with open(args.out, "w") as fh:
        fh.write(svg)
    return EXIT_SOLVED


def _add_problem_args(p):
    p.add_argument("--problem", help="problem JSON file (explicit graph or pushing environment)")
    p.add_argument("--fixture", help=f"builtin fixture name: {sorted(FIXTURES)}")


def _add_run_args(p):
    p.add_argument("--checker", default="rc-containment", help="domination checker key or astar-baseline")
    p.add_argument("--heuristic", default="zero", choices=HEURISTIC_CHOICES)
    p.add_argument("--epsilon", type=float, default=1.0, help="heuristic inflation factor (>= 1)")
    p.add_argument("--robot-weight", type=float, default=0.2, help="shortcut weight on robot coordinates")
    p.add_argument("--samples", type=int, default=1, help="samples per sampling-based check")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--max-path-len", type=int, default=None)
    p.add_argument("--max-expansions", type=int, default=None)
    p.add_argument("--timeout", type=float, default=None, help="wall-clock limit in seconds")
    p.add_argument("--workers", type=int, default=0, help="thread fan-out for successor solves")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gcsstar", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one problem and write the solution JSON")
    _add_problem_args(p)
    _add_run_args(p)
    p.add_argument("--out", help="solution JSON path (default: stdout)")
    p.add_argument("--svg", help="also render the trajectory to this SVG file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="run a checker x heuristic x fixture sweep into a CSV")
    p.add_argument("--fixtures", default="fig3,stones4")
    p.add_argument("--checkers", default="rc-sampling,rn-sampling")
    p.add_argument("--heuristics", default="zero")
    _add_run_args(p)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("viz", help="render a stored solution JSON to SVG")
    p.add_argument("solution", help="solution JSON produced by solve")
    _add_problem_args(p)
    p.add_argument("--out", required=True, help="output SVG path")
    p.set_defaults(func=cmd_viz)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
