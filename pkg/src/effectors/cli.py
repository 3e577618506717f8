"""Command-line front end: validate, cost, solve, simulate, generate.

Every command prints one JSON document to stdout and diagnostics to
stderr. Exit codes: 0 success or "yes", 1 a "no" decision, 2 usage or
input error, 3 a tripped resource guard. Output is deterministic given
the full flag set (timings are kept out of the printed reports).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .errors import (
    EffectorsError,
    InvalidInstanceError,
    NotApplicableError,
    ResourceLimitError,
)
from .generators import (
    MccInput,
    StConReductionSpec,
    gen_dominating_set,
    gen_independent_set,
    gen_mcc,
    gen_random,
    gen_set_cover,
    gen_stcon,
)
from .graph import Instance
from .instance_io import instance_to_dot, parse_instance, serialize_instance
from .propagation import (
    DEFAULT_MAX_R,
    cost,
    monte_carlo_cost,
    simulate_once,
    substream_seed,
)
from .rationals import as_rational, format_rational
from .solvers import (
    ALGORITHMS,
    DEFAULT_MAX_BRUTE_NODES,
    pick_algorithm,
    solve,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="effectors",
        description="Exact and Monte Carlo effector analysis on influence graphs.",
    )
    parser.add_argument("--seed", type=int, default=0, help="base RNG seed")
    parser.add_argument(
        "--max-r",
        type=int,
        default=DEFAULT_MAX_R,
        help="ceiling on probabilistic arcs for exact code paths",
    )
    parser.add_argument(
        "--max-bruteforce-nodes",
        type=int,
        default=DEFAULT_MAX_BRUTE_NODES,
        help="node ceiling for the brute-force solver",
    )
    parser.add_argument(
        "--format", choices=("json", "dot"), default="json",
        help="output format where supported (validate)",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("validate", help="parse an instance and report its shape")
    p.add_argument("instance", type=Path)

    p = commands.add_parser("cost", help="cost of a given effector set")
    p.add_argument("instance", type=Path)
    p.add_argument("--effectors", default="", help="comma-separated node labels")
    p.add_argument(
        "--method",
        choices=("exact", "live-edge", "montecarlo"),
        default="exact",
    )
    p.add_argument("--samples", type=int, default=10000)

    p = commands.add_parser("solve", help="find or decide an effector set")
    p.add_argument("instance", type=Path)
    p.add_argument(
        "--algorithm", choices=("auto",) + ALGORITHMS, default="auto"
    )

    p = commands.add_parser("simulate", help="run seeded cascades")
    p.add_argument("instance", type=Path)
    p.add_argument("--effectors", default="", help="comma-separated node labels")
    p.add_argument("--runs", type=int, default=1)

    gen = commands.add_parser("generate", help="write a generated instance file")
    families = gen.add_subparsers(dest="family", required=True)

    f = families.add_parser("mcc", help="multicolored clique reduction")
    f.add_argument("--vertices", required=True, help='colored, e.g. "a:1,b:2,c:3"')
    f.add_argument("--edges", default="", help='e.g. "a-b,b-c"')
    f.add_argument("--k", type=int, required=True)
    f.add_argument("--out", type=Path, required=True)

    f = families.add_parser("domset", help="dominating set reduction")
    f.add_argument("--vertices", required=True, help='e.g. "a,b,c"')
    f.add_argument("--edges", default="")
    f.add_argument("--k", type=int, required=True)
    f.add_argument("--out", type=Path, required=True)

    f = families.add_parser("setcover", help="set cover reduction")
    f.add_argument("--sets", required=True, help='e.g. "S1:u1+u2,S2:u2+u3"')
    f.add_argument("--universe", required=True, help='e.g. "u1,u2,u3"')
    f.add_argument("--cover-size", type=int, required=True)
    f.add_argument("--out", type=Path, required=True)

    f = families.add_parser("indepset", help="independent set reduction")
    f.add_argument("--vertices", required=True)
    f.add_argument("--edges", default="")
    f.add_argument("--k", type=int, required=True)
    f.add_argument("--out", type=Path, required=True)

    f = families.add_parser("stcon", help="s-t connectedness counting reduction")
    f.add_argument("--nodes", required=True)
    f.add_argument("--arcs", default="", help='e.g. "s-a,a-t"')
    f.add_argument("--source", required=True)
    f.add_argument("--sink", required=True)
    f.add_argument("--threshold", type=int, required=True)
    f.add_argument("--out", type=Path, required=True)

    f = families.add_parser("random", help="seeded random instance")
    f.add_argument("--count", type=int, required=True, help="number of nodes")
    f.add_argument("--arc-density", type=float, default=0.3)
    f.add_argument("--prob-fraction", type=float, default=0.5)
    f.add_argument("--target-fraction", type=float, default=0.5)
    f.add_argument("--budget", default="infinite")
    f.add_argument("--cost-bound", default=None)
    f.add_argument("--out", type=Path, required=True)
    return parser


def _emit(document: object) -> None:
    print(json.dumps(document, indent=2))


def _load_instance(path: Path) -> Instance:
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise InvalidInstanceError(f"cannot read {path}: {exc}") from exc
    return parse_instance(data)


def _split_labels(text: str) -> list[str]:
    return [piece.strip() for piece in text.split(",") if piece.strip()]


def _split_pairs(text: str) -> list[tuple[str, str]]:
    pairs = []
    for piece in _split_labels(text):
        left, sep, right = piece.partition("-")
        if not sep or not left.strip() or not right.strip():
            raise InvalidInstanceError(f'expected "u-v" pair, got {piece!r}')
        pairs.append((left.strip(), right.strip()))
    return pairs


def _budget_document(instance: Instance) -> int | str:
    return "infinite" if instance.budget is None else instance.budget


def _cmd_validate(args: argparse.Namespace) -> int:
    instance = _load_instance(args.instance)
    if args.format == "dot":
        sys.stdout.write(instance_to_dot(instance))
        return 0
    graph = instance.graph
    n, m, r = graph.node_count, graph.arc_count, graph.probabilistic_arc_count
    b, c = instance.budget, instance.cost_bound
    applicable = {
        "zero-cost": c is not None and c == 0,
        "xp-b": r == 0 and b is not None,
        "xp-c": r == 0 and c is not None,
        "infinite-budget": b is None and r <= args.max_r,
        "influence-max": (
            r == 0
            and b is not None
            and c is not None
            and instance.targets == frozenset(range(n))
        ),
        "brute-force": n <= args.max_bruteforce_nodes and r <= args.max_r,
    }
    _emit(
        {
            "nodes": n,
            "arcs": m,
            "probabilistic_arcs": r,
            "targets": instance.target_count,
            "budget": _budget_document(instance),
            "cost_bound": None if c is None else format_rational(c),
            "is_dag": graph.is_dag(),
            "auto_algorithm": pick_algorithm(instance),
            "applicable": applicable,
        }
    )
    return 0


def _cmd_cost(args: argparse.Namespace) -> int:
    instance = _load_instance(args.instance)
    graph = instance.graph
    effectors = graph.node_set(_split_labels(args.effectors))
    if args.method == "montecarlo":
        if args.samples < 1:
            raise InvalidInstanceError("--samples must be at least 1")
        result = monte_carlo_cost(
            graph, instance.targets, effectors, args.samples, args.seed
        )
        _emit(
            {
                "method": "montecarlo",
                "effectors": graph.label_set(effectors),
                "estimate": str(result.estimate),
                "standard_error": str(result.standard_error),
                "samples": args.samples,
                "seed": args.seed,
            }
        )
        return 0
    breakdown = cost(
        graph, instance.targets, effectors, method=args.method, max_r=args.max_r
    )
    _emit(
        {
            "method": breakdown.method,
            "effectors": graph.label_set(effectors),
            "per_node": {
                graph.labels[v]: format_rational(breakdown.per_node[v])
                for v in range(graph.node_count)
            },
            "total": format_rational(breakdown.total),
        }
    )
    return 0


def _cmd_solve(args: argparse.Namespace) -> int:
    instance = _load_instance(args.instance)
    report = solve(
        instance,
        args.algorithm,
        max_r=args.max_r,
        max_brute_nodes=args.max_bruteforce_nodes,
    )
    graph = instance.graph
    _emit(
        {
            "decision": report.decision,
            "effectors": graph.label_set(report.effectors),
            "cost": None
            if report.exact_cost is None
            else format_rational(report.exact_cost),
            "algorithm": report.algorithm,
            "stats": {
                key: value
                for key, value in sorted(report.stats.items())
                if key != "elapsed_s"
            },
        }
    )
    return 1 if report.decision is False else 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    instance = _load_instance(args.instance)
    graph = instance.graph
    effectors = graph.node_set(_split_labels(args.effectors))
    if args.runs < 1:
        raise InvalidInstanceError("--runs must be at least 1")
    traces = []
    for run in range(args.runs):
        trace = simulate_once(graph, effectors, substream_seed(args.seed, run))
        traces.append(
            {
                "rounds": [graph.label_set(r) for r in trace.rounds],
                "trials": [
                    {
                        "from": graph.labels[graph.arcs[idx].tail],
                        "to": graph.labels[graph.arcs[idx].head],
                        "success": success,
                    }
                    for idx, success in trace.arc_trials
                ],
                "probability": format_rational(trace.trace_probability),
            }
        )
    _emit({"seed": args.seed, "runs": args.runs, "traces": traces})
    return 0


def _parse_colored_vertices(text: str) -> tuple[list[str], dict[str, int]]:
    vertices = []
    colors = {}
    for piece in _split_labels(text):
        name, sep, color = piece.partition(":")
        if not sep:
            raise InvalidInstanceError(f'expected "vertex:color", got {piece!r}')
        try:
            colors[name.strip()] = int(color)
        except ValueError:
            raise InvalidInstanceError(f"color must be an integer: {piece!r}") from None
        vertices.append(name.strip())
    return vertices, colors


def _parse_set_system(text: str) -> dict[str, list[str]]:
    system: dict[str, list[str]] = {}
    for piece in _split_labels(text):
        name, sep, members = piece.partition(":")
        if not sep:
            raise InvalidInstanceError(f'expected "name:elem+elem", got {piece!r}')
        system[name.strip()] = [
            member.strip() for member in members.split("+") if member.strip()
        ]
    return system


def _cmd_generate(args: argparse.Namespace) -> int:
    if args.family == "mcc":
        vertices, colors = _parse_colored_vertices(args.vertices)
        instance = gen_mcc(
            MccInput(
                vertices=tuple(vertices),
                edges=tuple(_split_pairs(args.edges)),
                colors=colors,
                k=args.k,
            )
        )
    elif args.family == "domset":
        instance = gen_dominating_set(
            _split_labels(args.vertices), _split_pairs(args.edges), args.k
        )
    elif args.family == "setcover":
        instance = gen_set_cover(
            _parse_set_system(args.sets),
            _split_labels(args.universe),
            args.cover_size,
        )
    elif args.family == "indepset":
        instance = gen_independent_set(
            _split_labels(args.vertices), _split_pairs(args.edges), args.k
        )
    elif args.family == "stcon":
        instance = gen_stcon(
            StConReductionSpec(
                nodes=tuple(_split_labels(args.nodes)),
                arcs=tuple(_split_pairs(args.arcs)),
                source=args.source,
                sink=args.sink,
                threshold=args.threshold,
            )
        )
    else:
        budget: int | None
        if args.budget == "infinite":
            budget = None
        else:
            try:
                budget = int(args.budget)
            except ValueError:
                raise InvalidInstanceError(
                    '--budget must be an integer or "infinite"'
                ) from None
        cost_bound: Fraction | None = (
            None if args.cost_bound is None else as_rational(args.cost_bound)
        )
        instance = gen_random(
            args.count,
            args.arc_density,
            args.prob_fraction,
            args.target_fraction,
            args.seed,
            budget=budget,
            cost_bound=cost_bound,
        )
    args.out.write_bytes(serialize_instance(instance))
    graph = instance.graph
    _emit(
        {
            "family": args.family,
            "out": str(args.out),
            "nodes": graph.node_count,
            "arcs": graph.arc_count,
            "probabilistic_arcs": graph.probabilistic_arc_count,
            "targets": instance.target_count,
            "budget": _budget_document(instance),
            "cost_bound": None
            if instance.cost_bound is None
            else format_rational(instance.cost_bound),
        }
    )
    return 0


_HANDLERS = {
    "validate": _cmd_validate,
    "cost": _cmd_cost,
    "solve": _cmd_solve,
    "simulate": _cmd_simulate,
    "generate": _cmd_generate,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (InvalidInstanceError, NotApplicableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EffectorsError as exc:  # pragma: no cover - internal safety net
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
