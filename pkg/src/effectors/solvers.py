"""Exact decision and optimization algorithms for effector detection.

Every algorithm here is exact; the dispatcher (:func:`solve`) picks the
cheapest one whose preconditions hold and re-evaluates the winning set's
cost through the propagation engine as a safety net. Tie-breaking is
uniform: among optimal effector sets, the lexicographically smallest one
(by sorted node indices) is returned, so results are reproducible across
runs and worker schedules.
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping

from .closure import ClosureProblem, max_weight_closure
from .errors import EffectorsError, NotApplicableError, ResourceLimitError
from .graph import (
    InfluenceGraph,
    Instance,
    ONE,
    condensation,
    deterministic_closure,
    inverse_deterministic_closure,
    reachable,
)
from .propagation import DEFAULT_MAX_R, cost, exact_probabilities

logger = logging.getLogger(__name__)

DEFAULT_MAX_BRUTE_NODES = 20

ALGORITHMS = (
    "zero-cost",
    "xp-b",
    "xp-c",
    "infinite-budget",
    "influence-max",
    "brute-force",
)


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one solver run.

    ``decision`` is None when no cost bound was posed; ``exact_cost`` is
    None only on a "no" answer without a witness set.
    """

    effectors: frozenset[int]
    exact_cost: Fraction | None
    algorithm: str
    decision: bool | None = None
    stats: Mapping[str, int | float] = field(default_factory=dict)


@dataclass(frozen=True)
class BranchAssignment:
    """One branch of the infinite-budget search: a guessed split of the
    probabilistic-tail nodes into effectors and non-effectors, extended to
    its deterministic consequences."""

    chosen_prob_tails: frozenset[int]
    effector_closure: frozenset[int]
    excluded_prob_tails: frozenset[int]
    excluded_closure: frozenset[int]
    resolved: frozenset[int]
    remainder: tuple[int, ...]

    @property
    def feasible(self) -> bool:
        """A branch is contradictory when the chosen tails deterministically
        force a tail that was guessed to stay outside the solution."""
        return not self.effector_closure & self.excluded_prob_tails


def branch_assignment(
    graph: InfluenceGraph, chosen_prob_tails: Iterable[int]
) -> BranchAssignment:
    chosen = frozenset(chosen_prob_tails)
    effector_closure = deterministic_closure(graph, chosen)
    excluded = graph.prob_tails - chosen
    excluded_closure = inverse_deterministic_closure(graph, excluded)
    resolved = effector_closure | excluded_closure
    remainder = tuple(
        v for v in range(graph.node_count) if v not in resolved
    )
    return BranchAssignment(
        chosen_prob_tails=chosen,
        effector_closure=effector_closure,
        excluded_prob_tails=excluded,
        excluded_closure=excluded_closure,
        resolved=resolved,
        remainder=remainder,
    )


def _prefer(
    best: tuple[Fraction, tuple[int, ...]] | None,
    candidate_cost: Fraction,
    candidate_nodes: tuple[int, ...],
) -> bool:
    """Lower cost wins; equal cost falls back to lexicographic order."""
    if best is None:
        return True
    best_cost, best_nodes = best
    if candidate_cost != best_cost:
        return candidate_cost < best_cost
    return candidate_nodes < best_nodes


# -- zero cost ----------------------------------------------------------------


def solve_zero_cost(
    graph: InfluenceGraph, targets: Iterable[int], budget: int | None
) -> frozenset[int] | None:
    """Effector set of cost exactly 0 within the budget, or None.

    Cost 0 forces every target active with certainty and every non-target
    inactive, so a "yes" needs (a) no directed path from any target to a
    non-target and (b) at most ``budget`` source components in the
    deterministic condensation of the target-induced subgraph, one
    effector each. Runs in linear time.
    """
    target_set = frozenset(targets)
    if not target_set:
        return frozenset()
    if not reachable(graph, target_set) <= target_set:
        return None
    dag = condensation(graph, arc_filter="deterministic", restrict_to=target_set)
    sources = dag.sources()
    if budget is not None and len(sources) > budget:
        return None
    return frozenset(dag.components[c][0] for c in sources)


# -- deterministic (r = 0) solvers --------------------------------------------


def _require_deterministic(graph: InfluenceGraph, algorithm: str) -> None:
    if graph.probabilistic_arc_count:
        raise NotApplicableError(
            f"{algorithm} requires a deterministic instance (r = 0); "
            f"this one has r = {graph.probabilistic_arc_count}"
        )


def _deterministic_wrong_count(
    graph: InfluenceGraph, target_set: frozenset[int], seeds: Iterable[int]
) -> int:
    return len(reachable(graph, seeds).symmetric_difference(target_set))


def solve_xp_budget(
    graph: InfluenceGraph,
    targets: Iterable[int],
    budget: int | None,
    cost_bound: Fraction | None = None,
) -> SolveReport:
    """Minimum-cost effector set on a deterministic instance, by trying
    every candidate set of size up to min(budget, |targets|).

    On deterministic instances a solution larger than the target count is
    never needed: the activated targets themselves do at least as well.
    """
    _require_deterministic(graph, "xp-b")
    if budget is None:
        raise NotApplicableError("xp-b requires a finite budget")
    target_set = frozenset(targets)
    size_cap = min(budget, len(target_set))
    best: tuple[Fraction, tuple[int, ...]] | None = None
    candidates = 0
    for size in range(size_cap + 1):
        for combo in itertools.combinations(range(graph.node_count), size):
            candidates += 1
            wrong = Fraction(_deterministic_wrong_count(graph, target_set, combo))
            if _prefer(best, wrong, combo):
                best = (wrong, combo)
    assert best is not None  # the empty set is always enumerated
    best_cost, best_nodes = best
    decision = None if cost_bound is None else best_cost <= cost_bound
    return SolveReport(
        effectors=frozenset(best_nodes),
        exact_cost=best_cost,
        algorithm="xp-b",
        decision=decision,
        stats={"candidates": candidates},
    )


def solve_xp_cost(
    graph: InfluenceGraph,
    targets: Iterable[int],
    budget: int | None,
    cost_bound: Fraction,
) -> frozenset[int] | None:
    """Witness within budget and cost bound on a deterministic instance.

    Deterministic costs are integers, so a solution of cost c' wrongs
    exactly c' nodes. Guess those nodes, swap their target status, and ask
    the zero-cost solver; the first witness found is returned.
    """
    _require_deterministic(graph, "xp-c")
    if cost_bound is None:
        raise NotApplicableError("xp-c requires a cost bound")
    target_set = frozenset(targets)
    flip_cap = min(int(cost_bound), graph.node_count)
    for size in range(flip_cap + 1):
        for flips in itertools.combinations(range(graph.node_count), size):
            flipped = target_set.symmetric_difference(flips)
            witness = solve_zero_cost(graph, flipped, budget)
            if witness is not None:
                return witness
    return None


def solve_influence_max(
    graph: InfluenceGraph, budget: int | None, cost_bound: Fraction | None
) -> frozenset[int] | None:
    """Witness for the all-targets case on a deterministic instance.

    Only source components of the condensation are worth activating, and
    each one left out costs at least 1; more than budget + cost_bound of
    them means "no". Otherwise all size-min(budget, sources) choices are
    checked by plain reachability.
    """
    _require_deterministic(graph, "influence-max")
    if budget is None or cost_bound is None:
        raise NotApplicableError(
            "influence-max requires a finite budget and a cost bound"
        )
    dag = condensation(graph)
    sources = dag.sources()
    if len(sources) - budget > cost_bound:
        return None
    n = graph.node_count
    pick = min(budget, len(sources))
    for combo in itertools.combinations(sources, pick):
        seeds = tuple(dag.components[c][0] for c in combo)
        wrong = n - len(reachable(graph, seeds))
        if wrong <= cost_bound:
            return frozenset(seeds)
    return None


# -- ground-truth oracle -------------------------------------------------------


def solve_brute_force(
    graph: InfluenceGraph,
    targets: Iterable[int],
    budget: int | None,
    *,
    max_nodes: int = DEFAULT_MAX_BRUTE_NODES,
    max_r: int = DEFAULT_MAX_R,
) -> SolveReport:
    """Exhaustive optimum over every effector set within the budget.

    Enumerates all probabilistic-arc outcomes once into per-node
    reachability bitmasks, then scores each candidate set against every
    outcome with integer arithmetic over the common denominator. Guarded:
    exponential in both node count and r.
    """
    n = graph.node_count
    if n > max_nodes:
        raise ResourceLimitError(
            f"instance has {n} nodes, above the brute-force ceiling of {max_nodes}"
        )
    r = graph.probabilistic_arc_count
    if r > max_r:
        raise ResourceLimitError(
            f"instance has {r} probabilistic arcs, above the exact-path ceiling of {max_r}"
        )
    target_mask = 0
    for v in targets:
        target_mask |= 1 << v

    det_out_mask = [0] * n
    for tail, heads in enumerate(graph.det_out):
        for h in heads:
            det_out_mask[tail] |= 1 << h
    prob_arcs = [graph.arcs[i] for i in graph.prob_arc_indices]
    denominator = 1
    for arc in prob_arcs:
        denominator *= arc.weight.denominator

    scenarios: list[tuple[int, list[int]]] = []
    for mask in range(1 << r):
        numerator = 1
        out_mask = list(det_out_mask)
        for i, arc in enumerate(prob_arcs):
            w = arc.weight
            if mask >> i & 1:
                numerator *= w.numerator
                out_mask[arc.tail] |= 1 << arc.head
            else:
                numerator *= w.denominator - w.numerator
        reach = [0] * n
        for v in range(n):
            seen = 1 << v
            stack = [v]
            while stack:
                u = stack.pop()
                rest = out_mask[u] & ~seen
                while rest:
                    bit = rest & -rest
                    rest ^= bit
                    seen |= bit
                    stack.append(bit.bit_length() - 1)
            reach[v] = seen
        scenarios.append((numerator, reach))

    size_cap = n if budget is None else min(budget, n)
    best_num: int | None = None
    best_nodes: tuple[int, ...] = ()
    candidates = 0
    for size in range(size_cap + 1):
        for combo in itertools.combinations(range(n), size):
            candidates += 1
            total = 0
            for numerator, reach in scenarios:
                active = 0
                for v in combo:
                    active |= reach[v]
                total += numerator * (active ^ target_mask).bit_count()
            if (
                best_num is None
                or total < best_num
                or (total == best_num and combo < best_nodes)
            ):
                best_num, best_nodes = total, combo
    assert best_num is not None
    return SolveReport(
        effectors=frozenset(best_nodes),
        exact_cost=Fraction(best_num, denominator),
        algorithm="brute-force",
        stats={"candidates": candidates, "scenarios": len(scenarios)},
    )


# -- infinite budget ------------------------------------------------------------


def solve_infinite_budget(
    graph: InfluenceGraph,
    targets: Iterable[int],
    *,
    max_r: int = DEFAULT_MAX_R,
) -> SolveReport:
    """Optimal effector set for an unlimited budget.

    With no budget the optimal solution can be assumed deterministically
    closed, so its intersection with the probabilistic-tail nodes fixes
    everything random about it. The search branches over that
    intersection; inside each branch the remaining, fully deterministic
    subgraph is optimized in one shot as a maximum weight closure whose
    node weights are the cost savings of activating each node. Every
    candidate's cost is then re-evaluated by the exact engine, so a
    mis-scored branch can never corrupt the optimum.
    """
    target_set = frozenset(targets)
    n = graph.node_count
    prob_tails = sorted(graph.prob_tails)
    arcs = graph.arcs

    best: tuple[Fraction, tuple[int, ...]] | None = None
    best_set: frozenset[int] = frozenset()
    branches = 0
    flow_calls = 0
    started = time.perf_counter()
    for mask in range(1 << len(prob_tails)):
        chosen = frozenset(
            v for i, v in enumerate(prob_tails) if mask >> i & 1
        )
        branch = branch_assignment(graph, chosen)
        if not branch.feasible:
            continue
        branches += 1
        probs = exact_probabilities(graph, branch.effector_closure, max_r=max_r)
        remainder_set = set(branch.remainder)
        gamma = {
            v: (ONE - probs[v]) if v in target_set else (probs[v] - ONE)
            for v in branch.remainder
        }
        problem = ClosureProblem(
            nodes=branch.remainder,
            arcs=tuple(
                (arc.tail, arc.head)
                for arc in arcs
                if arc.tail in remainder_set and arc.head in remainder_set
            ),
            weights=gamma,
        )
        extension, _ = max_weight_closure(problem)
        flow_calls += 1
        candidate = frozenset(branch.effector_closure | extension)
        true_cost = cost(graph, target_set, candidate, max_r=max_r).total
        nodes = tuple(sorted(candidate))
        if _prefer(best, true_cost, nodes):
            best = (true_cost, nodes)
            best_set = candidate
    assert best is not None  # the all-excluded branch is always feasible
    elapsed = time.perf_counter() - started

    if not best_set <= target_set and _is_directed_tree(graph):
        logger.info(
            "returned optimum uses non-target effectors on a directed tree; "
            "an equal-cost target-only solution exists"
        )
    return SolveReport(
        effectors=best_set,
        exact_cost=best[0],
        algorithm="infinite-budget",
        stats={
            "branches": branches,
            "flow_calls": flow_calls,
            "elapsed_s": elapsed,
        },
    )


def _is_directed_tree(graph: InfluenceGraph) -> bool:
    """True when the graph is an orientation of an undirected tree."""
    n = graph.node_count
    if n == 0:
        return False
    edges: set[tuple[int, int]] = set()
    for arc in graph.arcs:
        pair = (min(arc.tail, arc.head), max(arc.tail, arc.head))
        if pair in edges:
            return False
        edges.add(pair)
    if len(edges) != n - 1:
        return False
    neighbors: dict[int, list[int]] = {v: [] for v in range(n)}
    for u, v in edges:
        neighbors[u].append(v)
        neighbors[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in neighbors[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == n


# -- dispatcher ----------------------------------------------------------------


def pick_algorithm(instance: Instance) -> str:
    """The automatic case split over the instance parameters."""
    graph = instance.graph
    b = instance.budget
    c = instance.cost_bound
    if c is not None and c == 0:
        return "zero-cost"
    if b is None:
        return "infinite-budget"
    if graph.probabilistic_arc_count == 0:
        if (
            c is not None
            and len(instance.targets) == graph.node_count
        ):
            return "influence-max"
        if c is None:
            return "xp-b"
        effective_budget = min(b, len(instance.targets))
        return "xp-b" if effective_budget <= int(c) else "xp-c"
    return "brute-force"


def solve(
    instance: Instance,
    strategy: str = "auto",
    *,
    max_r: int = DEFAULT_MAX_R,
    max_brute_nodes: int = DEFAULT_MAX_BRUTE_NODES,
) -> SolveReport:
    """Solve an instance with the named algorithm, or pick one ("auto").

    The report's cost is always re-evaluated through the propagation
    module before being returned. Raises NotApplicableError when a forced
    algorithm's preconditions fail and ResourceLimitError when only
    guarded exponential paths remain and the instance exceeds them.
    """
    graph = instance.graph
    targets = instance.targets
    b = instance.budget
    c = instance.cost_bound
    algorithm = pick_algorithm(instance) if strategy == "auto" else strategy
    if algorithm not in ALGORITHMS:
        raise NotApplicableError(f"unknown algorithm: {algorithm!r}")

    started = time.perf_counter()
    if algorithm == "zero-cost":
        if c is None or c != 0:
            raise NotApplicableError("zero-cost requires a cost bound of 0")
        witness = solve_zero_cost(graph, targets, b)
        report = _witness_report(witness, "zero-cost", {})
    elif algorithm == "xp-b":
        report = solve_xp_budget(graph, targets, b, c)
    elif algorithm == "xp-c":
        if c is None:
            raise NotApplicableError("xp-c requires a cost bound")
        witness = solve_xp_cost(graph, targets, b, c)
        report = _witness_report(witness, "xp-c", {})
    elif algorithm == "influence-max":
        if targets != frozenset(range(graph.node_count)):
            raise NotApplicableError(
                "influence-max requires every node to be a target"
            )
        witness = solve_influence_max(graph, b, c)
        report = _witness_report(witness, "influence-max", {})
    elif algorithm == "infinite-budget":
        if b is not None:
            raise NotApplicableError("infinite-budget requires an unlimited budget")
        report = solve_infinite_budget(graph, targets, max_r=max_r)
        if c is not None:
            report = replace(report, decision=report.exact_cost <= c)
    else:
        try:
            report = solve_brute_force(
                graph, targets, b, max_nodes=max_brute_nodes, max_r=max_r
            )
        except ResourceLimitError as exc:
            raise ResourceLimitError(
                f"no applicable exact algorithm within resource limits ({exc}); "
                "consider Monte Carlo cost estimation instead"
            ) from exc
        if c is not None:
            report = replace(report, decision=report.exact_cost <= c)
    elapsed = time.perf_counter() - started

    if report.decision is not False or report.effectors:
        verified = cost(graph, targets, report.effectors, max_r=max_r).total
        if report.exact_cost is not None and verified != report.exact_cost:
            raise EffectorsError(
                f"internal cost mismatch for {algorithm}: reported "
                f"{report.exact_cost}, propagation says {verified}"
            )
        report = replace(report, exact_cost=verified)

    stats = dict(report.stats)
    stats["elapsed_s"] = elapsed
    return replace(report, stats=stats)


def _witness_report(
    witness: frozenset[int] | None, algorithm: str, stats: dict[str, int | float]
) -> SolveReport:
    if witness is None:
        return SolveReport(
            effectors=frozenset(),
            exact_cost=None,
            algorithm=algorithm,
            decision=False,
            stats=stats,
        )
    return SolveReport(
        effectors=witness,
        exact_cost=None,  # filled in by the dispatcher's re-evaluation
        algorithm=algorithm,
        decision=True,
        stats=stats,
    )
