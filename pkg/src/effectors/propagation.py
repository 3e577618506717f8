"""Activation probabilities and cost under the Independent Cascade model.

Two exact engines compute the activation probability of every node for a
given effector set:

- :func:`exact_probabilities` branches over the uncertain neighbors of the
  current propagation frontier, collapsing deterministic propagation
  between branch points. Its recursion tree has at most 2**r leaves, where
  r is the number of probabilistic arcs.
- :func:`live_edge_probabilities` enumerates all 2**r outcomes of the
  probabilistic arcs and reduces activation to plain reachability. It is
  deliberately kept independent of the first engine and serves as its
  oracle: both must agree with exact rational equality.

Cost evaluation is exact in both cases. For graphs whose randomness makes
the exact paths infeasible, :func:`monte_carlo_cost` estimates the cost by
seeded, reproducible simulation.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple

from .errors import ResourceLimitError
from .graph import InfluenceGraph, ONE, ZERO

DEFAULT_MAX_R = 24


def _guard_randomness(graph: InfluenceGraph, max_r: int) -> None:
    r = graph.probabilistic_arc_count
    if r > max_r:
        raise ResourceLimitError(
            f"instance has {r} probabilistic arcs, above the exact-path "
            f"ceiling of {max_r}; raise the limit or use Monte Carlo estimation"
        )


@dataclass(frozen=True)
class ScenarioOutcome:
    """One joint outcome of all probabilistic arcs.

    ``live_arcs`` holds the indices of probabilistic arcs that succeed;
    ``probability`` is the product of w(e) over live arcs and 1 - w(e)
    over the rest, always strictly positive.
    """

    live_arcs: frozenset[int]
    probability: Fraction


@dataclass(frozen=True)
class ActivationTrace:
    """A single realized propagation, reproducible from its seed.

    ``rounds[0]`` is the effector set; ``rounds[t]`` the nodes newly
    activated at step t. ``arc_trials`` records every activation attempt
    in execution order as (arc index, succeeded); each arc is tried at
    most once. ``trace_probability`` is the exact probability of this
    particular sequence of trial outcomes.
    """

    rounds: tuple[frozenset[int], ...]
    arc_trials: tuple[tuple[int, bool], ...]
    trace_probability: Fraction

    @property
    def active(self) -> frozenset[int]:
        return frozenset().union(*self.rounds)


@dataclass(frozen=True)
class CostBreakdown:
    """Exact cost of an effector set against an observed activation state.

    A target that stays inactive costs its miss probability 1 - p(v); a
    non-target costs its activation probability p(v). ``total`` is the sum
    over all nodes, the expected number of wrong nodes.
    """

    per_node: tuple[Fraction, ...]
    total: Fraction
    method: str


class MonteCarloResult(NamedTuple):
    estimate: float
    standard_error: float


# -- exact engine -------------------------------------------------------------


def exact_probabilities(
    graph: InfluenceGraph,
    effectors: Iterable[int],
    *,
    max_r: int = DEFAULT_MAX_R,
) -> list[Fraction]:
    """Activation probability of every node, by frontier branching.

    One traversal computes the full vector: each branch fixes the joint
    outcome of the probabilistic arcs leaving the current frontier, and
    every leaf contributes its branch probability to all nodes active
    there. Deterministic propagation is collapsed between branch points,
    so the recursion depth is bounded by the number of branch rounds
    rather than by the node count.
    """
    _guard_randomness(graph, max_r)
    n = graph.node_count
    det_out = graph.det_out
    prob_out = graph.prob_out
    probs: list[Fraction] = [ZERO] * n

    start = set(effectors)
    stack: list[tuple[set[int], list[int], Fraction]] = [
        (start, list(start), ONE)
    ]
    while stack:
        active, frontier, weight = stack.pop()
        # collapse deterministic reachability; collapsed nodes join the
        # frontier because they still owe their probabilistic trials
        queue = list(frontier)
        while queue:
            v = queue.pop()
            for h in det_out[v]:
                if h not in active:
                    active.add(h)
                    frontier.append(h)
                    queue.append(h)
        # per still-inactive head, probability that every probabilistic
        # arc from the frontier into it fails
        stay: dict[int, Fraction] = {}
        for v in frontier:
            for h, w in prob_out[v]:
                if h not in active:
                    stay[h] = stay.get(h, ONE) * (ONE - w)
        if not stay:
            for v in active:
                probs[v] += weight
            continue
        heads = sorted(stay)
        stay_p = [stay[h] for h in heads]
        go_p = [ONE - p for p in stay_p]
        for submask in range(1 << len(heads)):
            q = weight
            newly: list[int] = []
            for i, h in enumerate(heads):
                if submask >> i & 1:
                    q *= go_p[i]
                    newly.append(h)
                else:
                    q *= stay_p[i]
            stack.append((active | set(newly), newly, q))
    return probs


# -- live-edge oracle ---------------------------------------------------------


def enumerate_scenarios(
    graph: InfluenceGraph, *, max_r: int = DEFAULT_MAX_R
) -> Iterator[ScenarioOutcome]:
    """All 2**r joint outcomes of the probabilistic arcs.

    The probabilities of the yielded outcomes sum to exactly 1.
    """
    _guard_randomness(graph, max_r)
    indices = graph.prob_arc_indices
    weights = [graph.arcs[i].weight for i in indices]
    for mask in range(1 << len(indices)):
        probability = ONE
        live: list[int] = []
        for i, w in enumerate(weights):
            if mask >> i & 1:
                probability *= w
                live.append(indices[i])
            else:
                probability *= ONE - w
        yield ScenarioOutcome(frozenset(live), probability)


def live_edge_probabilities(
    graph: InfluenceGraph,
    effectors: Iterable[int],
    *,
    max_r: int = DEFAULT_MAX_R,
) -> list[Fraction]:
    """Activation probabilities by exhaustive outcome enumeration.

    For every joint outcome of the probabilistic arcs, a node activates
    exactly when it is reachable from the effectors through deterministic
    and live arcs. Independent oracle for :func:`exact_probabilities`.
    """
    _guard_randomness(graph, max_r)
    n = graph.node_count
    seeds = list(set(effectors))
    det_out = graph.det_out
    prob_arcs = [graph.arcs[i] for i in graph.prob_arc_indices]
    r = len(prob_arcs)
    denominator = 1
    for arc in prob_arcs:
        denominator *= arc.weight.denominator
    # all scenario probabilities share this denominator, so the sweep can
    # accumulate integer numerators and divide once at the end
    acc = [0] * n
    for mask in range(1 << r):
        numerator = 1
        extra: dict[int, list[int]] = {}
        for i, arc in enumerate(prob_arcs):
            w = arc.weight
            if mask >> i & 1:
                numerator *= w.numerator
                extra.setdefault(arc.tail, []).append(arc.head)
            else:
                numerator *= w.denominator - w.numerator
        seen = set(seeds)
        work = list(seeds)
        while work:
            v = work.pop()
            for h in det_out[v]:
                if h not in seen:
                    seen.add(h)
                    work.append(h)
            for h in extra.get(v, ()):
                if h not in seen:
                    seen.add(h)
                    work.append(h)
        for v in seen:
            acc[v] += numerator
    return [Fraction(acc[v], denominator) for v in range(n)]


# -- cost ---------------------------------------------------------------------


def cost(
    graph: InfluenceGraph,
    targets: Iterable[int],
    effectors: Iterable[int],
    *,
    method: str = "exact",
    max_r: int = DEFAULT_MAX_R,
) -> CostBreakdown:
    """Exact cost of an effector set; engine selectable by ``method``."""
    if method == "exact":
        probs = exact_probabilities(graph, effectors, max_r=max_r)
    elif method == "live-edge":
        probs = live_edge_probabilities(graph, effectors, max_r=max_r)
    else:
        raise ValueError(f"unknown cost method: {method!r}")
    target_set = frozenset(targets)
    per_node = tuple(
        ONE - probs[v] if v in target_set else probs[v]
        for v in range(graph.node_count)
    )
    return CostBreakdown(per_node=per_node, total=sum(per_node, ZERO), method=method)


# -- simulation ---------------------------------------------------------------


def _cascade(
    graph: InfluenceGraph,
    effectors: Iterable[int],
    rng: random.Random,
    record: bool,
) -> tuple[set[int], list[frozenset[int]], list[tuple[int, bool]], Fraction]:
    """One full propagation run; trial order is canonical, so the run is
    fully determined by the RNG state."""
    active = set(effectors)
    rounds = [frozenset(active)]
    trials: list[tuple[int, bool]] = []
    probability = ONE
    arcs = graph.arcs
    out_arcs = graph.out_arcs
    frontier = sorted(active)
    while frontier:
        newly: set[int] = set()
        for v in frontier:
            for idx in out_arcs[v]:
                arc = arcs[idx]
                # one trial per arc toward heads inactive at round start;
                # simultaneous same-round trials at one head may repeat
                if arc.head in active:
                    continue
                w = arc.weight
                if w == ONE:
                    success = True
                else:
                    # exact Bernoulli(w) draw
                    success = rng.randrange(w.denominator) < w.numerator
                if record:
                    trials.append((idx, success))
                    probability *= w if success else ONE - w
                if success:
                    newly.add(arc.head)
        if not newly:
            break
        active |= newly
        rounds.append(frozenset(newly))
        frontier = sorted(newly)
    return active, rounds, trials, probability


def simulate_once(
    graph: InfluenceGraph, effectors: Iterable[int], seed: int
) -> ActivationTrace:
    """One seeded propagation run with full trial bookkeeping."""
    rng = random.Random(seed)
    _, rounds, trials, probability = _cascade(graph, effectors, rng, record=True)
    return ActivationTrace(
        rounds=tuple(rounds),
        arc_trials=tuple(trials),
        trace_probability=probability,
    )


def substream_seed(seed: int, index: int) -> int:
    """Stable per-sample seed, so parallel and serial sweeps agree."""
    digest = hashlib.blake2b(f"{seed}:{index}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def monte_carlo_cost(
    graph: InfluenceGraph,
    targets: Iterable[int],
    effectors: Iterable[int],
    samples: int,
    seed: int,
) -> MonteCarloResult:
    """Cost estimate from seeded simulation.

    Each sample counts the wrong nodes (inactive targets plus active
    non-targets) of one cascade run on its own substream, so the result
    depends only on (seed, samples), not on execution order. The reported
    standard error is the sample standard deviation divided by
    sqrt(samples) (zero for a single sample).
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    target_set = frozenset(targets)
    effector_list = sorted(set(effectors))
    total = 0
    total_sq = 0
    for i in range(samples):
        rng = random.Random(substream_seed(seed, i))
        active, _, _, _ = _cascade(graph, effector_list, rng, record=False)
        wrong = len(target_set.symmetric_difference(active))
        total += wrong
        total_sq += wrong * wrong
    estimate = total / samples
    if samples == 1:
        return MonteCarloResult(estimate, 0.0)
    # variance numerator is an exact non-negative integer
    spread = samples * total_sq - total * total
    standard_error = math.sqrt(spread / (samples - 1)) / samples
    return MonteCarloResult(estimate, standard_error)
