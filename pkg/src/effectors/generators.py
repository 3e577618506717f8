"""Instance generators: hardness-reduction gadgets and random ensembles.

Each reduction maps a classic combinatorial problem to an effectors
instance whose yes/no answer mirrors (or, for the counting reduction,
inverts) the source problem. The point of shipping them is verification:
small source instances can be brute-forced on both sides and the answers
compared. Tiny brute-force oracles for the source problems live here for
exactly that purpose.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import InvalidInstanceError, ResourceLimitError
from .graph import InfluenceGraph, Instance

DEFAULT_MAX_COUNT_ARCS = 20


def _undirected_edges(
    edges: Iterable[tuple[str, str]], vertices: Sequence[str]
) -> list[tuple[str, str]]:
    known = set(vertices)
    result = []
    seen = set()
    for u, v in edges:
        if u not in known or v not in known:
            raise InvalidInstanceError(f"edge endpoint outside vertex set: {u!r}-{v!r}")
        if u == v:
            raise InvalidInstanceError(f"self-loop edge on {u!r}")
        key = (u, v) if u <= v else (v, u)
        if key in seen:
            raise InvalidInstanceError(f"duplicate edge {u!r}-{v!r}")
        seen.add(key)
        result.append(key)
    return result


# -- multicolored clique --------------------------------------------------------


@dataclass(frozen=True)
class MccInput:
    """An undirected graph with a k-coloring of its vertices."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    colors: Mapping[str, int]
    k: int

    def __post_init__(self) -> None:
        if self.k < 2:
            raise InvalidInstanceError("multicolored clique needs k >= 2")
        for v in self.vertices:
            color = self.colors.get(v)
            if color is None or not 1 <= color <= self.k:
                raise InvalidInstanceError(
                    f"vertex {v!r} needs exactly one color in 1..{self.k}"
                )


def gen_mcc(mcc: MccInput) -> Instance:
    """Multicolored-clique gadget.

    One block of C(k,2)+k+1 target nodes per unordered color pair, one
    node per vertex and per edge; every edge node feeds its two endpoint
    vertex nodes and its color pair's whole block. All weights are 1.
    Budget C(k,2), cost bound C(k,2)+k: a within-bounds solution must pick
    one edge node per color pair touching only k vertices, which is
    exactly a multicolored k-clique.
    """
    edges = _undirected_edges(mcc.edges, mcc.vertices)
    k = mcc.k
    pair_budget = k * (k - 1) // 2
    copies = pair_budget + k + 1
    labels: list[str] = []
    pair_block: dict[tuple[int, int], list[str]] = {}
    for i, j in itertools.combinations(range(1, k + 1), 2):
        block = [f"pair_{i}_{j}_{t}" for t in range(copies)]
        pair_block[(i, j)] = block
        labels.extend(block)
    vertex_node = {v: f"vx_{v}" for v in mcc.vertices}
    labels.extend(vertex_node[v] for v in mcc.vertices)
    edge_node = {e: f"edge_{e[0]}_{e[1]}" for e in edges}
    labels.extend(edge_node[e] for e in edges)

    arcs: list[tuple[str, str, int]] = []
    targets: list[str] = [label for block in pair_block.values() for label in block]
    for u, v in edges:
        source = edge_node[(u, v)]
        arcs.append((source, vertex_node[u], 1))
        arcs.append((source, vertex_node[v], 1))
        cu, cv = mcc.colors[u], mcc.colors[v]
        pair = (min(cu, cv), max(cu, cv))
        if cu != cv:
            for label in pair_block[pair]:
                arcs.append((source, label, 1))
    graph = InfluenceGraph(labels, arcs)
    return Instance(
        graph=graph,
        targets=graph.node_set(targets),
        budget=pair_budget,
        cost_bound=Fraction(pair_budget + k),
    )


def has_multicolored_clique(mcc: MccInput) -> bool:
    """Brute-force source oracle."""
    edge_set = {frozenset(e) for e in _undirected_edges(mcc.edges, mcc.vertices)}
    by_color: dict[int, list[str]] = {c: [] for c in range(1, mcc.k + 1)}
    for v in mcc.vertices:
        by_color[mcc.colors[v]].append(v)
    for pick in itertools.product(*(by_color[c] for c in range(1, mcc.k + 1))):
        if all(
            frozenset((u, v)) in edge_set
            for u, v in itertools.combinations(pick, 2)
        ):
            return True
    return False


# -- dominating set ---------------------------------------------------------------


def gen_dominating_set(
    vertices: Sequence[str], edges: Iterable[tuple[str, str]], k: int
) -> Instance:
    """Dominating-set gadget: an initiator per vertex feeding k+1 target
    copies of itself and of each neighbor; budget and cost bound both k."""
    if k < 1:
        raise InvalidInstanceError("dominating set needs k >= 1")
    edge_list = _undirected_edges(edges, vertices)
    labels = [f"init_{v}" for v in vertices]
    copy_labels = {
        v: [f"copy_{v}_{t}" for t in range(1, k + 2)] for v in vertices
    }
    for v in vertices:
        labels.extend(copy_labels[v])
    neighbors: dict[str, set[str]] = {v: {v} for v in vertices}
    for u, v in edge_list:
        neighbors[u].add(v)
        neighbors[v].add(u)
    arcs = [
        (f"init_{v}", copy_label, 1)
        for v in vertices
        for u in sorted(neighbors[v])
        for copy_label in copy_labels[u]
    ]
    graph = InfluenceGraph(labels, arcs)
    targets = [label for v in vertices for label in copy_labels[v]]
    return Instance(
        graph=graph,
        targets=graph.node_set(targets),
        budget=k,
        cost_bound=Fraction(k),
    )


def has_dominating_set(
    vertices: Sequence[str], edges: Iterable[tuple[str, str]], k: int
) -> bool:
    edge_list = _undirected_edges(edges, vertices)
    closed: dict[str, set[str]] = {v: {v} for v in vertices}
    for u, v in edge_list:
        closed[u].add(v)
        closed[v].add(u)
    goal = set(vertices)
    for size in range(min(k, len(vertices)) + 1):
        for pick in itertools.combinations(vertices, size):
            covered: set[str] = set()
            for v in pick:
                covered |= closed[v]
            if covered == goal:
                return True
    return False


# -- set cover --------------------------------------------------------------------


def gen_set_cover(
    sets: Mapping[str, Iterable[str]], universe: Sequence[str], h: int
) -> Instance:
    """Set-cover gadget for the all-targets case: choosing h set nodes must
    activate every element node, paying only for the unchosen sets."""
    universe_set = set(universe)
    if len(universe_set) != len(universe):
        raise InvalidInstanceError("universe has duplicate elements")
    if not 0 <= h <= len(sets):
        raise InvalidInstanceError("set cover needs 0 <= h <= number of sets")
    labels = [f"set_{name}" for name in sets]
    labels.extend(f"elem_{u}" for u in universe)
    arcs = []
    for name, members in sets.items():
        for u in members:
            if u not in universe_set:
                raise InvalidInstanceError(
                    f"set {name!r} contains unknown element {u!r}"
                )
            arcs.append((f"set_{name}", f"elem_{u}", 1))
    graph = InfluenceGraph(labels, arcs)
    return Instance(
        graph=graph,
        targets=frozenset(range(graph.node_count)),
        budget=h,
        cost_bound=Fraction(len(sets) - h),
    )


def has_set_cover(
    sets: Mapping[str, Iterable[str]], universe: Sequence[str], h: int
) -> bool:
    frozen = {name: frozenset(members) for name, members in sets.items()}
    goal = set(universe)
    names = sorted(frozen)
    # a cover smaller than h pads to size h, so size <= h is equivalent
    for size in range(min(h, len(names)) + 1):
        for pick in itertools.combinations(names, size):
            covered: set[str] = set()
            for name in pick:
                covered |= frozen[name]
            if covered >= goal:
                return True
    return False


# -- independent set ----------------------------------------------------------------


def gen_independent_set(
    vertices: Sequence[str], edges: Iterable[tuple[str, str]], k: int
) -> Instance:
    """Independent-set gadget for the all-targets case: vertex nodes feed
    their incident edge nodes; leaving k vertex nodes out at cost k forces
    them to be pairwise non-adjacent."""
    if not 0 <= k <= len(vertices):
        raise InvalidInstanceError("independent set needs 0 <= k <= vertex count")
    edge_list = _undirected_edges(edges, vertices)
    labels = [f"vx_{v}" for v in vertices]
    labels.extend(f"edge_{u}_{v}" for u, v in edge_list)
    arcs = []
    for u, v in edge_list:
        arcs.append((f"vx_{u}", f"edge_{u}_{v}", 1))
        arcs.append((f"vx_{v}", f"edge_{u}_{v}", 1))
    graph = InfluenceGraph(labels, arcs)
    return Instance(
        graph=graph,
        targets=frozenset(range(graph.node_count)),
        budget=len(vertices) - k,
        cost_bound=Fraction(k),
    )


def has_independent_set(
    vertices: Sequence[str], edges: Iterable[tuple[str, str]], k: int
) -> bool:
    edge_set = {frozenset(e) for e in _undirected_edges(edges, vertices)}
    if k == 0:
        return True
    for pick in itertools.combinations(vertices, min(k, len(vertices))):
        if len(pick) == k and not any(
            frozenset((u, v)) in edge_set
            for u, v in itertools.combinations(pick, 2)
        ):
            return True
    return False


# -- s-t connectedness counting -----------------------------------------------------


@dataclass(frozen=True)
class StConReductionSpec:
    """Input to the counting reduction: a DAG, two terminals, and the
    count threshold z. All derived quantities are recomputed, never
    supplied."""

    nodes: tuple[str, ...]
    arcs: tuple[tuple[str, str], ...]
    source: str
    sink: str
    threshold: int


def _check_dag(nodes: Sequence[str], arcs: Sequence[tuple[str, str]]) -> None:
    known = set(nodes)
    indegree = {v: 0 for v in nodes}
    out: dict[str, list[str]] = {v: [] for v in nodes}
    seen_arcs = set()
    for u, v in arcs:
        if u not in known or v not in known:
            raise InvalidInstanceError(f"arc endpoint outside node set: {u!r} -> {v!r}")
        if u == v or (u, v) in seen_arcs:
            raise InvalidInstanceError(f"graph must be simple: offending arc {u!r} -> {v!r}")
        seen_arcs.add((u, v))
        out[u].append(v)
        indegree[v] += 1
    ready = [v for v in nodes if indegree[v] == 0]
    visited = 0
    while ready:
        v = ready.pop()
        visited += 1
        for w in out[v]:
            indegree[w] -= 1
            if indegree[w] == 0:
                ready.append(w)
    if visited != len(nodes):
        raise InvalidInstanceError("input graph must be acyclic")


def _reach(
    start: str, adjacency: Mapping[str, Sequence[str]]
) -> set[str]:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adjacency.get(v, ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def gen_stcon(reduction: StConReductionSpec) -> Instance:
    """Counting-to-decision gadget for s-t connectedness.

    The arcs on s-t paths get weight 1/2; each inner path node gets a
    weight-1 observed copy, and s gets a copy reached with probability
    1 - z' / 2**|E_st|. The produced instance (unlimited budget, cost
    bound |W| + 1 - 2**-|E_st|) answers "yes" exactly when the number of
    arc subsets connecting s to t is strictly below z', which is the
    *negation* of the source question "are there at least z subgraphs".
    """
    _check_dag(reduction.nodes, reduction.arcs)
    if reduction.source not in reduction.nodes or reduction.sink not in reduction.nodes:
        raise InvalidInstanceError("source and sink must be graph nodes")
    if reduction.source == reduction.sink:
        raise InvalidInstanceError("source and sink must differ")
    if reduction.threshold < 1:
        raise InvalidInstanceError("threshold must be at least 1")

    forward: dict[str, list[str]] = {v: [] for v in reduction.nodes}
    backward: dict[str, list[str]] = {v: [] for v in reduction.nodes}
    for u, v in reduction.arcs:
        forward[u].append(v)
        backward[v].append(u)
    from_source = _reach(reduction.source, forward)
    to_sink = _reach(reduction.sink, backward)
    on_path_arcs = [
        (u, v) for u, v in reduction.arcs if u in from_source and v in to_sink
    ]
    path_nodes = (from_source & to_sink) | {reduction.source, reduction.sink}
    inner = sorted(path_nodes - {reduction.source, reduction.sink})

    outside = len(reduction.arcs) - len(on_path_arcs)
    z_prime = (reduction.threshold + (1 << outside) - 1) >> outside
    scale = 1 << len(on_path_arcs)
    if z_prime > scale:
        raise InvalidInstanceError(
            f"degenerate threshold: ceil(z / 2**{outside}) = {z_prime} "
            f"exceeds 2**{len(on_path_arcs)}"
        )
    miss_probability = 1 - Fraction(z_prime, scale)

    labels = [v for v in reduction.nodes if v in path_nodes]
    labels.extend(f"copy_{v}" for v in inner)
    labels.append(f"copy_{reduction.source}")
    arcs: list[tuple[str, str, Fraction | int]] = [
        (u, v, Fraction(1, 2)) for u, v in on_path_arcs
    ]
    arcs.extend((v, f"copy_{v}", 1) for v in inner)
    if miss_probability > 0:
        # a weight-0 arc is no arc at all; omit it when z' hits the scale
        arcs.append((reduction.source, f"copy_{reduction.source}", miss_probability))
    graph = InfluenceGraph(labels, arcs)
    return Instance(
        graph=graph,
        targets=graph.node_set(inner + [reduction.source]),
        budget=None,
        cost_bound=Fraction(len(inner) + 1) - Fraction(1, scale),
    )


def count_st_subgraphs(
    nodes: Sequence[str],
    arcs: Sequence[tuple[str, str]],
    source: str,
    sink: str,
    *,
    max_arcs: int = DEFAULT_MAX_COUNT_ARCS,
) -> int:
    """Number of arc subsets whose subgraph connects source to sink.

    Exhaustive over all 2**|E| subsets (isomorphic subgraphs count
    separately); guarded by ``max_arcs``.
    """
    _check_dag(nodes, arcs)
    if source not in nodes or sink not in nodes:
        raise InvalidInstanceError("source and sink must be graph nodes")
    m = len(arcs)
    if m > max_arcs:
        raise ResourceLimitError(
            f"counting needs 2**{m} subsets, above the ceiling of 2**{max_arcs}"
        )
    count = 0
    for mask in range(1 << m):
        adjacency: dict[str, list[str]] = {}
        for i, (u, v) in enumerate(arcs):
            if mask >> i & 1:
                adjacency.setdefault(u, []).append(v)
        if sink in _reach(source, adjacency):
            count += 1
    return count


# -- random ensembles -----------------------------------------------------------------


def gen_random(
    node_count: int,
    arc_density: float,
    prob_fraction: float,
    target_fraction: float,
    seed: int,
    *,
    budget: int | None = None,
    cost_bound: Fraction | None = None,
    weight_denominator: int = 8,
) -> Instance:
    """Seeded random simple digraph; reproducible for a fixed seed.

    Each ordered pair becomes an arc with probability ``arc_density``;
    an arc is probabilistic with probability ``prob_fraction``, drawing
    its weight uniformly from the grid k/weight_denominator, and carries
    weight 1 otherwise.
    """
    for name, value in (
        ("arc_density", arc_density),
        ("prob_fraction", prob_fraction),
        ("target_fraction", target_fraction),
    ):
        if not 0 <= value <= 1:
            raise InvalidInstanceError(f"{name} must lie in [0, 1]")
    if node_count < 0:
        raise InvalidInstanceError("node_count must be non-negative")
    if weight_denominator < 2:
        raise InvalidInstanceError("weight_denominator must be at least 2")
    rng = random.Random(seed)
    labels = [f"n{i}" for i in range(node_count)]
    arcs: list[tuple[str, str, Fraction | int]] = []
    for tail in range(node_count):
        for head in range(node_count):
            if tail == head or rng.random() >= arc_density:
                continue
            if rng.random() < prob_fraction:
                weight: Fraction | int = Fraction(
                    rng.randint(1, weight_denominator - 1), weight_denominator
                )
            else:
                weight = 1
            arcs.append((labels[tail], labels[head], weight))
    targets = [v for v in range(node_count) if rng.random() < target_fraction]
    graph = InfluenceGraph(labels, arcs)
    return Instance(
        graph=graph,
        targets=frozenset(targets),
        budget=budget,
        cost_bound=cost_bound,
    )
