"""Exact maximum weight closure via max-flow / min-cut.

A closure of a node-weighted digraph is a vertex set with no outgoing
arcs. The classic reduction attaches positive-weight nodes to a source
and negative-weight nodes to a sink, makes the original arcs unbounded,
and reads an optimal closure off a minimum cut. All arithmetic is on
exact rationals; unbounded capacity is a sentinel (``None``), never a
large number.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInstanceError
from .graph import ZERO


@dataclass(frozen=True)
class ClosureProblem:
    """A simple digraph over arbitrary node ids with rational node weights."""

    nodes: tuple[int, ...]
    arcs: tuple[tuple[int, int], ...]
    weights: dict[int, Fraction]

    def __post_init__(self) -> None:
        node_set = set(self.nodes)
        if len(node_set) != len(self.nodes):
            raise InvalidInstanceError("closure problem has duplicate nodes")
        seen = set()
        for u, v in self.arcs:
            if u == v:
                raise InvalidInstanceError(f"closure problem has a self-loop on {u}")
            if (u, v) in seen:
                raise InvalidInstanceError(f"closure problem has a duplicate arc {u} -> {v}")
            seen.add((u, v))
            if u not in node_set or v not in node_set:
                raise InvalidInstanceError(f"closure arc endpoint outside node set: {u} -> {v}")
        missing = node_set - set(self.weights)
        if missing:
            raise InvalidInstanceError(f"closure problem misses weights for {sorted(missing)}")


class _FlowArc:
    __slots__ = ("head", "capacity", "flow")

    def __init__(self, head: int, capacity: Fraction | None):
        self.head = head
        self.capacity = capacity  # None = unbounded
        self.flow = ZERO

    def residual(self) -> Fraction | None:
        if self.capacity is None:
            return None
        return self.capacity - self.flow


class FlowNetwork:
    """Capacitated digraph with distinguished source and sink.

    Arcs are stored in twin pairs (forward at even index, zero-capacity
    reverse at the following odd index), the usual residual-graph layout.
    """

    def __init__(self, node_count: int, source: int, sink: int):
        if not (0 <= source < node_count and 0 <= sink < node_count) or source == sink:
            raise InvalidInstanceError("flow network needs distinct source and sink nodes")
        self.node_count = node_count
        self.source = source
        self.sink = sink
        self.arcs: list[_FlowArc] = []
        self.adjacency: list[list[int]] = [[] for _ in range(node_count)]

    def add_arc(self, tail: int, head: int, capacity: Fraction | None) -> None:
        if capacity is not None and capacity < 0:
            raise InvalidInstanceError(f"negative capacity on arc {tail} -> {head}")
        self.adjacency[tail].append(len(self.arcs))
        self.arcs.append(_FlowArc(head, capacity))
        self.adjacency[head].append(len(self.arcs))
        self.arcs.append(_FlowArc(tail, ZERO))


def max_flow(network: FlowNetwork) -> tuple[Fraction, frozenset[int]]:
    """Exact maximum flow by shortest augmenting paths (Edmonds-Karp).

    The augmentation count is bounded by a polynomial in nodes and arcs
    independent of the capacities, so termination holds for arbitrary
    rationals. Returns the flow value and the source side of a minimum
    cut (the nodes residually reachable from the source). The network
    keeps its flow assignment for further cut queries.
    """
    arcs = network.arcs
    adjacency = network.adjacency
    source, sink = network.source, network.sink
    value = ZERO
    while True:
        parent_arc: dict[int, int] = {source: -1}
        queue = deque([source])
        while queue and sink not in parent_arc:
            v = queue.popleft()
            for idx in adjacency[v]:
                arc = arcs[idx]
                head = arc.head
                if head in parent_arc:
                    continue
                residual = arc.residual()
                if residual is None or residual > 0:
                    parent_arc[head] = idx
                    queue.append(head)
        if sink not in parent_arc:
            break
        # bottleneck over the augmenting path
        bottleneck: Fraction | None = None
        v = sink
        while v != source:
            idx = parent_arc[v]
            residual = arcs[idx].residual()
            if residual is not None and (bottleneck is None or residual < bottleneck):
                bottleneck = residual
            v = arcs[idx ^ 1].head
        if bottleneck is None:
            raise InvalidInstanceError(
                "flow network has an unbounded source-sink path"
            )
        v = sink
        while v != source:
            idx = parent_arc[v]
            arcs[idx].flow += bottleneck
            arcs[idx ^ 1].flow -= bottleneck
            v = arcs[idx ^ 1].head
        value += bottleneck
    return value, frozenset(_residually_reachable(network))


def _residually_reachable(network: FlowNetwork) -> set[int]:
    seen = {network.source}
    stack = [network.source]
    while stack:
        v = stack.pop()
        for idx in network.adjacency[v]:
            arc = network.arcs[idx]
            residual = arc.residual()
            if (residual is None or residual > 0) and arc.head not in seen:
                seen.add(arc.head)
                stack.append(arc.head)
    return seen


def _residually_coreachable_to_sink(network: FlowNetwork) -> set[int]:
    """Nodes with a positive-residual path into the sink."""
    seen = {network.sink}
    stack = [network.sink]
    arcs = network.arcs
    while stack:
        v = stack.pop()
        for idx in network.adjacency[v]:
            # the twin of an arc v -> u is u -> v; positive residual on the
            # twin means u reaches v in the residual graph
            u = arcs[idx].head
            if u in seen:
                continue
            twin = arcs[idx ^ 1]
            residual = twin.residual()
            if residual is None or residual > 0:
                seen.add(u)
                stack.append(u)
    return seen


def network_to_dot(network: FlowNetwork) -> str:
    """Debug rendering of a network with its current flow assignment."""
    lines = ["digraph flow {"]
    lines.append(f"  {network.source} [label=source];")
    lines.append(f"  {network.sink} [label=sink];")
    for idx in range(0, len(network.arcs), 2):
        arc = network.arcs[idx]
        tail = network.arcs[idx ^ 1].head
        capacity = "inf" if arc.capacity is None else str(arc.capacity)
        lines.append(
            f'  {tail} -> {arc.head} [label="{arc.flow}/{capacity}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def max_weight_closure(problem: ClosureProblem) -> tuple[frozenset[int], Fraction]:
    """Maximum-weight closed node set, exactly.

    Among all optimal closures the unique maximal one is returned (the
    source side of the minimum cut nearest the sink), so results are
    deterministic. The empty set is always feasible, hence the optimal
    weight is never negative.
    """
    nodes = sorted(problem.nodes)
    if not nodes:
        return frozenset(), ZERO
    index = {v: i for i, v in enumerate(nodes)}
    k = len(nodes)
    network = FlowNetwork(k + 2, source=k, sink=k + 1)
    for v in nodes:
        w = problem.weights[v]
        if w > 0:
            network.add_arc(k, index[v], w)
        elif w < 0:
            network.add_arc(index[v], k + 1, -w)
        # zero-weight nodes attach to neither terminal
    for u, v in problem.arcs:
        network.add_arc(index[u], index[v], None)
    max_flow(network)
    sink_side = _residually_coreachable_to_sink(network)
    closure = frozenset(v for v in nodes if index[v] not in sink_side)
    weight = sum((problem.weights[v] for v in closure), ZERO)
    return closure, weight
