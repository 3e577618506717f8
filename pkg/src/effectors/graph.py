"""Influence-graph data model and basic graph operations.

An influence graph is a simple directed graph whose arcs carry exact
rational weights in (0, 1]; an arc with weight strictly below 1 is called
probabilistic. Nodes are dense integer indices 0..n-1, each with a unique
text label used by the file formats and the CLI.

Graphs and instances are immutable after construction and safe to share
across concurrent workers; every operation in this module is a pure
function.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import InvalidInstanceError
from .rationals import as_rational, format_rational

ONE = Fraction(1)
ZERO = Fraction(0)


@dataclass(frozen=True)
class Arc:
    """A weighted directed arc between node indices."""

    tail: int
    head: int
    weight: Fraction

    @property
    def is_probabilistic(self) -> bool:
        return self.weight < ONE


class InfluenceGraph:
    """Simple directed graph with exact rational arc weights in (0, 1].

    Arcs are stored sorted by (tail, head), so arc indices are canonical
    for a given arc set. Derived structure is precomputed:

    - ``prob_arc_indices``: indices of arcs with weight < 1 (count ``r``)
    - ``prob_tails``: nodes with at least one outgoing probabilistic arc
    - ``out_arcs`` / ``in_arcs``: arc indices per tail / head node
    - ``det_out`` / ``det_in``: weight-1 successor / predecessor nodes
    - ``prob_out``: (head, weight) pairs of probabilistic arcs per tail
    """

    __slots__ = (
        "labels",
        "arcs",
        "_label_index",
        "out_arcs",
        "in_arcs",
        "det_out",
        "det_in",
        "prob_out",
        "prob_arc_indices",
        "arc_probabilistic",
        "prob_tails",
    )

    def __init__(
        self,
        labels: Sequence[str],
        arcs: Iterable[tuple[str, str, Fraction | int | str]] = (),
    ):
        self.labels: tuple[str, ...] = tuple(labels)
        self._label_index: dict[str, int] = {}
        for i, label in enumerate(self.labels):
            if not isinstance(label, str) or not label:
                raise InvalidInstanceError(f"node label must be a non-empty string: {label!r}")
            if label in self._label_index:
                raise InvalidInstanceError(f"duplicate node label: {label!r}")
            self._label_index[label] = i

        resolved: list[Arc] = []
        seen: set[tuple[int, int]] = set()
        for tail_label, head_label, raw_weight in arcs:
            tail = self.node(tail_label)
            head = self.node(head_label)
            if tail == head:
                raise InvalidInstanceError(f"self-loop on node {tail_label!r}")
            if (tail, head) in seen:
                raise InvalidInstanceError(
                    f"duplicate arc {tail_label!r} -> {head_label!r}"
                )
            seen.add((tail, head))
            weight = as_rational(raw_weight)
            if not ZERO < weight <= ONE:
                raise InvalidInstanceError(
                    f"weight out of range (0, 1] on arc {tail_label!r} -> "
                    f"{head_label!r}: {format_rational(weight)}"
                )
            resolved.append(Arc(tail, head, weight))
        resolved.sort(key=lambda a: (a.tail, a.head))
        self.arcs: tuple[Arc, ...] = tuple(resolved)

        n = len(self.labels)
        out_arcs: list[list[int]] = [[] for _ in range(n)]
        in_arcs: list[list[int]] = [[] for _ in range(n)]
        det_out: list[list[int]] = [[] for _ in range(n)]
        det_in: list[list[int]] = [[] for _ in range(n)]
        prob_out: list[list[tuple[int, Fraction]]] = [[] for _ in range(n)]
        prob_indices: list[int] = []
        prob_flags: list[bool] = []
        for idx, arc in enumerate(self.arcs):
            out_arcs[arc.tail].append(idx)
            in_arcs[arc.head].append(idx)
            probabilistic = arc.weight < ONE
            prob_flags.append(probabilistic)
            if probabilistic:
                prob_indices.append(idx)
                prob_out[arc.tail].append((arc.head, arc.weight))
            else:
                det_out[arc.tail].append(arc.head)
                det_in[arc.head].append(arc.tail)
        self.out_arcs = tuple(tuple(a) for a in out_arcs)
        self.in_arcs = tuple(tuple(a) for a in in_arcs)
        self.det_out = tuple(tuple(a) for a in det_out)
        self.det_in = tuple(tuple(a) for a in det_in)
        self.prob_out = tuple(tuple(a) for a in prob_out)
        self.prob_arc_indices = tuple(prob_indices)
        self.arc_probabilistic = tuple(prob_flags)
        self.prob_tails: frozenset[int] = frozenset(
            self.arcs[i].tail for i in prob_indices
        )

    # -- sizes ------------------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self.labels)

    @property
    def arc_count(self) -> int:
        return len(self.arcs)

    @property
    def probabilistic_arc_count(self) -> int:
        """The randomness parameter: number of arcs with weight < 1."""
        return len(self.prob_arc_indices)

    # -- label lookups ----------------------------------------------------

    def node(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise InvalidInstanceError(f"unknown node label: {label!r}") from None

    def node_set(self, labels: Iterable[str]) -> frozenset[int]:
        return frozenset(self.node(label) for label in labels)

    def label_set(self, nodes: Iterable[int]) -> list[str]:
        """Labels of the given nodes, sorted by node index."""
        return [self.labels[v] for v in sorted(nodes)]

    def is_dag(self) -> bool:
        return all(len(c) == 1 for c in condensation(self).components)

    # -- equality (used by the round-trip contracts) ------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InfluenceGraph):
            return NotImplemented
        return self.labels == other.labels and self.arcs == other.arcs

    def __hash__(self) -> int:
        return hash((self.labels, self.arcs))

    def __repr__(self) -> str:
        return (
            f"InfluenceGraph(n={self.node_count}, m={self.arc_count}, "
            f"r={self.probabilistic_arc_count})"
        )


@dataclass(frozen=True)
class Instance:
    """An influence graph plus target set, budget, and optional cost bound.

    ``budget=None`` means an unlimited number of effectors.
    """

    graph: InfluenceGraph
    targets: frozenset[int]
    budget: int | None
    cost_bound: Fraction | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "targets", frozenset(self.targets))
        n = self.graph.node_count
        for v in self.targets:
            if not 0 <= v < n:
                raise InvalidInstanceError(f"target index out of range: {v}")
        if self.budget is not None and self.budget < 0:
            raise InvalidInstanceError("budget is negative")
        if self.cost_bound is not None and self.cost_bound < 0:
            raise InvalidInstanceError("cost bound is negative")

    @property
    def target_count(self) -> int:
        return len(self.targets)


# -- reachability and closures ---------------------------------------------


def reachable(graph: InfluenceGraph, seeds: Iterable[int]) -> frozenset[int]:
    """Nodes reachable from ``seeds`` using arcs of any weight."""
    seen = set(seeds)
    stack = list(seen)
    arcs = graph.arcs
    out_arcs = graph.out_arcs
    while stack:
        v = stack.pop()
        for idx in out_arcs[v]:
            h = arcs[idx].head
            if h not in seen:
                seen.add(h)
                stack.append(h)
    return frozenset(seen)


def deterministic_closure(
    graph: InfluenceGraph, seeds: Iterable[int]
) -> frozenset[int]:
    """Nodes reachable from ``seeds`` using weight-1 arcs only.

    The result always contains the seeds; the closure is extensive and
    idempotent.
    """
    return _closure(graph.det_out, seeds)


def inverse_deterministic_closure(
    graph: InfluenceGraph, seeds: Iterable[int]
) -> frozenset[int]:
    """Nodes from which ``seeds`` can be reached via weight-1 arcs only.

    Equals the deterministic closure of ``seeds`` in the arc-reversed
    graph.
    """
    return _closure(graph.det_in, seeds)


def _closure(adjacency: Sequence[Sequence[int]], seeds: Iterable[int]) -> frozenset[int]:
    seen = set(seeds)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for h in adjacency[v]:
            if h not in seen:
                seen.add(h)
                stack.append(h)
    return frozenset(seen)


# -- strongly connected components ------------------------------------------


@dataclass(frozen=True)
class CondensedDag:
    """Condensation of a (filtered, restricted) influence graph.

    Components are canonical: node indices inside each component are
    sorted ascending and components are ordered by their minimum node
    index. ``arcs`` holds deduplicated arcs between component indices;
    the component graph is acyclic.
    """

    components: tuple[tuple[int, ...], ...]
    arcs: tuple[tuple[int, int], ...]
    node_component: dict[int, int] = field(repr=False)

    def sources(self) -> tuple[int, ...]:
        """Component indices with no incoming component arc."""
        has_in = {head for _, head in self.arcs}
        return tuple(
            c for c in range(len(self.components)) if c not in has_in
        )


def condensation(
    graph: InfluenceGraph,
    arc_filter: str = "all",
    restrict_to: Iterable[int] | None = None,
) -> CondensedDag:
    """Strongly connected components of the filtered, restricted graph.

    ``arc_filter`` is "all" or "deterministic" (weight-1 arcs only);
    ``restrict_to`` limits both nodes and arcs to an induced subgraph.
    """
    if arc_filter not in ("all", "deterministic"):
        raise InvalidInstanceError(f"unknown arc filter: {arc_filter!r}")
    if restrict_to is None:
        nodes = list(range(graph.node_count))
        allowed = None
    else:
        allowed = set(restrict_to)
        nodes = sorted(allowed)

    succ: dict[int, list[int]] = {v: [] for v in nodes}
    pairs: list[tuple[int, int]] = []
    deterministic_only = arc_filter == "deterministic"
    prob_flags = graph.arc_probabilistic
    for idx, arc in enumerate(graph.arcs):
        if deterministic_only and prob_flags[idx]:
            continue
        if allowed is not None and (arc.tail not in allowed or arc.head not in allowed):
            continue
        succ[arc.tail].append(arc.head)
        pairs.append((arc.tail, arc.head))

    components = _tarjan_components(nodes, succ)
    components.sort(key=lambda comp: comp[0])
    node_component: dict[int, int] = {}
    for ci, comp in enumerate(components):
        for v in comp:
            node_component[v] = ci
    comp_arcs = sorted(
        {
            (node_component[u], node_component[v])
            for u, v in pairs
            if node_component[u] != node_component[v]
        }
    )
    return CondensedDag(
        components=tuple(tuple(c) for c in components),
        arcs=tuple(comp_arcs),
        node_component=node_component,
    )


def _tarjan_components(
    nodes: Sequence[int], succ: dict[int, list[int]]
) -> list[list[int]]:
    """Iterative Tarjan; each returned component is sorted ascending."""
    index_of: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0

    for root in nodes:
        if root in index_of:
            continue
        index_of[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        call_stack: list[tuple[int, Iterator[int]]] = [(root, iter(succ[root]))]
        while call_stack:
            v, children = call_stack[-1]
            descended = False
            for w in children:
                if w not in index_of:
                    index_of[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    call_stack.append((w, iter(succ[w])))
                    descended = True
                    break
                if w in on_stack and index_of[w] < low[v]:
                    low[v] = index_of[w]
            if descended:
                continue
            call_stack.pop()
            if call_stack:
                parent = call_stack[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index_of[v]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    component.append(w)
                    if w == v:
                        break
                component.sort()
                components.append(component)
    return components
