"""Max-flow and maximum weight closure."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from effectors import (
    ClosureProblem,
    FlowNetwork,
    InvalidInstanceError,
    max_flow,
    max_weight_closure,
)
from effectors.closure import network_to_dot

ZERO = Fraction(0)


def brute_force_max_closure(
    n: int, arcs: list[tuple[int, int]], weights: dict[int, Fraction]
) -> tuple[frozenset[int], Fraction]:
    """Enumerate every closed subset; return the maximal optimum."""
    out = [0] * n
    for u, v in arcs:
        out[u] |= 1 << v
    best_weight: Fraction | None = None
    best_mask = 0
    for mask in range(1 << n):
        closed = True
        rest = mask
        while rest:
            bit = rest & -rest
            rest ^= bit
            if out[bit.bit_length() - 1] & ~mask:
                closed = False
                break
        if not closed:
            continue
        weight = sum(
            (weights[v] for v in range(n) if mask >> v & 1), ZERO
        )
        if best_weight is None or weight > best_weight:
            best_weight, best_mask = weight, mask
        elif weight == best_weight:
            # optimal closures are closed under union, so the union of
            # all optima is the unique maximal optimum
            best_mask |= mask
    assert best_weight is not None
    return frozenset(v for v in range(n) if best_mask >> v & 1), best_weight


class TestMaxFlow:
    def test_single_arc(self):
        net = FlowNetwork(2, 0, 1)
        net.add_arc(0, 1, Fraction(5, 2))
        value, cut = max_flow(net)
        assert value == Fraction(5, 2)
        assert cut == {0}

    def test_parallel_paths_add(self):
        net = FlowNetwork(4, 0, 3)
        net.add_arc(0, 1, Fraction(1))
        net.add_arc(1, 3, Fraction(1))
        net.add_arc(0, 2, Fraction(1, 3))
        net.add_arc(2, 3, Fraction(1, 3))
        value, _ = max_flow(net)
        assert value == Fraction(4, 3)

    def test_diamond_with_cross_arc(self):
        net = FlowNetwork(4, 0, 3)
        net.add_arc(0, 1, Fraction(1))
        net.add_arc(0, 2, Fraction(1))
        net.add_arc(1, 3, Fraction(1))
        net.add_arc(2, 3, Fraction(1))
        net.add_arc(1, 2, Fraction(1))
        value, _ = max_flow(net)
        assert value == Fraction(2)

    def test_negative_capacity_rejected(self):
        net = FlowNetwork(2, 0, 1)
        with pytest.raises(InvalidInstanceError, match="negative capacity"):
            net.add_arc(0, 1, Fraction(-1))

    def test_unbounded_path_rejected(self):
        net = FlowNetwork(2, 0, 1)
        net.add_arc(0, 1, None)
        with pytest.raises(InvalidInstanceError, match="unbounded"):
            max_flow(net)

    def test_source_equals_sink_rejected(self):
        with pytest.raises(InvalidInstanceError):
            FlowNetwork(2, 1, 1)

    def test_dot_dump(self):
        net = FlowNetwork(3, 0, 2)
        net.add_arc(0, 1, Fraction(1, 2))
        net.add_arc(1, 2, None)
        max_flow(net)
        dot = network_to_dot(net)
        assert dot.startswith("digraph flow")
        assert '0 -> 1 [label="1/2/1/2"];' in dot
        assert '1 -> 2 [label="1/2/inf"];' in dot

    def test_strong_duality_on_random_networks(self):
        rng = random.Random(77)
        for _ in range(100):
            n = rng.randint(2, 8)
            net = FlowNetwork(n, 0, n - 1)
            capacity: dict[tuple[int, int], Fraction] = {}
            for u in range(n):
                for v in range(n):
                    if u != v and rng.random() < 0.4:
                        cap = Fraction(rng.randint(0, 12), rng.randint(1, 5))
                        net.add_arc(u, v, cap)
                        capacity[(u, v)] = capacity.get((u, v), ZERO) + cap
            value, cut = max_flow(net)
            cut_capacity = sum(
                (
                    cap
                    for (u, v), cap in capacity.items()
                    if u in cut and v not in cut
                ),
                ZERO,
            )
            assert value == cut_capacity
            assert 0 in cut and (n - 1) not in cut


class TestMaxWeightClosure:
    def test_all_positive_takes_everything(self):
        problem = ClosureProblem(
            nodes=(0, 1, 2),
            arcs=((0, 1), (1, 2)),
            weights={0: Fraction(1), 1: Fraction(2), 2: Fraction(3)},
        )
        closure, weight = max_weight_closure(problem)
        assert closure == {0, 1, 2}
        assert weight == Fraction(6)

    def test_all_negative_takes_nothing(self):
        problem = ClosureProblem(
            nodes=(0, 1),
            arcs=((0, 1),),
            weights={0: Fraction(-1), 1: Fraction(-2)},
        )
        closure, weight = max_weight_closure(problem)
        assert closure == frozenset()
        assert weight == ZERO

    def test_negative_dependency_worth_taking(self):
        problem = ClosureProblem(
            nodes=(0, 1),
            arcs=((0, 1),),
            weights={0: Fraction(2), 1: Fraction(-1)},
        )
        closure, weight = max_weight_closure(problem)
        assert closure == {0, 1}
        assert weight == Fraction(1)

    def test_empty_problem(self):
        closure, weight = max_weight_closure(
            ClosureProblem(nodes=(), arcs=(), weights={})
        )
        assert closure == frozenset()
        assert weight == ZERO

    def test_zero_weight_isolated_node_joins_maximal_optimum(self):
        problem = ClosureProblem(
            nodes=(0, 1), arcs=(), weights={0: Fraction(1), 1: ZERO}
        )
        closure, weight = max_weight_closure(problem)
        assert closure == {0, 1}
        assert weight == Fraction(1)

    def test_validation(self):
        with pytest.raises(InvalidInstanceError, match="self-loop"):
            ClosureProblem(nodes=(0,), arcs=((0, 0),), weights={0: ZERO})
        with pytest.raises(InvalidInstanceError, match="duplicate arc"):
            ClosureProblem(
                nodes=(0, 1), arcs=((0, 1), (0, 1)), weights={0: ZERO, 1: ZERO}
            )
        with pytest.raises(InvalidInstanceError, match="misses weights"):
            ClosureProblem(nodes=(0,), arcs=(), weights={})

    def test_against_brute_force_sweep(self):
        rng = random.Random(1234)
        for _ in range(150):
            n = rng.randint(1, 9)
            arcs = [
                (u, v)
                for u in range(n)
                for v in range(n)
                if u != v and rng.random() < 0.3
            ]
            weights = {
                v: Fraction(rng.randint(-10, 10), rng.randint(1, 4))
                for v in range(n)
            }
            closure, weight = max_weight_closure(
                ClosureProblem(tuple(range(n)), tuple(arcs), weights)
            )
            expected_set, expected_weight = brute_force_max_closure(n, arcs, weights)
            assert weight == expected_weight
            assert closure == expected_set
            assert weight >= ZERO
            # returned set is closed: no arc leaves it
            assert all(v in closure for u, v in arcs if u in closure)
