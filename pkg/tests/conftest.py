"""Shared instance builders for the test suite."""

from __future__ import annotations

from fractions import Fraction

import pytest

from effectors import InfluenceGraph, Instance

# Four-node worked example used throughout: one source node feeding a
# three-node cycle, five probabilistic arcs and one deterministic arc.
DEMO_ARCS = [
    ("v1", "v2", "1/2"),
    ("v1", "v3", "4/5"),
    ("v2", "v3", "1/10"),
    ("v3", "v4", "1"),
    ("v2", "v4", "3/10"),
    ("v4", "v2", "9/10"),
]


@pytest.fixture
def demo() -> InfluenceGraph:
    return InfluenceGraph(["v1", "v2", "v3", "v4"], DEMO_ARCS)


@pytest.fixture
def demo_instance(demo: InfluenceGraph) -> Instance:
    return Instance(
        graph=demo,
        targets=demo.node_set(["v2", "v3", "v4"]),
        budget=1,
    )


@pytest.fixture
def star() -> InfluenceGraph:
    """A non-target hub with deterministic arcs to three targets."""
    return InfluenceGraph(
        ["u", "t1", "t2", "t3"],
        [("u", "t1", 1), ("u", "t2", 1), ("u", "t3", 1)],
    )


@pytest.fixture
def star_targets(star: InfluenceGraph) -> frozenset[int]:
    return star.node_set(["t1", "t2", "t3"])


@pytest.fixture
def star_instance(star: InfluenceGraph, star_targets: frozenset[int]) -> Instance:
    return Instance(
        graph=star,
        targets=star_targets,
        budget=1,
        cost_bound=Fraction(1),
    )
