"""Reduction generators, counting oracle, and random ensembles."""

from __future__ import annotations

from fractions import Fraction

import pytest

from effectors import (
    InvalidInstanceError,
    MccInput,
    ResourceLimitError,
    StConReductionSpec,
    count_st_subgraphs,
    gen_dominating_set,
    gen_independent_set,
    gen_mcc,
    gen_random,
    gen_set_cover,
    gen_stcon,
    has_dominating_set,
    has_independent_set,
    has_multicolored_clique,
    has_set_cover,
    serialize_instance,
    solve,
    solve_brute_force,
    solve_influence_max,
)

TRIANGLE = MccInput(
    vertices=("a", "b", "c"),
    edges=(("a", "b"), ("b", "c"), ("a", "c")),
    colors={"a": 1, "b": 2, "c": 3},
    k=3,
)


def decide(instance) -> bool:
    report = solve_brute_force(
        instance.graph, instance.targets, instance.budget, max_nodes=40
    )
    return report.exact_cost <= instance.cost_bound


class TestMcc:
    def test_triangle_sizes(self):
        inst = gen_mcc(TRIANGLE)
        # 3 color pairs with 7 copies each, 3 vertex nodes, 3 edge nodes
        assert inst.graph.node_count == 27
        assert inst.budget == 3
        assert inst.cost_bound == Fraction(6)
        assert inst.target_count == 21
        assert inst.graph.probabilistic_arc_count == 0

    def test_size_closed_forms(self):
        for k in (2, 3):
            vertices = tuple(f"v{i}" for i in range(k))
            colors = {f"v{i}": i + 1 for i in range(k)}
            mcc = MccInput(vertices=vertices, edges=(), colors=colors, k=k)
            inst = gen_mcc(mcc)
            pairs = k * (k - 1) // 2
            assert inst.target_count == pairs * (pairs + k + 1)
            assert inst.budget == pairs
            assert inst.cost_bound == Fraction(pairs + k)

    def test_no_edges_is_unsolvable(self):
        mcc = MccInput(
            vertices=("a", "b", "c"), edges=(), colors={"a": 1, "b": 2, "c": 3}, k=3
        )
        inst = gen_mcc(mcc)
        assert not has_multicolored_clique(mcc)
        assert not decide(inst)

    def test_k_two_boundary_always_solvable(self):
        # the gadget's no-side needs k >= 3: at k = 2 a single block node
        # costs exactly the bound, so even an edgeless input decides yes
        mcc = MccInput(
            vertices=("a", "b"), edges=(), colors={"a": 1, "b": 2}, k=2
        )
        inst = gen_mcc(mcc)
        assert not has_multicolored_clique(mcc)
        report = solve_brute_force(inst.graph, inst.targets, inst.budget)
        assert report.exact_cost == inst.cost_bound == Fraction(3)

    def test_round_trip_yes(self):
        assert has_multicolored_clique(TRIANGLE)
        assert decide(gen_mcc(TRIANGLE))

    def test_round_trip_no_when_colors_collide(self):
        # the only triangle repeats color 1, so no rainbow 3-clique exists
        bad = MccInput(
            vertices=("a", "b", "c", "d"),
            edges=(("a", "b"), ("b", "c"), ("a", "c"), ("c", "d")),
            colors={"a": 1, "b": 2, "c": 1, "d": 3},
            k=3,
        )
        assert not has_multicolored_clique(bad)
        assert not decide(gen_mcc(bad))

    def test_k_validation(self):
        with pytest.raises(InvalidInstanceError, match="k >= 2"):
            MccInput(vertices=("a",), edges=(), colors={"a": 1}, k=1)
        with pytest.raises(InvalidInstanceError, match="color"):
            MccInput(vertices=("a",), edges=(), colors={}, k=2)


class TestDominatingSet:
    def test_single_vertex(self):
        inst = gen_dominating_set(["a"], [], 1)
        assert inst.graph.node_count == 3  # initiator plus two copies
        assert inst.budget == inst.cost_bound == 1
        assert decide(inst)

    def test_star_center_dominates(self):
        edges = [("c", "l1"), ("c", "l2"), ("c", "l3")]
        vertices = ["c", "l1", "l2", "l3"]
        assert has_dominating_set(vertices, edges, 1)
        assert decide(gen_dominating_set(vertices, edges, 1))

    def test_path_four_needs_two(self):
        vertices = ["a", "b", "c", "d"]
        edges = [("a", "b"), ("b", "c"), ("c", "d")]
        assert not has_dominating_set(vertices, edges, 1)
        assert not decide(gen_dominating_set(vertices, edges, 1))
        assert has_dominating_set(vertices, edges, 2)
        assert decide(gen_dominating_set(vertices, edges, 2))


class TestSetCover:
    def test_singleton(self):
        inst = gen_set_cover({"S1": ["u1"]}, ["u1"], 1)
        assert inst.graph.node_count == 2
        assert inst.budget == 1
        assert inst.cost_bound == Fraction(0)
        assert decide(inst)

    def test_two_disjoint_sets_single_pick_fails(self):
        sets = {"S1": ["u1"], "S2": ["u2"]}
        inst = gen_set_cover(sets, ["u1", "u2"], 1)
        assert not has_set_cover(sets, ["u1", "u2"], 1)
        assert not decide(inst)

    def test_spec_cover_exists(self):
        sets = {"S1": ["u1", "u2"], "S2": ["u2", "u3"]}
        inst = gen_set_cover(sets, ["u1", "u2", "u3"], 2)
        assert has_set_cover(sets, ["u1", "u2", "u3"], 2)
        assert decide(inst)
        witness = solve_influence_max(inst.graph, inst.budget, inst.cost_bound)
        assert witness == inst.graph.node_set(["set_S1", "set_S2"])

    def test_validation(self):
        with pytest.raises(InvalidInstanceError, match="unknown element"):
            gen_set_cover({"S1": ["zz"]}, ["u1"], 1)
        with pytest.raises(InvalidInstanceError, match="number of sets"):
            gen_set_cover({"S1": ["u1"]}, ["u1"], 2)


class TestIndependentSet:
    def test_edgeless_graph(self):
        inst = gen_independent_set(["a", "b", "c"], [], 3)
        assert decide(inst)
        assert inst.budget == 0
        assert inst.cost_bound == Fraction(3)

    def test_triangle_two_is_no(self):
        vertices = ["a", "b", "c"]
        edges = [("a", "b"), ("b", "c"), ("a", "c")]
        assert not has_independent_set(vertices, edges, 2)
        assert not decide(gen_independent_set(vertices, edges, 2))

    def test_path_two_is_yes(self):
        vertices = ["a", "b", "c"]
        edges = [("a", "b"), ("b", "c")]
        assert has_independent_set(vertices, edges, 2)
        assert decide(gen_independent_set(vertices, edges, 2))


class TestCounting:
    def test_single_arc(self):
        assert count_st_subgraphs(("s", "t"), (("s", "t"),), "s", "t") == 1

    def test_five_of_eight(self):
        arcs = (("s", "a"), ("a", "t"), ("s", "t"))
        assert count_st_subgraphs(("s", "a", "t"), arcs, "s", "t") == 5

    def test_no_path(self):
        assert count_st_subgraphs(("s", "t", "a"), (("s", "a"),), "s", "t") == 0

    def test_guard(self):
        nodes = tuple(f"n{i}" for i in range(30))
        arcs = tuple((f"n{i}", f"n{i+1}") for i in range(29))
        with pytest.raises(ResourceLimitError):
            count_st_subgraphs(nodes, arcs, "n0", "n29")

    def test_rejects_cycles(self):
        with pytest.raises(InvalidInstanceError, match="acyclic"):
            count_st_subgraphs(("a", "b"), (("a", "b"), ("b", "a")), "a", "b")


class TestStcon:
    def test_single_arc_construction(self):
        spec = StConReductionSpec(
            nodes=("s", "t"), arcs=(("s", "t"),), source="s", sink="t", threshold=1
        )
        inst = gen_stcon(spec)
        assert set(inst.graph.labels) == {"s", "t", "copy_s"}
        assert inst.budget is None
        assert inst.cost_bound == Fraction(1, 2)
        weights = {
            (inst.graph.labels[a.tail], inst.graph.labels[a.head]): a.weight
            for a in inst.graph.arcs
        }
        assert weights[("s", "t")] == Fraction(1, 2)
        assert weights[("s", "copy_s")] == Fraction(1, 2)  # 1 - 1/2

    def test_inner_nodes_get_unit_copies(self):
        spec = StConReductionSpec(
            nodes=("s", "a", "t"),
            arcs=(("s", "a"), ("a", "t")),
            source="s",
            sink="t",
            threshold=1,
        )
        inst = gen_stcon(spec)
        weights = {
            (inst.graph.labels[a.tail], inst.graph.labels[a.head]): a.weight
            for a in inst.graph.arcs
        }
        assert weights[("a", "copy_a")] == Fraction(1)
        assert inst.targets == inst.graph.node_set(["s", "a"])

    def test_wide_dag_shape(self):
        # ten input nodes; five inner nodes sit on s-t paths and get copies
        nodes = ("s", "v1", "v2", "v3", "v4", "v5", "v6", "v7", "v8", "t")
        arcs = (
            ("s", "v1"), ("s", "v2"), ("s", "v3"),
            ("v1", "v4"), ("v2", "v5"), ("v3", "v2"), ("v3", "v4"),
            ("v4", "t"), ("v5", "t"),
            ("v6", "s"), ("v6", "v8"), ("v1", "v8"), ("v2", "v7"),
        )
        inst = gen_stcon(
            StConReductionSpec(nodes=nodes, arcs=arcs, source="s", sink="t", threshold=1)
        )
        copies = [lbl for lbl in inst.graph.labels if lbl.startswith("copy_")]
        assert sorted(copies) == [
            "copy_s", "copy_v1", "copy_v2", "copy_v3", "copy_v4", "copy_v5",
        ]
        halves = [a for a in inst.graph.arcs if a.weight == Fraction(1, 2)]
        assert len(halves) == 9  # the nine on-path arcs
        assert inst.cost_bound == Fraction(6) - Fraction(1, 512)

    def test_threshold_above_count_is_yes(self):
        # 5 of 8 subsets connect; any threshold above the count says yes
        spec = StConReductionSpec(
            nodes=("s", "a", "t"),
            arcs=(("s", "a"), ("a", "t"), ("s", "t")),
            source="s",
            sink="t",
            threshold=6,
        )
        report = solve(gen_stcon(spec))
        assert report.decision is True

    def test_degenerate_threshold_rejected(self):
        spec = StConReductionSpec(
            nodes=("s", "t"), arcs=(("s", "t"),), source="s", sink="t", threshold=3
        )
        with pytest.raises(InvalidInstanceError, match="degenerate threshold"):
            gen_stcon(spec)

    def test_input_validation(self):
        with pytest.raises(InvalidInstanceError, match="acyclic"):
            gen_stcon(
                StConReductionSpec(
                    nodes=("s", "t"),
                    arcs=(("s", "t"), ("t", "s")),
                    source="s",
                    sink="t",
                    threshold=1,
                )
            )
        with pytest.raises(InvalidInstanceError, match="at least 1"):
            gen_stcon(
                StConReductionSpec(
                    nodes=("s", "t"), arcs=(), source="s", sink="t", threshold=0
                )
            )
        with pytest.raises(InvalidInstanceError, match="differ"):
            gen_stcon(
                StConReductionSpec(
                    nodes=("s",), arcs=(), source="s", sink="s", threshold=1
                )
            )


class TestRandom:
    def test_empty(self):
        inst = gen_random(0, 0.5, 0.5, 0.5, seed=1)
        assert inst.graph.node_count == 0
        assert inst.targets == frozenset()

    def test_deterministic_fraction_zero(self):
        inst = gen_random(8, 0.8, 0.0, 0.5, seed=2)
        assert inst.graph.probabilistic_arc_count == 0

    def test_seed_reproducibility(self):
        a = gen_random(7, 0.4, 0.5, 0.5, seed=33, budget=2, cost_bound=Fraction(1))
        b = gen_random(7, 0.4, 0.5, 0.5, seed=33, budget=2, cost_bound=Fraction(1))
        assert serialize_instance(a) == serialize_instance(b)

    def test_different_seeds_differ(self):
        a = gen_random(7, 0.5, 0.5, 0.5, seed=1)
        b = gen_random(7, 0.5, 0.5, 0.5, seed=2)
        assert serialize_instance(a) != serialize_instance(b)

    def test_density_validation(self):
        with pytest.raises(InvalidInstanceError, match="arc_density"):
            gen_random(3, 1.5, 0.5, 0.5, seed=1)

    def test_weights_on_grid(self):
        inst = gen_random(8, 0.7, 1.0, 0.5, seed=5)
        for arc in inst.graph.arcs:
            assert arc.weight.denominator in (1, 2, 4, 8)
            assert 0 < arc.weight < 1
