"""Exact and Monte Carlo effector analysis on probabilistic influence graphs.

The package models influence graphs with exact rational arc weights under
the Independent Cascade diffusion model, computes activation probabilities
and explanation costs exactly (or by seeded simulation), and ships every
exact solver for the effector-detection problem together with reduction
generators used to validate them.
"""

from .closure import ClosureProblem, FlowNetwork, max_flow, max_weight_closure
from .errors import (
    EffectorsError,
    InvalidInstanceError,
    NotApplicableError,
    ResourceLimitError,
)
from .generators import (
    MccInput,
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
)
from .graph import (
    Arc,
    CondensedDag,
    InfluenceGraph,
    Instance,
    condensation,
    deterministic_closure,
    inverse_deterministic_closure,
    reachable,
)
from .instance_io import instance_to_dot, parse_instance, serialize_instance
from .propagation import (
    ActivationTrace,
    CostBreakdown,
    MonteCarloResult,
    ScenarioOutcome,
    cost,
    enumerate_scenarios,
    exact_probabilities,
    live_edge_probabilities,
    monte_carlo_cost,
    simulate_once,
    substream_seed,
)
from .rationals import as_rational, format_rational
from .solvers import (
    BranchAssignment,
    SolveReport,
    branch_assignment,
    pick_algorithm,
    solve,
    solve_brute_force,
    solve_infinite_budget,
    solve_influence_max,
    solve_xp_budget,
    solve_xp_cost,
    solve_zero_cost,
)

__version__ = "0.1.0"

__all__ = [
    "ActivationTrace",
    "Arc",
    "BranchAssignment",
    "ClosureProblem",
    "CondensedDag",
    "CostBreakdown",
    "EffectorsError",
    "FlowNetwork",
    "InfluenceGraph",
    "Instance",
    "InvalidInstanceError",
    "MccInput",
    "MonteCarloResult",
    "NotApplicableError",
    "ResourceLimitError",
    "ScenarioOutcome",
    "SolveReport",
    "StConReductionSpec",
    "as_rational",
    "branch_assignment",
    "condensation",
    "cost",
    "count_st_subgraphs",
    "deterministic_closure",
    "enumerate_scenarios",
    "exact_probabilities",
    "format_rational",
    "gen_dominating_set",
    "gen_independent_set",
    "gen_mcc",
    "gen_random",
    "gen_set_cover",
    "gen_stcon",
    "has_dominating_set",
    "has_independent_set",
    "has_multicolored_clique",
    "has_set_cover",
    "instance_to_dot",
    "inverse_deterministic_closure",
    "live_edge_probabilities",
    "max_flow",
    "max_weight_closure",
    "monte_carlo_cost",
    "parse_instance",
    "pick_algorithm",
    "reachable",
    "serialize_instance",
    "simulate_once",
    "solve",
    "solve_brute_force",
    "solve_infinite_budget",
    "solve_influence_max",
    "solve_xp_budget",
    "solve_xp_cost",
    "solve_zero_cost",
    "substream_seed",
]
