"""Decision tools for network resilience.

Directed graphs with acceptance sets over structural quantities, an
intervention catalog with reachability search, cost models inducing a risk
measure (the cheapest way back into the acceptance set), and an SIR
percolation stress test with reproducible counter-based sampling.
"""

from .acceptance import (
    AcceptanceSpec,
    Constant,
    Formula,
    SimpleQ,
    StressProbability,
    Table,
    Verdict,
    check_p1,
    check_p2,
    check_p3,
    check_p4,
    evaluate_q,
    falsify_monotonicity,
    is_acceptable,
    is_risk_reducing,
    named_acceptance,
    threshold,
)
from .costs import (
    Communicability,
    CostModel,
    Efficiency,
    IdentityMap,
    Monetary,
    PriceTable,
    Scale,
    SoftCap,
    UnitCount,
    check_cost_axioms,
    strategy_cost,
    transformation_cost,
)
from .errors import NetresError
from .graphio import Workspace, graph_hash, parse_graph, serialize_graph
from .graphs import Graph, canonical_form, isomorphic
from .interventions import (
    InterventionSet,
    apply,
    apply_strategy,
    check_not_partially_self_reverse,
    iset,
    parse_strategy,
    reachable_set,
)
from .search import DmfnrPreset, RhoResult, rho, suggest_greedy, verify_rho_properties
from .stress import (
    FixedSet,
    PerNodeBernoulli,
    SirParams,
    StressConfig,
    UniformSingleNode,
    coupled_edge_deletion_check,
    epn_final_set,
    estimate_systemic_probability,
    gillespie_final_set,
    sample_epn,
    systemic_stress,
)

__version__ = "0.1.0"

__all__ = [
    "AcceptanceSpec",
    "Communicability",
    "Constant",
    "CostModel",
    "DmfnrPreset",
    "Efficiency",
    "FixedSet",
    "Formula",
    "Graph",
    "IdentityMap",
    "InterventionSet",
    "Monetary",
    "NetresError",
    "PerNodeBernoulli",
    "PriceTable",
    "RhoResult",
    "Scale",
    "SimpleQ",
    "SirParams",
    "SoftCap",
    "StressConfig",
    "StressProbability",
    "Table",
    "UniformSingleNode",
    "UnitCount",
    "Verdict",
    "Workspace",
    "apply",
    "apply_strategy",
    "canonical_form",
    "check_cost_axioms",
    "check_not_partially_self_reverse",
    "check_p1",
    "check_p2",
    "check_p3",
    "check_p4",
    "coupled_edge_deletion_check",
    "epn_final_set",
    "estimate_systemic_probability",
    "evaluate_q",
    "falsify_monotonicity",
    "gillespie_final_set",
    "graph_hash",
    "is_acceptable",
    "is_risk_reducing",
    "iset",
    "isomorphic",
    "named_acceptance",
    "parse_graph",
    "parse_strategy",
    "reachable_set",
    "rho",
    "sample_epn",
    "serialize_graph",
    "strategy_cost",
    "suggest_greedy",
    "systemic_stress",
    "threshold",
    "transformation_cost",
    "verify_rho_properties",
]
