"""Edge local differential privacy for graphs.

Local randomizers (degree-preserving randomized response, Warner's RR, a
local Laplace baseline), a one-round obfuscation protocol with common and
customized privacy settings, budget allocation, and an analysis suite for
degree preservation and scaling behaviour.
"""

__version__ = "0.1.0"

from .graphs import Graph, GraphCollection, NeighborList, generate_ba, neighbor_list
from .io import parse_edge_list, parse_tudataset, write_tudataset
from .mechanisms import (
    BudgetSplit,
    DprrRowResult,
    allocate_budget,
    dprr,
    edge_sampling,
    laplace_sample,
    local_lap,
    noisy_degree,
    per_bit_likelihood_ratio,
    relationship_dp_level,
    rr_baseline,
    rr_keep_prob,
    sampling_prob,
    warner_rr,
)
from .noisy import NoisyGraph, UserMeta
from .protocol import PrivacyConfig, RoleVector, assign_roles, run_protocol, symmetrize
from .rng import RngStream

__all__ = [
    "__version__",
    "Graph",
    "GraphCollection",
    "NeighborList",
    "generate_ba",
    "neighbor_list",
    "parse_edge_list",
    "parse_tudataset",
    "write_tudataset",
    "BudgetSplit",
    "DprrRowResult",
    "allocate_budget",
    "dprr",
    "edge_sampling",
    "laplace_sample",
    "local_lap",
    "noisy_degree",
    "per_bit_likelihood_ratio",
    "relationship_dp_level",
    "rr_baseline",
    "rr_keep_prob",
    "sampling_prob",
    "warner_rr",
    "NoisyGraph",
    "UserMeta",
    "PrivacyConfig",
    "RoleVector",
    "assign_roles",
    "run_protocol",
    "symmetrize",
    "RngStream",
]
