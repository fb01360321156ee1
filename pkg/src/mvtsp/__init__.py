"""Exact solvers for many-visits tour problems.

Find a cheapest closed walk through a directed cost matrix that visits each
city a prescribed number of times.  Visit counts may be astronomically
large: solutions are edge multisets with integer multiplicities, expanded
into explicit walks only on request.
"""

from .core import (
    INF,
    MAX_VALUE,
    Cost,
    DirectedMultigraph,
    Instance,
    TourSolution,
    is_valid_tour_edgeset,
    multigraph_cost,
    multigraph_sum,
    undirected_connected,
)
from .degseq import (
    DegreeSequence,
    combination_to_sequence,
    count_distributions,
    count_feasible,
    distribute,
    enumerate_feasible,
    is_feasible,
)
from .euler import ExpansionLimitExceeded, cycle_certificate, eulerian_expand
from .opttree import (
    DpTreeSolver,
    SubProblem,
    min_tree_dc,
    min_tree_dc2,
    min_tree_dp,
)
from .solvers import (
    ALGORITHMS,
    Infeasible,
    SolverConfig,
    brute_permutation,
    brute_psaraftis,
    solve,
    solve_enum,
)
from .transport import (
    TransportInfeasible,
    TransportProblem,
    TransportSolution,
    solve_transport,
)
from .trees import (
    BalancedPartition,
    DirectedTree,
    centroid_partition,
    enumerate_trees,
    extract_spanning_tree,
    perfectly_balanced_partition,
    realize_tree,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "BalancedPartition",
    "Cost",
    "DegreeSequence",
    "DirectedMultigraph",
    "DirectedTree",
    "DpTreeSolver",
    "ExpansionLimitExceeded",
    "INF",
    "Infeasible",
    "Instance",
    "MAX_VALUE",
    "SolverConfig",
    "SubProblem",
    "TourSolution",
    "TransportInfeasible",
    "TransportProblem",
    "TransportSolution",
    "brute_permutation",
    "brute_psaraftis",
    "centroid_partition",
    "combination_to_sequence",
    "count_distributions",
    "count_feasible",
    "cycle_certificate",
    "distribute",
    "enumerate_feasible",
    "enumerate_trees",
    "eulerian_expand",
    "extract_spanning_tree",
    "is_feasible",
    "is_valid_tour_edgeset",
    "min_tree_dc",
    "min_tree_dc2",
    "min_tree_dp",
    "multigraph_cost",
    "multigraph_sum",
    "undirected_connected",
    "perfectly_balanced_partition",
    "realize_tree",
    "solve",
    "solve_enum",
    "solve_transport",
]
