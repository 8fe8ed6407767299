"""Automorphism groups of colored set families and of marked interval graphs."""

from .errors import (
    AutomsetError,
    BudgetExceeded,
    DomainMismatch,
    EmptyGraph,
    IndexBoundExceeded,
    InternalInvariantError,
    InvalidFamily,
    InvalidPartition,
    MarkedSetNotClique,
    NonInvariantSubdomain,
    NonStabilizedSubfamily,
    NotChordal,
    NotInterval,
    ParseError,
    ValidationError,
)
from .intervalpq import (
    Graph,
    PQTree,
    build_pq_tree,
    canonical_code,
    interval_automorphism_group,
    maximal_cliques,
    rank,
)
from .markedreduction import (
    MarkedInstance,
    annotate_sets,
    autom_marked_int,
    classify_clean,
    node_sets,
    reduce,
)
from .permgroup import (
    Permutation,
    PermGroup,
    membership,
    order,
    restrict,
    schreier_sims,
    subgroup_by_membership,
    symmetric_product,
)
from .setfamily import (
    ColoredSetFamily,
    SimpleFamily,
    TowerTrace,
    autom_set,
    expand_solution,
    simplify,
    tower_step,
    venn_diagram,
    venn_good,
)

__version__ = "0.1.0"
