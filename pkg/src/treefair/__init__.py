"""Fairness of 0/1 transition matrices on regular trees.

A matrix A is fair for (k, n) when every root symbol of the k-tree admits
the same set of row-n configurations.  :func:`run_algorithm` discovers the
replacement relations between root symbols round by round, and the
functions in :mod:`treefair.oracle` compute the same objects exactly.
"""

from .errors import CapacityError, MatrixParseError, MovePreconditionError, TreeFairError, ZeroRowError
from .matrix import (
    TransitionMatrix,
    all_ktuples_have_common_predecessor,
    has_positive_row,
    max_row_sum,
    parse_matrix,
    power_support,
    primitivity_exponent,
)
from .oracle import (
    Caps,
    enumerate_labelings_naive,
    level_matrix_supports,
    oracle_membership,
    oracle_relations_at,
    poss_family,
    poss_root,
    relation_degree,
)
from .relations import (
    RelationMatrix,
    Status,
    Verdict,
    apply_moves,
    classify_fairness,
    round_step,
    run_algorithm,
)

__version__ = "0.1.0"
