"""Numerical verification of boolean permutation quantum semigroups.

The package builds finite-dimensional representations of the semigroups
B_s(n), checks their defining relations and comultiplication, enumerates
the interval-partition combinatorics behind boolean independence, and
verifies the three coaction invariance conditions on a zoo of concrete
matrix models.
"""

from .coaction import (
    AveragingTable,
    InvarianceReport,
    algebraic_invariance_check,
    averaging_invariance_experiment,
    bsn_invariance_check,
    linear_invariance_check,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .models import (
    ModelSpec,
    build_classical_iid,
    build_constant,
    build_shift_nonunital,
    build_shift_unital,
    build_zero,
    load_model,
)
from .ncpoly import Polynomial, Word, evaluate, word_runs, words_up_to_degree
from .partitions import (
    IntervalPartition,
    canonical_partition,
    compatible,
    enumerate_interval_partitions,
    equivalent,
)
from .probspace import (
    CondExpectation,
    MatrixModel,
    State,
    UnitalizedElement,
    boolean_predicted_moment,
    check_boolean_implies_free,
    check_boolean_independence,
    check_factorization_property,
    check_moment_reduction,
    lift_expectation,
    moment,
    unitalize,
)
from .semigroup import (
    RelationReport,
    SemigroupRep,
    build_averaging_rep,
    build_standard_rep,
    check_relations,
    comultiplication_check,
    sum_identity_check,
    u_product,
)

__version__ = "0.1.0"
