"""Exact anytime bi-objective optimization for release planning.

The package models the bi-objective next-release problem (maximize weighted
stakeholder satisfaction, minimize cost), solves its scalarized subproblems
with an exact integer branch and bound, and exposes a family of anytime and
classic algorithms that stream a well-spread partial Pareto front.
"""

from .anytime import (
    ALGORITHMS,
    ANYTIME_ALGORITHMS,
    CLASSIC_ALGORITHMS,
    Box,
    BoxQueue,
    RunConfig,
    RunControl,
    RunEvent,
    RunReport,
    choose_method,
    normalize_algorithm,
    run,
    run_classic,
)
from .bench import (
    BenchRow,
    GeneratorParams,
    MalformedInstanceError,
    bench,
    generate_instance,
    load_instance,
    parse_classic,
    parse_realistic,
)
from .metrics import (
    HvTracker,
    InstanceTooLargeError,
    ParetoArchive,
    brute_force_front,
    classify_supported,
    format_fraction,
    hypervolume,
    pareto_filter,
    supported_subset,
)
from .model import (
    BiObjectiveProblem,
    InvalidInstanceError,
    LengthMismatchError,
    NrpInstance,
    Point,
    Solution,
    build_bi_objective,
    dumps_instance,
    evaluate,
    feasible,
    instance_from_dict,
    instance_to_dict,
    loads_instance,
)
from .oracle import (
    CancelToken,
    LinearConstraint,
    LinearObjective,
    MaxPlusObjective,
    OracleOutcome,
    Subproblem,
    export_lp,
    lower_bound,
    propagate,
    prune_infeasible,
    solve,
)
from .scalarize import (
    Corners,
    augmecon_sub,
    default_augmecon_lambda,
    dichotomic_weights,
    epsilon_sub,
    lexicographic_optima,
    tchebycheff_sub,
    weighted_sum_in_box,
)

__version__ = "0.1.0"
