"""Semi-intersecting families and clique numbers of xor-powers of Kneser graphs."""

from .setsystem import (
    Family,
    FamilyParseError,
    Layout,
    TransversalSet,
    VerifyReport,
    Violation,
    decode,
    degree,
    encode,
    from_json,
    pad_blocks,
    to_json,
    verify_family,
    xor_adjacent,
)
from .constructions import (
    Core,
    MatrixPlan,
    build_core,
    construct_f2_lower,
    core3,
    core4,
    core5,
    core_is_valid,
    core_to_family,
    disjoint_family,
    extend_power,
    fuse,
    lift_to,
    matrix_family,
    matrix_plan,
    min_n_for_pair_construction,
    permute_classes,
    plane_family,
    validate_core,
)
from .solver import (
    CliqueGraph,
    CliqueResult,
    GF2Matrix,
    VertexBudgetExceeded,
    brute_force_f,
    build_product_graph,
    check_rank_bound,
    family_gf2_system,
    gf2_rank,
    max_clique,
    read_dimacs,
    write_dimacs,
)
from .analysis import (
    CrossMatching,
    MatchingReport,
    PeelingTrace,
    TypeFrequencies,
    best_construction,
    bound_rows,
    combined_upper,
    complementary_pair_matching,
    degree_dichotomy,
    gamma,
    gamma_for_upper,
    lower_c2,
    max_cross_matching_weight,
    peel,
    permutation_type_mc,
    power_lower,
    power_upper,
    power_upper_quoted,
    rows_to_csv,
    t1_bounds,
    upper_c2,
    verify_matching,
)

__version__ = "0.1.0"
