"""Exact and simulated statistics of arithmetic-progression counts in random subsets of [n]."""

from .census import (
    PairCensus,
    census_bruteforce,
    census_bruteforce_sweep,
    census_fast,
    overlap_count,
    point_degree,
    positional_sum,
)
from .explorer import (
    ExplorationResult,
    MomentReport,
    centred_product_expectation,
    dominant_moment,
    exact_joint_moment,
    explore,
    perfect_matchings,
    validate_type_vectors,
)
from .kernel import (
    ENTROPY,
    Kernel,
    RegimeCutoffs,
    RegimeReport,
    build_phi,
    classify_regimes,
    eval_entropy,
    inner_product,
    kappa,
    lambda_constant,
)
from .moments import (
    BoundReport,
    ExactDistribution,
    chen_stein_bound,
    exact_covariance,
    exact_joint_distribution,
    mikhailov_diagnostic,
)
from .progressions import (
    DomainError,
    ModelParams,
    Progression,
    ResourceError,
    count_aps,
    enumerate_aps,
    expected_count,
)
from .simulate import (
    SampleBatch,
    count_in_subset,
    empirical_correlation,
    ks_distance,
    run_experiment,
    sample_subset,
    tv_distance,
)

__version__ = "0.1.0"
