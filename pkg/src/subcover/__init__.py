"""Submodular cover toolkit: query-counted oracles, cover solvers for
monotone, general and regularized objectives, brute-force references, and a
batch experiment harness."""

from .exact import (
    ExactResult,
    GuardError,
    exact_max_cardinality,
    exact_max_regularized,
    exact_min_cover,
    exact_min_cover_regularized,
)
from .dataio import (
    CSV_COLUMNS,
    ParseError,
    ResultRow,
    parse_edge_list,
    parse_tag_assignments,
    read_results_csv,
    write_results_csv,
)
from .harness import ExperimentGrid, emit_plot_data, load_dataset, run_experiment
from .monotone import (
    convert_cover,
    convert_cover_randomized,
    convert_rand_repetitions,
    derive_seed,
    greedy_cover,
    greedy_max,
    greedy_max_subroutine,
    stochastic_greedy_cover,
    stochastic_greedy_max,
    stochastic_max_subroutine,
    threshold_greedy_cover,
)
from .nonmonotone import (
    SmpSearch,
    SmpSubroutine,
    classify_monotone_elements,
    double_greedy_max,
    exact_max_search,
    fast_exact_max_search,
    random_greedy_max,
    smp_subroutine,
    stream_cover,
)
from .oracles import (
    TOL,
    CoverageOracle,
    CoverInstance,
    GraphCutOracle,
    InputError,
    RegularizedInstance,
    SetFunctionOracle,
    SmpInstance,
    TightnessInstance,
    TruncatedOracle,
    make_greedy_tightness_instance,
    make_synthetic_summarization,
    query_count,
    truncate,
)
from .regularized import (
    distorted_cover,
    distorted_greedy_max,
    distorted_potential,
    distorted_stream_cover,
    distortion_horizon,
    convert_regularized,
)
from .results import BicriteriaResult, Status

__all__ = [
    "BicriteriaResult",
    "CSV_COLUMNS",
    "CoverInstance",
    "CoverageOracle",
    "ExactResult",
    "ExperimentGrid",
    "GraphCutOracle",
    "GuardError",
    "InputError",
    "ParseError",
    "RegularizedInstance",
    "ResultRow",
    "SetFunctionOracle",
    "SmpInstance",
    "SmpSearch",
    "SmpSubroutine",
    "Status",
    "TOL",
    "TightnessInstance",
    "TruncatedOracle",
    "classify_monotone_elements",
    "convert_cover",
    "convert_cover_randomized",
    "convert_rand_repetitions",
    "convert_regularized",
    "derive_seed",
    "distorted_cover",
    "distorted_greedy_max",
    "distorted_potential",
    "distorted_stream_cover",
    "distortion_horizon",
    "double_greedy_max",
    "emit_plot_data",
    "exact_max_cardinality",
    "exact_max_regularized",
    "exact_max_search",
    "exact_min_cover",
    "exact_min_cover_regularized",
    "fast_exact_max_search",
    "greedy_cover",
    "greedy_max",
    "greedy_max_subroutine",
    "load_dataset",
    "make_greedy_tightness_instance",
    "make_synthetic_summarization",
    "parse_edge_list",
    "parse_tag_assignments",
    "query_count",
    "random_greedy_max",
    "read_results_csv",
    "run_experiment",
    "smp_subroutine",
    "stochastic_greedy_cover",
    "stochastic_greedy_max",
    "stochastic_max_subroutine",
    "stream_cover",
    "threshold_greedy_cover",
    "truncate",
    "write_results_csv",
]
