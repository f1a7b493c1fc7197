"""Eigenvalue and degree tail toolkit for sparse binomial random graphs:
closed-form rate functions, reproducible samplers with planting and
tilting, sparse spectral routines, star-forest decompositions, a
certificate pipeline for the lower-tail implication, and tail-probability
estimators with exact small-graph oracles.
"""

__version__ = "0.1.0"

from .errors import (ConfigError, ConvergenceError, DomainError,
                     EdgetailError, FormatError, InsufficientDataError,
                     NotAForestError, NotFoundError, OrderError, SizeError,
                     ZeroVectorError)
from .graphs import Graph, pair_count, read_graph_text, write_graph_text
from .rates import (AsymptoticConfig, Regime, RegimeParams, TailSpec,
                    classify_regime, compute_delta_p, compute_lp,
                    rate_deg_lower, rate_deg_upper, rate_dense_upper,
                    rate_lower_tail, rate_lt_lambda1, rate_marginal_upper,
                    rate_upper_tail, relative_entropy)
from .sampler import (SplitLabels, TiltRecord, derived_rng, derived_seed,
                      log_planted_density_ratio, plant_star, sample_gnp,
                      sample_split, sample_tilted, tilt_log_lr)
from .spectral import (SpectrumResult, centered_norm, eigen_bounds,
                       rayleigh_quotient, spectral_norm,
                       sum_of_squares_check, top_r_eigenvalues,
                       tree_lambda1_bound)
from .structure import (DegreePartition, Decomposition, EventReport,
                        check_event_A1, check_event_A2, check_event_B,
                        check_event_C, check_event_D, check_event_T,
                        check_trees_event, degree_order_stats,
                        degree_partition, degree_ranked_vertices,
                        expected_tree_count_bound, log_expected_tree_count,
                        prune_and_center, remove_cycles, star_decompose,
                        star_forest_ok, test_decreasing,
                        write_decomposition_bundle)
from .ramsey import (OverlapConfig, Verdict, build_test_vector_independent,
                     build_test_vector_overlap, build_test_vectors_clique,
                     greedy_independent_set, overlap_graph, ramsey_find,
                     sparse_pair_graph, verdict_record, verify_lt_implication)
from .tails import (Estimate, EventPredicate, FitResult, enumerate_exact,
                    estimate_record, event_predicate, fit_exponent,
                    is_estimate_planted, is_estimate_tilted, mc_estimate,
                    parse_event, verify_fkg_degree, verify_tilt_bound)
