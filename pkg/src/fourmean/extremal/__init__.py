"""Extremal problems behind the mean bounds, and their numerical certificates."""

from .bruteforce import brute_force_max
from .lemmas import poly_f_coeffs, poly_g, verify_f_lemma, verify_g_lemma
from .reduced import reduced_sweep, reduced_system_residual, reduced_system_solve
from .sampling import bulk_bound_run, complete_tuple, feasible_pair_sample, sample_pairs
from .solver import (extremal_max, four_mean_max, penalty_search, positive_penalty_best,
                     three_mean_max)
from .types import CandidateProfile, ExtremalResult, SearchConfig

__all__ = [
    "CandidateProfile", "ExtremalResult", "SearchConfig",
    "brute_force_max", "bulk_bound_run", "complete_tuple", "extremal_max",
    "feasible_pair_sample", "four_mean_max", "penalty_search", "poly_f_coeffs", "poly_g",
    "positive_penalty_best", "reduced_sweep", "reduced_system_residual",
    "reduced_system_solve", "sample_pairs", "three_mean_max", "verify_f_lemma",
    "verify_g_lemma",
]
