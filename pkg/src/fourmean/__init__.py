"""Numerical checks of the four-mean inequality and its pseudospectral consequences."""

__version__ = "0.1.0"

from .linalg import (ConvergenceError, Polynomial, char_poly, companion, determinant,
                     gram_char_coeffs, numerical_rank, operator_norm, poly_eval,
                     singular_values)
from .pseudospectra import (FRPair, GridSpec, SingularField, default_poly_battery,
                            eps_contour_export, fr_pair, fr_square_ratios,
                            mean_identities_check, norm_bound_check, rank_agreement,
                            similarity_cond_lower_bound, singular_field,
                            super_identical_check)
from .tuples import (BoundVerdict, DimensionMismatch, MeanSignature, NonnegTuple,
                     SignatureMismatch, ZeroEntryError, bound_check, classical_means,
                     equality_witness, signature, signatures_match)

__all__ = [
    "BoundVerdict", "ConvergenceError", "DimensionMismatch", "FRPair", "GridSpec",
    "MeanSignature", "NonnegTuple", "Polynomial", "SignatureMismatch", "SingularField",
    "ZeroEntryError", "bound_check", "char_poly", "classical_means", "companion",
    "default_poly_battery", "determinant", "eps_contour_export", "equality_witness",
    "fr_pair", "fr_square_ratios", "gram_char_coeffs", "mean_identities_check",
    "norm_bound_check", "numerical_rank", "operator_norm", "poly_eval", "rank_agreement",
    "signature", "signatures_match", "similarity_cond_lower_bound", "singular_field",
    "singular_values", "super_identical_check",
]
