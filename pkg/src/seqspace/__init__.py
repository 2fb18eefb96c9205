"""Difference sequence spaces built on generalized means.

The package evaluates the triangle y = A(r, s, t) (Delta x), its inverse, the
paranorms, modular and Luxemburg norm of the resulting spaces, and
truncation-honest verdicts for their dual spaces and matrix mappings.
"""

from ._accel import backend
from .conditions import (
    CONDITIONS,
    Bounds,
    ConditionSpec,
    InsufficientTruncation,
    LimitEstimate,
    Status,
    UnknownCondition,
    Verdict,
    evaluate_condition,
)
from .core import (
    ExponentSequence,
    FiniteSequence,
    GeneralizedMeansParams,
    IndexOutOfRange,
    LengthMismatch,
    NonFiniteValue,
    NonPositiveExponent,
    ParseError,
    SeqSpaceError,
    TriangleMatrix,
    ZeroEntry,
    ZeroLeading,
    exponent_stats,
    load_params,
    load_sequence,
    save_sequence,
    validate_params,
)
from .duals import (
    MixedExponentBranch,
    UnsupportedMapping,
    abel_identity_check,
    alpha_dual_matrix_entry,
    beta_gamma_matrix_entry,
    dual_membership,
    e_tilde_entry,
    matrix_map_check,
)
from .factories import (
    AlphaOutOfRange,
    TruncationTooLarge,
    a_alpha_params,
    cesaro_params,
    euler_params,
    weighted_mean_params,
)
from .norms import (
    NoBracket,
    NotOnSphere,
    luxemburg_norm,
    maddox_paranorm,
    midpoint_strictness,
    modular,
    modular_convergence_harness,
    paranorm_h,
    paranorm_h_tilde,
)
from .sources import generator, load_matrix
from .triangle import (
    difference_apply,
    forward_transform,
    inverse_coeffs,
    inverse_coeffs_det,
    inverse_transform,
    materialize_operator,
    means_matrix_entry,
)

__version__ = "0.1.0"

__all__ = [
    "a_alpha_params",
    "abel_identity_check",
    "alpha_dual_matrix_entry",
    "AlphaOutOfRange",
    "backend",
    "beta_gamma_matrix_entry",
    "Bounds",
    "cesaro_params",
    "CONDITIONS",
    "ConditionSpec",
    "difference_apply",
    "dual_membership",
    "e_tilde_entry",
    "euler_params",
    "evaluate_condition",
    "exponent_stats",
    "ExponentSequence",
    "FiniteSequence",
    "forward_transform",
    "GeneralizedMeansParams",
    "generator",
    "IndexOutOfRange",
    "InsufficientTruncation",
    "inverse_coeffs",
    "inverse_coeffs_det",
    "inverse_transform",
    "LengthMismatch",
    "LimitEstimate",
    "load_matrix",
    "load_params",
    "load_sequence",
    "luxemburg_norm",
    "maddox_paranorm",
    "materialize_operator",
    "matrix_map_check",
    "means_matrix_entry",
    "midpoint_strictness",
    "MixedExponentBranch",
    "modular",
    "modular_convergence_harness",
    "NoBracket",
    "NonFiniteValue",
    "NonPositiveExponent",
    "NotOnSphere",
    "paranorm_h",
    "paranorm_h_tilde",
    "ParseError",
    "save_sequence",
    "SeqSpaceError",
    "Status",
    "TriangleMatrix",
    "TruncationTooLarge",
    "UnknownCondition",
    "UnsupportedMapping",
    "validate_params",
    "Verdict",
    "weighted_mean_params",
    "ZeroEntry",
    "ZeroLeading",
]
