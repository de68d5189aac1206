"""Cellular-automaton evolution operators on a path, their determinant zeta
functions, canonical absolute-automorphic forms, and the associated absolute
zeta functions expressed through multiple gamma functions."""

from .errors import (
    BranchError,
    CapabilityError,
    ConvergenceError,
    ExactnessError,
    PoleError,
)
from .qca import (
    GlobalOperator,
    LocalOperator,
    OperatorClass,
    assemble_global,
    basis_state,
    classify,
    config_index,
    evolve,
    format_config,
    index_config,
    local_from_blocks,
    local_qca1,
    local_qca2,
    local_stochastic,
    local_tensor,
    matrix_from_json,
    matrix_to_json,
    measure_probabilities,
    parse_config,
    transition_weight,
)
from .spectral import (
    NOT_ROOTS_OF_UNITY,
    MultiplicityPrediction,
    Spectrum,
    chebyshev_t,
    exact_char_poly,
    exact_spectrum,
    numeric_spectrum,
    predicted_multiplicities,
    roots_of_unity_profile,
)
from .zetaform import (
    NOT_ABSOLUTE_FORM,
    AutomorphyCertificate,
    CanonicalAbsForm,
    ReciprocityReport,
    SpectralZeta,
    automorphy,
    canonical_form,
    form_from_json,
    general_reciprocity_check,
    spectral_zeta,
    tensor_case_form,
    verify_orthogonal_reciprocity,
    zeta_eval,
)
from .abszeta import (
    AbsExpansion,
    EvalResult,
    SubsetTerm,
    abs_hurwitz_mellin,
    abs_zeta_eval,
    functional_eq_residual,
    functional_eq_window,
    multi_gamma,
    multi_hurwitz_continued,
    multi_hurwitz_series,
    multi_sine,
    subset_expansion,
    subset_sum_hurwitz,
    tensor_absolute_report,
)

__version__ = "0.1.0"

SCHEMA_VERSION = 1
