"""Compactly supported orthogonal wavelet systems on Vilenkin-type groups.

The group is the set of two-sided digit sequences over Z^d / M Z^d for an
expanding integer matrix M, with digit-wise addition and the dilation that
shifts positions.  The package builds refinement masks with one unimodular
entry per tail column, derives the refinable function and wavelet
generators, and verifies orthonormality through exact table arithmetic:
transforms, shifts, and dilations are all index relabelings, so the only
floating-point error left is in the final complex sums.

Layers: `group` (digit algebra, characters, lattice indexing), `analysis`
(piecewise-constant functions, transforms), `construction` (masks and the
refinable function), `wavelets` (generators, Gram checks, filter bank),
`config`/`artifacts`/`cli` (driver and serialized results).
"""

from .analysis import (
    TestFunction,
    WalshPolynomial,
    dilate_function,
    effective_shape,
    fourier,
    indicator,
    inner_product,
    modulate,
    norm_sq,
    polynomial_from_coefficients,
    refine,
    scale_function,
    shift_function,
    walsh_coefficients,
    walsh_transform,
)
from .config import ConstructionConfig, load_config, parse_config_text
from .construction import (
    MaskReport,
    XiSequence,
    build_mask_from_xi,
    mask_admissible,
    mask_orthogonality_defect,
    phi_hat_closed_form,
    phi_hat_from_product,
    shift_orthonormality_defect,
    validate_xi,
)
from .errors import (
    BadLengthError,
    CoarseningRequestedError,
    ConfigError,
    CongruentDigitsError,
    InternalInconsistencyError,
    MaskNotOrthogonalError,
    MissingZeroDigitError,
    NonTerminatingProductError,
    NotExpandingError,
    NotUnitNormError,
    OrderMismatchError,
    ShapeIncompatibleError,
    SideMismatchError,
    SingularMatrixError,
    UnitDeterminantError,
    VilenkinError,
    WindowCollisionError,
    WrongDigitCountError,
    ZeroDigitUsedError,
)
from .group import (
    DUAL,
    PRIMAL,
    CosetAddress,
    GroupContext,
    GroupElement,
    add,
    build_group_context,
    char_exponent,
    char_value,
    coset_address,
    dilate,
    gamma_add_index,
    gamma_neg_index,
    gamma_of,
    negate,
    representative,
    resolve_digit_set,
    validate_dilation_pair,
    zero_element,
)
from .wavelets import (
    MaskFamily,
    WaveletSystem,
    analyze,
    build_system,
    build_wavelet_masks,
    build_wavelets,
    check_polyphase,
    desk_gram_report,
    generator_correlations,
    gram_matrix,
    mask_taps,
    parseval_telescoping,
    synthesize,
    system_element,
    unitary_complete,
)

__version__ = "0.1.0"

__all__ = [
    "DUAL",
    "PRIMAL",
    "BadLengthError",
    "CoarseningRequestedError",
    "ConfigError",
    "CongruentDigitsError",
    "ConstructionConfig",
    "CosetAddress",
    "GroupContext",
    "GroupElement",
    "InternalInconsistencyError",
    "MaskFamily",
    "MaskNotOrthogonalError",
    "MaskReport",
    "MissingZeroDigitError",
    "NonTerminatingProductError",
    "NotExpandingError",
    "NotUnitNormError",
    "OrderMismatchError",
    "ShapeIncompatibleError",
    "SideMismatchError",
    "SingularMatrixError",
    "TestFunction",
    "UnitDeterminantError",
    "VilenkinError",
    "WalshPolynomial",
    "WaveletSystem",
    "WindowCollisionError",
    "WrongDigitCountError",
    "XiSequence",
    "ZeroDigitUsedError",
    "add",
    "analyze",
    "build_group_context",
    "build_mask_from_xi",
    "build_system",
    "build_wavelet_masks",
    "build_wavelets",
    "char_exponent",
    "char_value",
    "check_polyphase",
    "coset_address",
    "desk_gram_report",
    "dilate",
    "dilate_function",
    "effective_shape",
    "fourier",
    "gamma_add_index",
    "gamma_neg_index",
    "gamma_of",
    "generator_correlations",
    "gram_matrix",
    "indicator",
    "inner_product",
    "load_config",
    "mask_admissible",
    "mask_orthogonality_defect",
    "mask_taps",
    "modulate",
    "negate",
    "norm_sq",
    "parse_config_text",
    "parseval_telescoping",
    "phi_hat_closed_form",
    "phi_hat_from_product",
    "polynomial_from_coefficients",
    "refine",
    "representative",
    "resolve_digit_set",
    "scale_function",
    "shift_function",
    "shift_orthonormality_defect",
    "synthesize",
    "system_element",
    "unitary_complete",
    "validate_dilation_pair",
    "validate_xi",
    "walsh_coefficients",
    "walsh_transform",
    "zero_element",
    "__version__",
]
