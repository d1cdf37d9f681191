"""Finite sections of Toeplitz, Hankel, paired and model-space operators.

Build operator matrices from trigonometric-polynomial symbols, test arbitrary
matrices for Toeplitz+Hankel, paired and theta-paired structure, and recover
their symbols.
"""
from .trigpoly import (
    TrigPoly,
    conj_bar,
    constant,
    evaluate,
    make_trigpoly,
    monomial,
    multiply,
    reflect,
    shift,
    split_plus_minus,
    sup_norm_estimate,
    zero,
)
from .operators import (
    BasisMismatchError,
    H2Window,
    L2Window,
    ModelBasis,
    OperatorMatrix,
    SymbolPair,
    dense_apply_tph,
    fast_apply_hankel,
    fast_apply_toeplitz,
    fast_apply_tph,
    hankel_matrix,
    laurent_matrix,
    paired_matrix,
    projection_minus,
    projection_plus,
    shift_matrix,
    toeplitz_matrix,
    transposed_paired_matrix,
)
from .report import ClassReport, KernelEmptyError, StructureError
from .classify import (
    decompose_tph,
    hankel_kernel_inner,
    noninjective_pipeline,
    recover_paired_symbols,
    test_hankel,
    test_paired,
    test_toeplitz,
    test_tph,
    test_transposed_paired,
)
from .modelspace import (
    BlaschkeSpec,
    ThetaPairedSpec,
    blaschke_coeffs,
    model_projection,
    recover_theta_paired_symbols,
    test_theta_paired,
    theta_paired_matrix,
    truncated_toeplitz,
)

__version__ = "0.1.0"
