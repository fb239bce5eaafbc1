"""Multitrace formulations for -u'' + a^2 u = 0: 1D closed forms, bounded
interval with optimal Schwarz, and 2D Galerkin boundary elements."""

from ._mtf import (
    MtfError,
    BoundaryMesh,
    assemble_calderon_2d,
    assemble_operators,
    calderon_bounded,
    calderon_from_dtn,
    calderon_halfline,
    calderon_middle_3dom,
    cluster_report,
    dtn_operators,
    eig_dense,
    eig_generalized,
    equivalence_check,
    green_1d,
    jacobi_operator_2dom,
    jacobi_operator_3dom,
    block_jacobi_errors,
    kernel_2d,
    make_circle,
    make_square,
    run,
    solve_dense,
    spectrum_2d,
    theoretical_spectrum,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
