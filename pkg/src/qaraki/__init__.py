"""Dual and conjugate systems for q-Gaussian algebras with a quasi-free state.

Exact (Gaussian-rational) and float64 verification of the q-Fock space
machinery: Gram matrices, Wick generators, dual variables, conjugate
variables, norm estimates, modular data and the factor-type classifier.
"""
from .arith import EXACT, FLOAT, GaussianRational
from .bounds import BoundReport, check_bounds
from .classify import TypeLabel, classify_deformation, classify_type
from .deformation import Block, Deformation, build_deformation, eigenpairs
from .dualvars import (
    ConjugateFamily,
    DualSystem,
    base_change,
    build_conjugate_family,
    build_dual_system,
    commutator_residual,
    conjugate_adjoint,
    conjugate_pairing_check,
    conjugate_series,
    dual_apply_partition,
    dual_apply_recursive,
)
from .fock import FockSpace, FockVector, build_fock, q_inner, q_norm
from .modular import ModularData, build_modular, eigenoperator_check, kms_check
from .partitions import crossings, enumerate_B
from .wick import OperatorMatrix, annihilation, creation, generator, gram_adjoint, moment, moment_pairings

__version__ = "0.1.0"
