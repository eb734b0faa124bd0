"""Dilation, approximate Paulis, swap isometry and the certificate operator."""

from .appendix_b import AppendixBReport, appendix_b_audit
from .dilation import DilatedStrategy, d_alice, d_bob, d_cross, dilate
from .isometry import (
    FidelityResult,
    IsometryEvaluator,
    IsometryValue,
    epr_fidelity,
    swap_isometry_expectation,
)
from .magic_operator import (
    implication_audit,
    magic_matrix,
    magic_operator,
    spectral_report,
    spectral_report_product,
)
from .pauli import PauliFrame, PauliWord, pauli_frame, word_to_observable
from .relations import RelationRow, consistency_residuals, relation_residuals
from .report import RigidityReport, analyze

__all__ = [
    "AppendixBReport",
    "DilatedStrategy",
    "FidelityResult",
    "IsometryEvaluator",
    "IsometryValue",
    "PauliFrame",
    "PauliWord",
    "RelationRow",
    "RigidityReport",
    "analyze",
    "appendix_b_audit",
    "consistency_residuals",
    "d_alice",
    "d_bob",
    "d_cross",
    "dilate",
    "epr_fidelity",
    "implication_audit",
    "magic_matrix",
    "magic_operator",
    "pauli_frame",
    "relation_residuals",
    "spectral_report",
    "spectral_report_product",
    "swap_isometry_expectation",
    "word_to_observable",
]
