"""Verification engines for the Giambelli and ratio identities."""

from .fs import (DPPSource, OPESource, cauchy_det, coefficient_extraction, fs_confluent,
                 fs_dpp_truncated, fs_identity_report, fs_mc, fs_rhs_permutation,
                 ope_compensator, shift_invariance_check)
from .giambelli import giambelli_mc, giambelli_ope_exact, schur_moment_det, schur_quadrature
from .moments import (MomentMatrix, andreief_check, m_N, moment_independence, ope_quadrature,
                      ope_ratio_moment, ope_ratio_quadrature)
from .report import REPORT_KEYS, VerificationReport, validate_report_dict
from .stats import DeltaEstimate, delta_det
from .symbolic import (generalized_giambelli_check, giambelli_check, hook_series_check,
                       schur_routes_check)

__all__ = [
    "DPPSource", "OPESource", "cauchy_det", "coefficient_extraction", "fs_confluent",
    "fs_dpp_truncated", "fs_identity_report", "fs_mc", "fs_rhs_permutation", "ope_compensator",
    "shift_invariance_check", "giambelli_mc", "giambelli_ope_exact", "schur_moment_det",
    "schur_quadrature", "MomentMatrix", "andreief_check", "m_N", "moment_independence",
    "ope_quadrature", "ope_ratio_moment", "ope_ratio_quadrature", "REPORT_KEYS",
    "VerificationReport", "validate_report_dict", "DeltaEstimate", "delta_det",
    "generalized_giambelli_check", "giambelli_check", "hook_series_check", "schur_routes_check",
]
