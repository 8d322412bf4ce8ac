"""Exact samplers: window-restricted DPPs (spectral/HKPV) and orthogonal polynomial ensembles."""

from ._backend import BACKEND
from .core import (
    CHUNK,
    Configuration,
    GridOPE,
    IntensityComparison,
    MatrixDPP,
    SeedSpec,
    configurations,
    empirical_intensity,
    expected_pairs,
    ope_points,
    pair_counts,
    read_samples_csv,
    sample_dpp_window,
    sample_ope,
    window_dpp,
    write_samples_csv,
)

__all__ = [
    "BACKEND", "CHUNK", "Configuration", "GridOPE", "IntensityComparison", "MatrixDPP",
    "SeedSpec", "configurations", "empirical_intensity", "expected_pairs", "ope_points",
    "pair_counts", "read_samples_csv", "sample_dpp_window", "sample_ope", "window_dpp",
    "write_samples_csv",
]
