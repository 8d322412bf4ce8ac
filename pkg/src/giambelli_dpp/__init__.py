"""Determinantal identities for characteristic-polynomial ratios of DPPs."""

__version__ = "0.1.0"
