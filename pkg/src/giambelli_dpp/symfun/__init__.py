"""Exact symmetric-function algebra: partitions, Schur routes, Giambelli."""

from .partition import (FrobeniusCoords, Partition, from_frobenius, hook, partitions_of,
                        partitions_up_to, to_frobenius, transpose)
from .scalar import GaussianRational, det
from .schur import (METHODS, ConfluentInputError, IndeterminateTable, InsufficientPrefixError,
                    bialternant, generalized_schur, giambelli_det, hook_series_coeffs,
                    jacobi_trudi_e, jacobi_trudi_h, monomial_expansion, schur_eval, tableaux)
from .series import DEFAULT_ORDER, TruncatedSeries, power_sums, power_to_eh

__all__ = [
    "FrobeniusCoords", "Partition", "from_frobenius", "hook", "partitions_of", "partitions_up_to",
    "to_frobenius", "transpose", "GaussianRational", "det", "METHODS", "ConfluentInputError",
    "IndeterminateTable", "InsufficientPrefixError", "bialternant", "generalized_schur",
    "giambelli_det", "hook_series_coeffs", "jacobi_trudi_e", "jacobi_trudi_h",
    "monomial_expansion", "schur_eval", "tableaux", "DEFAULT_ORDER", "TruncatedSeries",
    "power_sums", "power_to_eh",
]
