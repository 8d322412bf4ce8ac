"""Monte Carlo means and delta-method errors for determinant-of-means estimators."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def pairwise_mean(x: np.ndarray, axis: int = 0):
    # numpy's add.reduce already sums pairwise in a fixed order
    return np.add.reduce(x, axis=axis) / x.shape[axis]


@dataclass(frozen=True)
class DeltaEstimate:
    lhs: complex
    rhs: complex
    stderr_diff: float
    stderr_lhs: float
    stderr_rhs: float
    nsamples: int


def delta_det(Y: np.ndarray, M: np.ndarray, scale: complex = 1.0) -> DeltaEstimate:
    """Compare mean(Y) with scale * det(mean(M)).

    ``Y`` has shape (S,), ``M`` shape (S, n, n). The determinant is linearized at
    the sample mean with its cofactor matrix, so the difference is the mean of
    L_s = Y_s - scale * sum_ij C_ij M_s,ij up to a constant; the error of that
    mean accounts for the correlation of all entries across one sample set.
    """
    Y = np.asarray(Y, dtype=complex)
    M = np.asarray(M, dtype=complex)
    S = Y.shape[0]
    if S < 2:
        raise ValueError("delta method needs at least two samples")
    Ybar = pairwise_mean(Y)
    n = M.shape[1]
    # entrywise 1-d means sum in the same order as Ybar, so equal statistics give equal means
    Mbar = np.array([[pairwise_mean(np.ascontiguousarray(M[:, i, j])) for j in range(n)] for i in range(n)])
    if n == 1:
        D = Mbar[0, 0]
        cof = np.ones((1, 1), dtype=complex)
    else:
        D = np.linalg.det(Mbar)
        # cofactors without inverting (fine when det is small)
        cof = np.empty((n, n), dtype=complex)
        for i in range(n):
            for j in range(n):
                minor = np.delete(np.delete(Mbar, i, axis=0), j, axis=1)
                cof[i, j] = (-1) ** (i + j) * np.linalg.det(minor)
    lin_rhs = scale * np.einsum("ij,sij->s", cof, M)
    L = Y - lin_rhs

    def se(v):
        c = v - pairwise_mean(v)
        return math.sqrt(float(pairwise_mean(np.abs(c) ** 2)) / S)

    return DeltaEstimate(complex(Ybar), complex(scale * D), se(L), se(Y), se(lin_rhs), S)
