"""Fredholm determinants det(I + chi_B K (g - 1)) on bounded windows.

These are exact expectations of multiplicative functionals prod_{x in X} g(x)
and serve as the deterministic oracle for the Monte Carlo routes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import linalg

from .kernels import IntegrableKernel, Window, discretize

DEFAULT_ORDER = 200


@dataclass(frozen=True)
class MultiplicativeSymbol:
    """g on E with g - 1 supported in ``window``."""

    g: Callable
    window: Window

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self.window.lo) & (x <= self.window.hi)
        return np.where(inside, np.asarray(self.g(x), dtype=complex), 1.0 + 0j)


@dataclass(frozen=True)
class FredholmResult:
    value: complex
    error: float
    order: int | None


def lu_det(M: np.ndarray) -> complex:
    """Determinant from a partial-pivoting LU factorization."""
    if M.size == 0:
        return 1.0 + 0j
    lu, piv = linalg.lu_factor(M, check_finite=True)
    sign = -1.0 if np.count_nonzero(piv != np.arange(len(piv))) % 2 else 1.0
    val = sign * np.prod(np.diag(lu))
    if not np.isfinite(val):
        raise FloatingPointError("Fredholm determinant overflowed or is NaN")
    return complex(val)


def _matrix(K: IntegrableKernel, sym: MultiplicativeSymbol, order: int, window: Window):
    x, w = discretize(K, window, order)
    gm1 = sym(x) - 1.0
    if K.discrete:
        return np.eye(len(x)) + K.matrix(x) * gm1[None, :]
    s = np.sqrt(w)
    return np.eye(len(x)) + (s[:, None] * K.matrix(x) * s[None, :]) * gm1[None, :]


def fredholm_det(K: IntegrableKernel, sym: MultiplicativeSymbol, order: int = DEFAULT_ORDER,
                 window: Window | None = None) -> FredholmResult:
    """Finite determinant (discrete) or symmetrized Nystrom rule (continuous).

    ``window`` may enlarge the integration region beyond the symbol's support;
    the value does not depend on it. For continuous kernels the returned value
    uses ``2 * order`` nodes and the error is the change from ``order`` nodes.
    """
    window = window or sym.window
    if K.discrete:
        return FredholmResult(lu_det(_matrix(K, sym, 0, window)), 0.0, None)
    lo = nystrom_det(K, sym, order, window)
    hi = nystrom_det(K, sym, 2 * order, window)
    return FredholmResult(hi, abs(hi - lo), 2 * order)


def nystrom_det(K: IntegrableKernel, sym: MultiplicativeSymbol, order: int,
                window: Window | None = None) -> complex:
    """The determinant at one fixed quadrature order (exact for discrete kernels)."""
    return lu_det(_matrix(K, sym, order, window or sym.window))


def _check_nonreal(values: Sequence[complex], what: str):
    for v in values:
        if complex(v).imag == 0:
            raise ValueError(f"{what} must be non-real, got {v}")


def ratio_symbol(zs: Sequence[complex], ws: Sequence[complex], window: Window) -> MultiplicativeSymbol:
    """g(x) = prod_i (z_i - x) / (w_i - x) inside the window."""
    zs = [complex(z) for z in zs]
    ws = [complex(w) for w in ws]

    def g(x):
        out = np.ones(np.shape(x), dtype=complex)
        for z in zs:
            out = out * (z - x)
        for w in ws:
            out = out / (w - x)
        return out

    return MultiplicativeSymbol(g, window)


def expect_ratio(K: IntegrableKernel, zs, ws, window: Window,
                 order: int = DEFAULT_ORDER) -> FredholmResult:
    """E[prod_{x in X, x in window} prod_i (z_i - x)/(w_i - x)]."""
    _check_nonreal(zs, "z")
    _check_nonreal(ws, "w")
    return fredholm_det(K, ratio_symbol(zs, ws, window), order)


def subset_expansion(K: IntegrableKernel, sym: MultiplicativeSymbol, max_sites: int = 12) -> complex:
    """sum over subsets S of the window of prod_{x in S}(g(x) - 1) det K|_S."""
    if not K.discrete:
        raise ValueError("subset expansion is only defined for discrete windows")
    x = sym.window.sites()
    if len(x) > max_sites:
        raise ValueError(f"window has {len(x)} sites, brute force capped at {max_sites}")
    Km = K.matrix(x)
    gm1 = sym(x) - 1.0
    total = 0j
    for r in range(len(x) + 1):
        for S in itertools.combinations(range(len(x)), r):
            idx = list(S)
            total += np.prod(gm1[idx]) * (np.linalg.det(Km[np.ix_(idx, idx)]) if idx else 1.0)
    return complex(total)
