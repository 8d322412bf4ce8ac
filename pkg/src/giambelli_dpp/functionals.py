"""Regularized characteristic-polynomial functionals and the specializations behind them.

With ``g_u(x) = 1 - u/(x + iR)`` and ``f_k(x) = (x + iR)^-k``:

* ``psi(X, u)``       exp(-int_{-T}^T log g_{u+iR} K(x,x) dmu) prod_{|x|<=T} g_{u+iR}(x)
* ``psi_tilde(X, u)`` exp(-u int_{-T}^T K(x,x)/(x+iR) dmu) prod_{|x|<=T} g_{u+iR}(x)

Everything is computed at a finite truncation T; the T -> infinity limit is
only ever probed through :func:`convergence_diagnostic`.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .kernels import IntegrableKernel, Window, discretize
from .symfun.partition import Partition
from .symfun.series import DEFAULT_ORDER

log = logging.getLogger(__name__)

BRANCH_TOL = 1e-12
DEFAULT_SCHEDULE = (50.0, 100.0, 200.0, 400.0)
VARIANTS = ("rho0", "rho", "rho_tilde", "shifted")


class BranchCutError(ValueError):
    """log g hit the principal branch cut (-inf, 0]."""


class SeriesTruncationError(ValueError):
    pass


@dataclass(frozen=True)
class RegularizationParams:
    R: float = 1.0
    T: float = 50.0
    M: int = DEFAULT_ORDER
    order: int = 200  # quadrature nodes for continuous compensators

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError("R must be positive")
        if not self.T > 0:
            raise ValueError("T must be positive")
        if self.M < 1:
            raise ValueError("series order M must be >= 1")

    def with_T(self, T: float) -> "RegularizationParams":
        return RegularizationParams(self.R, T, self.M, self.order)


def g_eval(x, u: complex, R: float):
    """1 - u / (x + iR)."""
    u = complex(u)
    if (u - 1j * R).imag == 0:
        raise ValueError("g_u needs u - iR off the real line")
    return 1.0 - u / (np.asarray(x, dtype=float) + 1j * R)


def _principal_log(g):
    g = np.asarray(g, dtype=complex)
    hit = (np.abs(g.imag) <= BRANCH_TOL * np.maximum(1.0, np.abs(g))) & (g.real <= 0)
    if np.any(hit):
        raise BranchCutError("argument of log on the branch cut (-inf, 0]")
    return np.log(g)


def f_eval(x, u: complex, R: float):
    """-log(1 - u/(x + iR)), principal branch; requires |u| < |x + iR|."""
    x = np.asarray(x, dtype=float)
    if np.any(abs(complex(u)) >= np.abs(x + 1j * R)):
        raise ValueError("f_u(x) needs |u| < |x + iR|")
    return -_principal_log(g_eval(x, u, R))


def f_powers(x, R: float, M: int) -> np.ndarray:
    """Matrix F[i, k-1] = (x_i + iR)^-k for k = 1..M."""
    y = 1.0 / (np.asarray(x, dtype=float) + 1j * R)
    return y[:, None] ** np.arange(1, M + 1)[None, :]


# -- compensators ---------------------------------------------------------------

def _window_rule(K: IntegrableKernel, T: float, order: int):
    """Nodes and dmu-weights times K(x,x) over the closed window [-T, T]."""
    x, w = discretize(K, Window(-T, T), order)
    return x, w * K.diagonal(x)


def intensity_integrals(K: IntegrableKernel | None, T: float, R: float, M: int, order: int = 200) -> np.ndarray:
    """c_k = int_{-T}^T f_k(x) K(x,x) dmu for k = 1..M (zero for no kernel)."""
    if K is None:
        return np.zeros(M, dtype=complex)
    x, wk = _window_rule(K, T, order)
    c = wk @ f_powers(x, R, M)
    if not np.all(np.isfinite(c)):
        raise FloatingPointError("non-finite compensator integral")
    return c


@dataclass(frozen=True)
class Specialization:
    """p_hat_1..p_hat_M under one of the variants rho0 / rho / rho_tilde / shifted."""

    variant: str
    values: np.ndarray
    R: float
    tail_mass: float  # bound on |p_hat_k| R^(k-M-1) for all k > M
    compensator: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    provenance: dict = field(default_factory=dict)
    shift_bound: float = 0.0  # sup |a_k| for the shifted variant

    @property
    def M(self) -> int:
        return len(self.values)

    def power(self) -> list[complex]:
        return [complex(v) for v in self.values]


def build_specialization(X, variant: str = "rho0", params: RegularizationParams | None = None,
                         K: IntegrableKernel | None = None, shift=None) -> Specialization:
    """Specialization of the points of X with |x| <= T.

    ``rho`` subtracts every c_k = int f_k K dmu, ``rho_tilde`` only c_1,
    ``shifted`` is ``rho`` minus the bounded sequence ``shift``.
    """
    params = params or RegularizationParams()
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    R, T, M = params.R, params.T, params.M
    pts = np.asarray(getattr(X, "points", X), dtype=float).ravel()
    pts = pts[np.abs(pts) <= T]
    F = f_powers(pts, R, M + 1)
    raw = F.sum(axis=0)
    # |p_hat_k| <= sum_X |x+iR|^-k + sum_W K |x+iR|^-k, and both decay at least like R^-1 per k
    mass = float(np.sum(np.abs(F[:, M])))
    comp = np.zeros(M, dtype=complex)
    if variant in ("rho", "rho_tilde", "shifted") and K is not None:
        x, wk = _window_rule(K, T, params.order)
        full = wk @ f_powers(x, R, M + 1)
        if not np.all(np.isfinite(full)):
            raise FloatingPointError("non-finite compensator integral")
        mass += float(np.sum(np.abs(wk) * np.abs(x + 1j * R) ** -(M + 1)))
        comp = full[:M] if variant != "rho_tilde" else np.concatenate([full[:1], np.zeros(M - 1)])
    values = raw[:M] - comp
    if variant == "shifted":
        if shift is None:
            raise ValueError("shifted variant needs the sequence a")
        a = np.asarray([complex(shift[k]) if k < len(shift) else 0j for k in range(M)])
        values = values - a
        abound = float(np.max(np.abs(a)))
    else:
        abound = 0.0
    prov = {"R": R, "T": T, "M": M, "kernel": K.spec() if K is not None else None}
    return Specialization(variant, values, R, mass, comp, prov, abound)


def series_tail_bound(spec: Specialization, u: complex) -> float:
    """Bound on |sum_{k>M} p_hat_k u^k / k| for |u| < R."""
    r = abs(complex(u)) / spec.R
    if r >= 1:
        return math.inf
    M = spec.M
    a = abs(complex(u))
    bound = spec.tail_mass * a ** (M + 1) / ((M + 1) * (1.0 - r))
    if spec.shift_bound:
        bound += spec.shift_bound * a ** (M + 1) / ((M + 1) * (1.0 - a)) if a < 1 else math.inf
    return bound


def s_series(spec: Specialization, u: complex, tol: float | None = None) -> tuple[complex, float]:
    """sum_{k=1}^M p_hat_k u^k / k and its tail bound."""
    u = complex(u)
    if abs(u) >= spec.R:
        raise ValueError(f"|u| = {abs(u):.4g} outside the convergence disk of radius {spec.R}")
    k = np.arange(1, spec.M + 1)
    val = complex(np.sum(spec.values * u ** k / k))
    tail = series_tail_bound(spec, u)
    if tol is not None and tail > tol:
        raise SeriesTruncationError(f"tail bound {tail:.3g} exceeds {tol:.3g} at order {spec.M}")
    return val, tail


# -- Psi -----------------------------------------------------------------------

@dataclass(frozen=True)
class CompensatedValue:
    value: complex
    T: float
    compensator: complex  # the exponent subtracted, so value = exp(log_product - compensator)
    last_increment: float
    u: complex


def _nudge(u: complex) -> complex:
    # a real step: for x = 0 and u on the imaginary axis an imaginary step stays on the cut
    du = 1e-10 * (1.0 + abs(u))
    log.warning("branch cut hit at u=%r; perturbing by %r", u, du)
    return u + du


def _log_psi(pts, u, K, R, T, order, tilde):
    v = u + 1j * R
    inside = pts[np.abs(pts) <= T]
    # the product is exponentiated back, so any branch of log will do here
    logprod = complex(np.sum(np.log(g_eval(inside, v, R)))) if inside.size else 0j
    if K is None:
        return logprod, 0j
    x, wk = _window_rule(K, T, order)
    if tilde:
        comp = u * complex(np.sum(wk / (x + 1j * R)))
    else:
        comp = complex(np.sum(_principal_log(g_eval(x, v, R)) * wk))
    return logprod, comp


def _psi(X, u, K, params, tilde) -> CompensatedValue:
    u = complex(u)
    if u.imag == 0:
        raise ValueError("Psi needs a non-real argument")
    pts = np.asarray(getattr(X, "points", X), dtype=float).ravel()
    R, T = params.R, params.T
    for _ in range(3):
        try:
            lp, comp = _log_psi(pts, u, K, R, T, params.order, tilde)
            lp2, comp2 = _log_psi(pts, u, K, R, T / 2, params.order, tilde)
            break
        except BranchCutError:
            u = _nudge(u)
    else:
        raise BranchCutError("could not leave the branch cut")
    val = cmath.exp(lp - comp)
    prev = cmath.exp(lp2 - comp2)
    return CompensatedValue(val, T, comp, abs(val - prev), u)


def compensator(u: complex, K: IntegrableKernel | None, params: RegularizationParams,
                tilde: bool = False) -> complex:
    """The exponent C(u) with Psi_T(u) = exp(-C(u)) prod_{|x|<=T} g_{u+iR}(x)."""
    u = complex(u)
    for _ in range(3):
        try:
            return _log_psi(np.zeros(0), u, K, params.R, params.T, params.order, tilde)[1]
        except BranchCutError:
            u = _nudge(u)
    raise BranchCutError("could not leave the branch cut")


def psi(X, u: complex, K: IntegrableKernel | None, params: RegularizationParams) -> CompensatedValue:
    return _psi(X, u, K, params, tilde=False)


def psi_tilde(X, u: complex, K: IntegrableKernel | None, params: RegularizationParams) -> CompensatedValue:
    return _psi(X, u, K, params, tilde=True)


def truncated_ratio(X, z: complex, w: complex, T: float = math.inf) -> complex:
    """prod_{|x|<=T} (z - x)/(w - x)."""
    pts = np.asarray(getattr(X, "points", X), dtype=float).ravel()
    pts = pts[np.abs(pts) <= T]
    return complex(np.prod((complex(z) - pts) / (complex(w) - pts)))


@dataclass
class ConvergenceReport:
    schedule: tuple[float, ...]
    grid: tuple[complex, ...]
    values: np.ndarray  # (len(grid), len(schedule))
    increments: np.ndarray  # (len(grid), len(schedule) - 1)

    @property
    def max_increments(self) -> np.ndarray:
        return self.increments.max(axis=0) if self.increments.size else np.zeros(0)

    @property
    def cauchy(self) -> bool:
        m = self.max_increments
        return bool(np.all(np.diff(m) <= 0))

    @property
    def uniformity(self) -> float:
        """Largest ratio of increments across the grid at any schedule step."""
        inc = self.increments
        if inc.size == 0:
            return 1.0
        lo = inc.min(axis=0)
        hi = inc.max(axis=0)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(lo > 0, hi / lo, np.where(hi > 0, np.inf, 1.0))
        return float(r.max())


def convergence_diagnostic(X, u, K: IntegrableKernel | None, params: RegularizationParams,
                           schedule: Sequence[float] = DEFAULT_SCHEDULE, tilde: bool = False) -> ConvergenceReport:
    """Compensated values along an increasing T-schedule at each u of a grid."""
    schedule = tuple(float(t) for t in schedule)
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("T-schedule must be increasing")
    grid = tuple(complex(v) for v in np.atleast_1d(np.asarray(u, dtype=complex)))
    vals = np.empty((len(grid), len(schedule)), dtype=complex)
    for i, uu in enumerate(grid):
        for j, T in enumerate(schedule):
            vals[i, j] = _psi(X, uu, K, params.with_T(T), tilde).value
    inc = np.abs(np.diff(vals, axis=1))
    return ConvergenceReport(schedule, grid, vals, inc)


# -- batched specializations for Monte Carlo -----------------------------------

def batch_power_sums(occ: np.ndarray, sites: np.ndarray, R: float, M: int,
                     compensator: np.ndarray | None = None) -> np.ndarray:
    """(samples x M) p_hat matrix from an occupancy matrix."""
    F = f_powers(sites, R, M)
    P = occ.astype(float) @ F
    if compensator is not None:
        P = P - np.asarray(compensator)[None, :M]
    return P


def batch_power_to_h(P: np.ndarray) -> np.ndarray:
    """Row-wise h_0..h_M from power sums via k h_k = sum_{j=1}^k p_j h_{k-j}."""
    S, M = P.shape
    H = np.zeros((S, M + 1), dtype=complex)
    H[:, 0] = 1.0
    for k in range(1, M + 1):
        H[:, k] = sum(P[:, j - 1] * H[:, k - j] for j in range(1, k + 1)) / k
    return H


def batch_schur(lam, H: np.ndarray) -> np.ndarray:
    """Row-wise Jacobi-Trudi det(h_{lam_i - i + j})."""
    lam = lam if isinstance(lam, Partition) else Partition(tuple(lam))
    n = len(lam)
    if n == 0:
        return np.ones(H.shape[0], dtype=complex)
    S, width = H.shape
    A = np.zeros((S, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            r = lam[i] - i + j
            if r >= width:
                raise ValueError(f"series order {width - 1} too small for {lam}")
            if r >= 0:
                A[:, i, j] = H[:, r]
    return np.linalg.det(A)
