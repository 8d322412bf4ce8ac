"""The ratio identity E[prod P(z_i)/P(w_i)] = det(1/(z_i-w_j))^-1 det(E[P(z_i)/P(w_j)]/(z_i-w_j)).

Sources are finite orthogonal polynomial ensembles or window-restricted DPPs.
For DPPs the ratios are taken as Psi_T(z)/Psi_T(w) (compensated at the window's
T); the compensators are deterministic and cancel between the two sides.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ..fredholm import expect_ratio, lu_det
from ..functionals import RegularizationParams, compensator, f_powers
from ..kernels import IntegrableKernel, Window
from ..sampling import SeedSpec, ope_points, window_dpp
from ..symfun.partition import hook
from ..weights import Weight
from .giambelli import schur_moment_det
from .moments import MomentMatrix, ope_quadrature, ope_ratio_moment, ratio_values
from .report import VerificationReport
from .stats import delta_det

MAX_N = 6


@dataclass(frozen=True)
class OPESource:
    weight: Weight
    N: int

    def __init__(self, weight, N: int):
        object.__setattr__(self, "weight", weight if isinstance(weight, Weight) else Weight(weight))
        object.__setattr__(self, "N", int(N))
        if self.N < 1:
            raise ValueError("N must be >= 1")

    def label(self) -> str:
        return f"ope[{self.weight.name},N={self.N}]"

    def spec(self) -> dict:
        return {"kind": "ope", "weight": self.weight.name, "N": self.N}


@dataclass(frozen=True)
class DPPSource:
    kernel: IntegrableKernel
    window: Window
    R: float = 1.0
    compensated: bool = True
    order: int = 200
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def label(self) -> str:
        return f"{self.kernel.name}[{self.window.lo:g}..{self.window.hi:g}]"

    def spec(self) -> dict:
        return {"kind": "dpp", "kernel": self.kernel.spec(), "window": [self.window.lo, self.window.hi],
                "R": self.R, "compensated": self.compensated}

    @property
    def T(self) -> float:
        return max(abs(self.window.lo), abs(self.window.hi))

    def log_comp(self, u: complex) -> complex:
        """C(u) for Psi_T; zero when uncompensated."""
        if not self.compensated:
            return 0j
        key = complex(u)
        if key not in self._cache:
            params = RegularizationParams(R=self.R, T=self.T, order=self.order)
            self._cache[key] = compensator(key, self.kernel, params)
        return self._cache[key]

    def factor(self, zs, ws) -> complex:
        return cmath.exp(sum(self.log_comp(w) for w in ws) - sum(self.log_comp(z) for z in zs))


# -- validation ------------------------------------------------------------------

def _validate(zs, ws, allow_repeat_z: bool = False):
    zs = [complex(z) for z in zs]
    ws = [complex(w) for w in ws]
    if len(zs) != len(ws) or not zs:
        raise ValueError("need equally many z and w values")
    if len(zs) > MAX_N:
        raise ValueError(f"n = {len(zs)} exceeds {MAX_N}")
    for v in zs + ws:
        if v.imag == 0:
            raise ValueError(f"z and w must be non-real, got {v}")
    if len(set(ws)) != len(ws):
        raise ValueError("w values must be pairwise distinct")
    if not allow_repeat_z and len(set(zs)) != len(zs):
        raise ValueError("z values must be pairwise distinct")
    if set(zs) & set(ws):
        raise ValueError("z and w values must differ")
    return zs, ws


def cauchy_det(zs, ws) -> tuple[complex, complex]:
    """det(1/(z_i - w_j)) directly and by the product formula."""
    zs = [complex(z) for z in zs]
    ws = [complex(w) for w in ws]
    n = len(zs)
    if len(ws) != n:
        raise ValueError("need equally many z and w values")
    if len(set(zs)) != n or len(set(ws)) != n:
        raise ValueError("coincident arguments")
    if any(z == w for z in zs for w in ws):
        raise ValueError("z_i - w_j vanishes")
    C = np.array([[1.0 / (z - w) for w in ws] for z in zs])
    direct = lu_det(C)
    num = 1.0 + 0j
    for i in range(n):
        for j in range(i + 1, n):
            num *= (zs[i] - zs[j]) * (ws[j] - ws[i])
    den = 1.0 + 0j
    for z in zs:
        for w in ws:
            den *= z - w
    return direct, num / den


# -- deterministic expectations ------------------------------------------------------

def _expect(source, zs, ws, method: str, order: int | None = None) -> tuple[complex, float]:
    """E[prod_i ratio(z_i)/ratio(w_i)] and an error estimate (0 when exact up to rounding)."""
    if isinstance(source, OPESource):
        if method == "moment":
            return ope_ratio_moment(source.weight, source.N, zs, ws), 0.0
        if method == "quadrature":
            if source.N > 3:
                raise ValueError("quadrature route is only available for N <= 3")
            return ope_quadrature(source.weight, source.N, lambda X: ratio_values(X, zs, ws),
                                  order or 240), 0.0
        raise ValueError(f"method {method!r} not available for OPE sources")
    if method != "fredholm":
        raise ValueError(f"method {method!r} not available for DPP sources")
    res = expect_ratio(source.kernel, zs, ws, source.window, order or source.order)
    f = source.factor(zs, ws)
    return res.value * f, res.error * abs(f)


def _fs_sides(expect: Callable, zs, ws):
    n = len(zs)
    lhs, lerr = expect(zs, ws)
    E = np.empty((n, n), dtype=complex)
    err = lerr
    for i in range(n):
        for j in range(n):
            E[i, j], e = expect([zs[i]], [ws[j]])
            err = max(err, e)
    C = np.array([[1.0 / (z - w) for w in ws] for z in zs])
    direct, _ = cauchy_det(zs, ws)
    rhs = lu_det(E * C) / direct
    return lhs, rhs, E, err


# -- Monte Carlo ---------------------------------------------------------------------

def _log_terms(source, us, nsamples: int, seed: SeedSpec):
    """(S, len(us)) matrix of sum_{x in X} log(u - x) per sample (any branch)."""
    us = np.asarray(us, dtype=complex)
    if isinstance(source, OPESource):
        pts = ope_points(source.weight, source.N, nsamples, seed)
        return np.stack([np.sum(np.log(u - pts), axis=1) for u in us], axis=1)
    dpp = window_dpp(source.kernel, source.window, source.order)
    occ = dpp.occupancy(nsamples, seed)
    L = np.log(us[None, :] - dpp.sites[:, None])
    return occ.astype(float) @ L


def _mc_arrays(source, zs, ws, nsamples, seed):
    n = len(zs)
    us = list(zs) + list(ws)
    L = _log_terms(source, us, nsamples, seed)
    Lz, Lw = L[:, :n], L[:, n:]
    cz = np.array([source.log_comp(z) if isinstance(source, DPPSource) else 0j for z in zs])
    cw = np.array([source.log_comp(w) if isinstance(source, DPPSource) else 0j for w in ws])
    Y = np.exp(Lz.sum(1) - Lw.sum(1) - cz.sum() + cw.sum())
    M = np.exp(Lz[:, :, None] - Lw[:, None, :] - cz[None, :, None] + cw[None, None, :])
    C = np.array([[1.0 / (z - w) for w in ws] for z in zs])
    return Y, M * C[None, :, :]


def fs_mc(source, zs, ws, nsamples: int, seed: int, stream: int = 0):
    """MC estimate of both sides with delta-method errors."""
    zs, ws = _validate(zs, ws)
    Y, M = _mc_arrays(source, zs, ws, nsamples, SeedSpec(seed, stream))
    direct, _ = cauchy_det(zs, ws)
    return delta_det(Y, M, 1.0 / direct)


# -- reports -------------------------------------------------------------------------

def _params(source, zs, ws, method, **extra):
    return {"source": source.spec(), "z": list(zs), "w": list(ws), "method": method, **extra}


def fs_identity_report(source, zs, ws, method: str, tol: float = 1e-8, nsamples: int = 100_000,
                       seed: int = 0, nsd: float = 3.0, order: int | None = None,
                       stream: int = 0) -> VerificationReport:
    """LHS vs RHS of the ratio identity by one method: quadrature, moment, fredholm or mc."""
    zs, ws = _validate(zs, ws)
    name = f"fs[{source.label()},n={len(zs)},{method}]"
    if method == "mc":
        est = fs_mc(source, zs, ws, nsamples, seed, stream)
        return VerificationReport(name, _params(source, zs, ws, method, nsamples=nsamples),
                                  est.lhs, est.rhs, nsd, mode="mc", stderr=est.stderr_diff, seed=seed,
                                  extras={"stderr_lhs": est.stderr_lhs, "stderr_rhs": est.stderr_rhs})
    lhs, rhs, E, err = _fs_sides(lambda a, b: _expect(source, a, b, method, order), zs, ws)
    return VerificationReport(name, _params(source, zs, ws, method), lhs, rhs, tol,
                              extras={"entries": E, "quadrature_error": err})


def fs_rhs_permutation(source, zs, ws, perm: Sequence[int], method: str = "moment") -> tuple[complex, complex]:
    """RHS before and after permuting the z list."""
    zs, ws = _validate(zs, ws)
    ex = lambda a, b: _expect(source, a, b, method)  # noqa: E731
    r1 = _fs_sides(ex, zs, ws)[1]
    r2 = _fs_sides(ex, [zs[p] for p in perm], ws)[1]
    return r1, r2


# -- confluent case ------------------------------------------------------------------

def _repeat_index(zs):
    seen = {}
    pairs = []
    for i, z in enumerate(zs):
        if z in seen:
            pairs.append((seen[z], i))
        else:
            seen[z] = i
    if len(pairs) != 1:
        raise ValueError("exactly one repeated z is supported")
    return pairs[0]


def _confluent_parts(source, zs, ws, method):
    i0, i1 = _repeat_index(zs)
    z1 = zs[i0]
    n = len(zs)
    ex = lambda a, b: _expect(source, a, b, method)[0]  # noqa: E731
    base = np.empty((n, n), dtype=complex)
    for i in range(n):
        if i == i1:
            continue
        for j in range(n):
            base[i, j] = ex([zs[i]], [ws[j]]) / (zs[i] - ws[j])

    def D(z):
        A = base.copy()
        for j in range(n):
            A[i1, j] = ex([z], [ws[j]]) / (z - ws[j])
        return lu_det(A)

    # C(z) = (z_{i0} - z) Q(z) around the coincidence; C'(z1) = -Q(z1)
    q = 1.0 + 0j
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) != (i0, i1):
                q *= (zs[i] - zs[j]) * (ws[j] - ws[i])
            else:
                q *= ws[j] - ws[i]
    for z in zs:
        for w in ws:
            q /= z - w
    return z1, D, -q


def fs_confluent(source, zs, ws, h: float = 1e-4, method: str = "moment",
                 tol: float = 1e-6) -> VerificationReport:
    """Repeated z: LHS directly, RHS as D'(z1)/C'(z1) with Richardson-extrapolated central differences."""
    zs = [complex(z) for z in zs]
    ws = [complex(w) for w in ws]
    if len(set(ws)) != len(ws):
        raise ValueError("repeated w values are not supported")
    _validate(zs, ws, allow_repeat_z=True)
    z1, D, dC = _confluent_parts(source, zs, ws, method)
    lhs = _expect(source, zs, ws, method)[0]

    def central(step):
        return (D(z1 + step) - D(z1 - step)) / (2 * step)

    d1, d2 = central(h), central(h / 2)
    rhs = ((4 * d2 - d1) / 3) / dC
    plain_h = abs(d1 / dC - lhs)
    plain_h2 = abs(d2 / dC - lhs)
    return VerificationReport(
        f"fs_confluent[{source.label()},n={len(zs)},{method}]",
        _params(source, zs, ws, method, h=h), lhs, rhs, tol,
        extras={"plain_err_h": plain_h, "plain_err_h2": plain_h2,
                "refinement_ratio": plain_h / plain_h2 if plain_h2 > 0 else math.inf})


# -- shift invariance ------------------------------------------------------------------

def ope_compensator(weight, N: int, R: float, M: int, order: int = 400) -> np.ndarray:
    """a_k = E[rho0(p_k)] = int f_k(x) K_N(x, x) d omega, k = 1..M."""
    W = weight if isinstance(weight, Weight) else Weight(weight)
    x, w = W.quadrature(order)
    kdiag = np.sum(W.orthonormal(N, x) ** 2, axis=0)
    return (w * kdiag) @ f_powers(x, R, M)


def _shift_seq(a, M):
    if callable(a):
        return np.array([complex(a(k)) for k in range(1, M + 1)])
    a = list(a)
    return np.array([complex(a[k]) if k < len(a) else 0j for k in range(M)])


def _s_expect(source: OPESource, R, a, zs, ws, M, order):
    """E[exp(sum_i S_a(w_i) - S_a(z_i))] with the rho0-based series truncated at M.

    The integrand is exp(-a.c) prod_x h(x) with h = exp(sum_k f_k c_k), so Heine's
    formula reduces it to det(int h x^(i+j) d omega) / m_N on a 1-d rule.
    """
    k = np.arange(1, M + 1)
    ak = _shift_seq(a, M)
    c = sum((w ** k - z ** k) / k for z, w in zip(zs, ws))
    x, wt = source.weight.quadrature(order)
    h = np.exp(f_powers(x, R, M) @ c)
    N = source.N
    mom = np.array([np.sum(wt * h * x ** n) for n in range(2 * N - 1)])
    G = mom[np.add.outer(np.arange(N), np.arange(N))]
    mN = float(MomentMatrix(source.weight, N, 0).det_exact().re)
    return complex(np.exp(-ak @ c) * lu_det(G) / mN)


def shift_invariance_check(source: OPESource, a, zs, ws, R: float = 1.0, M: int = 60,
                           order: int = 400, tol: float = 1e-10, fs_tol: float = 1e-8) -> VerificationReport:
    """Ratio identity in series form under rho0 and under rho_a = rho0 - a.

    Both expectations move by exp(sum_i sum_k a_k/k (z_i^k - w_i^k)); the report's
    LHS is the measured ratio LHS_a/LHS and its RHS the predicted factor.
    """
    if not isinstance(source, OPESource):
        raise ValueError("shift invariance is checked on OPE sources")
    zs, ws = _validate(zs, ws)
    for v in zs + ws:
        if abs(v) >= min(R, 1.0):
            raise ValueError("z, w must lie in the disk of radius min(R, 1)")
    zero = np.zeros(M)

    def sides(seq):
        return _fs_sides(lambda A, B: (_s_expect(source, R, seq, A, B, M, order), 0.0), zs, ws)[:2]

    lhs0, rhs0 = sides(zero)
    lhsa, rhsa = sides(a)
    big = 400
    ak = _shift_seq(a, big)
    k = np.arange(1, big + 1)
    factor = cmath.exp(sum(complex(np.sum(ak / k * (z ** k - w ** k))) for z, w in zip(zs, ws)))
    pass0 = abs(lhs0 - rhs0) <= fs_tol * max(abs(lhs0), abs(rhs0))
    passa = abs(lhsa - rhsa) <= fs_tol * max(abs(lhsa), abs(rhsa))
    r_rhs = rhsa / rhs0
    checks = {"same_pass_status": pass0 == passa,
              "rhs_ratio": abs(r_rhs - factor) <= tol * abs(factor)}
    return VerificationReport(
        f"shift_invariance[{source.label()},n={len(zs)}]",
        _params(source, zs, ws, "heine", R=R, M=M, a=list(_shift_seq(a, 6))),
        lhsa / lhs0, factor, tol,
        extras={"lhs": lhs0, "rhs": rhs0, "lhs_a": lhsa, "rhs_a": rhsa, "rhs_ratio": r_rhs,
                "fs_pass": pass0, "fs_pass_a": passa},
        checks=checks)


# -- coefficient extraction -------------------------------------------------------------

def _two_point(source: OPESource, R: float, wv: np.ndarray, zv: np.ndarray) -> np.ndarray:
    """F(w, z) = E[exp(S(w) - S(z))] under rho0 on the grid wv x zv."""
    W, N = source.weight, source.N
    mu = np.array([float(W.moment(n)) for n in range(2 * N - 1)])
    wp = wv - 1j * R
    zp = zv - 1j * R
    cm = np.array([[complex(W.cauchy_moment(n, w)) for n in range(2 * N - 1)] for w in wp])
    idx = np.add.outer(np.arange(N), np.arange(N))
    # entries mu_{i+j} + (z' - w') C_{i+j}(w') for g(x) = 1 + (z' - w')/(w' - x)
    G = mu[idx][None, None] + (zp[None, :] - wp[:, None])[:, :, None, None] * cm[:, None][:, :, idx]
    mN = float(MomentMatrix(W, N, 0).det_exact().re)
    return np.linalg.det(G) / mN


def coefficient_extraction(source: OPESource, R: float, p: int, q: int, radius: float = 0.5,
                           points: int = 64, tol: float = 1e-6, sweep: float | None = 0.25) -> VerificationReport:
    """E[rho0(s_(p|q))] as a Cauchy coefficient of (F(w, z) - 1)/(w - z), vs the moment determinant."""
    if p + q > 6:
        raise ValueError("p + q must be <= 6")

    def extract(frac):
        if not 0 < frac < 1:
            raise ValueError("contour radius must be below R")
        r = frac * R
        th = 2 * np.pi * np.arange(points) / points
        wv = r * np.exp(1j * th)
        zv = r * np.exp(1j * (th + np.pi / points))
        F = _two_point(source, R, wv, zv)
        G = (F - 1.0) / (wv[:, None] - zv[None, :])
        c = np.sum(G * wv[:, None] ** (-p) * zv[None, :] ** (-q)) / points ** 2
        return complex((-1) ** q * c)

    lhs = extract(radius)
    rhs = schur_moment_det(source.weight, source.N, R, hook(p, q))
    extras, checks = {}, {}
    if sweep is not None:
        other = extract(sweep)
        extras["sweep_value"] = other
        extras["sweep_radius"] = sweep * R
        checks["radius_sweep"] = abs(other - lhs) <= tol * max(abs(lhs), 1e-300)
    return VerificationReport(
        f"coefficient[{source.label()},R={R:g},({p}|{q})]",
        {"source": source.spec(), "R": R, "p": p, "q": q, "radius": radius * R, "points": points},
        lhs, rhs, tol, extras=extras, checks=checks)


# -- truncated infinite volume -----------------------------------------------------------

def fs_dpp_truncated(kernel: IntegrableKernel, window: Window, zs, ws, nsamples: int = 100_000,
                     seed: int = 0, tol: float = 1e-8, nsd: float = 3.0, R: float = 1.0,
                     order: int = 200) -> list[VerificationReport]:
    """Ratio identity for a window-restricted DPP by the Fredholm and MC routes.

    Returns the Fredholm LHS vs RHS report, MC-vs-Fredholm reports for each side,
    and window-doubling reports comparing MC estimates on the window and its double.
    """
    zs, ws = _validate(zs, ws)
    src = DPPSource(kernel, window, R=R, order=order)
    big = DPPSource(kernel, window.doubled(), R=R, order=order)
    fred = fs_identity_report(src, zs, ws, "fredholm", tol=tol)
    est = fs_mc(src, zs, ws, nsamples, seed, 0)
    est2 = fs_mc(big, zs, ws, nsamples, seed, 1)
    base = _params(src, zs, ws, "mc", nsamples=nsamples)
    tag = f"{src.label()},n={len(zs)}"
    out = [fred]
    for side, mc, se, ref in (("lhs", est.lhs, est.stderr_lhs, fred.lhs),
                              ("rhs", est.rhs, est.stderr_rhs, fred.rhs)):
        out.append(VerificationReport(f"fs_mc_vs_fredholm[{tag},{side}]", base, mc, ref, nsd,
                                      mode="mc", stderr=se, seed=seed))
    for side, a, b, sa, sb in (("lhs", est.lhs, est2.lhs, est.stderr_lhs, est2.stderr_lhs),
                               ("rhs", est.rhs, est2.rhs, est.stderr_rhs, est2.stderr_rhs)):
        out.append(VerificationReport(
            f"fs_window_doubling[{tag},{side}]",
            {**base, "doubled_window": [big.window.lo, big.window.hi]},
            a, b, nsd, mode="mc", stderr=math.hypot(sa, sb), seed=seed,
            extras={"stderr": sa, "stderr_doubled": sb}))
    return out
