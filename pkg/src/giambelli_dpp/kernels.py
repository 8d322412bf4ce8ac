"""Ground spaces and integrable correlation kernels.

A kernel in integrable form is ``K(x, y) = (A(x)B(y) - A(y)B(x)) / (x - y)``
with diagonal ``A'(x)B(x) - A(x)B'(x)``. The zoo:

=================  ==================================================
``discrete_sine``  sin(pi rho (x - y)) / (pi (x - y)) on Z
``sine``           the same with rho = 1 on R
``cd``             Christoffel-Darboux projection of rank n for a weight
``airy``           Airy kernel on R (documentation / diagnostics only)
``bessel``         hard-edge Bessel kernel on (0, inf) (same)
=================  ==================================================

Continuous kernels are taken with respect to Lebesgue measure; the CD kernel
therefore carries the factor sqrt(w(x) w(y)) of the weight density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special

from .weights import Weight

DIAG_REL = 1e-6


@dataclass(frozen=True)
class GroundSpace:
    kind: str  # "continuous" or "discrete"
    lo: float = -math.inf
    hi: float = math.inf

    @property
    def discrete(self) -> bool:
        return self.kind == "discrete"


@dataclass(frozen=True)
class Window:
    """[lo, hi] -- an integer range for discrete ground spaces."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty window [{self.lo}, {self.hi}]")

    @classmethod
    def symmetric(cls, T: float) -> "Window":
        if T <= 0:
            raise ValueError("T must be positive")
        return cls(-T, T)

    def sites(self) -> np.ndarray:
        return np.arange(math.ceil(self.lo), math.floor(self.hi) + 1, dtype=float)

    def doubled(self) -> "Window":
        c = 0.5 * (self.lo + self.hi)
        h = self.hi - self.lo
        return Window(c - h, c + h)

    @property
    def length(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class IntegrableKernel:
    name: str
    ground: GroundSpace
    A: Callable
    B: Callable
    dA: Callable
    dB: Callable
    params: dict = field(default_factory=dict)
    rigid: bool = True
    rank: int | None = None  # finite rank for projection kernels of finite rank

    @property
    def discrete(self) -> bool:
        return self.ground.discrete

    def diagonal(self, x):
        x = np.asarray(x, dtype=float)
        return self.dA(x) * self.B(x) - self.A(x) * self.dB(x)

    def __call__(self, x, y):
        return self.eval(x, y)

    def eval(self, x, y):
        """K(x, y), switching to the confluent expansion when |x - y| < delta."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        x, y = np.broadcast_arrays(x, y)
        d = x - y
        delta = DIAG_REL * (1.0 + np.abs(x))
        near = np.abs(d) < delta
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (self.A(x) * self.B(y) - self.A(y) * self.B(x)) / d
        if np.any(near):
            mid = 0.5 * (x[near] + y[near])
            out = np.array(out, dtype=float, copy=True)
            out[near] = self.diagonal(mid)
        return out[()] if out.ndim == 0 else out

    def matrix(self, xs, ys=None):
        xs = np.asarray(xs, dtype=float)
        ys = xs if ys is None else np.asarray(ys, dtype=float)
        return self.eval(xs[:, None], ys[None, :])

    def spec(self) -> dict:
        return {"kind": self.name, **self.params}


def _discrete_sine(rho: float) -> IntegrableKernel:
    if not 0 < rho < 1:
        raise ValueError("discrete sine density rho must lie in (0, 1)")
    w = math.pi * rho
    return IntegrableKernel(
        "discrete_sine", GroundSpace("discrete"),
        A=lambda x: np.sin(w * x) / math.pi, B=lambda x: np.cos(w * x),
        dA=lambda x: rho * np.cos(w * x), dB=lambda x: -w * np.sin(w * x),
        params={"rho": rho})


def _sine(rho: float = 1.0) -> IntegrableKernel:
    w = math.pi * rho
    return IntegrableKernel(
        "sine", GroundSpace("continuous"),
        A=lambda x: np.sin(w * x) / math.pi, B=lambda x: np.cos(w * x),
        dA=lambda x: rho * np.cos(w * x), dB=lambda x: -w * np.sin(w * x),
        params={"rho": rho} if rho != 1.0 else {})


def _cd(weight: str, n: int) -> IntegrableKernel:
    if n < 1:
        raise ValueError("CD kernel needs n >= 1")
    W = Weight(weight)
    _, beta = W.recurrence(n + 1)
    c = math.sqrt(math.sqrt(beta[n]))  # sqrt of b_n, split between A and B

    def parts(x):
        P, D = W.orthonormal(n + 1, x, derivative=True)
        return P[n], D[n], P[n - 1], D[n - 1], W.sqrt_density(x), W.sqrt_density_deriv(x)

    def A(x):
        pn, _, _, _, s, _ = parts(x)
        return c * pn * s

    def B(x):
        _, _, pm, _, s, _ = parts(x)
        return c * pm * s

    def dA(x):
        pn, dpn, _, _, s, ds = parts(x)
        return c * (dpn * s + pn * ds)

    def dB(x):
        _, _, pm, dpm, s, ds = parts(x)
        return c * (dpm * s + pm * ds)

    lo, hi = W.support
    return IntegrableKernel("cd", GroundSpace("continuous", lo, hi), A, B, dA, dB,
                            params={"weight": weight, "n": n}, rigid=True, rank=n)


def _airy() -> IntegrableKernel:
    def ai(x):
        return special.airy(x)[0]

    def aip(x):
        return special.airy(x)[1]

    return IntegrableKernel(
        "airy", GroundSpace("continuous"),
        A=ai, B=aip, dA=aip, dB=lambda x: np.asarray(x) * ai(x))


def _bessel(s: float) -> IntegrableKernel:
    if not s > -1:
        raise ValueError("Bessel parameter must exceed -1")

    def J(t):
        return special.jv(s, t)

    def dJ(t):
        return special.jvp(s, t)

    def A(x):
        return J(np.sqrt(x))

    def B(x):
        t = np.sqrt(x)
        return 0.5 * t * dJ(t)

    def dA(x):
        t = np.sqrt(x)
        return dJ(t) / (2 * t)

    def dB(x):
        # Bessel's equation: t J'' + J' = -(t - s^2/t) J
        t = np.sqrt(x)
        return -0.25 * (1.0 - s * s / (t * t)) * J(t)

    return IntegrableKernel("bessel", GroundSpace("continuous", 0.0, math.inf),
                            A, B, dA, dB, params={"s": s})


def make_kernel(spec) -> IntegrableKernel:
    """Build a kernel from a config dict such as ``{"kind": "discrete_sine", "rho": 0.5}``."""
    if isinstance(spec, str):
        spec = {"kind": spec}
    spec = dict(spec)
    kind = spec.pop("kind", None)
    if kind == "discrete_sine":
        return _discrete_sine(float(spec.get("rho", 0.5)))
    if kind == "sine":
        return _sine(float(spec.get("rho", 1.0)))
    if kind == "cd":
        return _cd(spec.get("weight", "gaussian"), int(spec.get("n", 1)))
    if kind == "airy":
        return _airy()
    if kind == "bessel":
        return _bessel(float(spec.get("s", 0.0)))
    raise ValueError(f"unknown kernel kind {kind!r}")


def gauss_legendre(lo: float, hi: float, order: int):
    x, w = special.roots_legendre(order)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def _clip(K: IntegrableKernel, w: Window) -> Window:
    lo = max(w.lo, K.ground.lo)
    hi = min(w.hi, K.ground.hi)
    return Window(lo, hi)


def discretize(K: IntegrableKernel, w: Window, order: int = 200):
    """Nodes and weights representing the window: sites with unit mass, or a Gauss rule."""
    if K.discrete:
        xs = w.sites()
        return xs, np.ones_like(xs)
    w = _clip(K, w)
    return gauss_legendre(w.lo, w.hi, order)


def trace_on_window(K: IntegrableKernel, w: Window, order: int = 200):
    """Expected number of points in the window: (value, error estimate)."""
    if K.discrete:
        xs = w.sites()
        return float(np.sum(K.diagonal(xs))) if xs.size else 0.0, 0.0
    if w.length == 0:
        return 0.0, 0.0
    vals = []
    for m in (order, 2 * order):
        x, wt = discretize(K, w, m)
        vals.append(float(np.dot(wt, K.diagonal(x))))
    return vals[1], abs(vals[1] - vals[0])


@dataclass
class KernelDiagnostics:
    idempotence_residual: float
    integrable_form_residual: float
    hilbert_schmidt_value: float
    hilbert_schmidt_doubled: float


def kernel_diagnostics(K: IntegrableKernel, w: Window, order: int = 200,
                       full_support: bool = False, probe=None) -> KernelDiagnostics:
    """Projection / integrable-form checks on a window.

    ``full_support=True`` with a CD kernel integrates the idempotence check
    against the weight's own Gauss rule, which is exact for polynomials.
    """
    if K.discrete:
        ts, tw = w.sites(), np.ones(len(w.sites()))
    elif full_support and K.name == "cd":
        Wt = Weight(K.params["weight"])
        ts, tw = Wt.quadrature(max(order, 2 * K.rank + 2))
        tw = tw / Wt.density(ts)
    else:
        ts, tw = discretize(K, w, order)
    if probe is None:
        inner = w if K.discrete else _clip(K, w)
        c = 0.5 * (inner.lo + inner.hi)
        if K.discrete:
            probe = np.array([c - 1.0, c, c + 1.0])
        else:
            probe = np.linspace(0.5 * (inner.lo + c), 0.5 * (inner.hi + c), 5)
    probe = np.asarray(probe, dtype=float)
    Kxt = K.matrix(probe, ts)
    KK = (Kxt * tw) @ Kxt.T
    idem = float(np.max(np.abs(KK - K.matrix(probe))))

    delta = DIAG_REL * (1.0 + np.abs(probe))
    # direct formula just outside the switch vs confluent value at the midpoint
    direct = K.eval(probe, probe + 10 * delta)
    confluent = K.diagonal(probe + 5 * delta)
    integ = float(np.max(np.abs(direct - confluent)))

    def hs(T):
        win = _clip(K, Window(-T, T)) if not K.discrete else Window(-T, T)
        x, wt = discretize(K, win, max(order, int(4 * win.length) + 50))
        return float(np.dot(wt, K.diagonal(x) / (1.0 + x * x)))

    T = max(abs(w.lo), abs(w.hi))
    return KernelDiagnostics(idem, integ, hs(T), hs(2 * T))
