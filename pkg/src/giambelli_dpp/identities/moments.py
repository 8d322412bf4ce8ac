"""Moment matrices, Andreief checks and OPE expectations of rational functionals."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
import numpy as np

from ..symfun.scalar import GaussianRational, det as exact_det
from ..weights import MP_DPS, Weight
from .report import VerificationReport


def _weight(w) -> Weight:
    return w if isinstance(w, Weight) else Weight(w)


def _exact_shift(a):
    if isinstance(a, GaussianRational):
        return a
    z = complex(a)
    return GaussianRational(Fraction(z.real).limit_denominator(10**12), Fraction(z.imag).limit_denominator(10**12))


@dataclass(frozen=True)
class MomentMatrix:
    """(int (x + a)^(i+j) d omega)_{i,j=0..N-1}."""

    weight: Weight
    N: int
    a: object

    def entries_exact(self):
        a = _exact_shift(self.a)
        A = [self.weight.shifted_moment_exact(n, a) for n in range(2 * self.N - 1)]
        return [[A[i + j] for j in range(self.N)] for i in range(self.N)]

    def entries(self):
        return [[self.weight.shifted_moment(i + j, self.a) for j in range(self.N)] for i in range(self.N)]

    def det_exact(self) -> GaussianRational:
        return exact_det(self.entries_exact())

    def det(self) -> complex:
        with mpmath.workdps(MP_DPS):
            return complex(mpmath.det(mpmath.matrix(self.entries())))

    def normalizer(self) -> Fraction:
        """C_N^-1 = N! m_N (the Vandermonde-squared mass)."""
        m = self.det_exact()
        return math.factorial(self.N) * m.re


def m_N(weight, N: int, a=0, exact: bool = True):
    M = MomentMatrix(_weight(weight), N, a)
    return M.det_exact() if exact else M.det()


def moment_independence(weight, N: int, shifts: Sequence = (0, 1, 1j, 3 - 2j), exact: bool = True,
                        tol: float = 1e-12) -> VerificationReport:
    """m_N(a) at every shift; the reported error is the largest pairwise relative deviation."""
    W = _weight(weight)
    vals = [complex(m_N(W, N, a, exact=exact)) for a in shifts]
    dev, worst = 0.0, (0, 0)
    for i, j in itertools.combinations(range(len(vals)), 2):
        d = abs(vals[i] - vals[j]) / max(abs(vals[i]), abs(vals[j]))
        if d > dev:
            dev, worst = d, (i, j)
    lhs, rhs = vals[worst[0]], vals[worst[1]]
    return VerificationReport(f"moment_independence[{W.name},N={N}]",
                              {"weight": W.name, "N": N, "shifts": list(shifts), "exact": exact},
                              lhs, rhs, tol, extras={"values": vals, "max_rel_dev": dev})


# -- quadrature over the N-point density -------------------------------------

def tensor_rule(weight, N: int, order: int):
    """Nodes (P, N) and weights (P,) of the tensor Gauss rule for d omega^N."""
    x, w = _weight(weight).quadrature(order)
    grids = np.meshgrid(*([x] * N), indexing="ij")
    wgrid = np.meshgrid(*([w] * N), indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=1)
    weights = np.prod(np.stack([g.ravel() for g in wgrid], axis=1), axis=1)
    return nodes, weights


def vandermonde_sq(nodes: np.ndarray) -> np.ndarray:
    N = nodes.shape[1]
    out = np.ones(nodes.shape[0])
    for i in range(N):
        for j in range(i + 1, N):
            out = out * (nodes[:, i] - nodes[:, j]) ** 2
    return out


def ope_quadrature(weight, N: int, fn: Callable[[np.ndarray], np.ndarray], order: int = 240):
    """E[fn(X)] under the N-point ensemble by brute-force tensor quadrature.

    The grid is swept one slice of the first coordinate at a time, so memory
    stays at order^(N-1) nodes.
    """
    if N > 3:
        raise ValueError("tensor quadrature is capped at N = 3")
    W = _weight(weight)
    x, w = W.quadrature(order)
    Z = float(MomentMatrix(W, N, 0).normalizer())
    if N == 1:
        return complex(np.sum(w * fn(x[:, None])))
    rest, rw = tensor_rule(W, N - 1, order)
    total = 0j
    for x0, w0 in zip(x, w):
        nodes = np.concatenate([np.full((len(rest), 1), x0), rest], axis=1)
        total += w0 * complex(np.sum(rw * vandermonde_sq(nodes) * fn(nodes)))
    return total / Z


def andreief_check(N: int, weight, phis: Sequence[Callable], psis: Sequence[Callable],
                   order: int = 60, tol: float = 1e-8) -> VerificationReport:
    """int det(phi_j(x_i)) det(psi_j(x_i)) d omega^N  vs  N! det(int phi_i psi_j d omega)."""
    if not (len(phis) == len(psis) == N):
        raise ValueError("need N functions in each family")
    if N > 4:
        raise ValueError("Andreief check is capped at N = 4")
    W = _weight(weight)
    nodes, wts = tensor_rule(W, N, order)
    Phi = np.stack([np.stack([np.asarray(f(nodes[:, i]), dtype=complex) for f in phis], axis=1)
                    for i in range(N)], axis=1)  # (P, i, j)
    Psi = np.stack([np.stack([np.asarray(f(nodes[:, i]), dtype=complex) for f in psis], axis=1)
                    for i in range(N)], axis=1)
    lhs = complex(np.sum(wts * np.linalg.det(Phi) * np.linalg.det(Psi)))
    x, w = W.quadrature(order)
    G = np.array([[np.sum(w * np.asarray(f(x), dtype=complex) * np.asarray(g(x), dtype=complex))
                   for g in psis] for f in phis])
    rhs = complex(math.factorial(N) * np.linalg.det(G))
    return VerificationReport(f"andreief[{W.name},N={N}]", {"weight": W.name, "N": N, "order": order},
                              lhs, rhs, tol)


# -- expectations of prod_i (z_i - x)/(w_i - x) ----------------------------------

def _residues(zs, ws):
    """g(x) = c + sum_j r_j / (w_j - x) for g = prod (z_i - x) / prod (w_j - x)."""
    if len(zs) > len(ws):
        raise ValueError("more zeros than poles: not a bounded functional")
    if len(set(complex(w) for w in ws)) != len(ws):
        raise ValueError("poles w_j must be pairwise distinct")
    c = 1 if len(zs) == len(ws) else 0
    res = []
    for j, wj in enumerate(ws):
        num = mpmath.mpc(1)
        for z in zs:
            num *= mpmath.mpc(z) - wj
        den = mpmath.mpc(1)
        for i, wi in enumerate(ws):
            if i != j:
                den *= mpmath.mpc(wi) - wj
        res.append(num / den)
    return c, res


def ope_ratio_moment(weight, N: int, zs, ws) -> complex:
    """E[prod_{x in X} prod_i (z_i - x)/(w_i - x)] by Heine's formula.

    E[prod_x g(x)] = det(int g x^(i+j) d omega) / m_N, with the entries from exact
    moments and Cauchy transforms after partial fractions in x.
    """
    W = _weight(weight)
    for w in ws:
        if complex(w).imag == 0:
            raise ValueError("poles must be non-real")
    with mpmath.workdps(MP_DPS):
        c, res = _residues([mpmath.mpc(z) for z in zs], [mpmath.mpc(w) for w in ws])
        ent = {}
        for n in range(2 * N - 1):
            v = c * mpmath.mpf(W.moment(n).numerator) / W.moment(n).denominator
            for r, w in zip(res, ws):
                v += r * W.cauchy_moment(n, w)
            ent[n] = v
        G = mpmath.matrix([[ent[i + j] for j in range(N)] for i in range(N)])
        m = MomentMatrix(W, N, 0).det_exact().re
        return complex(mpmath.det(G) / (mpmath.mpf(m.numerator) / m.denominator))


def ratio_values(points: np.ndarray, zs, ws) -> np.ndarray:
    """prod over the columns of ``points`` of prod_i (z_i - x)/(w_i - x), row-wise."""
    out = np.ones(points.shape[0], dtype=complex)
    for z in zs:
        out = out * np.prod(complex(z) - points, axis=1)
    for w in ws:
        out = out / np.prod(complex(w) - points, axis=1)
    return out


def ope_ratio_quadrature(weight, N: int, zs, ws, order: int = 240) -> complex:
    return ope_quadrature(weight, N, lambda X: ratio_values(X, zs, ws), order)
