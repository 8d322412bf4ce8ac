"""Reference weights: exact moments, complex-shift moments, recurrences, quadrature.

Two weights are fully supported, both probability measures:

* ``gaussian`` -- the standard normal density on the real line;
* ``uniform``  -- Lebesgue measure on [0, 1].

Complex-shift moments ``A_n(a) = int (x + a)^n d omega`` are available for every
integer ``n`` (negative ones need ``Im a != 0``) in mpmath precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from scipy import special

from .symfun.scalar import GaussianRational

MP_DPS = 40


def _as_mpc(a):
    if isinstance(a, GaussianRational):
        return mpmath.mpc(mpmath.mpf(a.re.numerator) / a.re.denominator,
                          mpmath.mpf(a.im.numerator) / a.im.denominator)
    if isinstance(a, Fraction):
        return mpmath.mpc(mpmath.mpf(a.numerator) / a.denominator)
    return mpmath.mpc(a)


@dataclass(frozen=True)
class Weight:
    name: str

    def __post_init__(self):
        if self.name not in WEIGHTS:
            raise ValueError(f"unsupported weight {self.name!r}; choose from {sorted(WEIGHTS)}")

    @property
    def support(self) -> tuple[float, float]:
        return (-math.inf, math.inf) if self.name == "gaussian" else (0.0, 1.0)

    def density(self, x):
        x = np.asarray(x, dtype=float)
        if self.name == "gaussian":
            return np.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)
        return np.where((x >= 0) & (x <= 1), 1.0, 0.0)

    def sqrt_density(self, x):
        return np.sqrt(self.density(x))

    def sqrt_density_deriv(self, x):
        x = np.asarray(x, dtype=float)
        if self.name == "gaussian":
            return -0.5 * x * self.sqrt_density(x)
        return np.zeros_like(x)

    # -- exact moments -------------------------------------------------
    def moment(self, n: int) -> Fraction:
        """int x^n d omega as an exact rational."""
        if n < 0:
            raise ValueError("exact moments only for n >= 0")
        if self.name == "gaussian":
            if n % 2:
                return Fraction(0)
            return Fraction(math.prod(range(n - 1, 0, -2)) if n else 1)
        return Fraction(1, n + 1)

    def shifted_moment_exact(self, n: int, a):
        """int (x + a)^n d omega for n >= 0 and exact (Gaussian-)rational a."""
        a = a if isinstance(a, GaussianRational) else GaussianRational(a)
        total = GaussianRational(0)
        for k in range(n + 1):
            mk = self.moment(k)
            if mk:
                total = total + math.comb(n, k) * mk * a ** (n - k)
        return total

    # -- mpmath moments for every integer order -------------------------
    def shifted_moment(self, n: int, a) -> mpmath.mpc:
        return _shifted_moment_cached(self.name, n, _key(a))

    def shifted_moments(self, lo: int, hi: int, a) -> dict[int, mpmath.mpc]:
        return {n: self.shifted_moment(n, a) for n in range(lo, hi + 1)}

    def cauchy_moment(self, k: int, w) -> mpmath.mpc:
        """int x^k / (w - x) d omega for non-real w."""
        w = _as_mpc(w)
        with mpmath.workdps(MP_DPS):
            total = mpmath.mpc(0)
            for j in range(k + 1):
                # x^k = sum_j C(k,j) (x - w)^j w^(k-j)
                total -= math.comb(k, j) * w ** (k - j) * self.shifted_moment(j - 1, -w)
            return total

    # -- recurrence and quadrature -------------------------------------
    def recurrence(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """alpha_0..alpha_{n-1}, beta_0..beta_{n-1} of the monic three-term recurrence."""
        k = np.arange(n, dtype=float)
        if self.name == "gaussian":
            alpha = np.zeros(n)
            beta = k.copy()
        else:
            alpha = np.full(n, 0.5)
            with np.errstate(divide="ignore", invalid="ignore"):
                beta = np.where(k > 0, k * k / (4.0 * (4.0 * k * k - 1.0)), 0.0)
        beta[0] = 1.0  # total mass
        return alpha, beta

    def quadrature(self, order: int) -> tuple[np.ndarray, np.ndarray]:
        """Gauss rule for d omega (weights sum to 1)."""
        if self.name == "gaussian":
            x, w = special.roots_hermitenorm(order)
            return x, w / math.sqrt(2 * math.pi)
        x, w = special.roots_legendre(order)
        return 0.5 * (x + 1.0), 0.5 * w

    def orthonormal(self, n: int, x, derivative: bool = False):
        """p_0..p_{n-1} (rows) orthonormal in L^2(omega), optionally with derivatives."""
        x = np.asarray(x, dtype=float)
        alpha, beta = self.recurrence(n + 1)
        b = np.sqrt(beta)
        P = np.zeros((n,) + x.shape)
        D = np.zeros((n,) + x.shape)
        if n == 0:
            return (P, D) if derivative else P
        P[0] = 1.0 / b[0]
        for k in range(n - 1):
            prev = P[k - 1] if k > 0 else 0.0
            prevd = D[k - 1] if k > 0 else 0.0
            bk = b[k] if k > 0 else 0.0
            P[k + 1] = ((x - alpha[k]) * P[k] - bk * prev) / b[k + 1]
            D[k + 1] = (P[k] + (x - alpha[k]) * D[k] - bk * prevd) / b[k + 1]
        return (P, D) if derivative else P


WEIGHTS = {"gaussian", "uniform"}


def _key(a):
    z = _as_mpc(a)
    return (str(z.real), str(z.imag))


@lru_cache(maxsize=4096)
def _shifted_moment_cached(name: str, n: int, akey) -> mpmath.mpc:
    with mpmath.workdps(MP_DPS):
        a = mpmath.mpc(mpmath.mpf(akey[0]), mpmath.mpf(akey[1]))
        if name == "uniform":
            if n == -1:
                if a.imag == 0 and (a.real <= 0 <= a.real + 1 or a.real <= -1 <= a.real):
                    raise ValueError("shift puts a pole on the support")
                return mpmath.log(1 + a) - mpmath.log(a)
            return ((1 + a) ** (n + 1) - a ** (n + 1)) / (n + 1)
        # gaussian
        if n >= 0:
            total = mpmath.mpc(0)
            for k in range(0, n + 1, 2):
                total += mpmath.binomial(n, k) * mpmath.mpf(math.prod(range(k - 1, 0, -2)) if k else 1) \
                    * a ** (n - k)
            return total
        if a.imag == 0:
            raise ValueError("negative Gaussian moments need a non-real shift")
        if n == -1:
            if a.imag > 0:
                return _gauss_resolvent(a)
            return mpmath.conj(_gauss_resolvent(mpmath.conj(a)))
        # (x + a)^m x integrates to m (x + a)^(m-1): A_{m+1} - a A_m = m A_{m-1}
        m = n + 1  # m <= -1
        return (a * _shifted_moment_cached(name, m, akey)
                - _shifted_moment_cached(name, m + 1, akey)) / (-m)


def _gauss_resolvent(a):
    # int phi(x) / (x + a) dx for Im a > 0, via the Faddeeva function
    z = a / mpmath.sqrt(2)
    w = mpmath.exp(-z * z) * mpmath.erfc(-1j * z)
    return -1j * mpmath.sqrt(mpmath.pi / 2) * w


def make_weight(name: str) -> Weight:
    return Weight(name)
