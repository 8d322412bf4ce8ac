"""Truncated power series and the h/e/p generating-series relations."""

from __future__ import annotations

from fractions import Fraction

DEFAULT_ORDER = 12


def _zero_like(v):
    return v * 0


def _any_zero(v) -> bool:
    # array-valued coefficients (one entry per sample) are allowed
    eq = v == 0
    return bool(eq.any()) if hasattr(eq, "any") else bool(eq)


def _all_zero(v) -> bool:
    eq = v == 0
    return bool(eq.all()) if hasattr(eq, "all") else bool(eq)


class TruncatedSeries:
    """Coefficients ``c_0 .. c_M`` of a power series, truncated at order ``M``."""

    def __init__(self, coeffs, order: int | None = None):
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("order must be >= 0")
        zero = _zero_like(coeffs[0]) if coeffs else 0
        coeffs = coeffs[: order + 1]
        coeffs += [zero] * (order + 1 - len(coeffs))
        self.coeffs = coeffs
        self.order = order

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __len__(self):
        return self.order + 1

    def __repr__(self):
        return f"TruncatedSeries({self.coeffs!r})"

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def _check(self, other):
        if self.order != other.order:
            raise ValueError("series truncated at different orders")

    def __add__(self, other):
        self._check(other)
        return TruncatedSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __sub__(self, other):
        self._check(other)
        return TruncatedSeries([a - b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries([c * other for c in self.coeffs], self.order)
        self._check(other)
        M = self.order
        out = []
        for n in range(M + 1):
            acc = self.coeffs[0] * other.coeffs[n]
            for k in range(1, n + 1):
                acc = acc + self.coeffs[k] * other.coeffs[n - k]
            out.append(acc)
        return TruncatedSeries(out, M)

    __rmul__ = __mul__

    def reflect(self) -> "TruncatedSeries":
        """F(u) -> F(-u)."""
        return TruncatedSeries([c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)],
                               self.order)

    def inverse(self) -> "TruncatedSeries":
        c0 = self.coeffs[0]
        if _any_zero(c0):
            raise ZeroDivisionError("series with zero constant term has no inverse")
        M = self.order
        inv = [1 / c0 if not isinstance(c0, int) else Fraction(1, c0)]
        for n in range(1, M + 1):
            acc = self.coeffs[1] * inv[n - 1]
            for k in range(2, n + 1):
                acc = acc + self.coeffs[k] * inv[n - k]
            inv.append(-acc * inv[0])
        return TruncatedSeries(inv, M)

    def exp(self) -> "TruncatedSeries":
        """exp of a series with zero constant term, via n f_n = sum_k k g_k f_{n-k}."""
        if not _all_zero(self.coeffs[0]):
            raise ValueError("exp is only taken of series without constant term")
        M = self.order
        g = self.coeffs
        one = _zero_like(g[0]) + 1
        f = [one]
        for n in range(1, M + 1):
            acc = _zero_like(g[0])
            for k in range(1, n + 1):
                acc = acc + k * g[k] * f[n - k]
            f.append(acc / n if not isinstance(acc, int) else Fraction(acc, n))
        return TruncatedSeries(f, M)


def power_to_eh(p, order: int | None = None):
    """Map power sums ``p_1 .. p_M`` to ``(h_0..h_M, e_0..e_M)``.

    H(u) = exp(sum_k p_k u^k / k) and E(u) = 1 / H(-u), truncated at order M.
    """
    p = list(p)
    M = len(p) if order is None else order
    zero = _zero_like(p[0]) if p else 0
    log_h = [zero]
    for k in range(1, M + 1):
        pk = p[k - 1] if k <= len(p) else zero
        log_h.append(pk / k if not isinstance(pk, int) else Fraction(pk, k))
    H = TruncatedSeries(log_h, M).exp()
    E = H.reflect().inverse()
    return H.coeffs, E.coeffs


def power_sums(xs, M: int):
    """p_1 .. p_M of a finite list of variable values."""
    return [sum((x ** k for x in xs), start=_zero_like(xs[0]) if xs else 0) for k in range(1, M + 1)]
