"""Scalars for symmetric-function evaluation.

Three carriers are used throughout: ``fractions.Fraction`` (exact real),
:class:`GaussianRational` (exact complex, a pair of fractions) and the builtin
``complex`` for floating evaluation. Algorithms in this package only rely on
``+ - * /`` and equality, so any of the three can be fed in.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


class GaussianRational:
    """Exact complex number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Rational)):
            return GaussianRational(other, 0)
        if isinstance(other, complex) and other.real.is_integer() and other.imag.is_integer():
            return GaussianRational(int(other.real), int(other.imag))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        num = self * o.conjugate()
        return GaussianRational(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return GaussianRational(1) / (self ** (-k))
        out = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


I = GaussianRational(0, 1)


def is_exact(value) -> bool:
    return isinstance(value, (int, Rational, GaussianRational))


def magnitude(value) -> float:
    if isinstance(value, GaussianRational):
        return abs(complex(value))
    return abs(value)


def det(matrix):
    """Determinant by Gaussian elimination over any field of scalars.

    Exact scalars pivot on the first nonzero entry, so no rounding happens;
    floating scalars use partial pivoting by magnitude.
    """
    n = len(matrix)
    if n == 0:
        return 1
    a = [list(row) for row in matrix]
    exact = all(is_exact(v) for row in a for v in row)
    sign = 1
    result = None
    for col in range(n):
        if exact:
            piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        else:
            piv = max(range(col, n), key=lambda r: magnitude(a[r][col]))
            if a[piv][col] == 0:
                piv = None
        if piv is None:
            return a[0][0] * 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        p = a[col][col]
        result = p if result is None else result * p
        for r in range(col + 1, n):
            if a[r][col] == 0:
                continue
            factor = a[r][col] / p
            row_r, row_c = a[r], a[col]
            for c in range(col + 1, n):
                row_r[c] = row_r[c] - factor * row_c[c]
    return result if sign > 0 else -result
