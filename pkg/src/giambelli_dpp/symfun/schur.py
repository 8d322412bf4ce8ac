"""Schur functions by four independent routes, Giambelli determinants and
the hook generating series.

Routes for ``s_lambda``:

* ``jacobi_trudi_h`` -- det(h_{lambda_i - i + j}) from complete homogeneous values;
* ``jacobi_trudi_e`` -- det(e_{lambda'_i - i + j}) from elementary values;
* ``bialternant``   -- ratio of alternants in finitely many variables;
* ``tableaux``      -- sum over semistandard tableaux (the brute-force oracle).
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from typing import Callable, Mapping

from .partition import FrobeniusCoords, Partition, hook
from .scalar import det, is_exact, magnitude
from .series import power_sums, power_to_eh

METHODS = ("jacobi_trudi_h", "jacobi_trudi_e", "bialternant", "tableaux")

# relative gap below which float bialternants switch to divided differences
CONFLUENT_GAP = 1e-6


class ConfluentInputError(ValueError):
    """Repeated variables make the exact bialternant 0/0."""


class InsufficientPrefixError(ValueError):
    pass


def _as_partition(lam) -> Partition:
    if isinstance(lam, Partition):
        return lam
    if isinstance(lam, FrobeniusCoords):
        return lam.to_partition()
    return Partition(tuple(lam))


def _lookup(seq, k):
    if k < 0:
        return seq[0] * 0
    if k >= len(seq):
        raise InsufficientPrefixError(f"need index {k}, have {len(seq)} values")
    return seq[k]


def jacobi_trudi_h(lam, h) -> object:
    lam = _as_partition(lam)
    n = len(lam)
    if n == 0:
        return h[0] * 0 + 1
    return det([[_lookup(h, lam[i] - i + j) for j in range(n)] for i in range(n)])


def jacobi_trudi_e(lam, e) -> object:
    return jacobi_trudi_h(_as_partition(lam).transpose(), e)


def _complete_prefix(xs, m):
    """h_0 .. h_m of the first i variables, for i = 1..n (rows of a table)."""
    one = xs[0] * 0 + 1
    zero = xs[0] * 0
    rows = []
    prev = [one] + [zero] * m  # no variables
    for x in xs:
        cur = [one]
        for k in range(1, m + 1):
            cur.append(prev[k] + x * cur[k - 1])
        rows.append(cur)
        prev = cur
    return rows


def _bialternant_divided(lam: Partition, xs):
    # det(f_j(x_i)) / prod_{i<j}(x_j - x_i) = det(f_j[x_1..x_i]) and the divided
    # difference of t^m over i points is h_{m-i+1} of those points
    n = len(xs)
    alpha = [lam[j] + n - 1 - j for j in range(n)]
    table = _complete_prefix(xs, max(alpha) if alpha else 0)
    zero = xs[0] * 0

    def entry(i, j):
        k = alpha[j] - i
        return table[i][k] if k >= 0 else zero

    value = det([[entry(i, j) for j in range(n)] for i in range(n)])
    return value if (n * (n - 1) // 2) % 2 == 0 else -value


def bialternant(lam, xs, divided_differences: bool | None = None):
    lam = _as_partition(lam)
    xs = list(xs)
    n = len(xs)
    if n == 0:
        return 1 if len(lam) == 0 else 0
    if len(lam) > n:
        return xs[0] * 0
    exact = all(is_exact(x) for x in xs)
    if divided_differences is None:
        divided_differences = False
        if not exact and n > 1:
            scale = max(1.0, max(magnitude(x) for x in xs))
            gap = min(magnitude(xs[i] - xs[j]) for i in range(n) for j in range(i + 1, n))
            divided_differences = gap < CONFLUENT_GAP * scale
    if divided_differences:
        return _bialternant_divided(lam, xs)
    num = det([[x ** (lam[j] + n - 1 - j) for j in range(n)] for x in xs])
    den = xs[0] * 0 + 1
    for i in range(n):
        for j in range(i + 1, n):
            den = den * (xs[i] - xs[j])
    if den == 0:
        raise ConfluentInputError("repeated variables in exact bialternant; "
                                  "request divided_differences=True")
    return num / den


def _ssyt_contents(shape: tuple[int, ...], n: int):
    """Yield the content vector of every semistandard tableau of ``shape`` with entries < n."""
    cells = [(r, c) for r, length in enumerate(shape) for c in range(length)]
    filling: dict[tuple[int, int], int] = {}
    counts = [0] * n

    def place(idx):
        if idx == len(cells):
            yield tuple(counts)
            return
        r, c = cells[idx]
        lo = 0
        if c > 0:
            lo = filling[(r, c - 1)]
        if r > 0:
            lo = max(lo, filling[(r - 1, c)] + 1)
        # entries below must still fit: column strictness needs room for the rest of the column
        below = sum(1 for rr in range(r + 1, len(shape)) if shape[rr] > c)
        for v in range(lo, n - below):
            filling[(r, c)] = v
            counts[v] += 1
            yield from place(idx + 1)
            counts[v] -= 1
        filling.pop((r, c), None)

    yield from place(0)


@lru_cache(maxsize=None)
def monomial_expansion(parts: tuple[int, ...], n: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """s_lambda(x_1..x_n) as (exponent vector, multiplicity) pairs from tableaux."""
    if len(parts) > n:
        return ()
    return tuple(sorted(Counter(_ssyt_contents(parts, n)).items()))


def tableaux(lam, xs):
    lam = _as_partition(lam)
    xs = list(xs)
    n = len(xs)
    if n == 0:
        return 1 if len(lam) == 0 else 0
    total = xs[0] * 0
    for expo, mult in monomial_expansion(lam.parts, n):
        term = xs[0] * 0 + mult
        for x, a in zip(xs, expo):
            if a:
                term = term * x ** a
        total = total + term
    return total


def schur_eval(lam, *, variables=None, h=None, e=None, power=None, method="tableaux"):
    """Evaluate ``s_lambda`` under a specialization.

    Specialization data is either variable values (``variables``), or sequences
    of h-values / e-values / power sums. Variable input is converted to h, e
    when a Jacobi-Trudi route is requested.
    """
    lam = _as_partition(lam)
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    if method in ("bialternant", "tableaux"):
        if variables is None:
            raise ValueError(f"method {method} needs variable values")
        return bialternant(lam, variables) if method == "bialternant" else tableaux(lam, variables)
    if h is None or e is None:
        if power is None:
            if variables is None:
                raise ValueError("no specialization data given")
            need = lam.size + len(lam) + len(lam.transpose())
            power = power_sums(list(variables), max(need, 1))
        hh, ee = power_to_eh(power, max(lam.size + len(lam) + len(lam.transpose()), len(power)))
        h = hh if h is None else h
        e = ee if e is None else e
    if method == "jacobi_trudi_h":
        return jacobi_trudi_h(lam, h)
    return jacobi_trudi_e(lam, e)


def giambelli_det(lam, hook_value: Callable[[int, int], object]):
    """det(hook_value(p_i, q_j)) over the Frobenius coordinates of ``lam``."""
    fc = _as_partition(lam).to_frobenius()
    if fc.d == 0:
        raise ValueError("Giambelli determinant needs a nonempty partition")
    return det([[hook_value(p, q) for q in fc.q] for p in fc.p])


class IndeterminateTable:
    """Commuting indeterminates h_{r,s}: h_{0,s} = 1, h_{r,s} = 0 for r < 0.

    Other entries come from ``values``; unlisted ones are 0.
    """

    def __init__(self, values: Mapping[tuple[int, int], object] | None = None, zero=0):
        self.values = dict(values or {})
        self.zero = zero
        for (r, s) in self.values:
            if s < 0:
                raise ValueError("second index must be >= 0")
            if r <= 0:
                raise ValueError("only entries with r >= 1 are free")

    def __call__(self, r: int, s: int):
        if r < 0:
            return self.zero
        if r == 0:
            return self.zero + 1
        return self.values.get((r, s), self.zero)

    @classmethod
    def random_rational(cls, rng, rmax: int, smax: int, denom: int = 7):
        from fractions import Fraction
        vals = {(r, s): Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, denom + 1)))
                for r in range(1, rmax + 1) for s in range(smax + 1)}
        return cls(vals, zero=Fraction(0))


def generalized_schur(table: Callable[[int, int], object], lam, N: int | None = None):
    """det(h_{lambda_i - i + j, j - 1})_{i,j=1..N} for N >= l(lambda)."""
    lam = _as_partition(lam)
    if N is None:
        N = len(lam)
    if N < len(lam):
        raise ValueError(f"N={N} smaller than l(lambda)={len(lam)}")
    if N == 0:
        return table(0, 0)
    # 0-based i, j: h_{lam_i - i + j, j}
    return det([[table(lam[i] - i + j, j) for j in range(N)] for i in range(N)])


def hook_series_coeffs(M: int, *, variables=None, h=None, e=None, hook_value=None):
    """Both sides of H(u)E(v) = 1 + (u+v) sum_{p,q} s_(p|q) u^p v^q.

    Returns ``(lhs, rhs)`` as dicts keyed by ``(a, b)`` (the u^a v^b coefficient)
    over all a + b <= M. By default hook values come from tableaux enumeration
    on ``variables`` and h, e from their power sums.
    """
    if h is None or e is None:
        if variables is None:
            raise ValueError("need variables or h/e values")
        hh, ee = power_to_eh(power_sums(list(variables), M), M)
        h = hh if h is None else h
        e = ee if e is None else e
    if hook_value is None:
        if variables is None:
            raise ValueError("need variables or a hook_value callable")
        hook_value = lambda p, q: tableaux(hook(p, q), variables)  # noqa: E731
    zero = h[0] * 0
    lhs, rhs = {}, {}
    for a in range(M + 1):
        for b in range(M + 1 - a):
            lhs[(a, b)] = h[a] * e[b]
            val = zero + (1 if a == b == 0 else 0)
            if a >= 1:
                val = val + hook_value(a - 1, b)
            if b >= 1:
                val = val + hook_value(a, b - 1)
            rhs[(a, b)] = val
    return lhs, rhs
