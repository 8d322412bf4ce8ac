"""Exact checks of the symmetric-function identities, summarized as reports.

Each report counts cases: ``lhs`` is the number checked and ``rhs`` the number
that matched exactly, so a pass means zero mismatches.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..symfun import (METHODS, IndeterminateTable, generalized_schur, giambelli_det, hook,
                      hook_series_coeffs, partitions_up_to, schur_eval)
from .report import VerificationReport


def rational_variables(n: int, seed: int = 0, denom: int = 9) -> list[Fraction]:
    rng = np.random.default_rng(seed)
    out: list[Fraction] = []
    while len(out) < n:
        v = Fraction(int(rng.integers(-12, 13)), int(rng.integers(1, denom + 1)))
        if v not in out:
            out.append(v)
    return out


def _count_report(name, params, checked, matched, mismatches):
    return VerificationReport(name, params, checked, matched, 0.0, mode="absolute",
                              extras={"mismatches": mismatches[:10]})


def schur_routes_check(max_size: int = 8, nvars: int = 4, seed: int = 0) -> VerificationReport:
    """All four Schur routes agree exactly for |lambda| <= max_size."""
    xs = rational_variables(nvars, seed)
    checked = matched = 0
    bad = []
    for lam in partitions_up_to(max_size):
        vals = [schur_eval(lam, variables=xs, method=m) for m in METHODS]
        checked += 1
        if all(v == vals[0] for v in vals):
            matched += 1
        else:
            bad.append(list(lam.parts))
    return _count_report(f"symfun.schur_routes[n={nvars}]",
                         {"max_size": max_size, "variables": [str(x) for x in xs]}, checked, matched, bad)


def giambelli_check(max_size: int = 8, nvars: int = 4, seed: int = 0) -> VerificationReport:
    """s_lambda = det(s_(p_i|q_j)) exactly for nonempty |lambda| <= max_size."""
    xs = rational_variables(nvars, seed)
    cache: dict = {}

    def hv(p, q):
        if (p, q) not in cache:
            cache[(p, q)] = schur_eval(hook(p, q), variables=xs, method="tableaux")
        return cache[(p, q)]

    checked = matched = 0
    bad = []
    for lam in partitions_up_to(max_size):
        if lam.size == 0:
            continue
        checked += 1
        if schur_eval(lam, variables=xs, method="jacobi_trudi_h") == giambelli_det(lam, hv):
            matched += 1
        else:
            bad.append(list(lam.parts))
    return _count_report(f"symfun.giambelli[n={nvars}]",
                         {"max_size": max_size, "variables": [str(x) for x in xs]}, checked, matched, bad)


def generalized_giambelli_check(ntables: int = 50, max_size: int = 8, max_rank: int = 3,
                                seed: int = 0) -> VerificationReport:
    """det(h_{lambda_i-i+j, j-1}) = det over hooks for random rational tables."""
    rng = np.random.default_rng(seed)
    lams = [l for l in partitions_up_to(max_size) if 1 <= l.rank <= max_rank]
    checked = matched = 0
    bad = []
    for t in range(ntables):
        table = IndeterminateTable.random_rational(rng, rmax=max_size + max_size, smax=max_size)
        cache: dict = {}

        def hv(p, q):
            if (p, q) not in cache:
                cache[(p, q)] = generalized_schur(table, hook(p, q))
            return cache[(p, q)]

        for lam in lams:
            checked += 1
            if generalized_schur(table, lam) == giambelli_det(lam, hv):
                matched += 1
            else:
                bad.append([t, list(lam.parts)])
    return _count_report("symfun.generalized_giambelli",
                         {"tables": ntables, "max_size": max_size, "max_rank": max_rank, "seed": seed},
                         checked, matched, bad)


def hook_series_check(M: int = 8, nvars: int = 3, seed: int = 0) -> VerificationReport:
    xs = rational_variables(nvars, seed)
    lhs, rhs = hook_series_coeffs(M, variables=xs)
    bad = [list(k) for k in lhs if lhs[k] != rhs[k]]
    return _count_report(f"symfun.hook_series[M={M},n={nvars}]",
                         {"M": M, "variables": [str(x) for x in xs]}, len(lhs), len(lhs) - len(bad), bad)
