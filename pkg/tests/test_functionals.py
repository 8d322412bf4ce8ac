import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from giambelli_dpp.functionals import (RegularizationParams, SeriesTruncationError, batch_power_sums,
                                       build_specialization, compensator, convergence_diagnostic,
                                       f_eval, g_eval, psi, psi_tilde, s_series, series_tail_bound,
                                       truncated_ratio)
from giambelli_dpp.kernels import Window, make_kernel
from giambelli_dpp.sampling import SeedSpec, sample_dpp_window

DSINE = make_kernel({"kind": "discrete_sine", "rho": 0.5})


def test_g_and_f_at_zero():
    assert g_eval(3.0, 0, 1.0) == 1
    assert f_eval(3.0, 0, 1.0) == 0


def test_g_half():
    assert g_eval(0.0, 0.5j, 1.0) == pytest.approx(0.5)


def test_g_rejects_real_pole():
    with pytest.raises(ValueError):
        g_eval(0.0, 1j, 1.0)


nonreal = st.tuples(st.floats(-5, 5), st.floats(0.1, 5)).map(lambda t: complex(t[0], t[1] * (1 if t[0] > 0 else -1)))


@given(st.floats(-10, 10), nonreal, nonreal, st.floats(0.1, 4))
@settings(max_examples=100)
def test_ratio_does_not_depend_on_r(x, z, w, R):
    ratio = g_eval(x, z + 1j * R, R) / g_eval(x, w + 1j * R, R)
    assert ratio == pytest.approx((z - x) / (w - x), rel=1e-9)


def test_rho0_power_sums_at_origin():
    spec = build_specialization([0.0], "rho0", RegularizationParams(R=1, T=10, M=8))
    assert np.allclose(spec.values, [(-1j) ** k for k in range(1, 9)], atol=1e-15)


def test_rho_of_empty_set_without_kernel():
    spec = build_specialization([], "rho", RegularizationParams(M=6))
    assert np.all(spec.values == 0)


def test_shift_by_compensator_restores_rho0():
    X = [-2.0, 0.0, 3.0]
    p = RegularizationParams(R=1, T=20, M=10)
    rho = build_specialization(X, "rho", p, K=DSINE)
    rho0 = build_specialization(X, "rho0", p)
    back = build_specialization(X, "shifted", p, K=DSINE, shift=-rho.compensator)
    assert np.allclose(back.values, rho0.values, atol=1e-13)


def test_series_closed_form():
    spec = build_specialization([0.0], "rho0", RegularizationParams(R=1, T=10, M=60))
    assert s_series(spec, 0)[0] == 0
    val, tail = s_series(spec, 0.5)
    assert abs(val - (-cmath.log(1 + 0.5j))) <= tail + 1e-15


def test_series_exponential_is_product():
    X = [-1.5, 0.25, 2.0]
    spec = build_specialization(X, "rho0", RegularizationParams(R=1, T=10, M=80))
    u = 0.3 + 0.2j
    val, tail = s_series(spec, u)
    prod = np.prod(g_eval(np.array(X), u, 1.0))
    assert abs(cmath.exp(-val) - prod) < 1e-12


def test_series_halving_order_within_tail_bound():
    X = [-3.0, -1.0, 0.5, 2.0]
    u = 0.4 - 0.1j
    s12 = build_specialization(X, "rho0", RegularizationParams(R=1, T=10, M=12))
    s6 = build_specialization(X, "rho0", RegularizationParams(R=1, T=10, M=6))
    assert abs(s_series(s12, u)[0] - s_series(s6, u)[0]) <= series_tail_bound(s6, u)


def test_series_tolerance_error():
    spec = build_specialization([0.0], "rho0", RegularizationParams(R=1, T=10, M=2))
    with pytest.raises(SeriesTruncationError):
        s_series(spec, 0.9, tol=1e-12)


def test_psi_empty():
    assert psi([], 1 + 1j, None, RegularizationParams()).value == 1


def test_psi_ratio_is_r_invariant():
    X = np.array([0.0, 1.0])
    for R in (1.0, 2.0):
        p = RegularizationParams(R=R, T=50)
        ratio = psi(X, 1j, None, p).value / psi(X, 2j, None, p).value
        assert ratio == pytest.approx(0.3 + 0.1j, rel=1e-12)
        assert ratio == pytest.approx(truncated_ratio(X, 1j, 2j, 50), rel=1e-12)


def test_compensators_cancel_in_ratios():
    X = sample_dpp_window(DSINE, Window(-60, 60), SeedSpec(1))
    p = RegularizationParams(R=1.0, T=50)
    z, w = 0.5 + 1j, -1 + 2j
    for fn in (psi, psi_tilde):
        r = fn(X, z, DSINE, p).value / fn(X, w, DSINE, p).value
        comp = compensator(z, DSINE, p, tilde=fn is psi_tilde) - compensator(w, DSINE, p, tilde=fn is psi_tilde)
        assert r == pytest.approx(truncated_ratio(X, z, w, 50) * cmath.exp(-comp), rel=1e-10)


@pytest.mark.parametrize("u", [0.3 - 1j, -0.5j, 0.2 - 0.7j])
def test_analytic_continuation(u):
    X = [-3.0, -1.0, 0.0, 2.0, 5.0]
    p = RegularizationParams(R=1.0, T=10, M=40)
    val, tail = s_series(build_specialization(X, "rho0", p), u + 1j)
    assert abs(psi(X, u, None, p).value - cmath.exp(-val)) <= abs(cmath.exp(-val)) * np.expm1(tail) + 1e-12


def test_convergence_zero_kernel():
    rep = convergence_diagnostic([0.0, 3.0], [1 + 1j], None, RegularizationParams())
    assert np.all(rep.increments == 0)


def test_convergence_discrete_sine():
    X = sample_dpp_window(DSINE, Window(-400, 400), SeedSpec(0, 300))
    rep = convergence_diagnostic(X, [1 + 1j], DSINE, RegularizationParams())
    assert rep.cauchy
    grid = [1 + 1j, -1 + 1j, 0.5j, 2 + 0.5j, -1.5 + 1.5j]
    assert convergence_diagnostic(X, grid, DSINE, RegularizationParams()).uniformity < 10


def test_branch_cut_nudge():
    # u = i/2 puts the compensator's log argument on the cut at x = 0
    val = psi([1.0], 0.5j, DSINE, RegularizationParams(T=10))
    assert val.u != 0.5j and abs(val.u - 0.5j) < 1e-9


def test_batch_power_sums_match_specialization():
    sites = np.arange(-5.0, 6.0)
    occ = np.zeros((2, len(sites)), dtype=np.uint8)
    occ[0, [1, 4, 7]] = 1
    occ[1, [0, 10]] = 1
    P = batch_power_sums(occ, sites, 1.0, 6)
    for s in range(2):
        spec = build_specialization(sites[occ[s].astype(bool)], "rho0", RegularizationParams(R=1, T=5, M=6))
        assert np.allclose(P[s], spec.values)
