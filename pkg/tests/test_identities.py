import json
import math

import numpy as np
import pytest

from giambelli_dpp.identities import (REPORT_KEYS, DPPSource, OPESource, VerificationReport,
                                      andreief_check, cauchy_det, coefficient_extraction, delta_det,
                                      fs_confluent, fs_identity_report, fs_rhs_permutation,
                                      giambelli_mc, giambelli_ope_exact, m_N, moment_independence,
                                      ope_ratio_moment, ope_ratio_quadrature, schur_moment_det,
                                      schur_quadrature, shift_invariance_check, validate_report_dict)
from giambelli_dpp.identities.fs import ope_compensator
from giambelli_dpp.kernels import Window, make_kernel
from giambelli_dpp.symfun import GaussianRational, Partition

G2 = OPESource("gaussian", 2)
Z2, W2 = [1j, 1 + 1j], [-1j, 2 - 1j]


# -- Cauchy determinant -------------------------------------------------------------

def test_cauchy_single():
    d, p = cauchy_det([2 + 1j], [1j])
    assert d == pytest.approx(1 / 2) and p == pytest.approx(1 / 2)


def test_cauchy_two_by_two():
    d, p = cauchy_det([1, 2], [-1, -2])
    assert d == pytest.approx(1 / 72, rel=1e-14) and p == pytest.approx(1 / 72, rel=1e-14)


def test_cauchy_routes_agree_n4():
    rng = np.random.default_rng(0)
    zs = rng.normal(size=4) + 1j * rng.normal(size=4)
    ws = rng.normal(size=4) + 1j * rng.normal(size=4)
    d, p = cauchy_det(zs, ws)
    assert abs(d - p) <= 1e-10 * abs(p)


def test_cauchy_rejects_collisions():
    with pytest.raises(ValueError):
        cauchy_det([1j, 1j], [2j, 3j])


# -- moments and Andreief ------------------------------------------------------------

def test_gaussian_m2_is_one_at_every_shift():
    for a in (0, 1, 1j, 3 - 2j):
        assert m_N("gaussian", 2, a) == GaussianRational(1)


def test_m1_is_total_mass():
    assert m_N("uniform", 1, 3 - 2j) == GaussianRational(1)


@pytest.mark.parametrize("weight", ["gaussian", "uniform"])
@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_moment_independence(weight, N):
    rep = moment_independence(weight, N)
    assert rep.passed and rep.extras["max_rel_dev"] < 1e-12


def test_andreief_one_point():
    rep = andreief_check(1, "gaussian", [lambda x: x ** 2], [lambda x: 1 + x ** 2])
    assert rep.lhs == pytest.approx(4.0) and rep.passed


def test_andreief_monomials():
    rep = andreief_check(2, "gaussian", [lambda x: 1 + 0 * x, lambda x: x], [lambda x: 1 + 0 * x, lambda x: x])
    assert rep.rhs == pytest.approx(2.0, rel=1e-12) and rep.passed


def test_andreief_shifted_monomials():
    fam = [lambda x, k=k: (x + 1j) ** k for k in range(3)]
    rep = andreief_check(3, "gaussian", fam, fam, tol=1e-8)
    assert rep.passed


def test_andreief_needs_n_functions():
    with pytest.raises(ValueError):
        andreief_check(2, "gaussian", [lambda x: x], [lambda x: x, lambda x: x])


# -- OPE expectations -----------------------------------------------------------------

def test_ratio_moment_matches_quadrature():
    for N in (1, 2):
        a = ope_ratio_moment("gaussian", N, Z2, W2)
        b = ope_ratio_quadrature("gaussian", N, Z2, W2)
        assert abs(a - b) <= 1e-10 * abs(a)


def test_fs_single_pair_is_trivial():
    rep = fs_identity_report(G2, [1j], [2 - 1j], "moment")
    assert rep.abs_err < 1e-15


@pytest.mark.parametrize("method", ["quadrature", "moment"])
def test_fs_gaussian_n2(method):
    rep = fs_identity_report(G2, Z2, W2, method)
    assert rep.rel_err <= 1e-8


def test_fs_rhs_is_permutation_invariant():
    zs, ws = [1j, 1 + 1j, -1 + 2j], [-1j, 2 - 1j, 1 - 2j]
    r1, r2 = fs_rhs_permutation(OPESource("gaussian", 3), zs, ws, [2, 0, 1])
    assert abs(r1 - r2) <= 1e-12 * abs(r1)


def test_fs_validation():
    with pytest.raises(ValueError):
        fs_identity_report(G2, [1.0, 1j], W2, "moment")
    with pytest.raises(ValueError):
        fs_identity_report(G2, Z2, [1j, 1j], "moment")
    with pytest.raises(ValueError):
        fs_identity_report(G2, Z2, W2, "fredholm")


def test_fs_mc_gaussian():
    rep = fs_identity_report(G2, Z2, W2, "mc", nsamples=20_000, seed=3)
    assert rep.mode == "mc" and rep.passed


def test_fs_confluent():
    rep = fs_confluent(G2, [1j, 1j], [-1j, 2 - 1j], h=1e-4)
    assert rep.rel_err <= 1e-6
    assert 3.5 < rep.extras["refinement_ratio"] < 4.5


def test_fs_confluent_rejects_repeated_w():
    with pytest.raises(ValueError):
        fs_confluent(G2, [1j, 1j], [-1j, -1j])


def test_dpp_fredholm_and_mc_lhs_agree():
    """Fredholm and MC estimates of the DPP ratio expectation on {-20..20}."""
    src = DPPSource(make_kernel({"kind": "discrete_sine", "rho": 0.5}), Window(-20, 20))
    fred = fs_identity_report(src, [1j, 1 + 1j], [2j, -1 + 2j], "fredholm")
    mc = fs_identity_report(src, [1j, 1 + 1j], [2j, -1 + 2j], "mc", nsamples=100_000, seed=0)
    assert abs(mc.lhs - fred.lhs) <= 3 * mc.extras["stderr_lhs"]


# -- Giambelli compatibility ---------------------------------------------------------------

def test_giambelli_hook_is_identical():
    rep = giambelli_ope_exact("gaussian", 3, 1.0, Partition((3, 1, 1)), quadrature=False)
    assert rep.abs_err == 0


def test_giambelli_two_two_routes():
    rep = giambelli_ope_exact("gaussian", 2, 1.0, Partition((2, 2)))
    assert rep.rel_err <= 1e-10
    assert rep.extras["route_ab_rel_err"] <= 1e-8 and rep.passed


def test_giambelli_n3_staircase():
    rep = giambelli_ope_exact("gaussian", 3, 1.0, Partition((3, 2, 1)), quadrature=False)
    assert rep.rel_err <= 1e-10
    b = schur_quadrature("gaussian", 3, 1.0, Partition((3, 2, 1)), order=400)
    assert abs(b - rep.lhs) <= 1e-6 * abs(rep.lhs)


@pytest.mark.parametrize("weight", ["gaussian", "uniform"])
def test_schur_moment_det_matches_quadrature(weight):
    for lam in [(1,), (2,), (1, 1), (2, 1)]:
        a = schur_moment_det(weight, 2, 2.0, Partition(lam))
        b = schur_quadrature(weight, 2, 2.0, Partition(lam), order=120)
        assert abs(a - b) <= 1e-8 * max(abs(a), 1e-12)


def test_giambelli_rejects_long_partitions():
    with pytest.raises(ValueError):
        giambelli_ope_exact("gaussian", 2, 1.0, Partition((1, 1, 1)))


def test_giambelli_mc_hook_difference_is_zero():
    K = make_kernel({"kind": "discrete_sine", "rho": 0.5})
    rep = giambelli_mc(K, Window(-10, 10), 1.0, [(2, 1, 1)], 2000, 5, doubling=False)[0]
    assert rep.abs_err == 0.0


def test_giambelli_mc_two_two():
    K = make_kernel({"kind": "discrete_sine", "rho": 0.5})
    rep = giambelli_mc(K, Window(-20, 20), 1.0, [(2, 2)], 20_000, 1)[0]
    assert rep.passed
    assert {"doubling_lhs", "doubling_rhs"} <= set(rep.checks)


def test_giambelli_mc_scope():
    K = make_kernel({"kind": "discrete_sine", "rho": 0.5})
    with pytest.raises(ValueError):
        giambelli_mc(K, Window(-10, 10), 1.0, [(3, 3, 3)], 2000, 0)
    with pytest.raises(ValueError):
        giambelli_mc(K, Window(-10, 10), 1.0, [(2, 2)], 10, 0)


# -- shift invariance and coefficient extraction ----------------------------------------------

def test_shift_zero_sequence():
    rep = shift_invariance_check(G2, [0.0], [0.3 + 0.2j], [0.1 - 0.3j])
    assert rep.lhs == pytest.approx(1.0, abs=1e-14) and rep.rhs == 1.0


def test_shift_harmonic_sequence():
    rep = shift_invariance_check(G2, lambda k: 1.0 / k, [0.3 + 0.2j, -0.2 + 0.4j], [0.1 - 0.3j, -0.4 - 0.1j])
    assert rep.passed and rep.checks["same_pass_status"]


def test_shift_by_compensator():
    comp = ope_compensator("gaussian", 2, 1.0, 60)
    rep = shift_invariance_check(G2, comp, [0.3 + 0.2j, -0.2 + 0.4j], [0.1 - 0.3j, -0.4 - 0.1j])
    assert rep.passed and rep.extras["fs_pass"] and rep.extras["fs_pass_a"]


def test_shift_needs_small_arguments():
    with pytest.raises(ValueError):
        shift_invariance_check(G2, [0.5], [1.5j], [0.1 - 0.3j])


def test_coefficient_zero_zero_is_first_power_sum():
    rep = coefficient_extraction(G2, 1.0, 0, 0)
    p1 = schur_moment_det("gaussian", 2, 1.0, Partition((1,)))
    assert abs(rep.lhs - p1) <= 1e-6 * abs(p1)


def test_coefficient_one_one():
    rep = coefficient_extraction(G2, 1.0, 1, 1)
    assert rep.rel_err <= 1e-6 and rep.checks["radius_sweep"]


# -- reports and statistics ----------------------------------------------------------------

def test_report_schema_and_json():
    rep = VerificationReport("x", {"a": 1j}, 1 + 1j, 1 + 1j + 1e-12, 1e-10, stderr=0.5, seed=3)
    d = json.loads(rep.to_json())
    validate_report_dict(d)
    assert set(REPORT_KEYS) <= set(d) and d["lhs"] == {"re": 1.0, "im": 1.0} and d["pass"]
    assert d["params"]["a"] == {"re": 0.0, "im": 1.0}


def test_report_modes():
    assert not VerificationReport("x", {}, 1.0, 1.1, 1e-3).passed
    assert VerificationReport("x", {}, 1.0, 1.1, 0.2, mode="absolute").passed
    assert VerificationReport("x", {}, 1.0, 1.1, 3, mode="mc", stderr=0.05).passed
    assert not VerificationReport("x", {}, 1.0, 1.0, 1.0, checks={"side": False}).passed


def test_validate_report_dict_rejects_missing_keys():
    with pytest.raises(ValueError):
        validate_report_dict({"name": "x"})


def test_delta_det_scalar_case():
    rng = np.random.default_rng(0)
    Y = rng.normal(size=1000) + 0j
    est = delta_det(Y, Y[:, None, None])
    assert est.lhs == est.rhs and est.stderr_diff == 0


def test_delta_det_error_scale():
    rng = np.random.default_rng(1)
    M = rng.normal(1.0, 0.1, size=(4000, 2, 2)) + 0j
    Y = np.linalg.det(M)
    est = delta_det(Y, M)
    assert abs(est.lhs - est.rhs) < 5 * max(est.stderr_diff, 1e-3)
    assert est.stderr_lhs == pytest.approx(np.std(Y) / math.sqrt(4000), rel=1e-6)
