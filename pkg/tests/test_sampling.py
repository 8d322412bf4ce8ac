import math

import numpy as np
import pytest

from giambelli_dpp.identities import ope_quadrature
from giambelli_dpp.kernels import Window, make_kernel
from giambelli_dpp.sampling import (BACKEND, Configuration, MatrixDPP, SeedSpec, empirical_intensity,
                                    ope_points, read_samples_csv, sample_ope, window_dpp,
                                    write_samples_csv)
from giambelli_dpp.sampling import _sampler_py


def test_zero_kernel_gives_empty_configurations():
    dpp = MatrixDPP(np.arange(5.0), np.zeros((5, 5)))
    assert dpp.occupancy(200, SeedSpec(1)).sum() == 0


def test_rank_one_projection_gives_one_point():
    v = np.random.default_rng(2).normal(size=8)
    v /= np.linalg.norm(v)
    dpp = MatrixDPP(np.arange(8.0), np.outer(v, v))
    assert np.all(dpp.occupancy(500, SeedSpec(3)).sum(axis=1) == 1)


def test_non_contraction_rejected():
    with pytest.raises(ValueError):
        MatrixDPP(np.arange(2.0), np.array([[2.0, 0.0], [0.0, 0.5]]))


def test_configuration_must_increase():
    with pytest.raises(ValueError):
        Configuration(np.array([1.0, 1.0]))


def test_same_seed_same_samples():
    dpp = window_dpp(make_kernel({"kind": "discrete_sine", "rho": 0.5}), Window(-10, 10))
    a = dpp.occupancy(3000, SeedSpec(5, 2))
    b = dpp.occupancy(3000, SeedSpec(5, 2))
    c = dpp.occupancy(3000, SeedSpec(5, 3))
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_discrete_sine_count_and_occupancy():
    K = make_kernel({"kind": "discrete_sine", "rho": 0.5})
    dpp = window_dpp(K, Window(-20, 20))
    occ = dpp.occupancy(100_000, SeedSpec(0)).astype(float)
    n = occ.sum(axis=1)
    assert abs(n.mean() - 20.5) <= 3 * n.std(ddof=1) / math.sqrt(len(n))
    se = occ.std(axis=0, ddof=1) / math.sqrt(len(occ))
    assert np.all(np.abs(occ.mean(axis=0) - 0.5) <= 3 * se)


def test_gaussian_ope_one_point_mean():
    x = ope_points("gaussian", 1, 100_000, SeedSpec(4))[:, 0]
    assert abs(x.mean()) <= 3 * x.std(ddof=1) / math.sqrt(len(x))


@pytest.mark.parametrize("weight", ["gaussian", "uniform"])
@pytest.mark.parametrize("N", [1, 2, 4])
def test_ope_has_exactly_n_increasing_points(weight, N):
    for c in sample_ope(weight, N, SeedSpec(9), 300):
        assert len(c) == N and np.all(np.diff(c.points) > 0)


def test_gaussian_ope_pair_spread_matches_quadrature():
    X = ope_points("gaussian", 2, 100_000, SeedSpec(6))
    d2 = (X[:, 0] - X[:, 1]) ** 2
    exact = ope_quadrature("gaussian", 2, lambda P: (P[:, 0] - P[:, 1]) ** 2, 60).real
    assert abs(d2.mean() - exact) <= 3 * d2.std(ddof=1) / math.sqrt(len(d2))


def test_uniform_grid_ope_intensity():
    samples = sample_ope("uniform", 2, SeedSpec(8), 20_000)
    cmp = empirical_intensity(samples, np.linspace(0, 1, 6), make_kernel({"kind": "cd", "weight": "uniform", "n": 2}))
    assert np.all(np.abs(cmp.zscores) < 4)


def test_empirical_intensity_needs_samples():
    with pytest.raises(ValueError):
        empirical_intensity([], [0.0, 1.0])


def test_cd_gaussian_intensity_integrates_to_n():
    samples = sample_ope("gaussian", 2, SeedSpec(1), 2000)
    cmp = empirical_intensity(samples, [-1e6, 1e6])
    assert cmp.empirical[0] == 2.0 and cmp.stderr[0] == 0.0


def test_csv_roundtrip(tmp_path):
    samples = sample_ope("gaussian", 3, SeedSpec(2), 5)
    write_samples_csv(tmp_path / "s.csv", samples)
    back = read_samples_csv(tmp_path / "s.csv")
    assert all(np.array_equal(a.points, b.points) for a, b in zip(samples, back))


@pytest.mark.skipif(BACKEND != "cython", reason="compiled sampler not built")
@pytest.mark.parametrize("T", [10, 50])
def test_backends_agree(T):
    """The compiled and numpy cores produce the same occupancy rows from the same uniforms."""
    from giambelli_dpp.sampling import _csampler
    dpp = window_dpp(make_kernel({"kind": "discrete_sine", "rho": 0.5}), Window(-T, T))
    rng = SeedSpec(11).generator()
    S, m = 500, len(dpp.eigvals)
    bern, picks = rng.random((S, m)), rng.random((S, m))
    a = _csampler.spectral_batch(dpp.eigvecs, dpp.eigvals, bern, picks)
    b = _sampler_py.spectral_batch(dpp.eigvecs, dpp.eigvals, bern, picks)
    assert np.mean(np.all(a == b, axis=1)) >= 0.99
