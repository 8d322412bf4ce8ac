import math

import numpy as np
import pytest

from giambelli_dpp.fredholm import (MultiplicativeSymbol, expect_ratio, fredholm_det, ratio_symbol,
                                    subset_expansion)
from giambelli_dpp.kernels import Window, make_kernel
from giambelli_dpp.sampling import SeedSpec, window_dpp


@pytest.fixture
def dsine():
    return make_kernel({"kind": "discrete_sine", "rho": 0.5})


def test_trivial_symbol_is_one(dsine):
    sym = MultiplicativeSymbol(lambda x: np.ones_like(x, dtype=complex), Window(-10, 10))
    assert fredholm_det(dsine, sym).value == 1.0


def test_rank_one_site(dsine):
    t = 0.3 + 0.7j
    sym = MultiplicativeSymbol(lambda x: np.full(np.shape(x), t), Window(0, 0))
    val = fredholm_det(dsine, sym).value
    assert val == pytest.approx(1 + (t - 1) * 0.5, abs=1e-15)
    assert subset_expansion(dsine, sym) == pytest.approx(val, abs=1e-15)


def test_hole_probability(dsine):
    sym = MultiplicativeSymbol(lambda x: np.zeros(np.shape(x), dtype=complex), Window(0, 1))
    expected = 0.25 - 1 / math.pi ** 2
    assert fredholm_det(dsine, sym).value == pytest.approx(expected, abs=1e-15)
    assert expected == pytest.approx(0.14868, abs=1e-5)


def test_ratio_equal_lists_is_one(dsine):
    assert expect_ratio(dsine, [1j, 2 + 1j], [1j, 2 + 1j], Window(-20, 20)).value == pytest.approx(1.0)


def test_ratio_single_site(dsine):
    z, w = 1 + 2j, -1 + 1j
    val = expect_ratio(dsine, [z], [w], Window(0, 0)).value
    assert val == pytest.approx(1 + 0.5 * (z / w - 1), abs=1e-15)


def test_ratio_rejects_real_points(dsine):
    with pytest.raises(ValueError):
        expect_ratio(dsine, [1.0], [1j], Window(-3, 3))


@pytest.mark.parametrize("rho", [0.2, 0.5, 0.8])
@pytest.mark.parametrize("window", [(-5, 5), (0, 11), (2, 4)])
def test_subset_expansion_matches(rho, window):
    K = make_kernel({"kind": "discrete_sine", "rho": rho})
    sym = ratio_symbol([1j, 0.5 + 2j], [-1j + 1, 3j], Window(*window))
    assert abs(subset_expansion(K, sym) - fredholm_det(K, sym).value) < 1e-10


def test_subset_expansion_cap(dsine):
    with pytest.raises(ValueError):
        subset_expansion(dsine, ratio_symbol([1j], [2j], Window(-10, 10)))


def test_continuous_order_doubling():
    K = make_kernel({"kind": "sine"})
    res = fredholm_det(K, ratio_symbol([1j], [2j + 1], Window(-5, 5)), 100)
    assert res.order == 200 and res.error < 1e-10


def test_ratio_matches_monte_carlo(dsine):
    """MC mean of the ratio over 1e5 window samples sits within 3 stderr of the determinant."""
    win = Window(-20, 20)
    exact = expect_ratio(dsine, [1j], [2j], win).value
    dpp = window_dpp(dsine, win)
    occ = dpp.occupancy(100_000, SeedSpec(7)).astype(float)
    vals = np.exp(occ @ np.log((1j - dpp.sites) / (2j - dpp.sites)))
    se = np.std(vals) / math.sqrt(len(vals))
    assert abs(vals.mean() - exact) <= 3 * se
