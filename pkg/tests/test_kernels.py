import math

import numpy as np
import pytest

from giambelli_dpp.kernels import Window, kernel_diagnostics, make_kernel, trace_on_window
from giambelli_dpp.weights import Weight


@pytest.fixture
def dsine():
    return make_kernel({"kind": "discrete_sine", "rho": 0.5})


def test_discrete_sine_values(dsine):
    assert dsine(0, 0) == pytest.approx(0.5, abs=1e-15)
    assert dsine(0, 1) == pytest.approx(1 / math.pi, rel=1e-14)
    assert dsine(0, 2) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("rho", [0.1, 0.5, 0.9])
def test_discrete_sine_diagonal_is_rho(rho):
    K = make_kernel({"kind": "discrete_sine", "rho": rho})
    x = np.arange(-10, 11, dtype=float)
    assert np.allclose(K(x, x), rho, atol=1e-14)
    assert np.allclose(K.diagonal(x), rho, atol=1e-14)


@pytest.mark.parametrize("spec", [{"kind": "sine"}, {"kind": "cd", "weight": "gaussian", "n": 3},
                                  {"kind": "cd", "weight": "uniform", "n": 2}, {"kind": "airy"},
                                  {"kind": "bessel", "s": 1.0}])
def test_symmetry_and_diagonal_clause(spec):
    K = make_kernel(spec)
    rng = np.random.default_rng(0)
    lo = 0.05 if K.ground.lo >= 0 else -3.0
    hi = min(3.0, K.ground.hi) if math.isfinite(K.ground.hi) else 3.0
    x = rng.uniform(lo, hi, 100)
    y = rng.uniform(lo, hi, 100)
    assert np.allclose(K(x, y), K(y, x), rtol=1e-10, atol=1e-14)
    assert np.allclose(K(x, x), K.dA(x) * K.B(x) - K.A(x) * K.dB(x), atol=1e-14)


def test_trace_examples(dsine):
    assert trace_on_window(dsine, Window(-20, 20))[0] == pytest.approx(20.5, abs=1e-12)
    assert trace_on_window(dsine, Window(0.2, 0.8))[0] == 0.0


@pytest.mark.parametrize("n", [1, 3])
def test_cd_trace_is_rank(n):
    K = make_kernel({"kind": "cd", "weight": "gaussian", "n": n})
    assert trace_on_window(K, Window(-14, 14), 300)[0] == pytest.approx(n, abs=1e-10)


def test_cd_rank_one_is_the_weight():
    K = make_kernel({"kind": "cd", "weight": "gaussian", "n": 1})
    x = np.linspace(-3, 3, 7)
    assert np.allclose(K.diagonal(x), Weight("gaussian").density(x), atol=1e-14)


def test_cd_idempotence_full_support():
    K = make_kernel({"kind": "cd", "weight": "gaussian", "n": 3})
    diag = kernel_diagnostics(K, Window(-8, 8), full_support=True)
    assert diag.idempotence_residual < 1e-8


def test_discrete_sine_idempotence_improves_with_window(dsine):
    r = [kernel_diagnostics(dsine, Window(-T, T)).idempotence_residual for T in (25, 50, 200)]
    assert r[0] > r[1] > r[2]


@pytest.mark.parametrize("spec", [{"kind": "sine"}, {"kind": "cd", "weight": "gaussian", "n": 4},
                                  {"kind": "airy"}])
def test_integrable_form_residual(spec):
    K = make_kernel(spec)
    assert kernel_diagnostics(K, Window(-2, 2)).integrable_form_residual < 1e-6


def test_unknown_kernel():
    with pytest.raises(ValueError):
        make_kernel({"kind": "nope"})
