"""Exact samplers for window-restricted DPPs and orthogonal polynomial ensembles."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import linalg

from ..kernels import IntegrableKernel, Window, discretize
from ..weights import Weight
from . import _backend

EIG_TOL = 1e-6
CHUNK = 10_000


@dataclass(frozen=True)
class SeedSpec:
    """A (master seed, stream) pair; each names an independent Philox stream."""

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.seed) & (2**64 - 1), spawn_key=(int(self.stream),))
        return np.random.Generator(np.random.Philox(ss))

    def child(self, k: int) -> "SeedSpec":
        # distinct streams for chunk k of a batch run under this spec
        return SeedSpec(self.seed, self.stream * 1_000_003 + k + 1)


@dataclass(frozen=True)
class Configuration:
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if np.any(np.diff(pts) <= 0):
            raise ValueError("configuration points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)


class MatrixDPP:
    """DPP on finitely many sites with a real symmetric contraction kernel matrix."""

    def __init__(self, sites: np.ndarray, kernel_matrix: np.ndarray):
        self.sites = np.asarray(sites, dtype=float)
        Km = np.asarray(kernel_matrix, dtype=float)
        if Km.shape != (len(self.sites), len(self.sites)):
            raise ValueError("kernel matrix does not match the number of sites")
        if len(self.sites) == 0:
            self.eigvals = np.zeros(0)
            self.eigvecs = np.zeros((0, 0))
            return
        lam, vecs = linalg.eigh(0.5 * (Km + Km.T))
        if lam.min() < -EIG_TOL or lam.max() > 1 + EIG_TOL:
            raise ValueError(f"kernel is not a contraction: eigenvalues in [{lam.min():.3g}, {lam.max():.3g}]")
        self.eigvals = np.clip(lam, 0.0, 1.0)
        self.eigvecs = np.ascontiguousarray(vecs)

    @property
    def expected_count(self) -> float:
        return float(self.eigvals.sum())

    def occupancy(self, nsamples: int, seed: SeedSpec, chunk: int = CHUNK) -> np.ndarray:
        """(nsamples x sites) 0/1 matrix; chunk k draws from stream ``seed.child(k)``."""
        n = len(self.sites)
        m = len(self.eigvals)
        blocks = []
        done = 0
        k = 0
        while done < nsamples:
            size = min(chunk, nsamples - done)
            rng = seed.child(k).generator()
            bern = rng.random((size, m))
            picks = rng.random((size, m))
            if n == 0:
                blocks.append(np.zeros((size, 0), dtype=np.uint8))
            else:
                blocks.append(_backend.spectral_batch(self.eigvecs, self.eigvals, bern, picks))
            done += size
            k += 1
        return np.concatenate(blocks, axis=0) if blocks else np.zeros((0, n), dtype=np.uint8)

    def sample(self, seed: SeedSpec) -> Configuration:
        occ = self.occupancy(1, seed)[0]
        return Configuration(self.sites[occ.astype(bool)])


def window_dpp(K: IntegrableKernel, w: Window, order: int = 200) -> MatrixDPP:
    """The DPP with kernel chi_w K chi_w; continuous kernels go through the Nystrom matrix."""
    x, wt = discretize(K, w, order)
    if K.discrete:
        return MatrixDPP(x, K.matrix(x))
    s = np.sqrt(wt)
    return MatrixDPP(x, s[:, None] * K.matrix(x) * s[None, :])


def sample_dpp_window(K: IntegrableKernel, w: Window, seed: SeedSpec, order: int = 200) -> Configuration:
    return window_dpp(K, w, order).sample(seed)


def configurations(sites: np.ndarray, occ: np.ndarray) -> list[Configuration]:
    mask = occ.astype(bool)
    return [Configuration(sites[row]) for row in mask]


# -- orthogonal polynomial ensembles ----------------------------------------

def _gaussian_ope(N: int, count: int, rng: np.random.Generator) -> np.ndarray:
    # beta = 2 tridiagonal model: diagonal N(0, 1), off-diagonals chi_{2k} / sqrt(2)
    out = np.empty((count, N))
    for s in range(count):
        diag = rng.standard_normal(N)
        off = np.sqrt(rng.chisquare(2 * np.arange(N - 1, 0, -1))) / math.sqrt(2) if N > 1 else np.zeros(0)
        out[s] = linalg.eigvalsh_tridiagonal(diag, off)
    return out


class GridOPE:
    """Rank-N projection on a Gauss-Legendre grid of the weight's support."""

    def __init__(self, weight: Weight, N: int, order: int = 400):
        lo, hi = weight.support
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError("grid OPE sampler needs a compact support")
        from ..kernels import gauss_legendre
        x, wt = gauss_legendre(lo, hi, order)
        P = weight.orthonormal(N, x)
        self.sites = x
        self.vecs = np.ascontiguousarray((P * np.sqrt(wt * weight.density(x))).T)
        self.N = N

    def occupancy(self, count: int, rng: np.random.Generator) -> np.ndarray:
        lam = np.ones(self.N)
        bern = np.zeros((count, self.N))
        picks = rng.random((count, self.N))
        return _backend.spectral_batch(self.vecs, lam, bern, picks)


def sample_ope(weight, N: int, seed: SeedSpec, count: int = 1, order: int = 400) -> list[Configuration]:
    """``count`` draws from the N-point ensemble with density prod (x_i - x_j)^2 prod d omega."""
    if N < 1:
        raise ValueError("N must be >= 1")
    weight = weight if isinstance(weight, Weight) else Weight(weight)
    rng = seed.generator()
    if weight.name == "gaussian":
        pts = _gaussian_ope(N, count, rng)
        return [Configuration(row) for row in pts]
    grid = GridOPE(weight, N, order)
    return configurations(grid.sites, grid.occupancy(count, rng))


def ope_points(weight, N: int, count: int, seed: SeedSpec, order: int = 400) -> np.ndarray:
    """(count x N) array of sorted OPE samples."""
    return np.array([c.points for c in sample_ope(weight, N, seed, count, order)])


# -- empirical laws ------------------------------------------------------------

@dataclass
class IntensityComparison:
    edges: np.ndarray
    empirical: np.ndarray
    stderr: np.ndarray
    expected: np.ndarray

    @property
    def zscores(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self.stderr > 0, (self.empirical - self.expected) / self.stderr, 0.0)


def _bin_counts(samples: Sequence[Configuration], edges: np.ndarray) -> np.ndarray:
    return np.array([np.histogram(c.points, bins=edges)[0] for c in samples], dtype=float)


def empirical_intensity(samples: Sequence[Configuration], edges, K: IntegrableKernel | None = None,
                        order: int = 64) -> IntensityComparison:
    """Mean point count per bin with standard errors, beside int_bin K(x,x) d mu."""
    if len(samples) == 0:
        raise ValueError("empirical intensity needs at least one sample")
    edges = np.asarray(edges, dtype=float)
    counts = _bin_counts(samples, edges)
    mean = counts.mean(axis=0)
    se = counts.std(axis=0, ddof=1) / math.sqrt(len(samples)) if len(samples) > 1 else np.zeros_like(mean)
    expected = np.full_like(mean, np.nan)
    if K is not None:
        for b in range(len(mean)):
            w = Window(edges[b], edges[b + 1])
            if K.discrete:
                # half-open bins [lo, hi) as numpy.histogram, closed on the last
                sites = w.sites()
                if b < len(mean) - 1:
                    sites = sites[sites < edges[b + 1]]
                expected[b] = float(np.sum(K.diagonal(sites)))
            else:
                x, wt = discretize(K, w, order)
                expected[b] = float(np.dot(wt, K.diagonal(x)))
    return IntensityComparison(edges, mean, se, expected)


def pair_counts(samples: Sequence[Configuration], a: tuple[float, float], b: tuple[float, float]) -> np.ndarray:
    """Per-sample number of ordered pairs of distinct points with x in a, y in b."""
    out = np.empty(len(samples))
    for i, c in enumerate(samples):
        p = c.points
        ina = (p >= a[0]) & (p < a[1])
        inb = (p >= b[0]) & (p < b[1])
        out[i] = ina.sum() * inb.sum() - (ina & inb).sum()
    return out


def expected_pairs(K: IntegrableKernel, a: tuple[float, float], b: tuple[float, float], order: int = 48) -> float:
    """int_a int_b det[[K(x,x), K(x,y)], [K(y,x), K(y,y)]] d mu d mu."""
    if K.discrete:
        xa = Window(*a).sites()
        xa = xa[xa < a[1]]
        xb = Window(*b).sites()
        xb = xb[xb < b[1]]
        wa = np.ones_like(xa)
        wb = np.ones_like(xb)
    else:
        xa, wa = discretize(K, Window(*a), order)
        xb, wb = discretize(K, Window(*b), order)
    Kab = K.matrix(xa, xb)
    dens = K.diagonal(xa)[:, None] * K.diagonal(xb)[None, :] - Kab * Kab
    if K.discrete:
        dens = np.where(xa[:, None] == xb[None, :], 0.0, dens)
    return float(wa @ dens @ wb)


def write_samples_csv(path, samples: Iterable[Configuration]) -> None:
    """One configuration per line, points comma-separated."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for c in samples:
            writer.writerow([repr(float(v)) for v in c.points])


def read_samples_csv(path) -> list[Configuration]:
    with open(path, newline="") as fh:
        return [Configuration(np.array([float(v) for v in row])) for row in csv.reader(fh)]
