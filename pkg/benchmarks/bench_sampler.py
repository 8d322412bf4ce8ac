"""Time the compiled sampling core against the numpy fallback.

    python3 benchmarks/bench_sampler.py --windows 10 25 50 --samples 2000

Both cores get the same uniforms, so the agreement column is the fraction of
identical occupancy rows.
"""

import argparse
import sys
import timeit

import numpy as np

from giambelli_dpp.kernels import Window, make_kernel
from giambelli_dpp.sampling import SeedSpec, _sampler_py, window_dpp


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--windows", type=int, nargs="+", default=[10, 25, 50, 100])
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--rho", type=float, default=0.5)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    try:
        from giambelli_dpp.sampling import _csampler
    except ImportError:
        print("compiled sampler not built; run `pip install -e . --no-build-isolation` first")
        return 1

    K = make_kernel({"kind": "discrete_sine", "rho": args.rho})
    print(f"{'sites':>6} {'samples':>8} {'cython s':>10} {'python s':>10} {'speedup':>8} {'agree':>7}")
    for T in args.windows:
        dpp = window_dpp(K, Window(-T, T))
        rng = SeedSpec(0).generator()
        m = len(dpp.eigvals)
        bern, picks = rng.random((args.samples, m)), rng.random((args.samples, m))
        runs = {}
        for label, fn in (("cython", _csampler.spectral_batch), ("python", _sampler_py.spectral_batch)):
            t = min(timeit.repeat(lambda: fn(dpp.eigvecs, dpp.eigvals, bern, picks),
                                  number=1, repeat=args.repeat))
            runs[label] = (t, fn(dpp.eigvecs, dpp.eigvals, bern, picks))
        (tc, a), (tp, b) = runs["cython"], runs["python"]
        agree = np.mean(np.all(a == b, axis=1))
        print(f"{m:>6} {args.samples:>8} {tc:>10.3f} {tp:>10.3f} {tp / tc:>7.1f}x {agree:>7.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
