"""Verification suites: run configuration, task lists and report output.

A suite expands into picklable tasks ``(function name, kwargs)``; each task
returns a list of reports. Reports are sorted by name before they are written,
so the output does not depend on the worker count.
"""

from __future__ import annotations

import cmath
import copy
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import functionals as fn
from .fredholm import fredholm_det, nystrom_det, ratio_symbol, subset_expansion
from .identities import (OPESource, VerificationReport, coefficient_extraction,
                         fs_confluent, fs_dpp_truncated, fs_identity_report,
                         generalized_giambelli_check, giambelli_check, giambelli_mc,
                         giambelli_ope_exact, hook_series_check, moment_independence,
                         schur_routes_check, shift_invariance_check)
from .kernels import Window, make_kernel
from .sampling import (SeedSpec, empirical_intensity, expected_pairs, pair_counts,
                       sample_dpp_window, sample_ope, window_dpp)
from .symfun.partition import partitions_up_to

log = logging.getLogger(__name__)

SUITES = ("symfun", "giambelli-ope", "fs-ope", "fs-dpp", "fredholm", "sampling",
          "giambelli-dpp", "regularization", "all")
MC_SUITES = ("fs-ope", "fs-dpp", "sampling", "giambelli-dpp")
MIN_SAMPLES = 1000
PAIR_ATOL = 1e-12  # the rank-1 pair density vanishes identically; the oracle leaves round-off


class ConfigError(ValueError):
    pass


def _cx(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError(f"complex value must be [re, im], got {v}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def _cxs(vs) -> list[complex]:
    return [_cx(v) for v in vs]


def default_config() -> dict:
    text = resources.files("giambelli_dpp").joinpath("configs/default.toml").read_text()
    return tomllib.loads(text)


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def _walk(d, path=""):
    if isinstance(d, dict):
        for k, v in d.items():
            yield from _walk(v, f"{path}.{k}" if path else k)
    elif isinstance(d, list) and d and all(isinstance(v, dict) for v in d):
        for i, v in enumerate(d):
            yield from _walk(v, f"{path}[{i}]")
    else:
        yield path, d


@dataclass
class RunConfig:
    suite: str
    seed: int = 0
    samples: int = 100_000
    workers: int = 1
    out: str = "reports"
    sections: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, suite: str, data: dict) -> "RunConfig":
        data = _merge(default_config(), data)
        top = {k: data.pop(k) for k in ("seed", "samples", "workers", "out") if k in data}
        cfg = cls(suite=suite, sections=data, **top)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, suite: str, path=None, **overrides) -> "RunConfig":
        data: dict = {}
        if path is not None:
            try:
                with open(path, "rb") as fh:
                    data = tomllib.load(fh)
            except tomllib.TOMLDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from exc
        for k, v in overrides.items():
            if v is not None:
                data[k] = v
        return cls.from_dict(suite, data)

    def validate(self) -> None:
        if not self.suite:
            raise ConfigError("suite: a suite name is required")
        if self.suite not in SUITES:
            raise ConfigError(f"suite: unknown suite {self.suite!r} (choose from {', '.join(SUITES)})")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError("seed: must be a non-negative integer")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise ConfigError("workers: must be a positive integer")
        if not isinstance(self.samples, int) or self.samples < 1:
            raise ConfigError("samples: must be a positive integer")
        if self.suite in MC_SUITES + ("all",) and self.samples < MIN_SAMPLES:
            raise ConfigError(f"samples: Monte Carlo suites need at least {MIN_SAMPLES} samples")
        for path, v in _walk(self.sections):
            leaf = path.rsplit(".", 1)[-1]
            if leaf.endswith("tol") or leaf == "nsd":
                if not isinstance(v, (int, float)) or isinstance(v, bool) or not v > 0:
                    raise ConfigError(f"{path}: tolerance must be > 0, got {v!r}")
        if self.suite in ("sampling", "all") and self.sections["sampling"]["ope_count"] < MIN_SAMPLES:
            raise ConfigError(f"sampling.ope_count: must be >= {MIN_SAMPLES}")

    def section(self, name: str) -> dict:
        return self.sections[name]


# -- task bodies ---------------------------------------------------------------------

def t_symfun_routes(max_size, n):
    return [schur_routes_check(max_size, n), giambelli_check(max_size, n)]


def t_symfun_generalized(tables, max_size, max_rank):
    return [generalized_giambelli_check(tables, max_size, max_rank)]


def t_symfun_hooks(M, n):
    return [hook_series_check(M, n)]


def t_moments(weight, N, shifts, tol):
    return [moment_independence(weight, N, _cxs(shifts), tol=tol)]


def t_giambelli_ope(weight, N, R, max_size, max_rank, tol, quadrature_tol, quadrature_order):
    out = []
    for lam in partitions_up_to(max_size):
        if lam.size == 0 or lam.rank > max_rank or len(lam) > N:
            continue
        out.append(giambelli_ope_exact(weight, N, R, lam, tol=tol, quad_tol=quadrature_tol,
                                       order=quadrature_order))
    return out


def t_fs_ope(weight, N, zs, ws, method, tol):
    return [fs_identity_report(OPESource(weight, N), _cxs(zs), _cxs(ws), method, tol=tol)]


def t_fs_ope_mc(weight, N, zs, ws, nsamples, seed, nsd, stream):
    return [fs_identity_report(OPESource(weight, N), _cxs(zs), _cxs(ws), "mc", nsamples=nsamples,
                               seed=seed, nsd=nsd, stream=stream)]


def t_fs_confluent(weight, N, z, w, h, tol):
    return [fs_confluent(OPESource(weight, N), _cxs(z), _cxs(w), h=h, tol=tol)]


def t_shift(weight, N, a, z, w, R, M, tol):
    return [shift_invariance_check(OPESource(weight, N), a, _cxs(z), _cxs(w), R=R, M=M, tol=tol)]


def t_coefficient(weight, N, R, p, q, radius, sweep, tol):
    return [coefficient_extraction(OPESource(weight, N), R, p, q, radius=radius, sweep=sweep, tol=tol)]


def t_fs_dpp(kernel, T, R, z, w, tol, nsd, nsamples, seed):
    return fs_dpp_truncated(make_kernel(kernel), Window.symmetric(T), _cxs(z), _cxs(w),
                            nsamples=nsamples, seed=seed, tol=tol, nsd=nsd, R=R)


def t_subset(rho, window, z, w, tol):
    K = make_kernel({"kind": "discrete_sine", "rho": rho})
    win = Window(*window)
    sym = ratio_symbol(_cxs(z), _cxs(w), win)
    lhs = subset_expansion(K, sym)
    rhs = fredholm_det(K, sym).value
    return [VerificationReport(f"fredholm_subset[discrete_sine,rho={rho:g},{window[0]}..{window[1]}]",
                               {"kernel": K.spec(), "window": list(window), "z": _cxs(z), "w": _cxs(w)},
                               lhs, rhs, tol, mode="absolute", extras={"sites": len(win.sites())})]


def t_drift(kernel, window, z, w, order, tol):
    K = make_kernel(kernel)
    sym = ratio_symbol(_cxs(z), _cxs(w), Window(*window))
    coarse = nystrom_det(K, sym, order)
    fine = nystrom_det(K, sym, 2 * order)
    tag = ",".join(f"{k}={v}" for k, v in sorted(kernel.items()) if k != "kind")
    return [VerificationReport(f"fredholm_drift[{K.name}{',' + tag if tag else ''},{window[0]}..{window[1]}]",
                               {"kernel": K.spec(), "window": list(window), "orders": [order, 2 * order],
                                "z": _cxs(z), "w": _cxs(w)},
                               fine, coarse, tol, mode="absolute")]


def _worst(label, params, emp, exp, se, nsd, seed, extras=None):
    """One report for a family of MC comparisons: the entry with the largest |z|-score."""
    z = np.where(se > 0, np.abs(emp - exp) / np.where(se > 0, se, 1.0), np.where(emp == exp, 0.0, np.inf))
    i = int(np.argmax(z))
    return VerificationReport(label, params, float(emp[i]), float(exp[i]), nsd, mode="mc",
                              stderr=float(se[i]), seed=seed,
                              extras={"max_abs_z": float(z[i]), "worst_index": i, "entries": len(z),
                                      **(extras or {})})


def t_discrete_law(kernel, T, pairs, nsamples, seed, nsd, stream):
    K = make_kernel(kernel)
    dpp = window_dpp(K, Window.symmetric(T))
    occ = dpp.occupancy(nsamples, SeedSpec(seed, stream)).astype(float)
    sites = dpp.sites
    emp = occ.mean(axis=0)
    se = occ.std(axis=0, ddof=1) / np.sqrt(nsamples)
    exp = K.diagonal(sites)
    params = {"kernel": K.spec(), "window": [-T, T], "nsamples": nsamples}
    out = [_worst(f"sampling.one_point[{K.name},{-T}..{T}]", params, emp, exp, se, nsd, seed,
                  {"sites": sites})]
    index = {float(x): i for i, x in enumerate(sites)}
    for a, b in pairs:
        ia, ib = index[float(a)], index[float(b)]
        prod = occ[:, ia] * occ[:, ib]
        kab = float(K(float(a), float(b)))
        expected = float(K.diagonal(float(a)) * K.diagonal(float(b)) - kab * kab)
        out.append(VerificationReport(
            f"sampling.two_point[{K.name},{-T}..{T},({a},{b})]", {**params, "pair": [a, b]},
            float(prod.mean()), expected, nsd, mode="mc",
            stderr=float(prod.std(ddof=1) / np.sqrt(nsamples)), seed=seed))
    return out


def t_cd_law(N, edges, pair_bins, nsamples, seed, nsd, stream):
    K = make_kernel({"kind": "cd", "weight": "gaussian", "n": N})
    samples = sample_ope("gaussian", N, SeedSpec(seed, stream), nsamples)
    cmp = empirical_intensity(samples, edges, K)
    params = {"kernel": K.spec(), "edges": list(edges), "nsamples": nsamples}
    out = [_worst(f"sampling.one_point[cd_gaussian,N={N}]", params, cmp.empirical, cmp.expected,
                  cmp.stderr, nsd, seed)]
    for a, b in pair_bins:
        cnt = pair_counts(samples, tuple(a), tuple(b))
        out.append(VerificationReport(
            f"sampling.two_point[cd_gaussian,N={N},{list(a)}x{list(b)}]", {**params, "bins": [a, b]},
            float(cnt.mean()), expected_pairs(K, tuple(a), tuple(b)), nsd, mode="mc",
            stderr=float(cnt.std(ddof=1) / np.sqrt(nsamples)), seed=seed, atol=PAIR_ATOL))
    return out


def t_ope_counts(weight, N, count, seed, stream):
    samples = sample_ope(weight, N, SeedSpec(seed, stream), count)
    good = sum(len(c) == N for c in samples)
    return [VerificationReport(f"sampling.ope_count[{weight},N={N}]",
                               {"weight": weight, "N": N, "count": count},
                               count, good, 0.0, mode="absolute", seed=seed)]


def t_giambelli_dpp(kernel, T, R, lambdas, doubling, nsd, nsamples, seed):
    return giambelli_mc(make_kernel(kernel), Window.symmetric(T), R, [tuple(l) for l in lambdas],
                        nsamples, seed, nsd=nsd, doubling=doubling)


def t_r_invariance(points, z, w, R, tol):
    X = np.asarray(points, dtype=float)
    z, w = _cx(z), _cx(w)
    T = float(np.max(np.abs(X))) + 1.0
    out = []
    for r in R:
        p = fn.RegularizationParams(R=r, T=T)
        ratio = fn.psi(X, z, None, p).value / fn.psi(X, w, None, p).value
        out.append(VerificationReport(f"regularization.r_invariance[R={r:g}]",
                                      {"points": list(points), "z": z, "w": w, "R": r},
                                      ratio, fn.truncated_ratio(X, z, w, T), tol))
    return out


def t_continuation(points, us, M, rounding):
    X = np.asarray(points, dtype=float)
    p = fn.RegularizationParams(R=1.0, T=float(np.max(np.abs(X))) + 1.0, M=M)
    spec = fn.build_specialization(X, "rho0", p)
    out = []
    for u in _cxs(us):
        s, tail = fn.s_series(spec, u + 1j * p.R)
        rhs = cmath.exp(-s)
        tol = abs(rhs) * float(np.expm1(tail)) + rounding
        out.append(VerificationReport(f"regularization.continuation[u={u.real:g}{u.imag:+g}i]",
                                      {"points": list(points), "u": u, "M": M, "R": p.R},
                                      fn.psi(X, u, None, p).value, rhs, tol, mode="absolute",
                                      extras={"tail_bound": tail}))
    return out


def t_convergence(kernel, sample_T, u_grid, seed, stream):
    K = make_kernel(kernel)
    X = sample_dpp_window(K, Window.symmetric(sample_T), SeedSpec(seed, stream))
    rep = fn.convergence_diagnostic(X, _cxs(u_grid), K, fn.RegularizationParams())
    inc = rep.max_increments
    steps = len(inc) - 1
    ok = int(np.sum(np.diff(inc) <= 0))
    return [VerificationReport(f"regularization.convergence[{K.name}]",
                               {"kernel": K.spec(), "schedule": list(rep.schedule),
                                "u": list(rep.grid), "sample_window": [-sample_T, sample_T]},
                               steps, ok, 0.0, mode="absolute", seed=seed,
                               extras={"max_increments": inc, "uniformity": rep.uniformity})]


# -- suites -------------------------------------------------------------------------

def _tasks_symfun(c, cfg):
    s = c["symfun"]
    out = [("t_symfun_routes", {"max_size": s["max_size"], "n": n}) for n in s["variables"]]
    out.append(("t_symfun_generalized", {"tables": s["tables"], "max_size": s["max_size"],
                                         "max_rank": s["max_rank"]}))
    out.append(("t_symfun_hooks", {"M": s["hook_degree"], "n": s["hook_variables"]}))
    return out


def _tasks_giambelli_ope(c, cfg):
    m, g = c["moments"], c["giambelli_ope"]
    out = [("t_moments", {"weight": wt, "N": N, "shifts": m["shifts"], "tol": m["tol"]})
           for wt in m["weights"] for N in m["N"]]
    out += [("t_giambelli_ope", {"weight": wt, "N": N, "R": R, "max_size": g["max_size"],
                                 "max_rank": g["max_rank"], "tol": g["tol"],
                                 "quadrature_tol": g["quadrature_tol"],
                                 "quadrature_order": g["quadrature_order"]})
            for wt in g["weights"] for N in g["N"] for R in g["R"]]
    return out


def _tasks_fs_ope(c, cfg):
    f = c["fs_ope"]
    wt = f["weight"]
    out = []
    stream = 100
    for N in f["N"]:
        for n in (2, 3):
            zs, ws = f[f"z{n}"], f[f"w{n}"]
            for meth in f["methods"]:
                out.append(("t_fs_ope", {"weight": wt, "N": N, "zs": zs, "ws": ws, "method": meth,
                                         "tol": f["tol"]}))
            if f["mc"]:
                out.append(("t_fs_ope_mc", {"weight": wt, "N": N, "zs": zs, "ws": ws,
                                            "nsamples": cfg.samples, "seed": cfg.seed,
                                            "nsd": f["mc_nsd"], "stream": stream}))
                stream += 1
        cf = f["confluent"]
        out.append(("t_fs_confluent", {"weight": wt, "N": N, "z": cf["z"], "w": cf["w"], "h": cf["h"],
                                       "tol": cf["tol"]}))
        sh = f["shift"]
        out.append(("t_shift", {"weight": wt, "N": N, "a": sh["a"], "z": sh["z"], "w": sh["w"],
                                "R": sh["R"], "M": sh["M"], "tol": sh["tol"]}))
        co = f["coefficient"]
        for p, q in co["degrees"]:
            out.append(("t_coefficient", {"weight": wt, "N": N, "R": co["R"], "p": p, "q": q,
                                          "radius": co["radius"], "sweep": co["sweep"], "tol": co["tol"]}))
    return out


def _tasks_fs_dpp(c, cfg):
    d = c["fs_dpp"]
    return [("t_fs_dpp", {"kernel": d["kernel"], "T": d["T"], "R": d["R"], "z": d["z"], "w": d["w"],
                          "tol": d["tol"], "nsd": d["nsd"], "nsamples": cfg.samples, "seed": cfg.seed})]


def _tasks_fredholm(c, cfg):
    f = c["fredholm"]
    out = [("t_subset", {"rho": rho, "window": win, "z": f["z"], "w": f["w"], "tol": f["tol"]})
           for rho in f["rhos"] for win in f["windows"]]
    out += [("t_drift", {"kernel": cc["kernel"], "window": cc["window"], "z": f["z"], "w": f["w"],
                         "order": f["order"], "tol": f["drift_tol"]}) for cc in f["continuous"]]
    return out


def _tasks_sampling(c, cfg):
    s = c["sampling"]
    out = [("t_discrete_law", {"kernel": s["discrete"], "T": s["T"], "pairs": s["pairs"],
                               "nsamples": cfg.samples, "seed": cfg.seed, "nsd": s["nsd"], "stream": 200})]
    out += [("t_cd_law", {"N": N, "edges": s["edges"], "pair_bins": s["pair_bins"], "nsamples": cfg.samples,
                          "seed": cfg.seed, "nsd": s["nsd"], "stream": 210 + N}) for N in s["cd_N"]]
    out += [("t_ope_counts", {"weight": wt, "N": N, "count": s["ope_count"], "seed": cfg.seed,
                              "stream": 230 + N}) for wt in s["ope_weights"] for N in s["cd_N"]]
    return out


def _tasks_giambelli_dpp(c, cfg):
    g = c["giambelli_dpp"]
    return [("t_giambelli_dpp", {"kernel": g["kernel"], "T": g["T"], "R": g["R"], "lambdas": g["lambdas"],
                                 "doubling": g["doubling"], "nsd": g["nsd"], "nsamples": cfg.samples,
                                 "seed": cfg.seed})]


def _tasks_regularization(c, cfg):
    r = c["regularization"]
    return [("t_r_invariance", {"points": r["points"], "z": r["z"], "w": r["w"], "R": r["R"], "tol": r["tol"]}),
            ("t_continuation", {"points": r["continuation_points"], "us": r["continuation_u"],
                                "M": r["continuation_M"], "rounding": r["rounding"]}),
            ("t_convergence", {"kernel": r["kernel"], "sample_T": r["sample_T"], "u_grid": r["u_grid"],
                               "seed": cfg.seed, "stream": 300})]


_BUILDERS = {
    "symfun": _tasks_symfun,
    "giambelli-ope": _tasks_giambelli_ope,
    "fs-ope": _tasks_fs_ope,
    "fs-dpp": _tasks_fs_dpp,
    "fredholm": _tasks_fredholm,
    "sampling": _tasks_sampling,
    "giambelli-dpp": _tasks_giambelli_dpp,
    "regularization": _tasks_regularization,
}


def build_tasks(cfg: RunConfig) -> list[tuple[str, dict]]:
    names = [s for s in SUITES if s != "all"] if cfg.suite == "all" else [cfg.suite]
    out = []
    for name in names:
        out += _BUILDERS[name](cfg.sections, cfg)
    return out


def run_task(task: tuple[str, dict]) -> list[VerificationReport]:
    name, kwargs = task
    return globals()[name](**kwargs)


def run_suite(cfg: RunConfig) -> list[VerificationReport]:
    """Run every task of the configured suite; reports come back sorted by name."""
    tasks = build_tasks(cfg)
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(run_task, tasks))
    else:
        results = [run_task(t) for t in tasks]
    reports = [r for rs in results for r in rs]
    names = [r.name for r in reports]
    if len(set(names)) != len(names):
        raise RuntimeError("duplicate report names in suite")
    return sorted(reports, key=lambda r: r.name)


# -- output -------------------------------------------------------------------------

SUMMARY_FIELDS = ("name", "pass", "abs_err", "rel_err", "stderr", "tol", "seed")


def reports_json(reports) -> str:
    return json.dumps([r.to_dict() for r in sorted(reports, key=lambda r: r.name)],
                      sort_keys=True, indent=1) + "\n"


def summary_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_FIELDS)
    for r in sorted(reports, key=lambda r: r.name):
        d = r.to_dict()
        w.writerow([d["name"], d["pass"], repr(d["abs_err"]), repr(d["rel_err"]),
                    repr(d["stderr"]) if "stderr" in d else "", repr(d["tol"]),
                    "" if d["seed"] is None else d["seed"]])
    return buf.getvalue()


def write_reports(reports, out_dir, stem: str = "reports") -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    jpath, cpath = out / f"{stem}.json", out / f"{stem}.csv"
    jpath.write_text(reports_json(reports))
    cpath.write_text(summary_csv(reports))
    return jpath, cpath
