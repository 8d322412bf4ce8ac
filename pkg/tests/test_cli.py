import csv
import io
import json
import time

import pytest

from giambelli_dpp.cli import ReportParseError, load_reports, main, parse_kernel_spec, plot_csv
from giambelli_dpp.identities import giambelli_mc
from giambelli_dpp.kernels import Window, make_kernel
from giambelli_dpp.sampling import read_samples_csv
from giambelli_dpp.suites import ConfigError, RunConfig, build_tasks, summary_csv


def test_verify_symfun_passes_and_is_deterministic(tmp_path, capsys):
    t0 = time.perf_counter()
    assert main(["verify", "symfun", "--out", str(tmp_path / "a")]) == 0
    assert time.perf_counter() - t0 < 60
    assert main(["verify", "symfun", "--out", str(tmp_path / "b")]) == 0
    for ext in ("json", "csv"):
        a = (tmp_path / "a" / f"symfun.{ext}").read_bytes()
        b = (tmp_path / "b" / f"symfun.{ext}").read_bytes()
        assert a == b
    data = json.loads((tmp_path / "a" / "symfun.json").read_text())
    assert data and all(d["pass"] for d in data)
    assert [d["name"] for d in data] == sorted(d["name"] for d in data)


def test_empty_suite_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", ""])
    assert exc.value.code != 0


def test_unknown_suite(tmp_path, capsys):
    assert main(["verify", "nope", "--out", str(tmp_path)]) == 2
    assert "suite" in capsys.readouterr().err


def test_config_errors_name_the_field(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("[fs_ope]\ntol = -1.0\n")
    with pytest.raises(ConfigError, match=r"fs_ope\.tol"):
        RunConfig.load("fs-ope", bad)
    bad.write_text("[fs_ope.confluent]\ntol = 0\n")
    with pytest.raises(ConfigError, match=r"fs_ope\.confluent\.tol"):
        RunConfig.load("fs-ope", bad)
    with pytest.raises(ConfigError, match="samples"):
        RunConfig.load("sampling", samples=10)
    RunConfig.load("symfun", samples=10)


def test_config_error_exit_status(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text("seed = -3\n")
    assert main(["verify", "symfun", "--config", str(bad), "--out", str(tmp_path)]) == 2
    assert "seed" in capsys.readouterr().err


def test_malformed_toml(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("seed = = 1\n")
    with pytest.raises(ConfigError):
        RunConfig.load("symfun", bad)


def test_flag_overrides_reach_tasks():
    cfg = RunConfig.load("fs-dpp", seed=7, samples=2000)
    (_, kw), = build_tasks(cfg)
    assert kw["seed"] == 7 and kw["nsamples"] == 2000


def test_all_suite_collects_every_builder():
    names = {t[0] for t in build_tasks(RunConfig.load("all"))}
    assert {"t_symfun_routes", "t_fs_dpp", "t_subset", "t_cd_law", "t_continuation"} <= names


def test_failing_report_gives_nonzero_exit(tmp_path, capsys):
    cfg = tmp_path / "c.toml"
    cfg.write_text("[fredholm]\nrhos = [0.5]\nwindows = [[0, 3]]\ncontinuous = []\ntol = 1e-30\n"
                   "drift_tol = 1e-30\n")
    assert main(["verify", "fredholm", "--config", str(cfg), "--out", str(tmp_path)]) == 1
    err = capsys.readouterr().err
    assert "failed reports" in err and "fredholm_subset" in err


def test_kernel_spec_parsing():
    assert parse_kernel_spec("discrete_sine:rho=0.5") == {"kind": "discrete_sine", "rho": 0.5}
    assert parse_kernel_spec("cd:weight=gaussian,n=3") == {"kind": "cd", "weight": "gaussian", "n": 3}
    with pytest.raises(ValueError):
        parse_kernel_spec("cd:n3")


def test_sample_command(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["sample", "discrete_sine:rho=0.5", "--window", "5", "--count", "50", "--out", str(out)]) == 0
    confs = read_samples_csv(out)
    assert len(confs) == 50
    assert all(-5 <= p <= 5 for c in confs for p in c.points)
    out2 = tmp_path / "t.csv"
    main(["sample", "discrete_sine:rho=0.5", "--window", "5", "--count", "50", "--out", str(out2)])
    assert out.read_bytes() == out2.read_bytes()


def test_sample_bad_kernel(tmp_path, capsys):
    assert main(["sample", "nosuch:a=1", "--window", "5", "--count", "5", "--out", str(tmp_path / "x")]) == 2


# -- plot ------------------------------------------------------------------------------

def _reports_file(tmp_path, reports):
    p = tmp_path / "r.json"
    p.write_text(json.dumps([r.to_dict() for r in reports], indent=1))
    return p


def test_plot_single_report(tmp_path, capsys):
    from giambelli_dpp.identities import VerificationReport
    p = _reports_file(tmp_path, [VerificationReport("x", {}, 1.0, 1.0, 1e-10)])
    assert main(["plot", str(p), "--kind", "convergence"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 1 and rows[0]["name"] == "x"


def test_plot_window_doubling_is_monotone(tmp_path):
    K = make_kernel({"kind": "discrete_sine", "rho": 0.5})
    reps = giambelli_mc(K, Window(-10, 10), 1.0, [(2, 2), (2, 1, 1)], 2000, 4)
    rows = list(csv.DictReader(io.StringIO(plot_csv(load_reports(_reports_file(tmp_path, reps))))))
    assert len(rows) == 4 and {r["axis"] for r in rows} == {"window"}
    for name in {r["name"] for r in rows}:
        xs = [float(r["x"]) for r in rows if r["name"] == name]
        assert xs == sorted(xs) and xs[0] < xs[1]


def test_plot_malformed_report_reports_line(tmp_path, capsys):
    p = tmp_path / "m.json"
    p.write_text('[\n {"name": "x",\n  "lhs": ,\n}\n]\n')
    with pytest.raises(ReportParseError, match=r"m\.json:3: parse error"):
        load_reports(p)
    assert main(["plot", str(p)]) == 2
    assert "m.json:3" in capsys.readouterr().err


def test_plot_schema_violation(tmp_path):
    p = tmp_path / "s.json"
    p.write_text('[{"name": "x"}]')
    with pytest.raises(ReportParseError):
        load_reports(p)


def test_plot_missing_input(tmp_path, capsys):
    assert main(["plot", str(tmp_path / "absent.json")]) == 2


def test_summary_csv_header():
    assert summary_csv([]).splitlines() == ["name,pass,abs_err,rel_err,stderr,tol,seed"]
