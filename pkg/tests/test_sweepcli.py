"""Command-line front end: config handling, CSV contracts, determinism."""

import numpy as np
import pytest

from tlsflow.errors import ConfigError
from tlsflow.sweepcli import GridSpec, build_config, main


def test_grid_values_inclusive_endpoints():
    lin = GridSpec(lo=1.0, hi=2.0, count=5, scale="lin").values()
    assert lin[0] == 1.0 and lin[-1] == 2.0 and lin.size == 5
    log = GridSpec(lo=1e-3, hi=1e-1, count=3, scale="log").values()
    assert log[0] == pytest.approx(1e-3, rel=1e-15)
    assert log[1] == pytest.approx(1e-2, rel=1e-12)
    assert log[-1] == pytest.approx(1e-1, rel=1e-15)


def test_config_defaults_and_overrides(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text(
        "# reference parameters\n"
        "approach = global\n"
        "Omega = 0.05   # scalar coupling\n"
        "T2 = 0.3\n")
    cfg = build_config(str(cfg_file), ["T2=0.25", "c1=0.003"])
    assert cfg.approach == "global"
    assert cfg.t2 == 0.25  # --set wins over the file
    assert cfg.c1 == 0.003
    assert cfg.omega1 == 1.0  # untouched default


def test_config_rejections():
    with pytest.raises(ConfigError, match="bogus"):
        build_config(None, ["bogus=3"])
    with pytest.raises(ConfigError, match="mutually exclusive"):
        build_config(None, ["c2=0.01", "c2_over_c1=2"])
    with pytest.raises(ConfigError, match="approach"):
        build_config(None, ["approach=redfield"])
    with pytest.raises(ConfigError, match="grid"):
        build_config(None, ["Omega=1:2:3"])
    with pytest.raises(ConfigError, match="count"):
        build_config(None, ["Omega=1e-3:1e-1:1:log"])
    with pytest.raises(ConfigError, match="min < max"):
        build_config(None, ["Omega=0.1:0.01:5:log"])
    with pytest.raises(ConfigError, match="min > 0"):
        build_config(None, ["c1=0:0.1:5:log"])
    with pytest.raises(ConfigError, match="threads"):
        build_config(None, ["threads=0"])
    with pytest.raises(ConfigError, match="T1"):
        build_config(None, ["T1=-0.2"])
    with pytest.raises(ConfigError, match="number"):
        build_config(None, ["omega1=abc"])


def test_config_file_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("omega1\n")
    with pytest.raises(ConfigError, match="bad.cfg:1"):
        build_config(str(bad), [])
    with pytest.raises(ConfigError, match="cannot read"):
        build_config(str(tmp_path / "missing.cfg"), [])


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_eigs_csv_shape_and_order(capsys):
    code, out, _ = run_cli(
        ["eigs", "--set", "Omega=1e-3:1e-2:4:log", "--set", "c1=0.002"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "Omega,approach,k,re_lambda_k,im_lambda_k"
    assert len(lines) == 1 + 4 * 3 * 4  # grid x approaches x branches
    # coupling-major, then approach in fixed order, then branch index
    first = [line.split(",") for line in lines[1:13]]
    assert all(row[0] == first[0][0] for row in first)
    assert [row[1] for row in first[::4]] == ["local", "global", "ps"]
    assert [int(row[2]) for row in first[:4]] == [0, 1, 2, 3]


def test_numbers_round_trip_at_17_digits(capsys):
    code, out, _ = run_cli(
        ["steady", "--set", "Omega=0.05", "--set", "approach=ps"], capsys)
    assert code == 0
    header, row = out.splitlines()
    for token in row.split(",")[1:]:
        if token in ("true", "false"):
            continue
        if token == "2":  # hot reservoir index
            continue
        assert format(float(token), ".17g") == token


def test_steady_column_consistency(capsys):
    code, out, _ = run_cli(["steady", "--set", "Omega=0.05"], capsys)
    assert code == 0
    lines = out.splitlines()
    cols = lines[0].split(",")
    assert cols == ["approach", "occ1", "occ2", "coh_re", "coh_im", "J1", "J2",
                    "j_hot", "j_specific", "hot_reservoir", "first_law_residual",
                    "second_law_ok"]
    for line in lines[1:]:
        row = dict(zip(cols, line.split(",")))
        assert row["approach"] in ("local", "global", "ps")
        assert float(row["j_hot"]) == float(row["J2"])  # reservoir 2 is hotter
        assert float(row["j_specific"]) == pytest.approx(
            float(row["j_hot"]) / 0.05, rel=1e-12)
        assert row["second_law_ok"] == "true"


def test_sweep_determinism_across_threads(tmp_path):
    base = ["sweep", "--set", "Omega=1e-3:5e-2:4:log", "--set", "c1=1e-3:1e-2:3:log",
            "--set", "c2_over_c1=2", "--set", "approach=all"]
    out1 = tmp_path / "t1.csv"
    out8 = tmp_path / "t8.csv"
    assert main(base + ["--set", "threads=1", "-o", str(out1)]) == 0
    assert main(base + ["--set", "threads=8", "-o", str(out8)]) == 0
    b1, b8 = out1.read_bytes(), out8.read_bytes()
    assert b1 == b8
    assert b"\r" not in b1  # LF endings only
    assert len(b1.splitlines()) == 1 + 4 * 3 * 3


def test_sweep_flags_skipped_points(capsys):
    # couplings above omega_avg break the dressed frame: rows stay, flagged
    code, out, _ = run_cli(
        ["sweep", "--set", "omega1=0.3", "--set", "omega2=0.3",
         "--set", "Omega=0.1:0.4:4:lin", "--set", "approach=ps",
         "--set", "c1=0.002"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 5  # rectangular grid kept
    skipped = [line.split(",")[-1] for line in lines[1:]]
    assert skipped == ["false", "false", "true", "true"]
    nan_row = lines[3].split(",")
    assert nan_row[3] == "nan" and nan_row[4] == "nan"


def test_optline_requires_single_approach_and_grid(capsys):
    code, _, err = run_cli(
        ["optline", "--set", "approach=all", "--set", "Omega=1e-3:1e-1:8:log"], capsys)
    assert code == 2 and "approach" in err
    code, _, err = run_cli(
        ["optline", "--set", "approach=local", "--set", "Omega=0.05"], capsys)
    assert code == 2 and "Omega" in err


def test_optline_smoke(capsys):
    code, out, _ = run_cli(
        ["optline", "--set", "approach=local", "--set", "Omega=1e-4:5e-2:10:log",
         "--set", "c1=1e-3:1e-2:3:log", "--set", "c2_over_c1=2"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "gamma1_ref,Omega_star,j_star,boundary"
    assert len(lines) == 4
    for line in lines[1:]:
        gref, om_star, j_star, boundary = line.split(",")
        assert float(j_star) > 0.0
        assert boundary == "false"
        assert 1e-4 <= float(om_star) <= 5e-2


def test_unknown_key_exits_2(capsys):
    code, _, err = run_cli(["sweep", "--set", "bogus=1"], capsys)
    assert code == 2
    assert "config error" in err and "bogus" in err


def test_validate_single_criterion(capsys):
    code, out, _ = run_cli(["validate", "--only", "c04"], capsys)
    assert code == 0
    lines = [line for line in out.splitlines() if line.strip()]
    assert len(lines) == 1
    assert lines[0].startswith("c04") and "PASS" in lines[0]


def test_validate_rejects_unknown_ids(capsys):
    code, _, err = run_cli(["validate", "--only", "c99"], capsys)
    assert code == 2
    code, _, err = run_cli(["validate", "--dev-mutate", "nonsense"], capsys)
    assert code == 2


def test_validate_mutation_canary(capsys):
    # deliberately broken sign convention must fail the closed-form gates
    code, out, _ = run_cli(
        ["validate", "--only", "c01", "--dev-mutate", "local-sign"], capsys)
    assert code == 1
    assert "FAIL" in out


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
