import dataclasses
from pathlib import Path

import pytest

from acflow import harness as H
from acflow.cli import main

REPO = Path(__file__).resolve().parents[1]
SMOKE = REPO / "configs" / "smoke.cfg"


def write_tiny(path, out_dir, epsilons="0.08, 0.04", extra="") -> Path:
    path.write_text(
        "grid.n1 = 128\ngrid.n2 = 128\n"
        f"sweep.epsilons = {epsilons}\n"
        "stepper.t_end = 0.004\nstepper.snapshot_cadence = 1\n"
        "windows.fit = 0.0, 0.004\n"
        f"output.dir = {out_dir}\n" + extra)
    return path


def test_profile_table_starts_at_zero(tmp_path, capsys):
    out = tmp_path / "p.csv"
    assert main(["profile", "--epsilon", "0.05", "--weight-c", "0",
                 "--output", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "tau,h,h_prime"
    tau0, h0, _ = lines[1].split(",")
    assert float(tau0) == 0.0 and float(h0) == 0.0
    assert str(out) in capsys.readouterr().out


def test_profile_respects_output_root(tmp_path, monkeypatch):
    monkeypatch.setenv("ACFLOW_OUTPUT_ROOT", str(tmp_path))
    assert main(["profile", "--epsilon", "0.1", "--output",
                 "tables/p.csv", "--stride", "40"]) == 0
    assert (tmp_path / "tables" / "p.csv").exists()


def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as err:
        main(["profile", "--epsilon", "0.05", "--frobnicate"])
    assert err.value.code == 2


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as err:
        main(["mystery"])
    assert err.value.code == 2


def test_missing_config_file_exits_1(capsys):
    assert main(["verify", "--config", "/no/such/file.cfg"]) == 1
    assert "error" in capsys.readouterr().err


def test_config_problems_listed_on_stderr(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("sweep.epsilons = 0.04, 0.08\ndata.mode = odd\n"
                   f"output.dir = {tmp_path / 'o'}\n")
    assert main(["sweep", "--config", str(cfg)]) == 1
    err = capsys.readouterr().err
    assert "strictly decreasing" in err and "odd" in err


def test_sweep_writes_one_dir_per_member(tmp_path, capsys):
    cfg = write_tiny(tmp_path / "tri.cfg", tmp_path / "out",
                     epsilons="0.08, 0.06, 0.04")
    assert main(["sweep", "--config", str(cfg), "--workers", "3"]) == 0
    dirs = sorted(p.name for p in (tmp_path / "out").glob("eps_*"))
    assert dirs == ["eps_0.0400", "eps_0.0600", "eps_0.0800"]
    assert capsys.readouterr().out.count("run dir") == 3


def test_evolve_runs_one_member(tmp_path):
    cfg = write_tiny(tmp_path / "t.cfg", tmp_path / "out")
    assert main(["evolve", "--config", str(cfg), "--epsilon", "0.04"]) == 0
    assert [p.name for p in (tmp_path / "out").glob("eps_*")] == ["eps_0.0400"]


def test_verify_smoke_config_exits_zero(tmp_path, capsys):
    cfg = dataclasses.replace(H.read_config(SMOKE),
                              output_dir=str(tmp_path / "smoke"))
    path = tmp_path / "smoke.cfg"
    path.write_text(H.serialize_config(cfg))
    assert main(["verify", "--config", str(path)]) == 0
    out = capsys.readouterr().out
    assert "13/13 checks passed" in out
    assert "FAIL" not in out


def test_verify_exits_nonzero_on_failed_check(tmp_path, capsys):
    cfg = write_tiny(tmp_path / "t.cfg", tmp_path / "out",
                     extra="verify.surface_tension_rel_tol = 1e-12\n")
    assert main(["verify", "--config", str(cfg)]) == 1
    assert "FAIL surface_tension" in capsys.readouterr().out


def test_kernel_check_passes(capsys):
    assert main(["kernel-check", "--samples", "200", "--seed", "3"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "radial identity" in out
