import dataclasses
import json
import math
from pathlib import Path

import pytest

from acflow import diagnostics as D
from acflow import harness as H

REPO = Path(__file__).resolve().parents[1]
SMOKE = REPO / "configs" / "smoke.cfg"

VERDICT_NAMES = (
    "profile_oracle", "discrepancy_1d_sweep", "kernel_identity",
    "kernel_fd_refinement", "geometry_convergence", "energy_dissipation",
    "discrepancy_decay", "z_bound", "monotonicity", "density_bound",
    "mcf_convergence", "surface_tension", "bv_bounds",
)


def tiny_config(out_dir, epsilons=(0.08, 0.04)) -> H.ExperimentConfig:
    """128-squared flat run, short horizon; every member finishes in ~1 s."""
    return H.ExperimentConfig(
        n1=128, n2=128, epsilons=tuple(epsilons), t_end=0.004,
        snapshot_cadence=1, fit_window=(0.0, 0.004), output_dir=str(out_dir))


@pytest.fixture(scope="module")
def smoke_experiment(tmp_path_factory):
    out = tmp_path_factory.mktemp("smoke")
    cfg = dataclasses.replace(H.read_config(SMOKE), output_dir=str(out))
    return cfg, H.run_experiment(cfg), out


# ---------------------------------------------------------------- config io


def test_config_round_trip_defaults():
    cfg = H.read_config(SMOKE)
    assert H.parse_config(H.serialize_config(cfg)) == cfg


def test_config_round_trip_every_key():
    cfg = H.ExperimentConfig(
        geometry_kind="hyperbolic", geometry_size=2.2, n1=96, n2=128,
        epsilons=(0.1, 0.05), center=(0.9, 1.0), radius=0.55, orientation=-1,
        data_mode="general", delta=0.06, seed=7, weight_c=1.5,
        allow_invalid_weight=True, scheme="explicit-rk2", dt_safety=0.5,
        t_end=0.006, snapshot_cadence=2, dt_override=1e-5,
        kernel_pole=(1.3, 1.0), kernel_s=0.009, fit_window=(0.001, 0.005),
        decay_window=(0.002, 0.006), output_dir="runs/x",
        decay_min_exponent=0.9, radius_tol=0.03, extinction_rel_tol=0.2,
        surface_tension_rel_tol=0.08)
    assert H.parse_config(H.serialize_config(cfg)) == cfg


def test_parse_reports_unknown_duplicate_and_malformed_lines():
    text = "grid.n1 = 64\nbogus.key = 1\ngrid.n1 = 128\njust words\n"
    with pytest.raises(H.ConfigError) as err:
        H.parse_config(text)
    problems = err.value.problems
    assert len(problems) == 3
    assert any("unknown key" in p for p in problems)
    assert any("duplicate key" in p for p in problems)
    assert any("expected key = value" in p for p in problems)


def test_parse_bad_value_names_the_key():
    with pytest.raises(H.ConfigError, match="grid.n1"):
        H.parse_config("grid.n1 = not_a_number\n")


def test_parse_comments_and_blank_lines():
    cfg = H.parse_config("# leading comment\n\ngrid.n1 = 64  # trailing\n")
    assert cfg.n1 == 64


# ------------------------------------------------------------- validation


def test_validate_empty_sweep():
    cfg = H.ExperimentConfig(epsilons=())
    assert any("nonempty" in p for p in H.validate_config(cfg))


def test_validate_lists_every_problem_before_compute():
    cfg = H.ExperimentConfig(epsilons=(0.04, 0.08), data_mode="odd",
                             scheme="mystery", t_end=-1.0)
    problems = H.validate_config(cfg)
    assert len(problems) >= 4
    joined = "\n".join(problems)
    for fragment in ("strictly decreasing", "odd", "mystery", "t_end"):
        assert fragment in joined


def test_validate_unresolvable_epsilon():
    cfg = H.ExperimentConfig(n1=64, n2=64, epsilons=(0.02,))
    assert any("unresolvable" in p for p in H.validate_config(cfg))


def test_validate_weight_gate_and_control_escape():
    # c = 0 cannot certify the negatively curved case; the control escape
    # records the run without gating
    cfg = H.ExperimentConfig(geometry_kind="hyperbolic", geometry_size=2.2,
                             epsilons=(0.2, 0.12), weight_c=0.0)
    assert any("weight" in p for p in H.validate_config(cfg))
    control = dataclasses.replace(cfg, allow_invalid_weight=True)
    assert H.validate_config(control) == []
    assert any("weight" in p
               for p in H.validate_config(H.ExperimentConfig(weight_c=-1.0)))


def test_validate_kernel_reference_time_after_horizon():
    cfg = H.ExperimentConfig(kernel_s=0.01)  # t_end defaults to 0.02
    assert any("kernel.s" in p for p in H.validate_config(cfg))


def test_derived_defaults_for_smoke():
    cfg = H.read_config(SMOKE)
    assert cfg.pole() == (0.8, 0.5)
    assert cfg.reference_time() == pytest.approx(0.025)
    assert cfg.fit_bounds() == (pytest.approx(0.005), pytest.approx(0.0184))
    assert cfg.decay_bounds() == (pytest.approx(0.012), pytest.approx(0.02))
    assert cfg.truncation().delta == pytest.approx(0.025)


def test_run_experiment_raises_config_error_without_output(tmp_path):
    out = tmp_path / "never"
    cfg = H.ExperimentConfig(epsilons=(), output_dir=str(out))
    with pytest.raises(H.ConfigError):
        H.run_experiment(cfg)
    assert not out.exists()


def test_output_root_env_applies_to_relative_dirs(monkeypatch, tmp_path):
    monkeypatch.setenv("ACFLOW_OUTPUT_ROOT", str(tmp_path))
    rel = H.ExperimentConfig(output_dir="runs/here")
    assert H._resolve_output_dir(rel) == tmp_path / "runs" / "here"
    abso = H.ExperimentConfig(output_dir=str(tmp_path / "fixed"))
    assert H._resolve_output_dir(abso) == tmp_path / "fixed"


# ------------------------------------------------------------ decay verdict


def test_decay_verdict_fits_resolved_members():
    cfg = H.ExperimentConfig()
    pts = [{"epsilon": 0.1, "decay_disc_sup": 0.1},
           {"epsilon": 0.05, "decay_disc_sup": 0.04}]
    v = H._decay_verdict(cfg, pts, h_band=1e-4)
    assert v.passed
    assert v.measured == pytest.approx(math.log(2.5) / math.log(2.0), rel=1e-12)


def test_decay_verdict_rejects_growing_resolved_sequence():
    cfg = H.ExperimentConfig()
    pts = [{"epsilon": 0.1, "decay_disc_sup": 0.01},
           {"epsilon": 0.05, "decay_disc_sup": 0.04}]
    v = H._decay_verdict(cfg, pts, h_band=1e-4)
    assert not v.passed
    assert "not decreasing" in v.note


def test_decay_verdict_floor_semantics():
    # both members below (h_band/eps)^2: unresolved, passes with the floor note
    cfg = H.ExperimentConfig()
    pts = [{"epsilon": 0.08, "decay_disc_sup": 0.0},
           {"epsilon": 0.04, "decay_disc_sup": 4e-4}]
    v = H._decay_verdict(cfg, pts, h_band=1.0 / 256.0)
    assert v.passed and "floor" in v.note


# ------------------------------------------------------- smoke experiment


def test_smoke_emits_one_verdict_per_check(smoke_experiment):
    _, res, _ = smoke_experiment
    assert tuple(v.check for v in res.verdicts) == VERDICT_NAMES
    assert res.all_passed


def test_smoke_artifact_layout(smoke_experiment):
    cfg, res, out = smoke_experiment
    assert (out / "config.cfg").exists()
    assert (out / "verdicts.json").exists()
    assert (out / "sweep_meta.json").exists()
    assert H.read_config(out / "config.cfg") == cfg
    for run_dir, eps in zip(res.run_dirs, cfg.epsilons):
        d = Path(run_dir)
        assert d.name == f"eps_{eps:.4f}"
        for name in ("diagnostics.csv", "initial.snap", "final.snap",
                     "summary.json"):
            assert (d / name).exists()


def test_smoke_csv_columns_fully_populated(smoke_experiment):
    _, res, _ = smoke_experiment
    recs = D.read_diagnostics_csv(Path(res.run_dirs[0]) / "diagnostics.csv")
    assert len(recs) == 18  # cadence 3 over 50 steps plus endpoints
    interior = recs[1:-1]
    for col in D.CSV_COLUMNS:
        assert any(not math.isnan(getattr(r, col)) for r in interior), col
    # endpoint rows carry nan only where a centered difference cannot exist
    assert math.isnan(recs[0].brakke_residual)
    assert math.isnan(recs[-1].brakke_residual)


def test_smoke_verdict_fields_and_json(smoke_experiment):
    _, res, out = smoke_experiment
    payload = json.loads((out / "verdicts.json").read_text())
    assert len(payload["checks"]) == len(VERDICT_NAMES)
    for entry in payload["checks"]:
        assert set(entry) == {"check", "passed", "measured", "threshold",
                              "note"}
    by_name = {e["check"]: e for e in payload["checks"]}
    assert by_name["discrepancy_decay"]["note"].count("floor") == 1
    assert by_name["mcf_convergence"]["measured"] <= 0.02
    assert by_name["z_bound"]["measured"] <= 1.05


def test_smoke_meta_decay_points(smoke_experiment):
    cfg, res, out = smoke_experiment
    meta = json.loads((out / "sweep_meta.json").read_text())
    assert [p[0] for p in meta["decay_points"]] == list(cfg.epsilons)
    assert meta["sigma0"] == pytest.approx(4.0 / 3.0, rel=1e-9)


# --------------------------------------------------- determinism, workers


def test_rerun_is_bit_identical(tmp_path):
    a = tiny_config(tmp_path / "a", epsilons=(0.08,))
    b = tiny_config(tmp_path / "b", epsilons=(0.08,))
    H.run_experiment(a, with_global_checks=False)
    H.run_experiment(b, with_global_checks=False)
    csv_a = (tmp_path / "a" / "eps_0.0800" / "diagnostics.csv").read_bytes()
    csv_b = (tmp_path / "b" / "eps_0.0800" / "diagnostics.csv").read_bytes()
    assert csv_a == csv_b


def test_worker_pool_matches_sequential(tmp_path):
    seq = tiny_config(tmp_path / "seq")
    par = tiny_config(tmp_path / "par")
    H.run_experiment(seq, with_global_checks=False)
    H.run_experiment(par, workers=2, with_global_checks=False)
    for eps in ("0.0800", "0.0400"):
        a = (tmp_path / "seq" / f"eps_{eps}" / "diagnostics.csv").read_bytes()
        b = (tmp_path / "par" / f"eps_{eps}" / "diagnostics.csv").read_bytes()
        assert a == b
