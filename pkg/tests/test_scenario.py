import numpy as np
import pytest

import fademem as fm
from fademem.scenario import ScenarioError

# small but honest configuration: probes sit where the slow forcing phase
# gives a clean decay reading within a 60-unit horizon
SMALL = dict(theta_nodes=200, n_modes=2, step_h=2e-3, t_final=60.0,
             residual_probe_early=10.0, residual_probe_late=56.0,
             uniqueness_t_final=45.0, twotone_t_final=40.0,
             trajectory_stride=50)


def small_config(**extra):
    kw = dict(SMALL)
    kw.update(extra)
    return fm.ScenarioConfig(**kw)


def test_config_validation():
    with pytest.raises(ValueError):
        fm.ScenarioConfig(t_final=-1.0)
    with pytest.raises(ValueError):
        fm.ScenarioConfig(forcing_kind="noise")
    with pytest.raises(ValueError):
        fm.ScenarioConfig(t_final=100.0)  # default late probe no longer fits
    with pytest.raises(ValueError):
        fm.ScenarioConfig(uniqueness_t_final=30.0)  # decay probe at 40


def test_config_digest_is_stable():
    assert fm.ScenarioConfig().digest() == fm.ScenarioConfig().digest()
    assert fm.ScenarioConfig().digest() != small_config().digest()


def test_parse_config_and_overrides(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# comment line\n"
        "n_modes = 3\n"
        "step_h = 0.002   # inline comment\n"
        "forcing_kind = periodic\n"
        "residual_probe_early = 10\n"
        "residual_probe_late = 50\n"
        "t_final = 60\n")
    config = fm.parse_config(path)
    assert config.n_modes == 3
    assert config.step_h == pytest.approx(0.002)
    assert config.forcing_kind == "periodic"
    bumped = fm.apply_overrides(config, {"n_modes": "5"})
    assert bumped.n_modes == 5
    with pytest.raises(ValueError):
        fm.apply_overrides(config, {"gamma_typo": "1"})
    with pytest.raises(FileNotFoundError):
        fm.parse_config(tmp_path / "absent.cfg")
    bad = tmp_path / "bad.cfg"
    bad.write_text("just words\n")
    with pytest.raises(ValueError):
        fm.parse_config(bad)


def test_small_scenario_verdicts(tmp_path):
    report = fm.run_scenario(small_config(), out_dir=tmp_path / "out")
    assert report.sigma_gamma_empty
    assert report.asymptotic_periodic
    assert report.uniqueness_mod_c0
    assert report.nonperiodic_forcing_propagates
    assert report.all_true
    for name in ("spectrum.json", "trajectory.csv", "residual.csv",
                 "uniqueness.csv", "twotone_residual.csv", "verdict.json"):
        assert (tmp_path / "out" / name).exists()


def test_verdicts_recomputable_from_artifacts(tmp_path):
    out = tmp_path / "out"
    config = small_config()
    report = fm.run_scenario(config, out_dir=out)
    from fademem import io as fio
    t, r = fio.read_curve_csv(out / "residual.csv")
    ie = np.argmin(np.abs(t - config.residual_probe_early))
    il = np.argmin(np.abs(t - config.residual_probe_late))
    assert t[ie] == config.residual_probe_early  # probes survive the stride
    recomputed = (r[il] < r[ie] / config.residual_decrease_factor
                  and r[il] < config.residual_threshold)
    assert recomputed == report.asymptotic_periodic
    td, d = fio.read_curve_csv(out / "uniqueness.csv")
    i40 = np.argmin(np.abs(td - config.uniqueness_decay_time))
    assert (d[i40] < config.uniqueness_decay_factor * d[0]) \
        == (report.evidence["uniqueness_d_decay"]
            < config.uniqueness_decay_factor * report.evidence["uniqueness_d0"])
    verdict = fio.read_json(out / "verdict.json")
    assert verdict["verdicts"]["all_true"]
    assert verdict["provenance"]["config_sha256"] == config.digest()


def test_scenario_outputs_deterministic(tmp_path):
    config = small_config(t_final=20.0, residual_probe_early=5.0,
                          residual_probe_late=18.0, uniqueness_t_final=16.0,
                          uniqueness_decay_time=15.0, uniqueness_window_lo=5.0,
                          uniqueness_window_hi=10.0, twotone_t_final=10.0)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    fm.run_scenario(config, out_dir=out1)
    fm.run_scenario(config, out_dir=out2)
    for name in ("spectrum.json", "trajectory.csv", "residual.csv",
                 "uniqueness.csv", "twotone_residual.csv", "verdict.json"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name


def test_scenario_stage_labels(tmp_path):
    config = small_config(theta_nodes=150)  # lag spacing does not divide 1
    with pytest.raises(ScenarioError) as err:
        fm.run_scenario(config, out_dir=tmp_path / "out")
    assert err.value.stage == "monodromy"
    assert "monodromy" in str(err.value)


def test_scenario_epsilon_channel(tmp_path):
    config = small_config(epsilon_kind="exp_decay", epsilon_scale=0.5)
    report = fm.run_scenario(config)
    # a vanishing perturbation must not break any asymptotic verdict
    assert report.all_true


def test_default_scenario_all_verdicts(scenario_outcome):
    report, out = scenario_outcome
    assert report.all_true
    assert report.evidence["max_modulus"] == pytest.approx(0.7461, abs=1e-2)
    assert (out / "verdict.json").exists()
