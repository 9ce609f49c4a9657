import numpy as np

import fademem as fm
from fademem import io as fio


def test_fmt_round_trips_doubles():
    rng = np.random.default_rng(0)
    for x in rng.standard_normal(200) * 10.0 ** rng.integers(-12, 12, 200):
        assert float(fio.fmt(x)) == x


def test_history_csv_round_trip(tmp_path, std_grid):
    rng = np.random.default_rng(1)
    phi = fm.History(std_grid, rng.standard_normal((std_grid.size, 3)))
    path = tmp_path / "h.csv"
    fio.write_history_csv(path, phi)
    back = fio.read_history_csv(path, gamma=phi.gamma)
    assert np.array_equal(back.values, phi.values)
    assert np.array_equal(back.theta_grid, phi.theta_grid)


def test_trajectory_csv_round_trip(tmp_path):
    rng = np.random.default_rng(2)
    traj = fm.Trajectory(0.0, 0.125, rng.standard_normal((17, 2)))
    path = tmp_path / "t.csv"
    fio.write_trajectory_csv(path, traj)
    back = fio.read_trajectory_csv(path)
    assert np.array_equal(back.values, traj.values)
    assert back.step == traj.step
    assert back.t0 == traj.t0


def test_trajectory_csv_stride_stays_uniform(tmp_path):
    traj = fm.Trajectory(0.0, 0.5, np.arange(11.0)[:, None])
    path = tmp_path / "t.csv"
    fio.write_trajectory_csv(path, traj, stride=4)
    back = fio.read_trajectory_csv(path)
    assert np.array_equal(back.values[:, 0], [0.0, 4.0, 8.0])
    assert back.step == 2.0


def test_curve_csv_round_trip(tmp_path):
    t = np.linspace(0, 1, 11)
    r = np.sin(t)
    path = tmp_path / "c.csv"
    fio.write_curve_csv(path, t, r)
    t2, r2 = fio.read_curve_csv(path)
    assert np.array_equal(t, t2) and np.array_equal(r, r2)


def test_spectrum_json_payload(tmp_path, monodromy_default):
    path = tmp_path / "s.json"
    fio.write_spectrum_json(path, monodromy_default)
    payload = fio.read_json(path)
    assert payload["sigma_gamma_empty"] is True
    ev00 = payload["eigenvalues"][0][0]
    top = monodromy_default.eigenvalues[0][0]
    assert ev00 == [top.real, top.imag]
    assert len(payload["matches"]) == len(monodromy_default.matches)


def test_write_json_deterministic(tmp_path):
    payload = {"b": 1.0 / 3.0, "a": [1, 2.5e-17], "c": {"x": True}}
    p1, p2 = tmp_path / "1.json", tmp_path / "2.json"
    fio.write_json(p1, payload)
    fio.write_json(p2, payload)
    assert p1.read_bytes() == p2.read_bytes()
    assert fio.read_json(p1)["b"] == 1.0 / 3.0


def test_svg_plots_render(tmp_path, monodromy_default):
    t = np.linspace(0, 10, 101)
    fio.plot_curve_svg(tmp_path / "c.svg", t, np.exp(-t), title="decay",
                       logy=True)
    text = (tmp_path / "c.svg").read_text()
    assert text.startswith("<svg") and "polyline" in text
    fio.plot_spectrum_svg(tmp_path / "s.svg", monodromy_default)
    assert "<circle" in (tmp_path / "s.svg").read_text()
