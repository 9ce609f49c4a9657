import numpy as np
import pytest

import fademem as fm

DEFAULTS = dict(theta_max=40.0, theta_nodes=400, h=1e-3, n_modes=8)


@pytest.fixture(scope="session")
def std_grid():
    return fm.uniform_theta_grid(40.0, 400)


@pytest.fixture(scope="session")
def zero_history(std_grid):
    return fm.History(std_grid, np.zeros((std_grid.size, 8)))


@pytest.fixture(scope="session")
def sin_sqrt_forcing():
    return fm.ForcingSpec("sin_sqrt")


@pytest.fixture(scope="session")
def traj5_modal(zero_history, sin_sqrt_forcing):
    """Forced run over [0, 5] at defaults, memory-reduction route."""
    return fm.solve_modal(zero_history, sin_sqrt_forcing, 5.0, 1e-3)


@pytest.fixture(scope="session")
def traj5_quad(zero_history, sin_sqrt_forcing):
    """Same run, history-quadrature route."""
    return fm.solve_quadrature(zero_history, fm.ExpKernel(), sin_sqrt_forcing,
                               5.0, 1e-3)


@pytest.fixture(scope="session")
def monodromy_default():
    P = fm.build_monodromy(n_modes=4)
    return fm.spectrum(P)


@pytest.fixture(scope="session")
def monodromy_refined():
    P = fm.build_monodromy(n_modes=4, theta_nodes=800, h=5e-4)
    return fm.spectrum(P)


@pytest.fixture(scope="session")
def scenario_outcome(tmp_path_factory):
    """One full default scenario run shared across acceptance tests."""
    out = tmp_path_factory.mktemp("scenario")
    report = fm.run_scenario(fm.ScenarioConfig(), out_dir=out)
    return report, out
