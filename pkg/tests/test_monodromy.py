import numpy as np
import pytest
from scipy.linalg import expm

import fademem as fm

# frozen from the quadratic formula on lam^2 + (1 + n^2) lam + n^2 - 1/2
ROOTS_N1 = (-1.7071067811865475, -0.2928932188134525)   # -1 -/+ sqrt(2)/2
ROOTS_N2 = (-4.1583123951777, -0.8416876048223001)      # (-5 -/+ sqrt(11))/2
MULT_N1 = (0.18138983464961517, 0.7461018060799022)
MULT_N2 = (0.015633919547741473, 0.43098258108017784)


def test_characteristic_roots_frozen_values():
    np.testing.assert_allclose(fm.characteristic_roots(1), ROOTS_N1, rtol=1e-14)
    np.testing.assert_allclose(fm.characteristic_roots(2), ROOTS_N2, rtol=1e-14)


@pytest.mark.parametrize("n", range(1, 9))
def test_characteristic_roots_satisfy_equation(n):
    for lam in fm.characteristic_roots(n):
        resid = lam * lam + (1 + n * n) * lam + n * n - 0.5
        assert abs(resid) <= 1e-12


@pytest.mark.parametrize("n", range(1, 9))
def test_discriminant_closed_form(n):
    assert fm.characteristic_discriminant(n) == (1 - n * n) ** 2 + 2


def test_roots_are_negative_and_ordered():
    for n in range(1, 17):
        lo, hi = fm.characteristic_roots(n)
        assert lo < hi < 0.0


def test_multiplier_oracle_frozen_values():
    np.testing.assert_allclose(fm.multiplier_oracle(1), MULT_N1, rtol=1e-12)
    np.testing.assert_allclose(fm.multiplier_oracle(2), MULT_N2, rtol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_multiplier_oracle_against_matrix_exponential(n):
    # independent route: eigenvalues of expm of the reduced 2x2 generator
    mus = np.sort(np.linalg.eigvals(expm(fm.memory_reduced_generator(n))).real)
    np.testing.assert_allclose(mus, fm.multiplier_oracle(n), rtol=1e-6)
    assert mus[1] == pytest.approx(fm.multiplier_oracle(n)[1], rel=1e-12)


@pytest.mark.parametrize("n", [5, 8])
def test_multiplier_oracle_dominant_large_modes(n):
    # the subdominant multiplier underflows the matrix-exponential route for
    # large n; the dominant one still cross-checks at full precision
    mus = np.linalg.eigvals(expm(fm.memory_reduced_generator(n))).real
    assert mus.max() == pytest.approx(fm.multiplier_oracle(n)[1], rel=1e-12)


def test_multipliers_inside_unit_disk():
    for n in range(1, 17):
        assert max(abs(m) for m in fm.multiplier_oracle(n)) < 1.0


def test_truncated_root_approaches_ideal_root():
    lam_plus = fm.characteristic_roots(2)[1]
    gaps = [abs(fm.truncated_characteristic_root(2, th) - lam_plus)
            for th in (40.0, 80.0, 160.0)]
    assert gaps[1] < gaps[0] / 50
    assert gaps[2] < gaps[1] / 50


def test_truncated_root_quantifies_mode4_gap():
    # at the default truncation the mode-4 slow root sits ~1.8% away from
    # the ideal quadratic root; this gap bounds what the discretized period
    # map can reproduce
    lam_plus = fm.characteristic_roots(4)[1]
    lam_trunc = fm.truncated_characteristic_root(4, 40.0)
    rel = abs(np.exp(lam_trunc) - np.exp(lam_plus)) / np.exp(lam_plus)
    assert 0.015 < rel < 0.022


def test_build_monodromy_grid_requirements():
    with pytest.raises(ValueError):
        fm.build_monodromy(n_modes=1, theta_max=40.0, theta_nodes=300)  # 7.5/unit
    with pytest.raises(ValueError):
        fm.build_monodromy(n_modes=1, theta_nodes=400, h=0.0003)


def test_pure_heat_block_columns():
    # without the delay term, only the lag-0 column excites the computed
    # window, and it carries the plain heat decay
    P = fm.build_monodromy(n_modes=2, theta_max=4.0, theta_nodes=40,
                           h=2e-3, kernel=fm.Kernel(lambda th: 0.0 * th, 0.0))
    for mode0, block in enumerate(P.blocks):
        n = mode0 + 1
        M = block.shape[0] - 1
        r = 10  # unit shift in nodes at dtheta = 0.1
        theta = P.theta_grid
        for j in range(M + 1):
            back = M - j
            if back <= r:
                expect = np.exp(-n * n * (1.0 + theta[j]))
                assert block[j, M] == pytest.approx(expect, rel=1e-10)
                assert np.all(block[j, :M] == 0.0)
            else:
                row = np.zeros(M + 1)
                row[j + r] = 1.0
                assert np.array_equal(block[j], row)


def test_pure_heat_spectrum():
    # exact spectrum is {e^{-n^2}} plus a zero of high multiplicity; the
    # zero group is a nilpotent shift whose computed eigenvalues scatter at
    # roughly eps^(1/nilpotency-index), well below the heat multiplier here
    P = fm.build_monodromy(n_modes=2, theta_max=4.0, theta_nodes=40, h=2e-3,
                           kernel=fm.Kernel(lambda th: 0.0 * th, 0.0))
    rep = fm.spectrum(P)
    for mode0, ev in enumerate(rep.eigenvalues):
        n = mode0 + 1
        assert abs(ev[0]) == pytest.approx(np.exp(-n * n), rel=1e-6)
        assert abs(ev[1]) < 5e-3


def test_identity_blocks_flag_the_circle():
    theta = fm.uniform_theta_grid(4.0, 40)
    P = fm.MonodromyMatrix([np.eye(41)], theta, 0.5,
                           {"kernel_scale": 0.5, "kernel_rate": 1.0})
    rep = fm.spectrum(P)
    assert not rep.sigma_gamma_empty
    assert rep.circle_distance == 0.0


def test_monodromy_build_is_reproducible():
    # autonomous flow: the period map has no absolute clock, two builds agree
    P1 = fm.build_monodromy(n_modes=1, theta_max=4.0, theta_nodes=40, h=2e-3)
    P2 = fm.build_monodromy(n_modes=1, theta_max=4.0, theta_nodes=40, h=2e-3)
    assert np.array_equal(P1.blocks[0], P2.blocks[0])


def test_monodromy_dominant_eigenvalue_tracks_truncated_root(monodromy_default):
    # the discretization converges to the truncated-memory root; comparing
    # against that oracle isolates grid error from truncation error
    for mode0, ev in enumerate(monodromy_default.eigenvalues):
        n = mode0 + 1
        target = np.exp(fm.truncated_characteristic_root(n, 40.0))
        assert abs(ev[0] - target) / target <= 5e-4


def test_monodromy_refined_tracks_truncated_root_tighter(monodromy_default,
                                                         monodromy_refined):
    for mode0 in range(4):
        n = mode0 + 1
        target = np.exp(fm.truncated_characteristic_root(n, 40.0))
        coarse = abs(monodromy_default.eigenvalues[mode0][0] - target)
        fine = abs(monodromy_refined.eigenvalues[mode0][0] - target)
        assert fine < coarse / 2


def test_monodromy_matches_slow_oracle_modes_1_2(monodromy_default):
    by_mode = {}
    for m in monodromy_default.matches:
        by_mode.setdefault(m.mode, []).append(m)
    # the dominant multiplier of modes 1 and 2 lives far above the
    # truncation ring and is reproduced at grid accuracy
    assert min(m.rel_error for m in by_mode[1]) <= 1e-3
    assert min(m.rel_error for m in by_mode[2]) <= 1e-3


def test_decay_rate_matches_dominant_multiplier(std_grid):
    # long homogeneous run: per-unit decay equals the largest block modulus
    rng = np.random.default_rng(4)
    phi = fm.History(std_grid, np.outer(np.exp(std_grid / 2),
                                        rng.standard_normal(1)))
    traj = fm.solve_modal(phi, fm.ForcingSpec("zero"), 14.0, 1e-3,
                          generator=fm.HeatSemigroup(1))
    i0, i1 = traj.index_of(12.0), traj.index_of(13.0)
    rate = abs(traj.values[i1, 0] / traj.values[i0, 0])
    assert np.log(rate) == pytest.approx(np.log(MULT_N1[1]), abs=1e-2)


def test_spectrum_report_consistency(monodromy_default):
    rep = monodromy_default
    moduli = np.concatenate([np.abs(ev) for ev in rep.eigenvalues])
    assert rep.max_modulus == pytest.approx(moduli.max(), rel=1e-15)
    assert rep.circle_distance == pytest.approx(np.abs(moduli - 1).min(),
                                                rel=1e-15)
    assert rep.sigma_gamma_empty == (rep.circle_distance >= rep.band)
    # eigenvalues sorted by modulus, descending
    for ev in rep.eigenvalues:
        m = np.abs(ev)
        assert np.all(m[:-1] >= m[1:] - 1e-12)


def test_process_axioms():
    rep = fm.check_process_axioms(n_modes=4, theta_max=40.0, theta_nodes=400,
                                  h=1e-3)
    assert rep.identity_exact
    assert rep.cocycle_max_residual <= 1e-3
    assert rep.periodicity_residual == 0.0
    assert rep.exp_bound_N > 0
    assert np.isfinite(rep.continuity_max_quotient)
    assert rep.passed


def test_process_axioms_zero_history_trivial(std_grid):
    zero = fm.History(std_grid, np.zeros((std_grid.size, 2)))
    out = fm.propagate(zero, 1.0, 1e-3)
    assert np.all(out.values == 0.0)
