"""End-to-end scenario: the delay-diffusion model driven by sin(sqrt(t)).

Four stages, each producing a verdict backed by numeric evidence on disk:

1. period-map spectrum       -> no eigenvalue near the unit circle;
2. forced run                -> the response is asymptotically 1-periodic
                                (unit-shift residual decays below threshold);
3. second run, other history -> trajectories from different histories merge
                                at the dominant multiplier rate (uniqueness
                                up to a vanishing-at-infinity term);
4. incommensurate two-tone   -> with forcing that is *not* asymptotically
                                1-periodic the response is not either (the
                                forcing's spectrum survives into the
                                solution).

Every verdict is recomputable from the emitted CSV/JSON artifacts alone.
"""

from __future__ import annotations

import hashlib
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional, get_type_hints

import numpy as np

from . import io as fio
from .monodromy import build_monodromy, spectrum
from .phase_space import History, uniform_theta_grid
from .solver import ForcingSpec, asymptotic_residual, solve_modal

SQRT2 = float(np.sqrt(2.0))


@dataclass
class ScenarioConfig:
    """Flat scenario configuration; every key can come from a config file
    (``key = value`` lines) or a CLI override flag."""

    theta_max: float = 40.0
    theta_nodes: int = 400
    n_modes: int = 8
    step_h: float = 1e-3
    t_final: float = 420.0
    gamma: float = 0.5
    band: float = 0.05
    forcing_kind: str = "sin_sqrt"
    forcing_profile_mode: int = 1
    forcing_period: float = 1.0
    epsilon_kind: str = "zero"
    epsilon_scale: float = 1.0
    epsilon_mode: int = 1
    residual_probe_early: float = 100.0
    residual_probe_late: float = 400.0
    residual_threshold: float = 0.1
    residual_decrease_factor: float = 1.5
    uniqueness_t_final: float = 45.0
    uniqueness_window_lo: float = 10.0
    uniqueness_window_hi: float = 20.0
    uniqueness_ratio_lo: float = 0.6
    uniqueness_ratio_hi: float = 0.9
    uniqueness_decay_time: float = 40.0
    uniqueness_decay_factor: float = 1e-4
    twotone_t_final: float = 60.0
    twotone_threshold: float = 0.1
    trajectory_stride: int = 100

    def __post_init__(self):
        if min(self.theta_max, self.step_h, self.t_final, self.gamma,
               self.band) <= 0:
            raise ValueError("sizes, steps and rates must be positive")
        if self.theta_nodes < 1 or self.n_modes < 1:
            raise ValueError("grid and mode counts must be positive")
        if self.forcing_kind not in ("zero", "sin_sqrt", "periodic",
                                     "custom_samples"):
            raise ValueError(f"unrecognized forcing kind {self.forcing_kind!r}")
        if self.epsilon_kind not in ("zero", "exp_decay"):
            raise ValueError(f"unrecognized epsilon kind {self.epsilon_kind!r}")
        if self.residual_probe_late + 1.0 > self.t_final + 1e-9:
            raise ValueError("late residual probe must satisfy probe + 1 <= t_final")
        if self.uniqueness_decay_time + 1e-9 > self.uniqueness_t_final:
            raise ValueError("uniqueness run too short for its decay probe")
        if self.uniqueness_t_final > self.t_final + 1e-9:
            raise ValueError("uniqueness run cannot outlast the main run")

    def canonical_text(self) -> str:
        parts = []
        for f in fields(self):
            v = getattr(self, f.name)
            v = fio.fmt(v) if isinstance(v, float) else str(v)
            parts.append(f"{f.name} = {v}")
        return "\n".join(parts) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()

    def forcing(self) -> ForcingSpec:
        return ForcingSpec(kind=self.forcing_kind,
                           profile_mode=self.forcing_profile_mode,
                           period=self.forcing_period)

    def epsilon(self) -> Optional[ForcingSpec]:
        if self.epsilon_kind == "zero":
            return None
        scale = self.epsilon_scale
        return ForcingSpec(kind="custom_samples", profile_mode=self.epsilon_mode,
                           amplitude_fn=lambda t: scale * np.exp(-np.asarray(t)))

    def theta_grid(self) -> np.ndarray:
        return uniform_theta_grid(self.theta_max, self.theta_nodes)


def parse_config(path) -> ScenarioConfig:
    """Read a flat ``key = value`` config file (# starts a comment)."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"config file not found: {path}")
    overrides = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        overrides[key] = val
    return apply_overrides(ScenarioConfig(), overrides)


def apply_overrides(config: ScenarioConfig, overrides: dict) -> ScenarioConfig:
    """Apply string-valued overrides with types taken from the dataclass."""
    hints = get_type_hints(ScenarioConfig)
    values = asdict(config)
    for key, val in overrides.items():
        if key not in values:
            raise ValueError(f"unknown config key {key!r}")
        typ = hints[key]
        values[key] = typ(val) if not isinstance(val, typ) else val
    return ScenarioConfig(**values)


@dataclass
class VerdictReport:
    """Scenario verdicts plus the numbers that produced them."""

    sigma_gamma_empty: bool
    asymptotic_periodic: bool
    uniqueness_mod_c0: bool
    nonperiodic_forcing_propagates: bool
    evidence: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    @property
    def all_true(self) -> bool:
        return (self.sigma_gamma_empty and self.asymptotic_periodic
                and self.uniqueness_mod_c0 and self.nonperiodic_forcing_propagates)

    def payload(self) -> dict:
        return {
            "verdicts": {
                "sigma_gamma_empty": self.sigma_gamma_empty,
                "asymptotic_periodic": self.asymptotic_periodic,
                "uniqueness_mod_c0": self.uniqueness_mod_c0,
                "nonperiodic_forcing_propagates": self.nonperiodic_forcing_propagates,
                "all_true": self.all_true,
            },
            "evidence": self.evidence,
            "provenance": self.provenance,
        }


class ScenarioError(RuntimeError):
    """Stage-labelled failure; artifacts produced before the failure remain."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"scenario stage {stage!r} failed: {cause}")
        self.stage = stage


def _zero_history(config: ScenarioConfig) -> History:
    grid = config.theta_grid()
    return History(grid, np.zeros((grid.size, config.n_modes)), config.gamma)


def _offset_history(config: ScenarioConfig) -> History:
    """Second initial history for the uniqueness stage: e^{theta/2} in the
    first mode, order-one separation from the zero history."""
    grid = config.theta_grid()
    vals = np.zeros((grid.size, config.n_modes))
    vals[:, 0] = np.exp(grid / 2)
    return History(grid, vals, config.gamma)


def run_scenario(config: ScenarioConfig,
                 out_dir: Optional[Path] = None,
                 emit_plots: bool = False) -> VerdictReport:
    """Execute the four stages and collect verdicts (artifacts to out_dir)."""
    out = None
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
    evidence: dict = {}

    stage = "monodromy"
    try:
        P = build_monodromy(n_modes=config.n_modes, theta_max=config.theta_max,
                            theta_nodes=config.theta_nodes, h=config.step_h,
                            gamma=config.gamma)
        spec_report = spectrum(P, band=config.band)
        sigma_gamma_empty = spec_report.sigma_gamma_empty
        evidence["max_modulus"] = spec_report.max_modulus
        evidence["circle_distance"] = spec_report.circle_distance
        if out is not None:
            fio.write_spectrum_json(out / "spectrum.json", spec_report)
            if emit_plots:
                fio.plot_spectrum_svg(out / "spectrum.svg", spec_report)
    except Exception as exc:  # noqa: BLE001 - stage label then re-raise
        raise ScenarioError(stage, exc) from exc

    stage = "periodic-response"
    try:
        forcing = config.forcing()
        phi1 = _zero_history(config)
        traj = solve_modal(phi1, forcing, config.t_final, config.step_h,
                           epsilon=config.epsilon())
        times, r = asymptotic_residual(traj, 0.0)
        i_early = int(round(config.residual_probe_early / traj.step))
        i_late = int(round(config.residual_probe_late / traj.step))
        r_early, r_late = float(r[i_early]), float(r[i_late])
        asymptotic_periodic = (
            r_late < r_early / config.residual_decrease_factor
            and r_late < config.residual_threshold)
        evidence["residual_early"] = r_early
        evidence["residual_late"] = r_late
        evidence["residual_probe_early"] = config.residual_probe_early
        evidence["residual_probe_late"] = config.residual_probe_late
        if out is not None:
            fio.write_trajectory_csv(out / "trajectory.csv", traj,
                                     stride=config.trajectory_stride)
            sl = slice(None, None, max(1, config.trajectory_stride))
            fio.write_curve_csv(out / "residual.csv", times[sl], r[sl])
            if emit_plots:
                fio.plot_curve_svg(out / "residual.svg", times[sl], r[sl],
                                   title="unit-shift residual", logy=True)
    except ScenarioError:
        raise
    except Exception as exc:  # noqa: BLE001
        raise ScenarioError(stage, exc) from exc

    stage = "uniqueness"
    try:
        traj2 = solve_modal(_offset_history(config), forcing,
                            config.uniqueness_t_final, config.step_h,
                            epsilon=config.epsilon())
        n2 = traj2.values.shape[0]
        d = np.linalg.norm(traj.values[:n2] - traj2.values, axis=1)
        k = int(round(1.0 / traj.step))
        lo = int(round(config.uniqueness_window_lo / traj.step))
        hi = int(round(config.uniqueness_window_hi / traj.step))
        ratios = [d[i + k] / d[i] for i in range(lo, hi - k + 1, k)]
        i_decay = int(round(config.uniqueness_decay_time / traj.step))
        decay_ok = d[i_decay] < config.uniqueness_decay_factor * d[0]
        uniqueness = decay_ok and all(
            config.uniqueness_ratio_lo <= rho <= config.uniqueness_ratio_hi
            for rho in ratios)
        evidence["uniqueness_ratios"] = [float(x) for x in ratios]
        evidence["uniqueness_d0"] = float(d[0])
        evidence["uniqueness_d_decay"] = float(d[i_decay])
        if out is not None:
            sl = slice(None, None, max(1, config.trajectory_stride))
            fio.write_curve_csv(out / "uniqueness.csv",
                                traj2.times()[sl], d[sl], header="t,d")
    except ScenarioError:
        raise
    except Exception as exc:  # noqa: BLE001
        raise ScenarioError(stage, exc) from exc

    stage = "nonperiodic-forcing"
    try:
        twotone = ForcingSpec(
            kind="custom_samples",
            profile_mode=config.forcing_profile_mode,
            amplitude_fn=lambda t: (np.sin(2 * np.pi * np.asarray(t) / SQRT2)
                                    + np.sin(2 * np.pi * np.asarray(t))))
        traj3 = solve_modal(_zero_history(config), twotone,
                            config.twotone_t_final, config.step_h)
        t3, r3 = asymptotic_residual(traj3, 0.0)
        tail = t3 >= t3[-1] - (t3[-1] - t3[0]) / 4
        tail_sup = float(r3[tail].max())
        famp = twotone.amplitude(t3)
        famp_shift = twotone.amplitude(t3 + 1.0)
        forcing_tail_sup = float(np.abs(famp_shift - famp)[tail].max())
        propagates = (tail_sup > config.twotone_threshold
                      and forcing_tail_sup > config.twotone_threshold)
        evidence["twotone_solution_tail_sup"] = tail_sup
        evidence["twotone_forcing_tail_sup"] = forcing_tail_sup
        if out is not None:
            sl = slice(None, None, max(1, config.trajectory_stride))
            fio.write_curve_csv(out / "twotone_residual.csv", t3[sl], r3[sl])
    except ScenarioError:
        raise
    except Exception as exc:  # noqa: BLE001
        raise ScenarioError(stage, exc) from exc

    report = VerdictReport(
        sigma_gamma_empty=bool(sigma_gamma_empty),
        asymptotic_periodic=bool(asymptotic_periodic),
        uniqueness_mod_c0=bool(uniqueness),
        nonperiodic_forcing_propagates=bool(propagates),
        evidence=evidence,
        provenance={
            "config": asdict(config),
            "config_sha256": config.digest(),
            "discretization": {
                "theta_max": config.theta_max,
                "theta_nodes": config.theta_nodes,
                "n_modes": config.n_modes,
                "step_h": config.step_h,
                "gamma": config.gamma,
            },
        },
    )
    if out is not None:
        fio.write_json(out / "verdict.json", report.payload())
    return report
