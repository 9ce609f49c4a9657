"""fademem: delay-diffusion dynamics with exponentially fading memory.

Numerical machinery for linear evolution equations whose right-hand side
couples a diagonalizable diffusion generator with a distributed delay over
the entire past, weighted by an exponentially decaying kernel.  The package
provides

* a sampled phase space of histories with the weighted sup norm,
* two independent solvers (exact memory-variable reduction vs. direct
  history quadrature) that cross-validate each other,
* the discretized period map of the homogeneous flow and its spectrum,
  with a closed-form multiplier oracle,
* circular-spectrum diagnostics classifying bounded signals as decaying,
  asymptotically periodic, or neither,
* an end-to-end scenario that ties these together into machine-checkable
  verdicts about asymptotically periodic responses.
"""

from .circspec import (SampledFunction, SpectrumIndicator, c0_test,
                       periodicity_residual, spectrum_indicator,
                       truncated_resolvent)
from .monodromy import (MonodromyMatrix, ProcessAxiomReport, SpectrumReport,
                        build_monodromy, characteristic_discriminant,
                        characteristic_roots, check_process_axioms,
                        memory_reduced_generator, multiplier_oracle, spectrum,
                        truncated_characteristic_root)
from .operators import (DiagonalGenerator, ExpKernel, HeatSemigroup, Kernel,
                        apply_L, evolution_semigroup_apply, semigroup_apply)
from .phase_space import (AxiomA1Report, History, check_axiom_A1,
                          constant_history, gn_lift, norm_gamma, resample,
                          segment, uniform_theta_grid)
from .scenario import (ScenarioConfig, VerdictReport, apply_overrides,
                       parse_config, run_scenario)
from .solver import (AugmentedState, DivergenceError, ForcingSpec, Trajectory,
                     asymptotic_residual, hn_apply, init_memory, propagate,
                     solve_modal, solve_quadrature, verify_mild)

__version__ = "0.1.0"

__all__ = [
    "AugmentedState", "AxiomA1Report", "DiagonalGenerator", "DivergenceError",
    "ExpKernel", "ForcingSpec", "HeatSemigroup", "History", "Kernel",
    "MonodromyMatrix", "ProcessAxiomReport", "SampledFunction",
    "ScenarioConfig", "SpectrumIndicator", "SpectrumReport", "Trajectory",
    "VerdictReport", "apply_L", "apply_overrides", "asymptotic_residual",
    "build_monodromy", "c0_test", "characteristic_discriminant",
    "characteristic_roots", "check_axiom_A1", "check_process_axioms",
    "constant_history", "evolution_semigroup_apply", "gn_lift", "hn_apply",
    "init_memory", "memory_reduced_generator", "multiplier_oracle",
    "norm_gamma", "parse_config", "periodicity_residual", "propagate",
    "resample", "run_scenario", "segment", "semigroup_apply", "solve_modal",
    "solve_quadrature", "spectrum", "spectrum_indicator",
    "truncated_characteristic_root", "truncated_resolvent",
    "uniform_theta_grid", "verify_mild",
]
