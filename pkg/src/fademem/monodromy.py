"""Period map of the homogeneous delay-diffusion flow and its spectrum.

The equation is autonomous and decouples over sine modes, so the time-1
solution operator on histories ("period map" P) is block diagonal: one dense
(M+1) x (M+1) block per mode in the hat-function basis on the lag grid.  Each
block acts by "shift the old history down one time unit, append the newly
computed window".

Whether P has spectrum on the unit circle decides existence and uniqueness of
asymptotically periodic responses, so the block spectra, their distance to
the circle, and their agreement with the closed-form multiplier oracle
e^{characteristic roots} are the central diagnostics here.

A note on accuracy that the oracle comparison surfaces: the discretized map
propagates a memory truncated at lag theta_max.  Its eigenvalues converge (as
the grid refines) to exponentials of the roots of the *truncated* relation

    lam + n^2 = scale * (1 - e^{-(rate+lam) theta_max}) / (rate + lam),

not of the ideal quadratic.  For slow modes (rate + lam small) the two differ
at O(e^{-(rate+lam) theta_max}), which for the default theta_max = 40 is
visible from mode 3 on; and multipliers below the kernel-decay radius
e^{-rate} correspond to histories growing faster into the past than the
truncated space can represent, so they have no discrete counterpart at any
resolution (a ring of truncation eigenvalues near radius e^{-rate} appears
instead).  ``truncated_characteristic_root`` exposes the truncated oracle so
the two effects can be separated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .operators import DiagonalGenerator, ExpKernel, HeatSemigroup, Kernel
from .phase_space import DEFAULT_GAMMA, History, norm_gamma, uniform_theta_grid
from .solver import (DivergenceError, _first_bad_time, _march_quadrature,
                     _phi1, propagate)

MATCH_MIN_MODULUS = 0.05
DEFAULT_BAND = 0.05


def characteristic_roots(n: int, scale: float = 0.5, rate: float = 1.0
                         ) -> tuple[float, float]:
    """Real roots of lam^2 + (rate + n^2) lam + n^2 rate - scale = 0,
    the per-mode characteristic equation of the delay-diffusion model.

    Returned as (lam_minus, lam_plus) with lam_plus > lam_minus.  Both are
    negative: the sum of the roots is -(rate + n^2) < 0 and their product is
    n^2 rate - scale > 0.
    """
    if n < 1:
        raise ValueError("mode index n must be a positive integer")
    b = rate + float(n) ** 2
    c = float(n) ** 2 * rate - scale
    disc = characteristic_discriminant(n, scale, rate)
    sq = np.sqrt(disc)
    lam_minus = (-b - sq) / 2
    lam_plus = (2 * c) / (-b - sq)  # stable small-root form
    return lam_minus, lam_plus


def characteristic_discriminant(n: int, scale: float = 0.5, rate: float = 1.0) -> float:
    """Discriminant (rate + n^2)^2 - 4 (n^2 rate - scale); positive for all n."""
    b = rate + float(n) ** 2
    return b * b - 4 * (float(n) ** 2 * rate - scale)


def memory_reduced_generator(n: int, scale: float = 0.5, rate: float = 1.0
                             ) -> np.ndarray:
    """The 2x2 generator [[-n^2, scale], [1, -rate]] of the per-mode
    (solution, memory) pair; its characteristic polynomial is the one solved
    by :func:`characteristic_roots`."""
    return np.array([[-float(n) ** 2, scale], [1.0, -rate]])


def multiplier_oracle(n: int, scale: float = 0.5, rate: float = 1.0
                      ) -> tuple[float, float]:
    """Closed-form period-map multipliers (e^{lam_minus}, e^{lam_plus})."""
    lam_minus, lam_plus = characteristic_roots(n, scale, rate)
    return float(np.exp(lam_minus)), float(np.exp(lam_plus))


def truncated_characteristic_root(n: int, theta_max: float,
                                  scale: float = 0.5, rate: float = 1.0) -> float:
    """Slow root of the memory-truncated characteristic relation

        lam + n^2 = scale (1 - e^{-(rate+lam) theta_max}) / (rate + lam).

    This is what the discretized period map's dominant eigenvalue converges
    to; it approaches the ideal quadratic root as theta_max -> infinity.
    """
    n2 = float(n) ** 2

    def F(lam):
        s = rate + lam
        rhs = scale * theta_max if s == 0 else scale * (-np.expm1(-theta_max * s)) / s
        return lam + n2 - rhs

    return brentq(F, -rate + 1e-12, -1e-12, xtol=1e-14)


@dataclass
class MonodromyMatrix:
    """Discretized period map, one dense block per mode (hat-function basis
    on the lag grid)."""

    blocks: list
    theta_grid: np.ndarray
    gamma: float
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.blocks:
            raise ValueError("need at least one block")
        size = self.theta_grid.size
        for b in self.blocks:
            if b.shape != (size, size):
                raise ValueError("block shape must match the lag grid")
            if not np.all(np.isfinite(b)):
                raise ValueError("block entries must be finite")

    @property
    def n_modes(self) -> int:
        return len(self.blocks)


def build_monodromy(n_modes: int = 8,
                    theta_max: float = 40.0,
                    theta_nodes: int = 400,
                    h: float = 1e-3,
                    kernel: Optional[Kernel] = None,
                    generator: Optional[DiagonalGenerator] = None,
                    gamma: float = DEFAULT_GAMMA) -> MonodromyMatrix:
    """Assemble the discretized period map column by column.

    Column j of the block for mode n is the lag-grid sampling, at time 1, of
    the homogeneous solution started from the hat history at node j.  Rows
    for lags <= -1 are the pure shift of the input nodes; rows for lags in
    (-1, 0] sample the computed window.  Requires the lag spacing to divide 1
    (so the shift maps nodes to nodes) and h to divide the lag spacing.
    """
    theta = uniform_theta_grid(theta_max, theta_nodes)
    M = theta_nodes
    dtheta = theta_max / theta_nodes
    r = 1.0 / dtheta
    ri = int(round(r))
    if abs(r - ri) > 1e-9:
        raise ValueError("lag spacing must divide the period 1")
    m = int(round(dtheta / h))
    if m < 1 or abs(m * h - dtheta) > 1e-9 * dtheta:
        raise ValueError("step h must divide the lag spacing")
    h = dtheta / m
    steps = ri * m

    if kernel is None:
        kernel = ExpKernel()
    if generator is None:
        generator = HeatSemigroup(n_modes)
    if generator.n_modes < n_modes:
        raise ValueError("generator provides fewer modes than requested")
    q = kernel.node_weights(theta)
    q_desc = q[::-1]

    # initial-history correlations of the hat basis are just shifted copies
    # of the quadrature weights
    a_hi = min(M - 1, (steps - 1) // m)
    C = np.zeros((M + 1, M + 1))
    C1 = np.zeros((M + 1, M + 1))
    for a in range(a_hi + 1):
        C[a, a:M] = q[: M - a]
        C1[a, a + 1:M + 1] = q[: M - a]

    u0 = np.zeros(M + 1)
    u0[M] = 1.0

    blocks = []
    for k in range(n_modes):
        an = float(generator.eigenvalues[k])
        E = np.exp(an * h)
        Phi = float(_phi1(np.array([an]), h)[0])
        Eh = np.exp(an * h / 2)
        Phih = float(_phi1(np.array([an]), h / 2)[0])
        U = _march_quadrature(E, Phi, Eh, Phih, q_desc, m, steps, u0, C, C1)
        bad = _first_bad_time(U, h)
        if bad is not None:
            raise DivergenceError(bad)
        B = np.zeros((M + 1, M + 1))
        for j in range(M + 1):
            back = M - j
            if back <= ri:
                B[j] = U[steps - back * m]
            else:
                B[j, j + ri] = 1.0
        blocks.append(B)

    meta = {
        "theta_max": theta_max,
        "theta_nodes": theta_nodes,
        "n_modes": n_modes,
        "h": h,
        "gamma": gamma,
        "kernel_scale": kernel.scale,
        "kernel_rate": getattr(kernel, "rate", None),
    }
    return MonodromyMatrix(blocks, theta, gamma, meta)


@dataclass
class MatchEntry:
    """Pairing of one oracle multiplier with its nearest computed eigenvalue."""

    mode: int
    root: float
    multiplier: float
    eigenvalue: complex
    rel_error: float


@dataclass
class SpectrumReport:
    """Eigenvalues of the period map with circle diagnostics.

    ``sigma_gamma_empty`` is the verdict that no eigenvalue modulus lies
    within ``band`` of 1 -- the discrete stand-in for "the period map has no
    spectrum on the unit circle".
    """

    eigenvalues: list
    band: float
    circle_distance: float
    sigma_gamma_empty: bool
    max_modulus: float
    matches: list
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.sigma_gamma_empty != (self.circle_distance >= self.band):
            raise ValueError("verdict inconsistent with the circle distance")


def _sorted_eigvals(block: np.ndarray, mode: int) -> np.ndarray:
    try:
        ev = np.linalg.eigvals(block)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            f"eigensolver failed on the mode-{mode} block: {exc}") from exc
    order = np.lexsort((np.angle(ev), -np.abs(ev)))
    return ev[order]


def spectrum(P: MonodromyMatrix, band: float = DEFAULT_BAND,
             min_modulus: float = MATCH_MIN_MODULUS) -> SpectrumReport:
    """Dense eigensolve of every block plus oracle matching.

    Oracle multipliers with modulus below ``min_modulus`` sit in the cluster
    of discretization eigenvalues near zero and are not matched.  Matching is
    nearest-neighbor in the complex plane within the mode's own block, each
    computed eigenvalue used at most once (descending oracle modulus).
    """
    if band <= 0:
        raise ValueError("band must be positive")
    scale = P.metadata.get("kernel_scale", 0.5)
    rate = P.metadata.get("kernel_rate")
    eigenvalues = [_sorted_eigvals(b, k + 1) for k, b in enumerate(P.blocks)]

    # the multiplier oracle exists only for the exponential-kernel flow
    matches = []
    if rate is not None and scale > 0:
        for mode0, ev in enumerate(eigenvalues):
            n = mode0 + 1
            roots = characteristic_roots(n, scale, rate)
            cand = sorted(roots, key=lambda lam: -np.exp(lam))
            used = np.zeros(ev.size, dtype=bool)
            for lam in cand:
                mu = float(np.exp(lam))
                if mu < min_modulus:
                    continue
                dist = np.abs(ev - mu)
                dist[used] = np.inf
                k = int(np.argmin(dist))
                used[k] = True
                matches.append(MatchEntry(n, lam, mu, complex(ev[k]),
                                          float(abs(ev[k] - mu) / mu)))

    moduli = np.concatenate([np.abs(ev) for ev in eigenvalues])
    circle_distance = float(np.abs(moduli - 1.0).min())
    return SpectrumReport(
        eigenvalues=eigenvalues,
        band=band,
        circle_distance=circle_distance,
        sigma_gamma_empty=bool(circle_distance >= band),
        max_modulus=float(moduli.max()),
        matches=matches,
        metadata=dict(P.metadata),
    )


@dataclass
class ProcessAxiomReport:
    """Numerical check of the two-parameter solution family axioms:
    identity, cocycle, joint continuity, exponential bound, 1-periodicity."""

    identity_exact: bool
    cocycle_residuals: list
    cocycle_max_residual: float
    continuity_max_quotient: float
    exp_bound_N: float
    exp_bound_omega: float
    periodicity_residual: float
    cocycle_tol: float = 1e-3

    @property
    def passed(self) -> bool:
        return (self.identity_exact
                and self.cocycle_max_residual <= self.cocycle_tol
                and self.periodicity_residual == 0.0)


def _evolve_pair(phi: History, s: float, t: float, h: float, kernel, generator) -> History:
    """U(t, s) phi realized as duration-(t-s) propagation (autonomous flow)."""
    if t == s:
        return phi.copy()
    return propagate(phi, t - s, h, kernel=kernel, generator=generator)


def check_process_axioms(histories: Optional[list] = None,
                         triples: Optional[list] = None,
                         n_modes: int = 4,
                         theta_max: float = 40.0,
                         theta_nodes: int = 400,
                         h: float = 1e-3,
                         kernel: Optional[Kernel] = None,
                         generator: Optional[DiagonalGenerator] = None,
                         gamma: float = DEFAULT_GAMMA,
                         seed: int = 0) -> ProcessAxiomReport:
    """Verify the evolutionary-process axioms on the discretized flow.

    Violations are reported, not raised.  Restart times are kept on lag-grid
    nodes so two-leg solves re-read history samples exactly.
    """
    kernel = ExpKernel() if kernel is None else kernel
    theta = uniform_theta_grid(theta_max, theta_nodes)
    dtheta = theta_max / theta_nodes
    rng = np.random.default_rng(seed)
    if histories is None:
        histories = [
            History(theta, np.zeros((theta.size, n_modes)), gamma),
            History(theta, rng.standard_normal((theta.size, n_modes)), gamma),
            History(theta, np.exp(theta / 2)[:, None]
                    * rng.standard_normal(n_modes)[None, :], gamma),
        ]
    if triples is None:
        # restart times snapped to lag-grid nodes, at least half a unit apart
        unit = dtheta * int(np.ceil(0.5 / dtheta))
        triples = [(0.0, unit, 2 * unit), (0.0, 2 * unit, 4 * unit),
                   (unit, 3 * unit, 5 * unit)]
        hi = max(2, int(np.floor(3.0 / unit)))
        for _ in range(3):
            r_, s_, t_ = np.sort(rng.integers(0, hi + 1, size=3)) * unit
            if r_ < s_ < t_:
                triples.append((float(r_), float(s_), float(t_)))

    identity_exact = True
    for phi in histories:
        same = _evolve_pair(phi, 1.0, 1.0, h, kernel, generator)
        identity_exact &= bool(np.array_equal(same.values, phi.values))

    cocycle = []
    for phi in histories[1:]:
        for (r_, s_, t_) in triples:
            one = _evolve_pair(phi, r_, t_, h, kernel, generator)
            mid = _evolve_pair(phi, r_, s_, h, kernel, generator)
            two = _evolve_pair(mid, s_, t_, h, kernel, generator)
            diff = History(one.theta_grid, one.values - two.values, gamma)
            cocycle.append(norm_gamma(diff))

    phi = histories[1]
    base = _evolve_pair(phi, 0.0, 1.0, h, kernel, generator)
    quotients = []
    for k in (1, 2, 4):
        delta = k * h
        stepped = _evolve_pair(phi, 0.0, 1.0 + delta, h, kernel, generator)
        diff = History(base.theta_grid, stepped.values - base.values, gamma)
        quotients.append(norm_gamma(diff) / delta)

    durations = (0.25, 0.5, 1.0, 2.0, 3.0)
    ratios = []
    for d in durations:
        worst = 0.0
        for phi in histories[1:]:
            out = _evolve_pair(phi, 0.0, d, h, kernel, generator)
            worst = max(worst, norm_gamma(out) / norm_gamma(phi))
        ratios.append(worst)
    ratios = np.asarray(ratios)
    omega = float(np.polyfit(durations, np.log(ratios), 1)[0])
    N = float(np.max(ratios * np.exp(-omega * np.asarray(durations))))

    per = 0.0
    for phi in histories[1:]:
        a = _evolve_pair(phi, 0.5, 1.5, h, kernel, generator)
        b = _evolve_pair(phi, 1.5, 2.5, h, kernel, generator)
        diff = History(a.theta_grid, a.values - b.values, gamma)
        per = max(per, norm_gamma(diff))

    return ProcessAxiomReport(
        identity_exact=identity_exact,
        cocycle_residuals=cocycle,
        cocycle_max_residual=float(max(cocycle)),
        continuity_max_quotient=float(max(quotients)),
        exp_bound_N=N,
        exp_bound_omega=omega,
        periodicity_residual=per,
    )
