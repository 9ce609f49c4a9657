"""Circular-spectrum diagnostics for sampled bounded functions.

A bounded function x has an associated set of unit-circle points where the
resolvent of the unit translation (taken modulo functions vanishing at +inf)
fails to extend analytically.  That set controls asymptotic periodicity:
empty means x vanishes at infinity, contained in {e^{ip}} means
x(t+1) - e^{ip} x(t) -> 0.

Nothing here computes that set exactly; the quotient construction has no
finite algorithm.  Instead this module provides calibrated numeric proxies:

* tail-window residuals for asymptotic p-periodicity,
* a decay test for membership in the vanishing-at-infinity class,
* exterior Neumann partial sums of the translation resolvent, whose radial
  blow-up toward the circle locates singular directions.

The indicator is a documented heuristic, not a decision procedure.  The
interior expansion (|lambda| < 1) is omitted; the exterior side suffices to
locate circle singularities for the calibration signals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

DEFAULT_RADII = (1.5, 1.25, 1.1, 1.05, 1.02)
DEFAULT_N_ZETA = 256
DEFAULT_N_TERMS = 200
# flag heuristic: absolute floor factor on I and relative slack in the
# radial-monotonicity test (finite sums sag slightly at the smallest radius)
THETA_ABS_FACTOR = 0.1
MONO_SLACK = 0.05


@dataclass
class SampledFunction:
    """Uniformly sampled function of time with values in mode-coefficient
    space (scalars are treated as a single mode).

    tail_window, when given, is the [T0, T1] window used for modulo-C0
    estimates (tail sups); it must lie inside the sampled range.
    """

    t0: float
    step: float
    samples: np.ndarray
    tail_window: Optional[tuple[float, float]] = None

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim == 1:
            s = s[:, None]
        self.samples = s
        if self.step <= 0:
            raise ValueError("step must be positive")
        if s.ndim != 2 or s.shape[0] < 2:
            raise ValueError("need at least two samples")
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")
        if self.tail_window is not None:
            lo, hi = self.tail_window
            if not (self.t0 <= lo < hi <= self.t_end + 1e-9):
                raise ValueError("tail_window must lie inside the sampled range")

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def n_modes(self) -> int:
        return self.samples.shape[1]

    @property
    def t_end(self) -> float:
        return self.t0 + (self.n_samples - 1) * self.step

    def times(self) -> np.ndarray:
        return self.t0 + self.step * np.arange(self.n_samples)

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.samples, axis=1)

    def sup_norm(self, window: Optional[tuple[float, float]] = None) -> float:
        sel = self.norms()
        if window is not None:
            t = self.times()
            sel = sel[(t >= window[0] - 1e-9) & (t <= window[1] + 1e-9)]
            if sel.size == 0:
                raise ValueError("window contains no samples")
        return float(sel.max())

    def index_of(self, t: float) -> int:
        pos = (t - self.t0) / self.step
        i = int(round(pos))
        if abs(pos - i) > 1e-6 or not 0 <= i < self.n_samples:
            raise ValueError(f"time {t} is not a sample node")
        return i

    def _unit_shift(self) -> int:
        k = 1.0 / self.step
        ki = int(round(k))
        if abs(k - ki) > 1e-9:
            raise ValueError("sampling step must divide 1")
        return ki


@dataclass
class PeriodicityResidual:
    """r(t) = ||x(t+1) - e^{ip} x(t)|| on the grid, plus its tail sup."""

    p: float
    times: np.ndarray
    curve: np.ndarray
    tail_sup: float


def periodicity_residual(x: SampledFunction, p: float) -> PeriodicityResidual:
    """Asymptotic p-periodicity residual of a sampled function.

    The tail sup is taken over ``x.tail_window`` when set (the window must
    leave room for the unit shift), otherwise over the last quarter of the
    available residual curve.
    """
    k = x._unit_shift()
    if x.n_samples <= k:
        raise ValueError("sampled range must cover at least one unit shift")
    phase = np.exp(1j * p)
    diff = x.samples[k:] - phase * x.samples[:-k]
    curve = np.linalg.norm(diff, axis=1)
    times = x.times()[:-k]
    if x.tail_window is not None:
        lo, hi = x.tail_window
        if lo > times[-1] + 1e-9:
            raise ValueError("tail_window leaves no room for the unit shift")
        sel = (times >= lo - 1e-9) & (times <= hi + 1e-9)
    else:
        sel = times >= times[-1] - (times[-1] - times[0]) / 4
    return PeriodicityResidual(p, times, curve, float(curve[sel].max()))


def c0_test(x: SampledFunction, tol: float) -> tuple[bool, np.ndarray]:
    """Does the function decay to zero at +infinity, numerically?

    True when the sup over the tail window is below tol and the windowed sup
    does not increase across three windows shrinking toward the right end.
    Returns the verdict and the curve of windowed sups (largest window first).
    """
    if x.tail_window is not None:
        lo, hi = x.tail_window
    else:
        lo = x.t0 + 3 * (x.t_end - x.t0) / 4
        hi = x.t_end
    t = x.times()
    norms = x.norms()
    sups = []
    for kk in range(3):
        a = hi - (hi - lo) / 2 ** kk
        sel = (t >= a - 1e-9) & (t <= hi + 1e-9)
        sups.append(float(norms[sel].max()))
    sups = np.asarray(sups)
    ok = sups[0] < tol and bool(np.all(np.diff(sups) <= 1e-12 + 1e-9 * sups[:-1]))
    return ok, sups


def truncated_resolvent(x: SampledFunction, lam: complex, n_terms: int,
                        t: float) -> np.ndarray:
    """Exterior Neumann partial sum sum_{k=0}^{N} lam^{-k-1} x(t + k).

    For |lam| > 1 this approximates the translation resolvent applied to x;
    its norm obeys the geometric bound sup||x|| / (|lam| - 1) exactly.
    """
    lam = complex(lam)
    if abs(lam) <= 1:
        raise ValueError("only the exterior expansion |lambda| > 1 is implemented")
    i0 = x.index_of(t)
    k = x._unit_shift()
    if i0 + n_terms * k >= x.n_samples:
        raise ValueError("t + N exceeds the sampled range")
    idx = i0 + k * np.arange(n_terms + 1)
    powers = lam ** (-np.arange(1, n_terms + 2, dtype=float))
    return powers @ x.samples[idx].astype(complex)


@dataclass
class SpectrumIndicator:
    """Radial blow-up indicator over a grid on the unit circle.

    values[i, j] = (r_j - 1) * sup_{t in window} ||resolvent sum at r_j*zeta_i||.
    A direction is flagged when the indicator stays above the absolute floor
    at the smallest radius and does not decay as the radius shrinks to 1.
    """

    zeta_grid: np.ndarray
    radii: np.ndarray
    values: np.ndarray
    flagged: np.ndarray
    theta_abs: float

    def __post_init__(self):
        if np.any(self.radii <= 1):
            raise ValueError("radii must exceed 1")
        if np.any(self.values < 0):
            raise ValueError("indicator values are nonnegative by construction")

    def flagged_zetas(self) -> np.ndarray:
        return self.zeta_grid[self.flagged]


def spectrum_indicator(x: SampledFunction,
                       zeta_grid: Optional[np.ndarray] = None,
                       radii: Sequence[float] = DEFAULT_RADII,
                       n_terms: int = DEFAULT_N_TERMS,
                       window: Optional[tuple[float, float]] = None,
                       ) -> SpectrumIndicator:
    """Scan the unit circle for directions where the resolvent sum blows up
    at the geometric rate 1/(r-1).

    The sup over t runs by default over the last quarter of the range usable
    with ``n_terms`` translation steps (old transients are thereby ignored,
    the modulo-C0 device).
    """
    if zeta_grid is None:
        zeta_grid = np.exp(2j * np.pi * np.arange(DEFAULT_N_ZETA) / DEFAULT_N_ZETA)
    zeta_grid = np.asarray(zeta_grid, dtype=complex)
    radii = np.asarray(sorted(radii, reverse=True), dtype=float)
    if np.any(radii <= 1):
        raise ValueError("radii must exceed 1")

    k = x._unit_shift()
    usable = x.n_samples - n_terms * k
    if usable < 1:
        raise ValueError("n_terms leaves no usable window")
    t_usable = x.times()[:usable]
    if window is None:
        lo = t_usable[-1] - (t_usable[-1] - t_usable[0]) / 4
        hi = t_usable[-1]
    else:
        lo, hi = window
    base = np.nonzero((t_usable >= lo - 1e-9) & (t_usable <= hi + 1e-9))[0]
    if base.size == 0:
        raise ValueError("indicator window contains no usable samples")

    # stacked translation samples: S[w, j, :] = x(t_w + j)
    S = x.samples[base[:, None] + k * np.arange(n_terms + 1)[None, :]]
    ks = np.arange(1, n_terms + 2, dtype=float)
    values = np.empty((zeta_grid.size, radii.size))
    for j, r in enumerate(radii):
        powers = (r * zeta_grid[:, None]) ** (-ks[None, :])  # (n_zeta, N+1)
        sums = np.tensordot(S, powers, axes=([1], [1]))      # (nw, nm, n_zeta)
        values[:, j] = (r - 1.0) * np.linalg.norm(sums, axis=1).max(axis=0)

    theta_abs = THETA_ABS_FACTOR * x.sup_norm()
    above = values[:, -1] > theta_abs
    steps = np.diff(values, axis=1)  # toward smaller radii
    slack = MONO_SLACK * np.maximum(values[:, :-1], theta_abs)
    monotone = np.all(steps >= -slack, axis=1)
    return SpectrumIndicator(zeta_grid, radii, values, above & monotone, theta_abs)
