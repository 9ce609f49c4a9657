"""Mild solutions of the delay-diffusion equation

    u'(t) = A u(t) + L(u_t) + f(t),   u_0 = phi,

computed by two deliberately different discretizations:

* ``solve_modal`` — exact reduction of the exponential memory integral to an
  auxiliary variable, giving a stiff-free 2 x n_modes ODE system integrated
  with classical RK4.  Per mode the reduced generator is
  [[a_n, scale], [1, -rate]], so this route carries the closed-form
  characteristic polynomial and serves as the oracle.

* ``solve_quadrature`` — direct history marching: exponential integrator in
  time (the linear semigroup part is applied exactly, the delay + forcing
  bracket is frozen at the step midpoint, order 2) with the memory integral
  evaluated by trapezoid quadrature on the lag grid.  This route works for
  any quadrature-defined kernel and knows nothing about the reduction.

Cross-validating the two is the package's core correctness check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .operators import DiagonalGenerator, ExpKernel, HeatSemigroup, Kernel, apply_L
from .phase_space import (DEFAULT_GAMMA, History, gn_lift, segment,
                          trapezoid_weights, uniform_theta_grid)

FORCING_KINDS = ("zero", "sin_sqrt", "periodic", "custom_samples")


class DivergenceError(RuntimeError):
    """Raised when a solve produces a non-finite state; carries the first bad time."""

    def __init__(self, time: float):
        super().__init__(f"solution diverged (first non-finite value at t = {time:.6g})")
        self.time = time


@dataclass
class ForcingSpec:
    """Separable forcing f(t) = amplitude(t) * profile.

    kind:
        "zero"           -- no forcing;
        "sin_sqrt"       -- amplitude sin(sqrt(t)), the asymptotically
                            1-periodic drive of the worked scenario;
        "periodic"       -- amplitude sin(2 pi t / period);
        "custom_samples" -- amplitude linearly interpolated from
                            (sample_times, sample_values).
    ``amplitude_fn``, when given, overrides the kind (in-process use only).
    ``profile`` defaults to the unit vector of ``profile_mode``.
    """

    kind: str = "zero"
    profile_mode: int = 1
    period: float = 1.0
    sample_times: Optional[np.ndarray] = None
    sample_values: Optional[np.ndarray] = None
    amplitude_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    profile: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in FORCING_KINDS:
            raise ValueError(f"unknown forcing kind {self.kind!r}; "
                             f"expected one of {FORCING_KINDS}")
        if self.kind == "custom_samples" and self.amplitude_fn is None:
            if self.sample_times is None or self.sample_values is None:
                raise ValueError("custom_samples forcing needs sample arrays")
            self.sample_times = np.asarray(self.sample_times, dtype=float)
            self.sample_values = np.asarray(self.sample_values, dtype=float)
        if self.profile_mode < 1:
            raise ValueError("profile_mode is 1-based")

    def amplitude(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.amplitude_fn is not None:
            return np.asarray(self.amplitude_fn(t), dtype=float)
        if self.kind == "zero":
            return np.zeros_like(t)
        if self.kind == "sin_sqrt":
            return np.sin(np.sqrt(np.maximum(t, 0.0)))
        if self.kind == "periodic":
            return np.sin(2 * np.pi * t / self.period)
        return np.interp(t, self.sample_times, self.sample_values)

    def profile_vector(self, n_modes: int) -> np.ndarray:
        if self.profile is not None:
            prof = np.asarray(self.profile, dtype=float)
            if prof.shape != (n_modes,):
                raise ValueError("profile length must equal n_modes")
            return prof
        if self.profile_mode > n_modes:
            raise ValueError("profile_mode exceeds n_modes")
        prof = np.zeros(n_modes)
        prof[self.profile_mode - 1] = 1.0
        return prof

    def field(self, t, n_modes: int) -> np.ndarray:
        """f(t) as mode coefficients; t may be an array (leading axis)."""
        amp = self.amplitude(t)
        prof = self.profile_vector(n_modes)
        return np.multiply.outer(amp, prof)


@dataclass
class Trajectory:
    """Uniformly sampled solution path u(t0), u(t0 + step), ..."""

    t0: float
    step: float
    values: np.ndarray
    forcing_record: Optional[np.ndarray] = None
    epsilon_record: Optional[np.ndarray] = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2 or self.values.shape[0] < 1:
            raise ValueError("trajectory needs at least one sample row")
        if self.step <= 0:
            raise ValueError("step must be positive")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("trajectory values must be finite")

    @property
    def n_modes(self) -> int:
        return self.values.shape[1]

    @property
    def n_steps(self) -> int:
        return self.values.shape[0] - 1

    @property
    def final_time(self) -> float:
        return self.t0 + self.n_steps * self.step

    def times(self) -> np.ndarray:
        return self.t0 + self.step * np.arange(self.values.shape[0])

    def index_of(self, t: float) -> int:
        pos = (t - self.t0) / self.step
        i = int(round(pos))
        if abs(pos - i) > 1e-6 or not 0 <= i <= self.n_steps:
            raise ValueError(f"time {t} is not on the trajectory grid")
        return i

    def value_at(self, t: float) -> np.ndarray:
        """Linear interpolation; exact at grid times."""
        pos = (t - self.t0) / self.step
        if pos < -1e-9 or pos > self.n_steps + 1e-9:
            raise ValueError(f"time {t} outside the trajectory range")
        i0 = int(np.floor(pos + 1e-9))
        i0 = min(max(i0, 0), self.n_steps)
        frac = pos - i0
        if abs(frac) < 1e-9 or i0 == self.n_steps:
            return self.values[i0]
        return (1 - frac) * self.values[i0] + frac * self.values[i0 + 1]


@dataclass
class AugmentedState:
    """Per-mode pair (u_n, y_n) with y_n the unscaled exponential memory
    integral of the past of u_n; the delay operator value is scale * y."""

    u: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        self.u = np.atleast_1d(np.asarray(self.u, dtype=float))
        self.y = np.atleast_1d(np.asarray(self.y, dtype=float))
        if self.u.shape != self.y.shape:
            raise ValueError("u and y must have matching shapes")
        if not (np.all(np.isfinite(self.u)) and np.all(np.isfinite(self.y))):
            raise ValueError("state must be finite")


def init_memory(phi: History, kernel: Optional[ExpKernel] = None) -> AugmentedState:
    """Initialize the memory variable from a sampled history.

    y_n is the trapezoid quadrature of e^{rate*theta} phi_n over the grid, so
    scale * y agrees with ``apply_L`` exactly (same weights, same order).
    """
    kernel = _require_exp_kernel(kernel)
    w = trapezoid_weights(phi.theta_grid) * np.exp(kernel.rate * phi.theta_grid)
    return AugmentedState(phi.values[-1].copy(), w @ phi.values)


def _require_exp_kernel(kernel) -> ExpKernel:
    if kernel is None:
        return ExpKernel()
    if not isinstance(kernel, ExpKernel):
        raise TypeError("the memory-variable reduction requires an exponential kernel")
    return kernel


def _phi1(a: np.ndarray, h: float) -> np.ndarray:
    """int_0^h e^{a (h - s)} ds = (e^{a h} - 1)/a, with the a -> 0 limit."""
    a = np.asarray(a, dtype=float)
    out = np.full_like(a, h)
    nz = a != 0
    out[nz] = np.expm1(a[nz] * h) / a[nz]
    return out


def _first_bad_time(U: np.ndarray, h: float) -> Optional[float]:
    bad = ~np.isfinite(U).all(axis=1)
    idx = np.nonzero(bad)[0]
    return None if idx.size == 0 else float(idx[0] * h)


def solve_modal(initial: Union[History, AugmentedState],
                forcing: ForcingSpec,
                t_final: float,
                h: float,
                generator: Optional[DiagonalGenerator] = None,
                kernel: Optional[ExpKernel] = None,
                epsilon: Optional[ForcingSpec] = None,
                record_forcing: bool = False) -> Trajectory:
    """Solve via the exact memory-variable reduction, RK4 in time.

    Per mode: u' = a_n u + scale * y + f_n(t) [+ eps_n(t)],  y' = u - rate * y.
    ``initial`` may be a History (memory initialized by quadrature) or an
    AugmentedState (exact state injection, used by eigen-structure tests).
    """
    kernel = _require_exp_kernel(kernel)
    if h <= 0 or t_final < h:
        raise ValueError("need h > 0 and t_final >= h")
    state = initial if isinstance(initial, AugmentedState) else init_memory(initial, kernel)
    u = state.u.copy()
    y = state.y.copy()
    nm = u.size
    if generator is None:
        generator = HeatSemigroup(nm)
    if generator.n_modes != nm:
        raise ValueError("generator mode count does not match the state")
    an = generator.eigenvalues
    scale, rate = kernel.scale, kernel.rate

    steps = int(round(t_final / h))
    gvec = forcing.profile_vector(nm)
    amps = forcing.amplitude(h / 2 * np.arange(2 * steps + 1))
    if epsilon is not None:
        evec = epsilon.profile_vector(nm)
        eamps = epsilon.amplitude(h / 2 * np.arange(2 * steps + 1))

    U = np.empty((steps + 1, nm))
    U[0] = u
    # overflow en route to divergence is expected and reported below
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(steps):
            f0 = amps[2 * i] * gvec
            fmid = amps[2 * i + 1] * gvec
            f1 = amps[2 * i + 2] * gvec
            if epsilon is not None:
                f0 = f0 + eamps[2 * i] * evec
                fmid = fmid + eamps[2 * i + 1] * evec
                f1 = f1 + eamps[2 * i + 2] * evec
            k1u = an * u + scale * y + f0
            k1y = u - rate * y
            u2 = u + 0.5 * h * k1u
            y2 = y + 0.5 * h * k1y
            k2u = an * u2 + scale * y2 + fmid
            k2y = u2 - rate * y2
            u3 = u + 0.5 * h * k2u
            y3 = y + 0.5 * h * k2y
            k3u = an * u3 + scale * y3 + fmid
            k3y = u3 - rate * y3
            u4 = u + h * k3u
            y4 = y + h * k3y
            k4u = an * u4 + scale * y4 + f1
            k4y = u4 - rate * y4
            u = u + (h / 6) * (k1u + 2 * k2u + 2 * k3u + k4u)
            y = y + (h / 6) * (k1y + 2 * k2y + 2 * k3y + k4y)
            U[i + 1] = u
            if i % 1024 == 1023 and not np.isfinite(u).all():
                break
    bad = _first_bad_time(U[: i + 2] if steps else U, h)
    if bad is not None:
        raise DivergenceError(bad)

    fr = None
    er = None
    if record_forcing:
        fr = forcing.field(h * np.arange(steps + 1), nm)
    if epsilon is not None:
        er = epsilon.field(h * np.arange(steps + 1), nm)
    return Trajectory(0.0, h, U, forcing_record=fr, epsilon_record=er)


def _memory_correlations(q: np.ndarray, phi_values: np.ndarray,
                         steps: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Initial-history contributions to the memory quadrature.

    Because the lag grid is uniform with step m*h, the contribution at time
    index i depends on i only through a = i // m and the fraction (i % m)/m:
    it interpolates between the shifted correlations
        C[a]  = sum_j q[j] phi[j + a],   C1[a] = sum_j q[j] phi[j + a + 1].
    """
    M = len(q) - 1
    ncols = phi_values.shape[1]
    a_hi = min(M - 1, (steps - 1) // m) if steps > 0 else -1
    C = np.zeros((M + 1, ncols))
    C1 = np.zeros((M + 1, ncols))
    for a in range(a_hi + 1):
        C[a] = q[: M - a] @ phi_values[a:M]
        C1[a] = q[: M - a] @ phi_values[a + 1:M + 1]
    return C, C1


def _march_quadrature(E, Phi, Eh, Phih, q_desc, m, steps, u0, C, C1,
                      f_base=None, f_mid=None) -> np.ndarray:
    """Exponential-midpoint marching of the history quadrature scheme.

    Column-vectorized: ``u0`` may hold one value per mode (trajectory solve)
    or one per basis history (monodromy assembly).  ``q_desc`` are the memory
    quadrature weights ordered newest lag first; ``C``/``C1`` the initial
    history correlations from :func:`_memory_correlations`.
    """
    Mn = len(q_desc) - 1
    U = np.empty((steps + 1, len(u0)))
    U[0] = u0
    q0 = q_desc[0]
    # overflow en route to divergence is expected; callers scan and report
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(steps):
            a = i // m
            arow = a if a < Mn else Mn
            fr = (i - a * m) / m
            frm = fr + 0.5 / m
            ell = (1.0 - fr) * C[arow] + fr * C1[arow]
            ellm = (1.0 - frm) * C[arow] + frm * C1[arow]
            kmax = arow
            g = q_desc[: kmax + 1] @ U[i::-m][: kmax + 1] + ell
            if f_base is not None:
                g = g + f_base[i]
            umid = Eh * U[i] + Phih * g
            gm = q0 * umid + ellm
            if f_mid is not None:
                gm = gm + f_mid[i]
            if kmax >= 1:
                idx = i - m * np.arange(1, kmax + 1)
                gm = gm + q_desc[1: kmax + 1] @ ((U[idx] + U[idx + 1]) * 0.5)
            U[i + 1] = E * U[i] + Phi * gm
            if i % 1024 == 1023 and not np.isfinite(U[i + 1]).all():
                return U[: i + 2]
    return U


def solve_quadrature(initial: History,
                     kernel: Optional[Kernel],
                     forcing: ForcingSpec,
                     t_final: float,
                     h: float,
                     generator: Optional[DiagonalGenerator] = None,
                     epsilon: Optional[ForcingSpec] = None) -> Trajectory:
    """Solve by direct history marching (generic kernel path).

    The time step must divide the lag grid spacing so that memory reads land
    on stored samples; kernel None means no delay term (pure semigroup flow).
    """
    theta = initial.theta_grid
    d = np.diff(theta)
    dtheta = d[0]
    if not np.allclose(d, dtheta, rtol=1e-9, atol=0):
        raise ValueError("solve_quadrature needs a uniform lag grid")
    m = int(round(dtheta / h))
    if m < 1 or abs(m * h - dtheta) > 1e-9 * dtheta:
        raise ValueError("step h must divide the lag grid spacing")
    h = dtheta / m
    if t_final < h:
        raise ValueError("t_final must cover at least one step")
    steps = int(round(t_final / h))

    nm = initial.n_modes
    if generator is None:
        generator = HeatSemigroup(nm)
    if generator.n_modes != nm:
        raise ValueError("generator mode count does not match the history")
    if kernel is not None and kernel.truncation is not None and not np.isclose(
            kernel.truncation, initial.truncation, rtol=0, atol=1e-12):
        raise ValueError("kernel truncation does not match history truncation")

    q = kernel.node_weights(theta) if kernel is not None else np.zeros_like(theta)
    an = generator.eigenvalues
    E = np.exp(an * h)
    Phi = _phi1(an, h)
    Eh = np.exp(an * h / 2)
    Phih = _phi1(an, h / 2)

    C, C1 = _memory_correlations(q, initial.values, steps, m)

    t_base = h * np.arange(steps)
    gvec = forcing.profile_vector(nm)
    f_base = np.multiply.outer(forcing.amplitude(t_base), gvec)
    f_mid = np.multiply.outer(forcing.amplitude(t_base + h / 2), gvec)
    if epsilon is not None:
        evec = epsilon.profile_vector(nm)
        f_base = f_base + np.multiply.outer(epsilon.amplitude(t_base), evec)
        f_mid = f_mid + np.multiply.outer(epsilon.amplitude(t_base + h / 2), evec)

    U = _march_quadrature(E, Phi, Eh, Phih, q[::-1], m, steps,
                          initial.values[-1], C, C1, f_base, f_mid)
    bad = _first_bad_time(U, h)
    if bad is not None:
        raise DivergenceError(bad)
    er = epsilon.field(h * np.arange(steps + 1), nm) if epsilon is not None else None
    return Trajectory(0.0, h, U, epsilon_record=er)


def propagate(initial: History, duration: float, h: float,
              kernel: Optional[Kernel] = None,
              generator: Optional[DiagonalGenerator] = None) -> History:
    """Homogeneous solution operator on histories: initial -> segment at
    ``duration``.  Depends on the duration only (the equation is autonomous),
    which is what makes the period map well defined."""
    kernel = ExpKernel() if kernel is None else kernel
    traj = solve_quadrature(initial, kernel, ForcingSpec("zero"), duration, h,
                            generator=generator)
    return segment(traj, initial, duration)


def verify_mild(traj: Trajectory, initial: History, forcing: ForcingSpec,
                sigma: float, t: float,
                kernel: Optional[Kernel] = None,
                generator: Optional[DiagonalGenerator] = None,
                epsilon: Optional[ForcingSpec] = None,
                quad_stride: int = 1) -> float:
    """Residual of the variation-of-constants relation

        u(t) = T(t-sigma) u(sigma) + int_sigma^t T(t-xi) [L(u_xi) + f(xi)] dxi

    with trapezoid quadrature in xi (every ``quad_stride``-th grid time) and
    the delay term recomputed from trajectory segments, independently of how
    the trajectory was produced.
    """
    if sigma > t:
        raise ValueError("need sigma <= t")
    kernel = ExpKernel() if kernel is None else kernel
    nm = traj.n_modes
    if generator is None:
        generator = HeatSemigroup(nm)
    i0, i1 = traj.index_of(sigma), traj.index_of(t)
    idx = np.arange(i0, i1 + 1, quad_stride)
    if idx[-1] != i1:
        raise ValueError("quad_stride must divide the number of steps")
    xis = traj.t0 + traj.step * idx
    integrand = np.empty((idx.size, nm))
    gvec = forcing.profile_vector(nm)
    for j, xi in enumerate(xis):
        seg = segment(traj, initial, xi)
        integrand[j] = apply_L(seg, kernel) + forcing.amplitude(xi) * gvec
        if epsilon is not None:
            integrand[j] += epsilon.amplitude(xi) * epsilon.profile_vector(nm)
    decay = np.exp(np.multiply.outer(t - xis, generator.eigenvalues))
    w = trapezoid_weights(xis)
    integral = (w[:, None] * decay * integrand).sum(axis=0)
    predicted = generator.decay(t - sigma) * traj.values[i0] + integral
    return float(np.linalg.norm(traj.values[i1] - predicted))


def _segment_interp(traj: Trajectory, initial: History, t: float) -> History:
    """Segment extraction allowing off-grid t (linear interpolation in time)."""
    theta = initial.theta_grid
    taus = t + theta
    vals = np.empty((theta.size, traj.n_modes))
    past = taus < traj.t0 - 1e-12
    if past.any():
        vals[past], _ = initial.interp(taus[past] - traj.t0)
    fut = ~past
    if fut.any():
        pos = np.clip((taus[fut] - traj.t0) / traj.step, 0.0, traj.n_steps)
        i0 = np.minimum(np.floor(pos + 1e-9).astype(int), traj.n_steps - 1)
        frac = np.clip(pos - i0, 0.0, 1.0)
        vals[fut] = ((1.0 - frac)[:, None] * traj.values[i0]
                     + frac[:, None] * traj.values[i0 + 1])
    return History(theta, vals, initial.gamma)


def hn_apply(forcing: ForcingSpec, t: float, n: int, n_modes: int,
             theta_max: float = 40.0, gamma: float = DEFAULT_GAMMA,
             base_dtheta: float = 0.1, h_target: float = 1e-3,
             n_quad: int = 64,
             kernel: Optional[Kernel] = None,
             generator: Optional[DiagonalGenerator] = None,
             output_grid: Optional[np.ndarray] = None) -> History:
    """One-period forcing aggregate: the history

        int_t^{t+1} U(t+1, s) G^n f(s) ds,

    where G^n lifts the point value f(s) to a ramp history of width 1/n and
    U is the homogeneous solution operator.  As n grows this converges to the
    forcing's contribution to the segment at t+1, which is how forced
    segments are represented without differentiating anything.

    The lag grid is refined so the ramp is resolved (spacing <= 1/(2n)) while
    remaining commensurate with ``base_dtheta``; the s-integral uses an
    ``n_quad``-node trapezoid rule.  ``output_grid``, when given, resamples
    the result (exact at shared nodes).
    """
    if n < 1:
        raise ValueError("ramp index n must be a positive integer")
    kernel = ExpKernel() if kernel is None else kernel
    mult = max(1, int(np.ceil(2 * n * base_dtheta)))
    d = base_dtheta / mult
    n_nodes = int(round(theta_max / d))
    theta_f = uniform_theta_grid(theta_max, n_nodes)
    hf = d / int(np.ceil(d / h_target))

    prof = forcing.profile_vector(n_modes)
    ramp = gn_lift(prof, n, theta_f, gamma)
    traj = solve_quadrature(ramp, kernel, ForcingSpec("zero"), 1.0, hf,
                            generator=generator)

    w = np.full(n_quad + 1, 1.0 / n_quad)
    w[0] = w[-1] = 0.5 / n_quad
    acc = np.zeros((theta_f.size, n_modes))
    s_off = np.arange(n_quad + 1) / n_quad
    amps = forcing.amplitude(t + s_off)
    for k in range(n_quad + 1):
        seg = _segment_interp(traj, ramp, 1.0 - s_off[k])
        acc += (w[k] * amps[k]) * seg.values
    out = History(theta_f, acc, gamma)
    if output_grid is not None:
        from .phase_space import resample
        out = resample(out, output_grid)
    return out


def asymptotic_residual(traj: Trajectory, p: float) -> tuple[np.ndarray, np.ndarray]:
    """Residual curve r(t) = ||u(t+1) - e^{ip} u(t)|| on the trajectory grid.

    Vanishing r at large t is the numerical signature of asymptotic
    periodicity with phase p (plain 1-periodicity at p = 0).
    """
    k = 1.0 / traj.step
    ki = int(round(k))
    if abs(k - ki) > 1e-9:
        raise ValueError("trajectory step must divide 1")
    if traj.n_steps < 2 * ki:
        raise ValueError("trajectory must span at least two time units")
    phase = np.exp(1j * p)
    diff = traj.values[ki:] - phase * traj.values[:-ki]
    r = np.linalg.norm(diff, axis=1)
    return traj.times()[:-ki], r
