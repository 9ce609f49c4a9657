"""Histories with exponentially fading memory.

The state of a delay system at time t is not a point but a history: the
function theta -> u(t + theta) on the past, theta <= 0.  We store histories
sampled on a grid of lag nodes over [-theta_max, 0] and measure them with the
weighted sup norm

    ||phi||_gamma = max_j  e^{gamma * theta_j} ||phi(theta_j)||,

so values far in the past count exponentially less.  Field values live in the
span of the orthonormal sine modes sqrt(2/pi) sin(n xi) on [0, pi]; a field is
just its coefficient vector, and its L2 norm is the Euclidean norm of the
coefficients.  The homogeneous Dirichlet boundary conditions are automatic in
this basis.

The infinite past is truncated at lag theta_max.  With the exponential memory
kernel used throughout this package the neglected tail mass is ~ e^{-theta_max}
(about 4e-18 at the default 40), far below double precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .solver import Trajectory

DEFAULT_GAMMA = 0.5
DEFAULT_THETA_MAX = 40.0
DEFAULT_THETA_NODES = 400

# snap tolerance for "this interpolation point is really a grid node"
_NODE_SNAP = 1e-9


def uniform_theta_grid(theta_max: float = DEFAULT_THETA_MAX,
                       n_nodes: int = DEFAULT_THETA_NODES) -> np.ndarray:
    """Uniform lag grid -theta_max = theta_0 < ... < theta_{n_nodes} = 0."""
    if theta_max <= 0 or n_nodes < 1:
        raise ValueError("need theta_max > 0 and at least one interval")
    return np.linspace(-float(theta_max), 0.0, int(n_nodes) + 1)


def trapezoid_weights(theta_grid: np.ndarray) -> np.ndarray:
    """Trapezoid quadrature weights for a (possibly nonuniform) grid."""
    w = np.zeros_like(theta_grid)
    d = np.diff(theta_grid)
    w[:-1] += d / 2
    w[1:] += d / 2
    return w


@dataclass
class History:
    """A sampled history segment, the computational stand-in for an element
    of the fading-memory space.

    Parameters
    ----------
    theta_grid : strictly increasing lag nodes in [-theta_max, 0], last node 0.
    values : array (n_nodes, n_modes) of sine-mode coefficient vectors, one
        per node.  A 1-D array is accepted and treated as a single mode.
    gamma : positive memory-fading rate of the weighted sup norm.
    """

    theta_grid: np.ndarray
    values: np.ndarray
    gamma: float = DEFAULT_GAMMA
    truncation_clamped: bool = field(default=False, compare=False)

    def __post_init__(self):
        self.theta_grid = np.asarray(self.theta_grid, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim == 1:
            vals = vals[:, None]
        self.values = vals
        if self.theta_grid.ndim != 1 or self.theta_grid.size == 0:
            raise ValueError("theta_grid must be a nonempty 1-D array")
        if not np.all(np.diff(self.theta_grid) > 0):
            raise ValueError("theta_grid must be strictly increasing")
        if self.theta_grid[-1] != 0.0:
            raise ValueError("last lag node must be exactly 0")
        if self.theta_grid[0] >= 0.0:
            raise ValueError("first lag node must be negative")
        if self.values.shape[0] != self.theta_grid.size:
            raise ValueError("one field value per lag node required")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("history values must be finite")
        if not (self.gamma > 0 and np.isfinite(self.gamma)):
            raise ValueError("gamma must be a positive real")

    @property
    def truncation(self) -> float:
        """Memory truncation depth theta_max (= -theta_grid[0])."""
        return -float(self.theta_grid[0])

    @property
    def n_modes(self) -> int:
        return self.values.shape[1]

    @property
    def n_nodes(self) -> int:
        return self.theta_grid.size

    def value_at_zero(self) -> np.ndarray:
        """phi(0), the most recent field value."""
        return self.values[-1]

    def interp(self, thetas: np.ndarray) -> tuple[np.ndarray, bool]:
        """Linear interpolation at the requested lags.

        Lags below -theta_max are clamped to the oldest node; the second
        return value reports whether any clamping happened (truncation).
        Exact node hits are returned bit-exactly.
        """
        thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
        clamped = bool((thetas < self.theta_grid[0] - _NODE_SNAP).any())
        pos = np.searchsorted(self.theta_grid, thetas, side="right") - 1
        pos = np.clip(pos, 0, self.n_nodes - 2)
        left = self.theta_grid[pos]
        width = self.theta_grid[pos + 1] - left
        frac = np.clip((thetas - left) / width, 0.0, 1.0)
        # snap to nodes so that grid-aligned reads are exact
        frac[np.abs(frac) < _NODE_SNAP] = 0.0
        snap_hi = np.abs(frac - 1.0) < _NODE_SNAP
        frac[snap_hi] = 1.0
        out = (1.0 - frac)[:, None] * self.values[pos] + frac[:, None] * self.values[pos + 1]
        return out, clamped

    def copy(self) -> "History":
        return History(self.theta_grid.copy(), self.values.copy(), self.gamma)


def norm_gamma(phi: History) -> float:
    """Weighted sup norm max_j e^{gamma theta_j} ||phi(theta_j)||_2."""
    if phi.n_nodes == 0:
        raise ValueError("empty history")
    weights = np.exp(phi.gamma * phi.theta_grid)
    return float((weights * np.linalg.norm(phi.values, axis=1)).max())


def constant_history(value, theta_grid=None, gamma: float = DEFAULT_GAMMA) -> History:
    """History identically equal to the given field value."""
    if theta_grid is None:
        theta_grid = uniform_theta_grid()
    value = np.atleast_1d(np.asarray(value, dtype=float))
    vals = np.tile(value, (len(theta_grid), 1))
    return History(theta_grid, vals, gamma)


def gn_lift(x, n: int, theta_grid=None, gamma: float = DEFAULT_GAMMA) -> History:
    """Lift a point value to a ramp-shaped history.

    The lift places (n*theta + 1) * x on [-1/n, 0] and 0 before that, so the
    resulting history has value x at lag 0 and weighted norm exactly ||x||.
    It is the approximate-identity device used in the variation-of-constants
    representation of forced solutions.
    """
    if n < 1:
        raise ValueError("ramp index n must be a positive integer")
    if theta_grid is None:
        theta_grid = uniform_theta_grid()
    theta_grid = np.asarray(theta_grid, dtype=float)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    ramp = np.maximum(0.0, n * theta_grid + 1.0)
    return History(theta_grid, ramp[:, None] * x[None, :], gamma)


def segment(traj: "Trajectory", initial: History, t: float) -> History:
    """Extract the history segment u_t, i.e. theta -> u(t + theta).

    Values at nonnegative times are read from the trajectory (exactly at its
    grid times), values at negative times from the initial history by linear
    interpolation on its grid.  Requests below -theta_max are clamped to the
    oldest node; the returned history's ``truncation_clamped`` flag records
    that truncation.
    """
    idx = traj.index_of(t)  # raises ValueError when t is off the grid
    theta = initial.theta_grid
    taus = t + theta
    vals = np.empty((theta.size, traj.n_modes))
    past = taus < traj.t0 - _NODE_SNAP
    clamped = False
    if past.any():
        vals[past], clamped = initial.interp(taus[past] - traj.t0)
    fut = ~past
    if fut.any():
        pos = (taus[fut] - traj.t0) / traj.step
        i0 = np.floor(pos + _NODE_SNAP).astype(int)
        i0 = np.clip(i0, 0, idx)
        frac = pos - i0
        frac[np.abs(frac) < _NODE_SNAP] = 0.0
        i1 = np.minimum(i0 + 1, idx)
        vals[fut] = ((1.0 - frac)[:, None] * traj.values[i0]
                     + frac[:, None] * traj.values[i1])
    out = History(theta, vals, initial.gamma)
    out.truncation_clamped = clamped
    return out


@dataclass
class AxiomA1Report:
    """Slack values of the two fading-memory norm inequalities.

    For the exponentially weighted space the constants are N = 1, K = 1 and
    memory coefficient M(s) = e^{-gamma s}; both slacks are provably >= 0 up
    to interpolation rounding.
    """

    point_slack: float      # ||x_t||_gamma - ||x(t)||
    memory_slack: float     # sup-term + M(t-sigma)||x_sigma||_gamma - ||x_t||_gamma
    memory_coefficient: float  # e^{-gamma (t - sigma)}

    @property
    def passed(self) -> bool:
        return self.point_slack >= -1e-6 and self.memory_slack >= -1e-6


def check_axiom_A1(traj: "Trajectory", initial: History,
                   sigma: float, t: float) -> AxiomA1Report:
    """Check the norm sandwich ||x(t)|| <= ||x_t|| <= sup + M(t-sigma)||x_sigma||."""
    if sigma > t:
        raise ValueError("need sigma <= t")
    gamma = initial.gamma
    x_t = segment(traj, initial, t)
    x_sigma = segment(traj, initial, sigma)
    nt = norm_gamma(x_t)
    point_slack = nt - float(np.linalg.norm(traj.values[traj.index_of(t)]))
    i0, i1 = traj.index_of(sigma), traj.index_of(t)
    running_sup = float(np.linalg.norm(traj.values[i0:i1 + 1], axis=1).max())
    mem = float(np.exp(-gamma * (t - sigma)))
    memory_slack = running_sup + mem * norm_gamma(x_sigma) - nt
    return AxiomA1Report(point_slack, memory_slack, mem)


def resample(phi: History, theta_grid: np.ndarray) -> History:
    """Re-express a history on another lag grid (linear interpolation,
    exact where nodes coincide)."""
    theta_grid = np.asarray(theta_grid, dtype=float)
    vals, clamped = phi.interp(theta_grid)
    out = History(theta_grid, vals, phi.gamma)
    out.truncation_clamped = clamped
    return out
