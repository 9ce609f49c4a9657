# Histories with exponentially fading memory: the state space.
#
# A delay system remembers its entire past. We store that past sampled on a
# lag grid over [-40, 0] and measure it with a weighted sup norm that
# discounts old values by e^{gamma*theta}.

import numpy as np

import fademem as fm

grid = fm.uniform_theta_grid(40.0, 400)
print(f"lag grid: {grid.size} nodes on [{grid[0]:g}, {grid[-1]:g}], "
      f"spacing {grid[1] - grid[0]:g}")

# a constant history: the sup is attained at lag 0, so the norm ignores
# the weighting entirely
const = fm.constant_history([3.0], grid)
print("||constant 3||_gamma =", fm.norm_gamma(const))

# a history growing into the past exactly as fast as the weight decays:
# every node contributes the same weighted value
balanced = fm.History(grid, np.exp(-0.5 * grid)[:, None])
print("||e^{-gamma theta}||_gamma =", fm.norm_gamma(balanced))

# ramp lifts: a point value x becomes a history supported on [-1/n, 0]
# with weighted norm exactly ||x||, for every ramp width
x = np.array([0.6, -0.8])
for n in (1, 8, 64):
    lifted = fm.gn_lift(x, n, grid)
    print(f"||ramp lift(n={n:2d})||_gamma = {fm.norm_gamma(lifted):.15f}"
          f"   (||x|| = {np.linalg.norm(x):.15f})")

# the two norm inequalities that make this a fading-memory space:
# ||u(t)|| <= ||u_t|| <= running sup + e^{-gamma(t-s)} ||u_s||
rng = np.random.default_rng(0)
phi = fm.History(grid, rng.standard_normal((grid.size, 2)))
traj = fm.Trajectory(0.0, 0.1, rng.standard_normal((201, 2)))
for t in (1.0, 5.0, 20.0):
    rep = fm.check_axiom_A1(traj, phi, 0.0, t)
    print(f"t = {t:5.1f}: point slack {rep.point_slack:.4f}, memory slack "
          f"{rep.memory_slack:.4f}, memory coefficient {rep.memory_coefficient:.2e}")
print("the memory coefficient e^{-gamma(t-s)} is what 'fading' means:")
for s in (10, 30, 60):
    print(f"  influence of the state 40 units ago at separation {s}: "
          f"{np.exp(-0.5 * s):.2e}")
