# The period map and its spectrum.
#
# The homogeneous flow is autonomous, so "advance every history by one time
# unit" is a single linear operator P on the phase space. Whether P has
# spectrum on the unit circle decides whether asymptotically periodic
# responses exist and are unique; here nothing comes close to the circle.
#
# Per sine mode the reduction gives a quadratic characteristic equation
#   lam^2 + (1 + n^2) lam + n^2 - 1/2 = 0;
# its exponentials are the closed-form multiplier oracle for P.

import numpy as np

import fademem as fm

print("characteristic roots and multipliers")
for n in range(1, 5):
    lo, hi = fm.characteristic_roots(n)
    mlo, mhi = fm.multiplier_oracle(n)
    print(f"  mode {n}: roots {lo:+.6f}, {hi:+.6f} -> multipliers "
          f"{mlo:.6f}, {mhi:.6f}")
print("(both roots are negative for every mode: their sum is -(1+n^2),")
print(" their product n^2 - 1/2; so every multiplier sits inside the disk)")

P = fm.build_monodromy(n_modes=4)
rep = fm.spectrum(P)
print(f"\ndiscretized period map: {P.n_modes} blocks of size "
      f"{P.blocks[0].shape[0]}")
print(f"max eigenvalue modulus {rep.max_modulus:.6f}, distance to the unit "
      f"circle {rep.circle_distance:.4f}, empty-on-circle verdict: "
      f"{rep.sigma_gamma_empty}")

print("\noracle matching")
for m in rep.matches:
    print(f"  mode {m.mode}: multiplier {m.multiplier:.6f} -> nearest "
          f"eigenvalue {m.eigenvalue.real:+.6f}{m.eigenvalue.imag:+.6f}j "
          f"(rel err {m.rel_error:.2e})")

print("""
Reading the table: the dominant multipliers of modes 1 and 2 are reproduced
at grid accuracy. From mode 3 on, the match degrades -- not because of the
grid, but because the marched memory is truncated at lag 40. The eigenvalues
actually converge to the roots of the truncated relation:""")
for n in range(1, 5):
    mu_trunc = np.exp(fm.truncated_characteristic_root(n, 40.0))
    top = rep.eigenvalues[n - 1][0].real
    print(f"  mode {n}: truncated-relation multiplier {mu_trunc:.8f}, "
          f"computed {top:.8f} (rel gap {abs(top - mu_trunc) / mu_trunc:.1e})")
print("""
The subdominant mode-1 multiplier 0.1814 lies below the kernel-decay radius
e^{-1} ~ 0.3679: its eigenfunction grows into the past faster than the
truncated space can represent, so the discretized map replaces it by a ring
of truncation eigenvalues near that radius (visible below), at any
resolution.""")
ring = rep.eigenvalues[0][1:9]
print("largest non-dominant mode-1 eigenvalues:",
      np.round(np.abs(ring), 4))
