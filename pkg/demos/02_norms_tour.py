"""Tour of the norm engine: Sobolev, Fourier-Lebesgue, modulation, space-time.

Shows the conventions in action: the dx-weighted transform, the cos^2
unit-cube windows and their exact partition of unity, the p = 2 equivalence
between modulation and Sobolev norms, and the dispersive space-time norms of
a cutoff free evolution.
"""

import numpy as np

from mkdvlab import (
    Field,
    GridSpec,
    cos2_window,
    fourier_lebesgue_norm,
    free_evolution,
    modulation_norm,
    sobolev_norm,
    xsb_norm,
    xsb_p_norm,
)

grid = GridSpec(length=128.0, points=2048)
sech = Field.from_function(grid, lambda x: 1.0 / np.cosh(x))

print("reference field u = sech(x); transform is pi sech(pi xi / 2)")
print(f"  ||u||_L2               = {sobolev_norm(sech, 0.0):.8f}   (sqrt(2) = {np.sqrt(2):.8f})")
print(f"  ||u||_H^1              = {sobolev_norm(sech, 1.0):.8f}")
print(f"  sup |u_hat|  (FL^0,inf) = {fourier_lebesgue_norm(sech, 0.0, np.inf):.8f}   (pi = {np.pi:.8f})")
for p in (2.0, 4.0, 8.0):
    print(f"  modulation norm s=0, p={p:<3}: {modulation_norm(sech, 0.0, p):.8f}")

# --- the window system -------------------------------------------------------
xi = np.linspace(-3, 3, 13)
partition = sum(cos2_window(xi - n) for n in range(-5, 6))
print("\ncos^2 window partition of unity, sampled on [-3, 3]:")
print(f"  max |sum_n psi(xi - n) - 1| = {np.max(np.abs(partition - 1.0)):.2e}")

# --- p = 2 equivalence with the Sobolev norm --------------------------------
rng = np.random.default_rng(0)
print("\nmodulation(s, p=2) / sobolev(s) across random fields (stays in [1/4, 4]):")
for k in range(4):
    coef = np.exp(-((grid.xi - rng.uniform(-6, 6)) / rng.uniform(0.5, 4)) ** 2) * (
        rng.standard_normal(grid.points) + 1j * rng.standard_normal(grid.points)
    )
    coef[np.abs(grid.xi) > 10] = 0.0
    from mkdvlab import SpectralField, inverse_transform

    f = inverse_transform(SpectralField(grid, coef))
    for s in (0.0, 0.25):
        ratio = modulation_norm(f, s, 2.0) / sobolev_norm(f, s)
        print(f"  field {k}, s = {s}: ratio = {ratio:.4f}")

# --- space-time norms of a cutoff free evolution ------------------------------
st_grid = GridSpec(length=64.0, points=256)
coef = np.exp(-(((st_grid.xi - 3.0) / 1.5) ** 2))
coef[np.abs(st_grid.xi) > 8] = 0.0
from mkdvlab import SpectralField, inverse_transform  # noqa: E402

packet = inverse_transform(SpectralField(st_grid, coef.astype(complex)))
traj = free_evolution(packet, 1.0, 256)
eta_l2 = np.sqrt(np.sum(traj.cutoff**2) * traj.dt)
print("\ncutoff free evolution of a frequency-3 packet (window T = 1, K = 256):")
print(f"  X^{{0.25, 0}} value        = {xsb_norm(traj, 0.25, 0.0):.6f}")
print(f"  ||eta||_L2 * ||f||_H^0.25 = {eta_l2 * sobolev_norm(packet, 0.25):.6f}   (b = 0 collapse)")
for b in (0.5, 0.51):
    print(f"  X^{{0.25, {b}}} value      = {xsb_norm(traj, 0.25, b):.6f}")
print("  l^p-over-cubes variant (p = 2, 4, 8, weight b = 0.5):")
for p in (2.0, 4.0, 8.0):
    print(f"    p = {p}: {xsb_p_norm(traj, 0.25, 0.5, p):.6f}")
