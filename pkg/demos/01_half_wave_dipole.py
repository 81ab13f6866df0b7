"""
A half-wave dipole, the textbook check
======================================

Solve a single 0.47-wavelength wire and compare against the classic
73 ohm / 2.15 dBi figures.
"""

import numpy as np

from crossdipole import WireModel, dipole, solve_model
from crossdipole.farfield import build_pattern

# Work at 299.79 MHz so that one wavelength is exactly one meter.
f = 299792458.0
wire = dipole(center=(0, 0, 0), axis=(0, 0, 1), length=0.47, radius=0.005, port_id="feed")
model = WireModel((wire,), segments_per_dipole=20, frequency=f, driven_port_ids=("feed",))

# Fill the Galerkin matrix, drive the center gap with 1 V and solve.
result = solve_model(model, f)
print(f"input impedance: {result.input_impedance:.2f} ohm")

# The pattern grid integrates the radiated power over the sphere.
grid = build_pattern(model, result)
print(f"broadside directivity: {10 * np.log10(grid.directivity_at(np.pi / 2, 0)):.2f} dBi")
print(f"sphere-mean directivity (should be 1): {grid.sphere_mean_directivity():.5f}")
