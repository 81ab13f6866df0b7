"""
How close to the size bound?
============================

Enclose the wire endpoints in the smallest sphere and compare the
achieved directivity against the Harrington bound for that ka.
"""

from crossdipole import analyze, build_model, reference_design
from crossdipole.geometry import min_enclosing_sphere
from crossdipole.metrics import harrington_limit

design = reference_design()
sphere = min_enclosing_sphere(build_model(design))
print(f"enclosing radius a = {sphere.radius_a * 1e3:.2f} mm, ka = {sphere.ka:.3f}")

# The bound grows with electrical size.
for ka in (0.5, 1.0, sphere.ka, 2.0):
    print(f"  ka = {ka:.3f}: D_max = {harrington_limit(ka):.2f} dBi")

report, _ = analyze(design)
print(f"boresight directivity {report.d_dbi:.2f} dBi, "
      f"{report.harrington_dbi - report.d_dbi:.2f} dB below the bound")
