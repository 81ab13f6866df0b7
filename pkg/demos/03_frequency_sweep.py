"""
Sweeping frequency and reading off bands
========================================

Run a 3.0 to 4.5 GHz sweep of the reference design and extract the
matched band, the circular-polarization band and their overlap.
"""

from crossdipole import reference_design
from crossdipole.metrics import common_band, extract_band, sweep

design = reference_design()
records = sweep(design, 3.0e9, 4.5e9, 31)

print(" f (GHz)   S11 (dB)   AR (dB)   G_LHCP (dB)")
for r in records[::3]:
    print(f"{r.frequency / 1e9:8.3f} {r.s11_db:10.2f} {r.ar_boresight_db:9.2f} {r.g_lhcp_db:12.2f}")

# Band edges are found by linear interpolation between samples.
s11_bands = extract_band(records, "s11", -10.0)
ar_bands = extract_band(records, "ar", 3.0)
for name, bands in (("S11 < -10 dB", s11_bands), ("AR < 3 dB", ar_bands),
                    ("common", common_band(s11_bands, ar_bands))):
    text = ", ".join(f"{b.f_low / 1e9:.3f}-{b.f_high / 1e9:.3f} GHz" for b in bands) or "none"
    print(f"{name:>13}: {text}")
