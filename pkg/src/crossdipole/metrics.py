"""Figures of merit: S11, bands, Harrington's limit, load capacitance.

Also hosts :func:`analyze`, the single code path from an
:class:`~crossdipole.geometry.ArrayDesign` to its boresight report, which
the optimizer and the command line share.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from . import farfield
from .geometry import DEFAULT_SEGMENTS, ArrayDesign, build_model, min_enclosing_sphere
from .mom import solve_model

log = logging.getLogger(__name__)

S11_FLOOR_DB = -100.0


def s11(zin, z0=50.0):
    """Reflection coefficient and its magnitude in dB (floored at -100 dB)."""
    if not z0 > 0:
        raise ValueError("reference impedance must be positive")
    zin = complex(zin)
    if zin == -z0:
        raise ValueError("zin = -z0 has no finite reflection coefficient")
    if zin.real <= 0:
        warnings.warn(f"non-passive input impedance {zin:.4g}", RuntimeWarning, stacklevel=2)
    gamma = (zin - z0) / (zin + z0)
    mag = abs(gamma)
    db = 20.0 * np.log10(mag) if mag > 0 else S11_FLOOR_DB
    return gamma, max(db, S11_FLOOR_DB)


def harrington_limit(ka):
    """Normal-gain bound (ka)^2 + 2 ka, in dBi."""
    if not ka > 0:
        raise ValueError(f"ka must be positive, got {ka!r}")
    return 10.0 * np.log10(ka ** 2 + 2.0 * ka)


def load_capacitance(x_l, frequency):
    """Capacitance (F) presenting reactance ``x_l`` (< 0) at ``frequency``."""
    if not x_l < 0:
        raise ValueError(f"a capacitive load needs negative reactance, got {x_l!r}")
    if not frequency > 0:
        raise ValueError("frequency must be positive")
    return 1.0 / (2.0 * np.pi * frequency * abs(x_l))


@dataclass(frozen=True)
class Report:
    zin: complex
    s11_db: float
    ar_boresight_db: float
    g_lhcp_db: float
    g_rhcp_db: float
    d_dbi: float
    ka: float
    harrington_dbi: float
    load_capacitance_pf: float | None

    def to_json(self):
        out = asdict(self)
        out["zin"] = {"re": self.zin.real, "im": self.zin.imag}
        return out


def analyze(design: ArrayDesign, segments=DEFAULT_SEGMENTS, z0=50.0, frequency=None,
            model=None) -> tuple[Report, farfield.PatternGrid]:
    """Solve ``design`` and report its boresight (+z) figures of merit."""
    frequency = design.frequency if frequency is None else frequency
    model = build_model(design, segments) if model is None else model
    result = solve_model(model, frequency, design.load_impedance)
    grid = farfield.build_pattern(model, result, frequency, z0)
    _, s11_db = s11(result.input_impedance, z0)
    sample = farfield.radiate(model, result, 0.0, 0.0)
    sphere = min_enclosing_sphere(model)
    cap = (load_capacitance(design.load_reactance, design.frequency) * 1e12
           if design.load_reactance < 0 else None)
    report = Report(
        zin=complex(result.input_impedance),
        s11_db=float(s11_db),
        ar_boresight_db=float(farfield.axial_ratio(sample)),
        g_lhcp_db=float(farfield.partial_realized_gain(grid, 0.0, 0.0, "LHCP")),
        g_rhcp_db=float(farfield.partial_realized_gain(grid, 0.0, 0.0, "RHCP")),
        d_dbi=float(10.0 * np.log10(grid.directivity_at(0.0, 0.0))),
        ka=float(sphere.ka),
        harrington_dbi=float(harrington_limit(sphere.ka)),
        load_capacitance_pf=cap,
    )
    return report, grid


@dataclass(frozen=True)
class SweepRecord:
    frequency: float
    zin: complex
    s11_db: float
    ar_boresight_db: float
    g_lhcp_db: float
    g_rhcp_db: float
    d_boresight_dbi: float
    ok: bool = True


def _failed(frequency):
    nan = float("nan")
    return SweepRecord(frequency, complex(nan, nan), nan, nan, nan, nan, nan, ok=False)


def sweep(design: ArrayDesign, f_start, f_stop, n_points, segments=DEFAULT_SEGMENTS, z0=50.0):
    """Analyze ``design`` at ``n_points`` evenly spaced frequencies.

    The mesh is built once and reused at every frequency. Points whose
    solve fails are kept with ``ok=False``.
    """
    if not f_start < f_stop:
        raise ValueError("f_start must be below f_stop")
    if n_points < 2:
        raise ValueError("a sweep needs at least 2 points")
    model = build_model(design, segments)
    records = []
    for f in np.linspace(f_start, f_stop, int(n_points)):
        try:
            rep, _ = analyze(design, segments, z0, frequency=f, model=model)
        except (ArithmeticError, RuntimeError, np.linalg.LinAlgError) as exc:
            log.warning("sweep point %.6g Hz failed: %s", f, exc)
            records.append(_failed(float(f)))
            continue
        records.append(SweepRecord(float(f), rep.zin, rep.s11_db, rep.ar_boresight_db,
                                   rep.g_lhcp_db, rep.g_rhcp_db, rep.d_dbi))
    return records


@dataclass(frozen=True)
class Band:
    f_low: float
    f_high: float

    def __post_init__(self):
        if not self.f_low < self.f_high:
            raise ValueError("band needs f_low < f_high")

    @property
    def f_center(self):
        return 0.5 * (self.f_low + self.f_high)

    @property
    def fractional(self):
        return (self.f_high - self.f_low) / self.f_center

    def __contains__(self, f):
        return self.f_low <= f <= self.f_high


_BAND_KEYS = {"s11": "s11_db", "ar": "ar_boresight_db"}


def extract_band(records, key, threshold):
    """Contiguous frequency ranges where ``key`` ('s11' or 'ar') is <= threshold.

    Edges are interpolated linearly (dB against frequency) between the
    bracketing samples. Failed points count as outside the band.
    """
    if len(records) < 2:
        raise ValueError("need at least two records")
    if not np.isfinite(threshold):
        raise ValueError("threshold must be finite")
    attr = _BAND_KEYS[key]
    f = np.array([r.frequency for r in records])
    y = np.array([getattr(r, attr) if r.ok else np.nan for r in records])
    inside = np.isfinite(y) & (y <= threshold)

    def edge(i, j):
        # Crossing between sample i (one side) and j (other side).
        if not (np.isfinite(y[i]) and np.isfinite(y[j])) or y[i] == y[j]:
            return f[j] if inside[j] else f[i]
        return f[i] + (threshold - y[i]) * (f[j] - f[i]) / (y[j] - y[i])

    bands = []
    n = len(f)
    i = 0
    while i < n:
        if not inside[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and inside[j + 1]:
            j += 1
        lo = f[i] if i == 0 else edge(i - 1, i)
        hi = f[j] if j == n - 1 else edge(j, j + 1)
        if hi > lo:
            bands.append(Band(float(lo), float(hi)))
        i = j + 1
    return bands


def common_band(bands_a, bands_b):
    """Pairwise intersection of two sorted band lists."""
    out = []
    for a in bands_a:
        for b in bands_b:
            lo, hi = max(a.f_low, b.f_low), min(a.f_high, b.f_high)
            if lo < hi:
                out.append(Band(lo, hi))
    return sorted(out, key=lambda band: band.f_low)


def band_report(key, threshold, bands):
    return {
        "key": key,
        "threshold_db": threshold,
        "bands": [{"f_low_hz": b.f_low, "f_high_hz": b.f_high, "fractional": b.fractional}
                  for b in bands],
    }


def write_sweep_csv(records, path):
    header = "freq_hz,re_zin_ohm,im_zin_ohm,s11_db,ar_db,g_lhcp_db,g_rhcp_db,d_dbi,ok_flag"
    rows = [(r.frequency, r.zin.real, r.zin.imag, r.s11_db, r.ar_boresight_db,
             r.g_lhcp_db, r.g_rhcp_db, r.d_boresight_dbi, int(r.ok)) for r in records]
    np.savetxt(path, np.array(rows, dtype=float), delimiter=",", header=header,
               comments="", fmt=["%.9g"] + ["%.6g"] * 7 + ["%d"])
