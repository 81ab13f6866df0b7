"""Far-zone fields, circular decomposition, directivity and realized gain.

Fields are returned with the r * exp(-jkr) spreading factor removed, so
the radiation intensity is ``|E|**2 / (2 eta0)``.  Circular components use

    e_rhcp = (e_theta - j e_phi) / sqrt(2)
    e_lhcp = (e_theta + j e_phi) / sqrt(2)
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT, mu_0, physical_constants

from .geometry import WireModel
from .mom import Segments, SolveResult

ETA0 = physical_constants["characteristic impedance of vacuum"][0]
AR_SATURATION_DB = 60.0
N_THETA = 64
N_PHI = 128
RADIATION_ORDER = 4

_SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class FieldSample:
    theta: float
    phi: float
    e_theta: complex
    e_phi: complex
    e_rhcp: complex
    e_lhcp: complex


def circular_components(e_theta, e_phi):
    """Return ``(e_rhcp, e_lhcp)`` for linear components."""
    e_theta = np.asarray(e_theta)
    e_phi = np.asarray(e_phi)
    return (e_theta - 1j * e_phi) / _SQRT2, (e_theta + 1j * e_phi) / _SQRT2


class CurrentSource:
    """Basis currents sampled at Gauss points, ready for radiation integrals."""

    def __init__(self, model: WireModel, currents, frequency, order=RADIATION_ORDER):
        seg = Segments.from_model(model)
        u, w = np.polynomial.legendre.leggauss(order)
        u, w = 0.5 * (u + 1.0), 0.5 * w
        nseg = model.segments_per_dipole
        nodes = np.zeros((len(model.wires), nseg + 1), dtype=complex)
        nodes[:, 1:-1] = np.asarray(currents).reshape(len(model.wires), nseg - 1)
        i0 = nodes[:, :-1].ravel()
        i1 = nodes[:, 1:].ravel()
        current = i0[:, None] * (1.0 - u) + i1[:, None] * u           # (S, q)
        weight = seg.length[:, None] * w[None, :]
        self.points = seg.points(u).reshape(-1, 3)
        # Current moment per point: I(l) t dl.
        self.moments = ((current * weight)[:, :, None] * seg.tangent[:, None, :]).reshape(-1, 3)
        self.k = 2.0 * np.pi * frequency / SPEED_OF_LIGHT
        self.omega = 2.0 * np.pi * frequency

    def fields(self, theta, phi):
        """``(e_theta, e_phi)`` arrays broadcast over ``theta`` and ``phi``."""
        theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
        st, ct, sp, cp = np.sin(theta), np.cos(theta), np.sin(phi), np.cos(phi)
        rhat = np.stack([st * cp, st * sp, ct], axis=-1)
        that = np.stack([ct * cp, ct * sp, -st], axis=-1)
        phat = np.stack([-sp, cp, np.zeros_like(sp)], axis=-1)
        phase = np.exp(1j * self.k * (rhat.reshape(-1, 3) @ self.points.T))
        vec = (phase @ self.moments).reshape(theta.shape + (3,))
        factor = -1j * self.omega * mu_0 / (4.0 * np.pi)
        e_theta = factor * np.sum(vec * that, axis=-1)
        e_phi = factor * np.sum(vec * phat, axis=-1)
        return e_theta, e_phi


def radiate(model: WireModel, result: SolveResult, theta: float, phi: float) -> FieldSample:
    """Far field of the solved currents in direction (theta, phi)."""
    src = CurrentSource(model, result.currents, result.frequency)
    e_t, e_p = src.fields(theta, phi)
    e_r, e_l = circular_components(e_t, e_p)
    return FieldSample(float(theta), float(phi), complex(e_t), complex(e_p),
                       complex(e_r), complex(e_l))


def axial_ratio_db(e_rhcp, e_lhcp):
    """Axial ratio in dB from circular components, saturated at 60 dB."""
    r = np.abs(np.asarray(e_rhcp))
    l = np.abs(np.asarray(e_lhcp))
    num = r + l
    den = np.abs(r - l)
    with np.errstate(divide="ignore", invalid="ignore"):
        ar = 20.0 * np.log10(num / den)
    ar = np.where((den == 0) | ~np.isfinite(ar), AR_SATURATION_DB, np.minimum(ar, AR_SATURATION_DB))
    if np.any(num == 0):
        warnings.warn("axial ratio undefined for zero field; saturated", RuntimeWarning,
                      stacklevel=2)
    return ar if ar.ndim else float(ar)


def axial_ratio(sample: FieldSample) -> float:
    return axial_ratio_db(sample.e_rhcp, sample.e_lhcp)


def sphere_grid(n_theta=N_THETA, n_phi=N_PHI):
    """Gauss-Legendre nodes in cos(theta), uniform phi; weights sum to 4 pi."""
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(x[::-1])
    wt = wx[::-1]
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    weights = np.outer(wt, np.full(n_phi, 2.0 * np.pi / n_phi))
    return theta, phi, weights


@dataclass
class PatternGrid:
    theta_nodes: np.ndarray
    phi_nodes: np.ndarray
    weights: np.ndarray
    e_theta: np.ndarray
    e_phi: np.ndarray
    p_rad: float
    p_in: float
    gamma_mag: float
    source: CurrentSource

    @property
    def e_rhcp(self):
        return circular_components(self.e_theta, self.e_phi)[0]

    @property
    def e_lhcp(self):
        return circular_components(self.e_theta, self.e_phi)[1]

    def sample(self, i, j) -> FieldSample:
        et, ep = self.e_theta[i, j], self.e_phi[i, j]
        er, el = circular_components(et, ep)
        return FieldSample(float(self.theta_nodes[i]), float(self.phi_nodes[j]),
                           complex(et), complex(ep), complex(er), complex(el))

    def _scale(self):
        return 4.0 * np.pi / (2.0 * ETA0 * self.p_rad)

    def directivity(self):
        """Directivity (linear) on the grid."""
        return self._scale() * (np.abs(self.e_theta) ** 2 + np.abs(self.e_phi) ** 2)

    def realized_factor(self):
        """(1 - |Gamma|^2) times radiation efficiency p_rad / p_in."""
        return (1.0 - self.gamma_mag ** 2) * self.p_rad / self.p_in

    def fields_at(self, theta, phi):
        return self.source.fields(theta, phi)

    def directivity_at(self, theta, phi):
        e_t, e_p = self.fields_at(theta, phi)
        return self._scale() * (np.abs(e_t) ** 2 + np.abs(e_p) ** 2)

    def sphere_mean_directivity(self):
        return float(np.sum(self.weights * self.directivity()) / (4.0 * np.pi))


def build_pattern(model: WireModel, result: SolveResult, frequency=None,
                  reference_impedance=50.0, n_theta=N_THETA, n_phi=N_PHI) -> PatternGrid:
    """Sample the far field over the sphere and integrate radiated power."""
    if not reference_impedance > 0:
        raise ValueError("reference impedance must be positive")
    frequency = result.frequency if frequency is None else frequency
    src = CurrentSource(model, result.currents, frequency)
    theta, phi, weights = sphere_grid(n_theta, n_phi)
    e_t, e_p = src.fields(theta[:, None], phi[None, :])
    p_rad = float(np.sum(weights * (np.abs(e_t) ** 2 + np.abs(e_p) ** 2)) / (2.0 * ETA0))
    zin = result.input_impedance
    gamma = abs((zin - reference_impedance) / (zin + reference_impedance))
    return PatternGrid(theta, phi, weights, e_t, e_p, p_rad, result.input_power, gamma, src)


def _to_db(x):
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(x)


def partial_realized_gain(grid: PatternGrid, theta, phi, sense="LHCP"):
    """Realized gain (dB) of one circular sense in direction (theta, phi).

    The field is evaluated directly from the stored currents, so any angle
    (including the poles) is exact rather than interpolated.
    """
    sense = sense.upper()
    if sense not in ("LHCP", "RHCP"):
        raise ValueError(f"sense must be LHCP or RHCP, got {sense!r}")
    e_r, e_l = circular_components(*grid.fields_at(theta, phi))
    e = e_l if sense == "LHCP" else e_r
    d_sense = grid._scale() * np.abs(e) ** 2
    return _to_db(grid.realized_factor() * d_sense)


def realized_gain_grid(grid: PatternGrid, sense="LHCP"):
    """Partial realized gain (dB) at every grid sample."""
    e = grid.e_lhcp if sense.upper() == "LHCP" else grid.e_rhcp
    return _to_db(grid.realized_factor() * grid._scale() * np.abs(e) ** 2)


def write_pattern_csv(grid: PatternGrid, path):
    """Write the pattern grid as CSV, one row per (theta, phi) sample."""
    th, ph = np.meshgrid(np.degrees(grid.theta_nodes), np.degrees(grid.phi_nodes), indexing="ij")
    ar = axial_ratio_db(grid.e_rhcp, grid.e_lhcp)
    cols = [th, ph, grid.e_theta.real, grid.e_theta.imag, grid.e_phi.real, grid.e_phi.imag,
            _to_db(grid.directivity()), realized_gain_grid(grid, "LHCP"),
            realized_gain_grid(grid, "RHCP"), ar]
    data = np.column_stack([np.ravel(c) for c in cols])
    header = ("theta_deg,phi_deg,e_theta_re,e_theta_im,e_phi_re,e_phi_im,"
              "d_dbi,g_lhcp_realized_db,g_rhcp_realized_db,ar_db")
    np.savetxt(path, data, delimiter=",", header=header, comments="", fmt="%.6g")
