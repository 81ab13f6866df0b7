"""Mixed-potential EFIE solver for thin straight wires.

Triangle (rooftop) bases on interior nodes, Galerkin testing and the
reduced thin-wire kernel.  Time convention is exp(+jwt), so the Green's
function is exp(-jkR) / (4 pi R).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT, epsilon_0, mu_0

from .geometry import WireModel

FAR_ORDER = 4
NEAR_ORDER = 16
MAX_CONDITION = 1e12


class NumericalError(RuntimeError):
    """The MoM system could not be solved reliably."""


def _gauss01(order):
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


@dataclass(frozen=True)
class Segments:
    """Flat per-segment arrays for a model."""

    start: np.ndarray     # (S, 3)
    end: np.ndarray       # (S, 3)
    length: np.ndarray    # (S,)
    tangent: np.ndarray   # (S, 3)
    radius: np.ndarray    # (S,)
    basis_left: np.ndarray   # (N,) segment on which the basis rises
    basis_right: np.ndarray  # (N,) segment on which the basis falls

    @classmethod
    def from_model(cls, model: WireModel) -> Segments:
        nodes = model.nodes()
        nseg = model.segments_per_dipole
        start = nodes[:, :-1].reshape(-1, 3)
        end = nodes[:, 1:].reshape(-1, 3)
        vec = end - start
        length = np.linalg.norm(vec, axis=1)
        radius = np.repeat([w.radius for w in model.wires], nseg)
        wire = np.repeat(np.arange(len(model.wires)), nseg - 1)
        k = np.tile(np.arange(nseg - 1), len(model.wires))
        left = wire * nseg + k
        return cls(start, end, length, vec / length[:, None], radius, left, left + 1)

    def points(self, u):
        """Points at normalized positions ``u`` on every segment, shape (S, len(u), 3)."""
        return self.start[:, None, :] + u[None, :, None] * (self.end - self.start)[:, None, :]


@dataclass(frozen=True)
class MomSystem:
    z_matrix: np.ndarray
    excitation: np.ndarray
    segments: Segments
    frequency: float


@dataclass(frozen=True)
class PortNetwork:
    """Parallel-fed driven gaps and a single load shared by the parasitic gaps."""

    driven_bases: tuple[int, ...]
    parasitic_bases: tuple[int, ...] = ()
    source_voltage: complex = 1.0 + 0.0j
    load_impedance: complex = 0.0j

    def __post_init__(self):
        if not self.driven_bases:
            raise ValueError("at least one driven basis is required")
        allb = list(self.driven_bases) + list(self.parasitic_bases)
        if len(set(allb)) != len(allb):
            raise ValueError("port basis indices collide")

    @classmethod
    def for_model(cls, model: WireModel, load_impedance=0.0j, source_voltage=1.0 + 0.0j):
        return cls(model.driven_bases, model.parasitic_bases, complex(source_voltage),
                   complex(load_impedance))


@dataclass(frozen=True)
class SolveResult:
    currents: np.ndarray
    driven_port_current: complex
    input_impedance: complex
    input_power: float
    load_current: complex
    load_voltage: complex
    source_voltage: complex
    frequency: float


def _pair_integrals(seg, k, p_idx, q_idx, order):
    """Shape-weighted double integrals of the reduced kernel for segment pairs.

    Returns ``(A, phi)`` with ``A[a, b]`` = integral of s_a(u) s_b(u') G and
    ``phi`` = integral of G, where s_0 = 1 - u and s_1 = u.
    """
    u, w = _gauss01(order)
    pts = seg.points(u)
    rp = pts[p_idx][:, :, None, :]
    rq = pts[q_idx][:, None, :, :]
    a2 = 0.5 * (seg.radius[p_idx] ** 2 + seg.radius[q_idx] ** 2)
    r = np.sqrt(np.sum((rp - rq) ** 2, axis=-1) + a2[:, None, None])
    g = np.exp(-1j * k * r) / (4.0 * np.pi * r)
    g *= (seg.length[p_idx] * seg.length[q_idx])[:, None, None]
    shapes = np.stack([1.0 - u, u]) * w          # (2, order)
    a_int = np.einsum("ai,bj,nij->abn", shapes, shapes, g)
    phi = np.einsum("i,j,nij->n", w, w, g)
    return a_int, phi


def fill_matrix(model: WireModel, frequency: float) -> MomSystem:
    """Galerkin impedance matrix of ``model`` at ``frequency``."""
    if not frequency > 0:
        raise ValueError(f"frequency must be positive, got {frequency!r}")
    seg = Segments.from_model(model)
    omega = 2.0 * np.pi * frequency
    k = omega / SPEED_OF_LIGHT
    ns = len(seg.length)

    pi, qi = np.meshgrid(np.arange(ns), np.arange(ns), indexing="ij")
    pi, qi = pi.ravel(), qi.ravel()
    a_int, phi = _pair_integrals(seg, k, pi, qi, FAR_ORDER)

    mid = 0.5 * (seg.start + seg.end)
    dist = np.linalg.norm(mid[pi] - mid[qi], axis=1)
    near = np.flatnonzero(dist < seg.length[pi] + seg.length[qi])
    a_near, phi_near = _pair_integrals(seg, k, pi[near], qi[near], NEAR_ORDER)
    a_int[:, :, near] = a_near
    phi[near] = phi_near
    a_int = a_int.reshape(2, 2, ns, ns)
    phi = phi.reshape(ns, ns)

    # Each basis: (segment, shape index, d f / d l) on its rising and falling halves.
    halves = [
        (seg.basis_left, 1, 1.0 / seg.length[seg.basis_left]),
        (seg.basis_right, 0, -1.0 / seg.length[seg.basis_right]),
    ]
    n = len(seg.basis_left)
    z = np.zeros((n, n), dtype=complex)
    for sm, am, dm in halves:
        for sn, an, dn in halves:
            tt = seg.tangent[sm] @ seg.tangent[sn].T
            z += 1j * omega * mu_0 * tt * a_int[am, an][np.ix_(sm, sn)]
            z += np.outer(dm, dn) * phi[np.ix_(sm, sn)] / (1j * omega * epsilon_0)
    return MomSystem(z, np.zeros(n, dtype=complex), seg, float(frequency))


def apply_ports(system: MomSystem, ports: PortNetwork) -> MomSystem:
    """Impress the source on the driven gaps and fold the load into Z."""
    n = system.z_matrix.shape[0]
    idx = list(ports.driven_bases) + list(ports.parasitic_bases)
    if min(idx) < 0 or max(idx) >= n:
        raise ValueError("port basis index out of range")
    v = np.zeros(n, dtype=complex)
    v[list(ports.driven_bases)] = ports.source_voltage
    z = system.z_matrix
    if ports.parasitic_bases and ports.load_impedance != 0:
        c = np.zeros(n)
        c[list(ports.parasitic_bases)] = 1.0
        z = z + ports.load_impedance * np.outer(c, c)
    return replace(system, z_matrix=z, excitation=v)


def input_power(result: SolveResult) -> float:
    return 0.5 * float(np.real(result.source_voltage * np.conj(result.driven_port_current)))


def _lin_solve(z, v):
    cond = np.linalg.cond(z)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise NumericalError(f"impedance matrix is ill-conditioned (cond = {cond:.3g})")
    x = np.linalg.solve(z, v)
    scale = np.linalg.norm(z) * np.linalg.norm(x) + np.linalg.norm(v)
    if scale > 0 and np.linalg.norm(z @ x - v) > 1e-9 * scale:
        raise NumericalError("linear solve residual above 1e-9")
    return x


def solve(system: MomSystem, ports: PortNetwork) -> SolveResult:
    """Solve the port-augmented system built by :func:`apply_ports`."""
    currents = _lin_solve(system.z_matrix, system.excitation)
    i_port = complex(np.sum(currents[list(ports.driven_bases)]))
    i_load = complex(np.sum(currents[list(ports.parasitic_bases)])) if ports.parasitic_bases else 0j
    v0 = complex(ports.source_voltage)
    zin = v0 / i_port if i_port != 0 else complex(np.inf)
    result = SolveResult(currents, i_port, zin, 0.0, i_load, -ports.load_impedance * i_load,
                         v0, system.frequency)
    return replace(result, input_power=input_power(result))


def solve_model(model: WireModel, frequency: float, load_impedance=0.0j,
                source_voltage=1.0 + 0.0j) -> SolveResult:
    """Fill, load and solve ``model`` in one call."""
    ports = PortNetwork.for_model(model, load_impedance, source_voltage)
    return solve(apply_ports(fill_matrix(model, frequency), ports), ports)


def port_admittance(system: MomSystem, port_groups) -> np.ndarray:
    """Short-circuit admittance matrix between groups of parallel-connected gaps.

    ``port_groups`` is a sequence of basis-index tuples; every group acts as
    one port. Unlisted gaps are shorted (no load folded in).
    """
    n = system.z_matrix.shape[0]
    v = np.zeros((n, len(port_groups)), dtype=complex)
    for j, group in enumerate(port_groups):
        v[list(group), j] = 1.0
    i = _lin_solve(system.z_matrix, v)
    return np.array([[np.sum(i[list(g), j]) for j in range(len(port_groups))]
                     for g in port_groups])
