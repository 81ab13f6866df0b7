"""Thin-wire geometry for the two-element crossed-dipole array.

Flat strips are replaced by round wires of equivalent radius, each dipole
is cut into an even number of segments so the feed node sits at its
center, and the minimum sphere enclosing all arm tips gives the
electrical size ``ka``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

DEFAULT_SEGMENTS = 20

DRIVEN_PORTS = ("driven_x", "driven_y")
PARASITIC_PORTS = ("parasitic_x", "parasitic_y")


class MeshError(ValueError):
    """Segmentation violates the thin-wire kernel assumptions."""


def wavelength(frequency):
    """Free-space wavelength in meters."""
    if not frequency > 0:
        raise ValueError(f"frequency must be positive, got {frequency!r}")
    return SPEED_OF_LIGHT / frequency


def strip_to_radius(width):
    """Equivalent round-wire radius of a flat strip (a = w/4)."""
    if not width > 0:
        raise ValueError(f"strip width must be positive, got {width!r}")
    return width / 4.0


@dataclass(frozen=True)
class ArrayDesign:
    """Design vector of the crossed-dipole pair.

    Index 1 is the driven (upper) element, index 2 the parasitic (lower)
    one. Lengths are full tip-to-tip dipole lengths; all values SI.
    ``load_reactance`` is X_L in Z_L = jX_L.
    """

    lx1: float
    lx2: float
    ly1: float
    ly2: float
    wx1: float
    wx2: float
    wy1: float
    wy2: float
    spacing_d: float
    load_reactance: float
    frequency: float

    def __post_init__(self):
        for name in ("lx1", "lx2", "ly1", "ly2", "wx1", "wx2", "wy1", "wy2", "spacing_d"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive, got {value!r}")
        for arm in ("x1", "x2", "y1", "y2"):
            if not getattr(self, "w" + arm) < getattr(self, "l" + arm):
                raise ValueError(f"strip w{arm} must be narrower than l{arm}")
        if not (np.isfinite(self.frequency) and self.frequency > 0):
            raise ValueError(f"frequency must be positive, got {self.frequency!r}")
        if not np.isfinite(self.load_reactance):
            raise ValueError("load_reactance must be finite")

    @property
    def load_impedance(self) -> complex:
        return 1j * self.load_reactance

    def vector(self) -> np.ndarray:
        """The nine searched parameters, ordered lx1, lx2, ly1, ly2, wx1, wx2, wy1, wy2, X_L."""
        return np.array([self.lx1, self.lx2, self.ly1, self.ly2,
                         self.wx1, self.wx2, self.wy1, self.wy2, self.load_reactance])

    @classmethod
    def from_vector(cls, vec, spacing_d, frequency):
        vec = [float(v) for v in vec]
        return cls(*vec[:8], spacing_d=float(spacing_d), load_reactance=vec[8],
                   frequency=float(frequency))

    def mirrored(self) -> ArrayDesign:
        """Swap the x and y arms of both elements (reflection x <-> y)."""
        return replace(self, lx1=self.ly1, ly1=self.lx1, lx2=self.ly2, ly2=self.lx2,
                       wx1=self.wy1, wy1=self.wx1, wx2=self.wy2, wy2=self.wx2)

    def swapped_elements(self) -> ArrayDesign:
        """Exchange the dimensions of the driven and parasitic elements."""
        return replace(self, lx1=self.lx2, lx2=self.lx1, ly1=self.ly2, ly2=self.ly1,
                       wx1=self.wx2, wx2=self.wx1, wy1=self.wy2, wy2=self.wy1)

    def scaled(self, factor) -> ArrayDesign:
        """All dimensions times ``factor`` and frequency divided by it."""
        if not factor > 0:
            raise ValueError("scale factor must be positive")
        dims = {name: getattr(self, name) * factor
                for name in ("lx1", "lx2", "ly1", "ly2", "wx1", "wx2", "wy1", "wy2", "spacing_d")}
        return replace(self, frequency=self.frequency / factor, **dims)


def reference_design(frequency=3.5e9, load_reactance=-74.96) -> ArrayDesign:
    """Optimized crossed-dipole array at 3.5 GHz, spacing 0.15 wavelength."""
    mm = 1e-3
    return ArrayDesign(
        lx1=35.21 * mm, lx2=43.83 * mm, ly1=40.17 * mm, ly2=44.64 * mm,
        wx1=2.95 * mm, wx2=4.14 * mm, wy1=3.30 * mm, wy2=3.29 * mm,
        spacing_d=0.15 * wavelength(3.5e9),
        load_reactance=load_reactance,
        frequency=frequency,
    )


@dataclass(frozen=True)
class Wire:
    start: np.ndarray
    end: np.ndarray
    radius: float
    has_center_port: bool = False
    port_id: str | None = None

    def __post_init__(self):
        start = np.asarray(self.start, dtype=float)
        end = np.asarray(self.end, dtype=float)
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "end", end)
        length = np.linalg.norm(end - start)
        if length == 0:
            raise ValueError("wire start and end coincide")
        if not self.radius > 0:
            raise ValueError("wire radius must be positive")
        if self.radius >= 0.1 * length:
            raise ValueError(f"wire radius {self.radius:g} m is not thin for length {length:g} m")
        if self.has_center_port and self.port_id is None:
            raise ValueError("a center port needs a port_id")

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.end - self.start))

    @property
    def direction(self) -> np.ndarray:
        return (self.end - self.start) / self.length


@dataclass(frozen=True)
class WireModel:
    """Segmented wires with triangle bases on interior nodes.

    Every wire is a dipole cut into ``segments_per_dipole`` equal
    segments; basis ``k`` of wire ``w`` sits on interior node ``k + 1`` and
    has global index ``w * (segments_per_dipole - 1) + k``.
    """

    wires: tuple[Wire, ...]
    segments_per_dipole: int
    frequency: float
    driven_port_ids: tuple[str, ...] = ()
    parasitic_port_ids: tuple[str, ...] = ()
    check_mesh: bool = True
    port_map: dict = field(init=False)

    def __post_init__(self):
        nseg = self.segments_per_dipole
        if nseg < 8 or nseg % 2:
            raise MeshError(f"segments_per_dipole must be even and >= 8, got {nseg}")
        if not self.wires:
            raise ValueError("model needs at least one wire")
        for wire in self.wires:
            if self.check_mesh and wire.length / nseg < 2 * wire.radius:
                raise MeshError(
                    f"segment length {wire.length / nseg:.4g} m is below twice the "
                    f"wire radius {wire.radius:.4g} m"
                )
        object.__setattr__(self, "wires", tuple(self.wires))
        ports = {}
        for w, wire in enumerate(self.wires):
            if wire.has_center_port:
                if wire.port_id in ports:
                    raise ValueError(f"duplicate port id {wire.port_id!r}")
                ports[wire.port_id] = w * (nseg - 1) + nseg // 2 - 1
        object.__setattr__(self, "port_map", ports)
        for pid in self.driven_port_ids + self.parasitic_port_ids:
            if pid not in ports:
                raise ValueError(f"unknown port id {pid!r}")
        if set(self.driven_port_ids) & set(self.parasitic_port_ids):
            raise ValueError("driven and parasitic ports overlap")

    @property
    def basis_count(self) -> int:
        return len(self.wires) * (self.segments_per_dipole - 1)

    @property
    def driven_bases(self) -> tuple[int, ...]:
        return tuple(self.port_map[p] for p in self.driven_port_ids)

    @property
    def parasitic_bases(self) -> tuple[int, ...]:
        return tuple(self.port_map[p] for p in self.parasitic_port_ids)

    def nodes(self) -> np.ndarray:
        """Node coordinates, shape (wires, segments + 1, 3)."""
        t = np.linspace(0.0, 1.0, self.segments_per_dipole + 1)[:, None]
        return np.stack([w.start + t * (w.end - w.start) for w in self.wires])

    def endpoints(self) -> np.ndarray:
        return np.array([p for w in self.wires for p in (w.start, w.end)])


def dipole(center, axis, length, radius, port_id=None) -> Wire:
    """Straight wire of ``length`` centered on ``center`` along ``axis``."""
    center = np.asarray(center, dtype=float)
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    half = 0.5 * length * axis
    return Wire(center - half, center + half, radius,
                has_center_port=port_id is not None, port_id=port_id)


def _element(z_center, lx, wx, ly, wy, prefix):
    ax, ay = strip_to_radius(wx), strip_to_radius(wy)
    delta = 2.0 * max(ax, ay)
    # The arm with the larger (length, width) sits on the +z side. Tying the
    # offset to the arm rather than the axis keeps the x<->y mirror exact.
    x_up = (lx, wx) > (ly, wy)
    zx = z_center + (0.5 if x_up else -0.5) * delta
    zy = z_center - (0.5 if x_up else -0.5) * delta
    return [
        dipole((0.0, 0.0, zx), (1.0, 0.0, 0.0), lx, ax, port_id=f"{prefix}_x"),
        dipole((0.0, 0.0, zy), (0.0, 1.0, 0.0), ly, ay, port_id=f"{prefix}_y"),
    ]


def build_model(design: ArrayDesign, segments_per_dipole: int = DEFAULT_SEGMENTS,
                check_mesh: bool = True) -> WireModel:
    """Four-wire model: driven pair at +d/2, parasitic pair at -d/2.

    ``check_mesh=False`` allows segments shorter than two radii, for mesh
    convergence studies only.
    """
    half = 0.5 * design.spacing_d
    wires = (_element(+half, design.lx1, design.wx1, design.ly1, design.wy1, "driven")
             + _element(-half, design.lx2, design.wx2, design.ly2, design.wy2, "parasitic"))
    return WireModel(wires=tuple(wires), segments_per_dipole=segments_per_dipole,
                     frequency=design.frequency,
                     driven_port_ids=DRIVEN_PORTS, parasitic_port_ids=PARASITIC_PORTS,
                     check_mesh=check_mesh)


@dataclass(frozen=True)
class SphereMetric:
    center: np.ndarray
    radius_a: float
    ka: float


def _circumcenter3(a, b, c):
    ab, ac = b - a, c - a
    n = np.cross(ab, ac)
    nn = n @ n
    if nn < 1e-30 * (ab @ ab) * (ac @ ac):
        return None
    return a + (np.cross(n, ab) * (ac @ ac) + np.cross(ac, n) * (ab @ ab)) / (2.0 * nn)


def _circumcenter4(a, b, c, d):
    m = np.array([b - a, c - a, d - a])
    rhs = 0.5 * np.array([m[0] @ m[0], m[1] @ m[1], m[2] @ m[2]])
    det = np.linalg.det(m)
    scale = np.prod(np.linalg.norm(m, axis=1))
    if scale == 0 or abs(det) < 1e-12 * scale:
        return None
    return a + np.linalg.solve(m, rhs)


def enclosing_sphere(points, tol=1e-12):
    """Exact minimum enclosing sphere of a small point set.

    Every sphere through 1-4 points (diametral for two, circumcircle for
    three, circumsphere for four) is tried and the smallest one holding
    all points is kept. Returns ``(center, radius, support_indices)``.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    if len(pts) == 0:
        raise ValueError("no points")
    # Duplicates only multiply the candidate count.
    pts, inverse = np.unique(pts, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).ravel()
    if len(pts) == 1:
        return pts[0].copy(), 0.0, (int(np.flatnonzero(inverse == 0)[0]),)

    best = (None, np.inf, ())
    for k in (2, 3, 4):
        for combo in itertools.combinations(range(len(pts)), k):
            sel = pts[list(combo)]
            if k == 2:
                center = 0.5 * (sel[0] + sel[1])
            elif k == 3:
                center = _circumcenter3(*sel)
            else:
                center = _circumcenter4(*sel)
            if center is None:
                continue
            radius = float(np.max(np.linalg.norm(sel - center, axis=1)))
            if radius >= best[1]:
                continue
            dist = np.linalg.norm(pts - center, axis=1)
            if np.all(dist <= radius + tol * max(1.0, radius)):
                best = (center, radius, combo)
    center, radius, combo = best
    support = tuple(int(np.flatnonzero(inverse == i)[0]) for i in combo)
    return center, radius, support


def min_enclosing_sphere(model: WireModel) -> SphereMetric:
    """Minimum sphere around all wire endpoints, with ka at the design frequency."""
    center, radius, _ = enclosing_sphere(model.endpoints())
    k = 2.0 * np.pi * model.frequency / SPEED_OF_LIGHT
    return SphereMetric(center=center, radius_a=radius, ka=k * radius)
