"""Thin-wire MoM analysis and GA synthesis of a single-feed circularly
polarized superdirective crossed-dipole array."""

__version__ = "0.1.0"

from .geometry import (ArrayDesign, MeshError, SphereMetric, Wire, WireModel, build_model,
                       dipole, min_enclosing_sphere, reference_design, strip_to_radius,
                       wavelength)
from .mom import (MomSystem, NumericalError, PortNetwork, SolveResult, apply_ports,
                  fill_matrix, input_power, solve, solve_model)
from .farfield import (FieldSample, PatternGrid, axial_ratio, build_pattern,
                       partial_realized_gain, radiate)
from .metrics import (Band, Report, SweepRecord, analyze, common_band, extract_band,
                      harrington_limit, load_capacitance, s11, sweep)
from .optimizer import GAConfig, GARun, SearchSpace, evaluate, run_ga
