import numpy as np
import pytest

from crossdipole import build_model, reference_design, solve_model
from crossdipole.farfield import build_pattern


@pytest.fixture(scope="session")
def ref():
    return reference_design()


@pytest.fixture(scope="session")
def ref_solved(ref):
    model = build_model(ref)
    result = solve_model(model, ref.frequency, ref.load_impedance)
    grid = build_pattern(model, result, reference_impedance=50.0)
    return model, result, grid


@pytest.fixture
def rng():
    return np.random.default_rng(20261017)
