import pytest
import numpy as np
from src.fields import Grid, MetricField, ScalarField, random_metric

@pytest.fixture(scope="session")
def grid3() -> Grid:
    return Grid.torus(3, 24)

@pytest.fixture(scope="session")
def grid4() -> Grid:
    return Grid.torus(4, 12)

@pytest.fixture(scope="session")
def small_grid3() -> Grid:
    return Grid.torus(3, 16)

@pytest.fixture(scope="session")
def flat3(grid3) -> MetricField:
    return MetricField.flat(grid3)

@pytest.fixture(scope="session")
def flat4(grid4) -> MetricField:
    return MetricField.flat(grid4)

@pytest.fixture(scope="session")
def metric3(grid3) -> MetricField:
    """T³, res 24, max_mode 2, amplitude 0.05"""
    return random_metric(grid3, 0.05, 2, seed=0)

@pytest.fixture(scope="session")
def metric4(grid4) -> MetricField:
    """T⁴, res 12, max_mode 1, amplitude 0.02"""
    return random_metric(grid4, 0.02, 1, seed=0)

@pytest.fixture(scope="session")
def small_metric3(small_grid3) -> MetricField:
    return random_metric(small_grid3, 0.05, 2, seed=1)

def coordinate_field(grid: Grid, fn) -> ScalarField:
    """ScalarField of fn(x) with x the (n, *shape) coordinate array"""
    return ScalarField(grid, fn(grid.coordinates()))

def conformally_flat(grid: Grid, w: np.ndarray) -> MetricField:
    return MetricField.flat(grid).conformal(np.exp(2*w))
